"""Exact structural parameters: mad, Hall ratio, clique number, path counts."""

from fractions import Fraction
from typing import Optional

import networkx as nx
import numpy as np

from local_occupancy.errors import CapExceededError, GraphError
from local_occupancy.graph.core import Graph, iter_bits
from local_occupancy.observability import enrich_context
from local_occupancy.settings import SETTINGS


def _denser_subset(g: Graph, density: Fraction) -> int:
    """
    Return a vertex mask S with |E(S)|/|S| > density, or 0 if none exists.

    Goldberg's network with integer capacities scaled by the denominator q:
    the cut {s} + S costs q*m*n + 2(p|S| - q|E(S)|) for density = p/q.
    """
    p, q = density.numerator, density.denominator
    m = g.edge_count
    net = nx.DiGraph()
    for v in range(g.n):
        net.add_edge("s", v, capacity=q * m)
        net.add_edge(v, "t", capacity=q * m + 2 * p - q * g.degree(v))
    for u, v in g.edges():
        net.add_edge(u, v, capacity=q)
        net.add_edge(v, u, capacity=q)
    cut_value, (source_side, _) = nx.minimum_cut(net, "s", "t")
    if cut_value >= q * m * g.n:
        return 0
    mask = 0
    for v in source_side:
        if v != "s":
            mask |= 1 << v
    return mask


def max_average_degree(g: Graph) -> Fraction:
    """Exact mad(G) = max over non-empty subgraphs of 2|E|/|V|."""
    if g.n == 0:
        raise GraphError("empty graph has no maximum average degree")
    m = g.edge_count
    if m == 0:
        return Fraction(0)
    lo = Fraction(m, g.n)
    hi = Fraction(g.n - 1, 2)
    # distinct densities with denominators <= n differ by at least 1/n^2
    resolution = Fraction(1, g.n * g.n)
    steps = 0
    while hi - lo >= resolution:
        mid = (lo + hi) / 2
        found = _denser_subset(g, mid)
        if found:
            lo = Fraction(g.edges_within(found), found.bit_count())
        else:
            hi = mid
        steps += 1
    enrich_context(event="max_average_degree").debug("Density search done", n=g.n, steps=steps)
    return 2 * lo


def degeneracy(g: Graph) -> int:
    """Largest minimum degree met while repeatedly deleting a min-degree vertex."""
    alive = g.full_mask
    best = 0
    while alive:
        v = min(iter_bits(alive), key=lambda w: (g.adjacency[w] & alive).bit_count())
        best = max(best, (g.adjacency[v] & alive).bit_count())
        alive &= ~(1 << v)
    return best


def _subset_tables(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """alpha[S] and |S| for every vertex mask S, filled block by block on the top bit."""
    size = 1 << g.n
    alpha = np.zeros(size, dtype=np.int8)
    count = np.zeros(size, dtype=np.int8)
    for k in range(g.n):
        lower = np.arange(1 << k, dtype=np.int64)
        lower_nb = g.adjacency[k] & ((1 << k) - 1)
        block = slice(1 << k, 1 << (k + 1))
        alpha[block] = np.maximum(alpha[: 1 << k], 1 + alpha[lower & ~lower_nb])
        count[block] = count[: 1 << k] + 1
    return alpha, count


def hall_ratio(g: Graph, cap: Optional[int] = None) -> Fraction:
    """Exact rho(G) = max |S|/alpha(G[S]) by subset dynamic programming."""
    if g.n == 0:
        raise GraphError("empty graph has no Hall ratio")
    limit = cap if cap is not None else SETTINGS.HALL_RATIO_CAP
    if g.n > limit:
        raise CapExceededError(
            f"hall_ratio enumerates 2^{g.n} subsets; n exceeds cap {limit} (pass cap= to override)"
        )
    alpha, count = _subset_tables(g)
    best = Fraction(1)
    for a in range(1, int(alpha.max()) + 1):
        sizes = count[alpha == a]
        if sizes.size:
            best = max(best, Fraction(int(sizes.max()), a))
    return best


def clique_number(g: Graph) -> int:
    """Maximum clique size by branch and bound with a greedy colouring bound."""
    if g.n == 0:
        return 0
    best = 0

    def colour_bound(candidates: int) -> int:
        colours = 0
        rest = candidates
        while rest:
            colours += 1
            free = rest
            while free:
                v = (free & -free).bit_length() - 1
                rest &= ~(1 << v)
                free &= ~(1 << v) & ~g.adjacency[v]
        return colours

    def expand(size: int, candidates: int) -> None:
        nonlocal best
        if not candidates:
            best = max(best, size)
            return
        if size + colour_bound(candidates) <= best:
            return
        while candidates:
            if size + candidates.bit_count() <= best:
                return
            v = (candidates & -candidates).bit_length() - 1
            expand(size + 1, candidates & g.adjacency[v])
            candidates &= ~(1 << v)

    expand(0, g.full_mask)
    return best


def independence_number(g: Graph) -> int:
    return clique_number(g.complement())


def local_path_count(g: Graph, u: int, k: int) -> int:
    """Copies of the path on k-1 vertices inside G[N(u)], each counted once."""
    if k < 3:
        raise GraphError("local_path_count needs k >= 3")
    g.check_vertex(u)
    length = k - 1
    nb = g.adjacency[u]
    sequences = 0

    def extend(last: int, used: int, placed: int) -> None:
        nonlocal sequences
        if placed == length:
            sequences += 1
            return
        for w in iter_bits(g.adjacency[last] & nb & ~used):
            extend(w, used | (1 << w), placed + 1)

    for start in iter_bits(nb):
        extend(start, 1 << start, 1)
    # every path on >= 2 vertices is walked from both ends
    return sequences // 2
