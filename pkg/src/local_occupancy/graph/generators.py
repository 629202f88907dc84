"""Deterministic and seeded random graph families."""

import re
from itertools import combinations
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from local_occupancy.errors import GraphError, SpecError
from local_occupancy.graph.core import Graph
from local_occupancy.observability import enrich_context
from local_occupancy.settings import SETTINGS

Seed = int | np.random.Generator | None


def _rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def empty(n: int) -> Graph:
    if n < 0:
        raise GraphError("n must be non-negative")
    return Graph.empty(n)


def path(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs n >= 1")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete needs n >= 1")
    return Graph.from_edges(n, combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise GraphError("complete_bipartite needs a, b >= 1")
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def kneser(n: int, k: int) -> Graph:
    """k-subsets of range(n) in combinations order, adjacent when disjoint."""
    if k < 1 or n < 2 * k:
        raise GraphError("kneser needs 1 <= k and n >= 2k")
    subsets = [frozenset(c) for c in combinations(range(n), k)]
    edges = [(i, j) for i, j in combinations(range(len(subsets)), 2) if not subsets[i] & subsets[j]]
    return Graph.from_edges(len(subsets), edges)


def petersen() -> Graph:
    return kneser(5, 2)


def random_regular(n: int, d: int, seed: Seed = None, max_tries: Optional[int] = None) -> Graph:
    """
    Pairing model with whole rejection. Each attempt shuffles the n*d points
    and pairs consecutive entries; a pairing with a loop or a repeated edge
    is discarded and a fresh one drawn, so accepted graphs are uniform.
    """
    if n < 1 or d < 0 or d >= n or (n * d) % 2:
        raise GraphError(f"no simple {d}-regular graph on {n} vertices")
    rng = _rng(seed)
    tries = max_tries or SETTINGS.RANDOM_REGULAR_MAX_TRIES
    points = np.repeat(np.arange(n), d)
    for attempt in range(1, tries + 1):
        pairs = rng.permutation(points).reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        pairs.sort(axis=1)
        if len(np.unique(pairs, axis=0)) < len(pairs):
            continue
        enrich_context(event="random_regular").debug("Pairing accepted", attempt=attempt)
        return Graph.from_edges(n, [(int(u), int(v)) for u, v in pairs])
    raise GraphError(f"random_regular({n},{d}) rejected {tries} pairings")


def erdos_renyi(n: int, p: float, seed: Seed = None) -> Graph:
    """G(n, p); pairs are visited in lexicographic order."""
    if n < 0 or not 0.0 <= p <= 1.0:
        raise GraphError("erdos_renyi needs n >= 0 and 0 <= p <= 1")
    rng = _rng(seed)
    pairs = list(combinations(range(n), 2))
    draws = rng.random(len(pairs))
    return Graph.from_edges(n, [e for e, r in zip(pairs, draws) if r < p])


def random_triangle_free(n: int, p: float, seed: Seed = None) -> Graph:
    """G(n, p) followed by deleting, in lexicographic order, edges that close a triangle."""
    g = erdos_renyi(n, p, seed)
    adj = list(g.adjacency)
    for u, v in g.edges():
        if adj[u] >> v & 1 and adj[u] & adj[v]:
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
    return Graph(n, tuple(adj))


def blow_up(g: Graph, s: int) -> Graph:
    """Replace each vertex by an independent set of size s; copies of adjacent vertices join."""
    if s < 1:
        raise GraphError("blow_up needs s >= 1")
    edges = [(u * s + i, v * s + j) for u, v in g.edges() for i in range(s) for j in range(s)]
    return Graph.from_edges(g.n * s, edges)


_FAMILIES: Dict[str, Callable[..., Graph]] = {
    "empty": empty,
    "path": path,
    "cycle": cycle,
    "complete": complete,
    "complete_bipartite": complete_bipartite,
    "kneser": kneser,
    "petersen": petersen,
    "random_regular": random_regular,
    "erdos_renyi": erdos_renyi,
    "random_triangle_free": random_triangle_free,
    "blow_up": blow_up,
}
_RANDOM = {"random_regular", "erdos_renyi", "random_triangle_free"}
_CALL = re.compile(r"^\s*([a-z_]+)\s*(?:\((.*)\))?\s*$", re.S)


def _split_args(body: str) -> List[str]:
    args, depth, current = [], 0, ""
    for ch in body:
        if ch == "," and depth == 0:
            args.append(current.strip())
            current = ""
            continue
        depth += (ch == "(") - (ch == ")")
        current += ch
    if current.strip():
        args.append(current.strip())
    return args


def _number(token: str) -> int | float:
    try:
        return int(token)
    except ValueError:
        try:
            return float(token)
        except ValueError:
            raise SpecError(f"not a number: {token!r}") from None


def parse_spec(spec: str) -> Tuple[str, list, Dict[str, int]]:
    match = _CALL.match(spec)
    if not match or match.group(1) not in _FAMILIES:
        raise SpecError(f"unknown graph family in {spec!r}; known: {sorted(_FAMILIES)}")
    name, body = match.group(1), match.group(2) or ""
    args: list = []
    kwargs: Dict[str, int] = {}
    for token in _split_args(body):
        if "=" in token and "(" not in token:
            key, value = (t.strip() for t in token.split("=", 1))
            if key != "seed":
                raise SpecError(f"unknown keyword {key!r} in {spec!r}")
            kwargs["seed"] = int(value)
        elif "(" in token:
            args.append(generate(token))
        else:
            args.append(_number(token))
    return name, args, kwargs


def generate(spec: str, seed: Seed = None) -> Graph:
    """Build a graph from e.g. 'kneser(5,2)', 'random_regular(10,3,seed=1)' or 'blow_up(cycle(5),2)'."""
    name, args, kwargs = parse_spec(spec)
    if name in _RANDOM:
        kwargs.setdefault("seed", seed)  # type: ignore[arg-type]
    elif kwargs:
        raise SpecError(f"{name} takes no seed")
    try:
        return _FAMILIES[name](*args, **kwargs)
    except TypeError as e:
        raise SpecError(f"bad arguments for {name}: {e}") from e
