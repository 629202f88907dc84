"""Independence polynomial, partition function and hard-core sampling."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from local_occupancy.errors import CapExceededError, DomainError, GraphError
from local_occupancy.graph.core import Graph, VertexSubset, iter_bits
from local_occupancy.observability import enrich_context
from local_occupancy.settings import SETTINGS

Fugacity = Union[float, Fraction]
Coefficients = Tuple[int, ...]


def check_fugacity(lam: Fugacity) -> Fugacity:
    if isinstance(lam, bool) or not lam > 0:
        raise DomainError(f"fugacity must be positive, got {lam}")
    return lam


def as_rng(seed: int | np.random.Generator | None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _add(a: Coefficients, b: Coefficients) -> Coefficients:
    if len(a) < len(b):
        a, b = b, a
    return tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a))


def _multiply(a: Coefficients, b: Coefficients) -> Coefficients:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def horner(coeffs: Sequence[int], lam: Fugacity) -> Fugacity:
    acc: Fugacity = Fraction(0) if isinstance(lam, Fraction) else 0.0
    for c in reversed(coeffs):
        acc = acc * lam + c
    return acc


def components(adjacency: Sequence[int], mask: int) -> List[int]:
    """Connected components of the subgraph induced by mask, as masks."""
    comps = []
    rest = mask
    while rest:
        comp = frontier = rest & -rest
        while frontier:
            reach = 0
            for v in iter_bits(frontier):
                reach |= adjacency[v]
            frontier = reach & rest & ~comp
            comp |= frontier
        comps.append(comp)
        rest &= ~comp
    return comps


class PolynomialCache:
    """
    Memoized independence polynomials of induced subgraphs of one graph.

    Residual masks split into connected components; a connected piece is
    reduced by Z_G = Z_{G-v} + x * Z_{G-N[v]} on a max-degree vertex v.
    """

    def __init__(self, adjacency: Sequence[int], memo_cap: Optional[int] = None):
        self.adjacency = tuple(adjacency)
        self.memo_cap = memo_cap or SETTINGS.MEMO_CAP
        self._memo: Dict[int, Coefficients] = {0: (1,)}

    def __len__(self) -> int:
        return len(self._memo)

    def polynomial(self, mask: int) -> Coefficients:
        cached = self._memo.get(mask)
        if cached is not None:
            return cached
        pieces = components(self.adjacency, mask)
        if len(pieces) > 1:
            result: Coefficients = (1,)
            for piece in pieces:
                result = _multiply(result, self._connected(piece))
        else:
            result = self._connected(mask)
        self._store(mask, result)
        return result

    def _store(self, mask: int, value: Coefficients) -> None:
        if mask not in self._memo and len(self._memo) >= self.memo_cap:
            raise CapExceededError(
                f"partition-function memo exceeded {self.memo_cap} entries; "
                "use Glauber sampling or raise LOCC_MEMO_CAP"
            )
        self._memo[mask] = value

    def _connected(self, mask: int) -> Coefficients:
        cached = self._memo.get(mask)
        if cached is not None:
            return cached
        size = mask.bit_count()
        if size == 1:
            return (1, 1)
        pivot, pivot_degree, min_degree = -1, -1, size
        for v in iter_bits(mask):
            d = (self.adjacency[v] & mask).bit_count()
            min_degree = min(min_degree, d)
            if d > pivot_degree:
                pivot, pivot_degree = v, d
        if min_degree == size - 1:
            result: Coefficients = (1, size)
        else:
            without = self.polynomial(mask & ~(1 << pivot))
            with_pivot = self.polynomial(mask & ~(self.adjacency[pivot] | (1 << pivot)))
            result = _add(without, (0,) + with_pivot)
        self._store(mask, result)
        return result


@dataclass(frozen=True)
class IndependencePolynomial:
    """coeffs[i] is the number of independent sets of size i."""

    coeffs: Coefficients

    def __post_init__(self) -> None:
        if not self.coeffs or self.coeffs[0] != 1 or any(c <= 0 for c in self.coeffs):
            raise GraphError(f"not an independence polynomial: {self.coeffs}")

    @property
    def alpha(self) -> int:
        return len(self.coeffs) - 1

    @property
    def total(self) -> int:
        return sum(self.coeffs)

    def derivative(self) -> Coefficients:
        return tuple(i * c for i, c in enumerate(self.coeffs))[1:] or (0,)

    def evaluate(self, lam: Fugacity) -> Fugacity:
        return horner(self.coeffs, lam)

    def evaluate_prime(self, lam: Fugacity) -> Fugacity:
        return horner(self.derivative(), lam)


def independence_polynomial(g: Graph, cap: Optional[int] = None) -> IndependencePolynomial:
    limit = cap if cap is not None else SETTINGS.POLY_VERTEX_CAP
    if g.n > limit:
        raise CapExceededError(
            f"independence_polynomial on {g.n} vertices exceeds cap {limit}; "
            "use evaluation on subgraphs or glauber_sample instead"
        )
    cache = PolynomialCache(g.adjacency)
    poly = IndependencePolynomial(cache.polynomial(g.full_mask))
    enrich_context(event="independence_polynomial").debug(
        "Polynomial computed", n=g.n, alpha=poly.alpha, memo=len(cache)
    )
    return poly


def evaluate_z(p: IndependencePolynomial, lam: Fugacity) -> Fugacity:
    """Z(lam); a Fraction lam gives an exact Fraction."""
    return p.evaluate(lam)


def evaluate_z_prime(p: IndependencePolynomial, lam: Fugacity) -> Fugacity:
    return p.evaluate_prime(lam)


def occupancy_fraction(g: Graph, lam: Fugacity, cap: Optional[int] = None) -> Fugacity:
    """lam Z'(lam) / (Z(lam) n); exact for Fraction lam."""
    check_fugacity(lam)
    if g.n == 0:
        raise GraphError("empty graph has no occupancy fraction")
    p = independence_polynomial(g, cap)
    return lam * p.evaluate_prime(lam) / (p.evaluate(lam) * g.n)


def independent_sets(g: Graph, mask: Optional[int] = None) -> Iterator[int]:
    """Every independent set inside mask (default: all vertices), as masks."""
    mask = g.full_mask if mask is None else mask

    def walk(rest: int, chosen: int) -> Iterator[int]:
        if not rest:
            yield chosen
            return
        v = (rest & -rest).bit_length() - 1
        yield from walk(rest & ~(1 << v), chosen)
        yield from walk(rest & ~(g.adjacency[v] | (1 << v)), chosen | (1 << v))

    yield from walk(mask, 0)


def hardcore_law(g: Graph, lam: Fugacity, mask: Optional[int] = None) -> Dict[int, Fraction]:
    """Exact hard-core distribution on G[mask] keyed by independent-set mask."""
    check_fugacity(lam)
    lam_q = Fraction(lam)
    weights = {s: lam_q ** s.bit_count() for s in independent_sets(g, mask)}
    z = sum(weights.values())
    return {s: w / z for s, w in weights.items()}


@dataclass(frozen=True)
class HardCoreSample:
    set: VertexSubset
    method: str
    steps: int = 0
    seed: Optional[int] = None


@dataclass
class HardCoreModel:
    """Hard-core model on one graph; samplers work on any residual vertex mask."""

    graph: Graph
    lam: float
    memo_cap: Optional[int] = None
    _cache: PolynomialCache = field(init=False, repr=False)
    _z: Dict[int, float] = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        check_fugacity(self.lam)
        self.lam = float(self.lam)
        self._cache = PolynomialCache(self.graph.adjacency, self.memo_cap)

    def z(self, mask: int) -> float:
        value = self._z.get(mask)
        if value is None:
            value = float(horner(self._cache.polynomial(mask), self.lam))
            self._z[mask] = value
        return value

    def law(self, mask: Optional[int] = None) -> Dict[FrozenSet[int], Fraction]:
        """Exact law on G[mask] keyed by frozenset of vertices; small graphs only."""
        law = hardcore_law(self.graph, Fraction(self.lam), mask)
        return {frozenset(iter_bits(s)): p for s, p in law.items()}

    def sample(self, mask: int, rng: np.random.Generator) -> int:
        """
        Exact sample on G[mask] by sequential conditioning: v joins with
        probability lam * Z(R - N[v]) / Z(R) for the current residual R.
        """
        chosen = 0
        rest = mask
        while rest:
            v = (rest & -rest).bit_length() - 1
            closed = self.graph.adjacency[v] | (1 << v)
            p_in = self.lam * self.z(rest & ~closed) / self.z(rest)
            if rng.random() < p_in:
                chosen |= 1 << v
                rest &= ~closed
            else:
                rest &= ~(1 << v)
        return chosen

    def glauber(self, mask: int, rng: np.random.Generator, steps: int, initial: int = 0) -> int:
        """Single-site heat-bath dynamics restricted to mask, started from initial."""
        vertices = np.fromiter(iter_bits(mask), dtype=np.int64)
        state = initial & mask
        if steps <= 0 or vertices.size == 0:
            return state
        p_occupy = self.lam / (1.0 + self.lam)
        adjacency = self.graph.adjacency
        picks = rng.integers(0, vertices.size, size=steps)
        coins = rng.random(steps)
        for i, coin in zip(picks, coins):
            v = int(vertices[i])
            bit = 1 << v
            if not (adjacency[v] & state) and coin < p_occupy:
                state |= bit
            else:
                state &= ~bit
        return state


def exact_sample(
    g: Graph, lam: Fugacity, seed: int | np.random.Generator | None = None,
    cap: Optional[int] = None,
) -> HardCoreSample:
    limit = cap if cap is not None else SETTINGS.POLY_VERTEX_CAP
    if g.n > limit:
        raise CapExceededError(f"exact_sample on {g.n} vertices exceeds cap {limit}")
    model = HardCoreModel(g, float(lam))
    chosen = model.sample(g.full_mask, as_rng(seed))
    return HardCoreSample(VertexSubset(g.n, chosen), "exact",
                          seed=seed if isinstance(seed, int) else None)


def glauber_sample(
    g: Graph, lam: Fugacity, steps: int, seed: int | np.random.Generator | None = None
) -> HardCoreSample:
    if steps < 0:
        raise DomainError("steps must be non-negative")
    model = HardCoreModel(g, float(lam))
    chosen = model.glauber(g.full_mask, as_rng(seed), steps)
    return HardCoreSample(VertexSubset(g.n, chosen), "glauber", steps,
                          seed=seed if isinstance(seed, int) else None)
