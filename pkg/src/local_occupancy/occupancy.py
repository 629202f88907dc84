"""
Local occupancy certificates.

A vertex u satisfies the certificate (beta_u, gamma_u) at fugacity lam if for
every subgraph F of G[N(u)] (induced ones only, unless strong)

    beta_u * lam/(1+lam) / Z_F(lam) + gamma_u * lam Z'_F(lam) / Z_F(lam) >= 1.

The empty F is included. Z_F and lam Z'_F are tabulated for all F of one
neighbourhood at once with numpy, so verification is a vectorised minimum.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic.alias_generators import to_camel
from scipy.optimize import minimize_scalar, root_scalar

from local_occupancy.errors import (
    CapExceededError,
    DomainError,
    FailureReport,
    RegimeError,
    SearchExhaustedError,
)
from local_occupancy.graph.core import Graph, iter_bits, mask_of
from local_occupancy.graph.parameters import max_average_degree
from local_occupancy.hardcore import PolynomialCache, check_fugacity
from local_occupancy.observability import enrich_context, get_tracer
from local_occupancy.settings import SETTINGS
from local_occupancy.sparsity import Clique, HallRatio, SparsitySetting
from local_occupancy.special import k_function, lambert_w0

tracer = get_tracer(__name__)


class _CamelModel(BaseModel):
    model_config = ConfigDict(alias_generator=to_camel, populate_by_name=True)


class OccupancyParams(_CamelModel):
    lam: float = Field(..., gt=0)
    beta: List[float]
    gamma: List[float]
    strong: bool = False

    @model_validator(mode="after")
    def _check(self) -> "OccupancyParams":
        if len(self.beta) != len(self.gamma):
            raise ValueError("beta and gamma must have one entry per vertex")
        if any(not b > 0 for b in self.beta) or any(not c > 0 for c in self.gamma):
            raise ValueError("beta and gamma must be positive")
        return self

    @classmethod
    def uniform(cls, n: int, lam: float, beta: float, gamma: float, strong: bool = False):
        return cls(lam=lam, beta=[beta] * n, gamma=[gamma] * n, strong=strong)

    def budget(self, u: int, d: float) -> float:
        return self.beta[u] + self.gamma[u] * d


class SubgraphWitness(_CamelModel):
    vertex: int
    vertices: List[int]
    edges: List[Tuple[int, int]]
    gap: float


class OccupancyReport(_CamelModel):
    verified: bool
    min_gap: float
    witness: Optional[SubgraphWitness] = None
    strong: bool = False
    tolerance: float
    vertices_checked: int
    subgraphs_checked: int
    exact_rechecks: int = 0


class ParamChoice(_CamelModel):
    beta: float
    gamma: float
    budget: float
    variant: Optional[str] = None
    details: Dict[str, float] = Field(default_factory=dict)


# -- neighbourhood tables ---------------------------------------------------


@dataclass
class _Table:
    """Z and lam*Z' for a family of subgraphs of one neighbourhood graph."""

    z: np.ndarray
    y: np.ndarray
    describe: Callable[[int], Tuple[List[int], List[Tuple[int, int]]]]


def _induced_tables(nb: Graph, lam: float) -> Iterator[_Table]:
    k = nb.n
    z = np.ones(1 << k)
    y = np.zeros(1 << k)
    for v in range(k):
        lower = np.arange(1 << v, dtype=np.int64)
        rest = lower & ~(nb.adjacency[v] & ((1 << v) - 1))
        z[1 << v: 1 << (v + 1)] = z[: 1 << v] + lam * z[rest]
        y[1 << v: 1 << (v + 1)] = y[: 1 << v] + lam * (z[rest] + y[rest])

    def describe(index: int) -> Tuple[List[int], List[Tuple[int, int]]]:
        members = list(iter_bits(index))
        edges = [(a, b) for a, b in nb.edges() if index >> a & 1 and index >> b & 1]
        return members, edges

    yield _Table(z, y, describe)


def _popcount(values: np.ndarray, bits: int) -> np.ndarray:
    out = np.zeros(values.shape, dtype=np.int8)
    for b in range(bits):
        out += ((values >> b) & 1).astype(np.int8)
    return out


def _strong_tables(nb: Graph, lam: float) -> Iterator[_Table]:
    """
    Every subgraph (S, E') of the neighbourhood, grouped by edge set E'.

    Z over the full vertex set is a subset-sum transform over edge masks;
    dropping j of the vertices untouched by E' divides Z by (1+lam)^j.
    Only the first table spans all 2^|E| edge sets; the others keep just the
    edge sets that leave at least j vertices untouched.
    """
    k = nb.n
    edges = nb.edges()
    e = len(edges)
    subsets = np.arange(1 << k, dtype=np.int64)
    sizes = _popcount(subsets, k).astype(np.float64)
    inside = np.zeros(1 << k, dtype=np.int64)
    for j, (a, b) in enumerate(edges):
        inside |= (((subsets >> a) & (subsets >> b)) & 1) << j
    del subsets
    weight = np.power(float(lam), sizes)
    hz = np.bincount(inside, weights=weight, minlength=1 << e)
    sizes *= weight
    del weight
    hy = np.bincount(inside, weights=sizes, minlength=1 << e)
    del inside, sizes
    for j in range(e):
        for h in (hz, hy):
            view = h.reshape(-1, 2, 1 << j)
            view[:, 1, :] += view[:, 0, :]
    # Z[E'] sums sets whose inside-edges avoid E', i.e. lie in the complement
    z_full = hz[::-1]
    y_full = hy[::-1]

    touched = np.zeros(1 << e, dtype=np.int32)
    for j, (a, b) in enumerate(edges):
        touched[1 << j: 1 << (j + 1)] = touched[: 1 << j] | ((1 << a) | (1 << b))
    isolated = np.int8(k) - _popcount(touched, k)
    del touched
    c = lam / (1.0 + lam)

    def describer(dropped: int, rows: Optional[np.ndarray]
                  ) -> Callable[[int], Tuple[List[int], List[Tuple[int, int]]]]:
        def describe(index: int) -> Tuple[List[int], List[Tuple[int, int]]]:
            if rows is not None:
                index = int(rows[index])
            chosen = [edges[j] for j in iter_bits(index)]
            used = mask_of(v for edge in chosen for v in edge)
            spare = [v for v in range(k) if not used >> v & 1]
            keep = spare[: len(spare) - dropped]
            return sorted(list(iter_bits(used)) + keep), chosen

        return describe

    yield _Table(z_full, y_full, describer(0, None))
    for dropped in range(1, k + 1):
        rows = np.flatnonzero(isolated >= dropped)
        if rows.size == 0:
            break
        z = z_full[rows]
        y = y_full[rows] / z
        y -= dropped * c
        z /= (1.0 + lam) ** dropped
        y *= z
        yield _Table(z, y, describer(dropped, rows))


def _tables(nb: Graph, lam: float, strong: bool) -> List[_Table]:
    return list(_strong_tables(nb, lam) if strong else _induced_tables(nb, lam))


def _exact_gap(members: List[int], edges: List[Tuple[int, int]],
               beta: float, gamma: float, lam: float) -> Fraction:
    index = {v: i for i, v in enumerate(members)}
    adj = [0] * len(members)
    for a, b in edges:
        adj[index[a]] |= 1 << index[b]
        adj[index[b]] |= 1 << index[a]
    coeffs = PolynomialCache(adj).polynomial((1 << len(members)) - 1)
    lam_q = Fraction(lam)
    z = sum(c * lam_q**i for i, c in enumerate(coeffs))
    y = sum(i * c * lam_q**i for i, c in enumerate(coeffs))
    c = lam_q / (1 + lam_q)
    return Fraction(beta) * c / z + Fraction(gamma) * y / z - 1


def _check_caps(g: Graph, u: int, strong: bool, induced_cap: int, edge_cap: int) -> None:
    deg = g.degree(u)
    if deg > induced_cap:
        raise CapExceededError(f"vertex {u} has degree {deg} > enumeration cap {induced_cap}")
    if strong:
        edges = g.edges_within(g.adjacency[u])
        if edges > edge_cap:
            raise CapExceededError(
                f"vertex {u} neighbourhood spans {edges} edges > strong-mode cap {edge_cap}"
            )


@dataclass
class _VertexResult:
    vertex: int
    min_gap: float
    witness: Optional[SubgraphWitness]
    checked: int
    rechecks: int


def _verify_vertex(
    g: Graph, u: int, params: OccupancyParams, tables: List[_Table], tolerance: float,
    band: float,
) -> _VertexResult:
    lam = params.lam
    beta, gamma = params.beta[u], params.gamma[u]
    c = lam / (1.0 + lam)
    nb_vertices = g.neighbours(u)
    best_gap = math.inf
    best: Optional[Tuple[_Table, int]] = None
    checked = rechecks = 0
    for table in tables:
        gap = gamma * table.y
        gap += beta * c
        gap /= table.z
        gap -= 1.0
        checked += gap.size
        suspect = np.nonzero((gap < -tolerance) & (gap >= -band))[0]
        for index in suspect:
            members, edges = table.describe(int(index))
            gap[index] = float(_exact_gap(members, edges, beta, gamma, lam))
            rechecks += 1
        index = int(np.argmin(gap))
        if gap[index] < best_gap:
            best_gap, best = float(gap[index]), (table, index)
    witness = None
    if best is not None:
        members, edges = best[0].describe(best[1])
        witness = SubgraphWitness(
            vertex=u,
            vertices=[nb_vertices[i] for i in members],
            edges=[(nb_vertices[a], nb_vertices[b]) for a, b in edges],
            gap=best_gap,
        )
    return _VertexResult(u, best_gap, witness, checked, rechecks)


def verify_local_occupancy(
    g: Graph,
    params: OccupancyParams,
    *,
    induced_cap: Optional[int] = None,
    edge_cap: Optional[int] = None,
    tolerance: Optional[float] = None,
    jobs: int = 1,
) -> OccupancyReport:
    """Check the certificate on every vertex; report the smallest gap and where it occurs."""
    check_fugacity(params.lam)
    if len(params.beta) != g.n:
        raise DomainError(f"params cover {len(params.beta)} vertices, graph has {g.n}")
    induced_cap = induced_cap if induced_cap is not None else SETTINGS.INDUCED_DEGREE_CAP
    edge_cap = edge_cap if edge_cap is not None else SETTINGS.STRONG_EDGE_CAP
    tolerance = tolerance if tolerance is not None else SETTINGS.VERIFY_TOLERANCE
    band = max(SETTINGS.EXACT_FALLBACK_BAND, tolerance)
    for u in range(g.n):
        _check_caps(g, u, params.strong, induced_cap, edge_cap)

    log = enrich_context(event="verify_local_occupancy", n=g.n, strong=params.strong)
    start = time.time()
    cache: Dict[Tuple[int, ...], List[_Table]] = {}

    def run(u: int) -> _VertexResult:
        nb = g.induced(g.adjacency[u])
        key = nb.adjacency
        if key not in cache:
            cache[key] = _tables(nb, params.lam, params.strong)
        return _verify_vertex(g, u, params, cache[key], tolerance, band)

    with tracer.start_as_current_span("verify_local_occupancy"):
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(run, range(g.n)))
        else:
            results = [run(u) for u in range(g.n)]

    worst = min(results, key=lambda r: r.min_gap, default=None)
    min_gap = worst.min_gap if worst else math.inf
    report = OccupancyReport(
        verified=min_gap >= -tolerance,
        min_gap=min_gap if math.isfinite(min_gap) else 0.0,
        witness=worst.witness if worst else None,
        strong=params.strong,
        tolerance=tolerance,
        vertices_checked=len(results),
        subgraphs_checked=sum(r.checked for r in results),
        exact_rechecks=sum(r.rechecks for r in results),
    )
    log.bind(
        verified=report.verified,
        min_gap=report.min_gap,
        duration_ms=int((time.time() - start) * 1000),
    ).info("Verification finished")
    return report


def verify_large_partition_functions(
    g: Graph, lam: float, min_size: float, threshold: float, *, induced_cap: Optional[int] = None
) -> Tuple[bool, Optional[int], float]:
    """
    Check Z_F >= threshold for every induced F of every neighbourhood with at
    least min_size vertices. Returns (ok, offending vertex, smallest such Z_F).
    """
    check_fugacity(lam)
    induced_cap = induced_cap if induced_cap is not None else SETTINGS.INDUCED_DEGREE_CAP
    smallest, where = math.inf, None
    for u in range(g.n):
        _check_caps(g, u, False, induced_cap, 0)
        nb = g.induced(g.adjacency[u])
        (table,) = _induced_tables(nb, lam)
        sizes = _popcount(np.arange(1 << nb.n, dtype=np.int64), nb.n)
        large = sizes >= min_size
        if large.any():
            value = float(table.z[large].min())
            if value < smallest:
                smallest, where = value, u
    ok = smallest >= threshold
    return ok, (None if ok else where), smallest


# -- closed forms -------------------------------------------------------------


def mad_params(a: float, d: float, lam: float) -> ParamChoice:
    """Optimal pair when every neighbourhood has mad at most a and degree at most d."""
    check_fugacity(lam)
    if a < 0 or not d > 0:
        raise DomainError("mad_params needs a >= 0 and d > 0")
    lam = float(lam)
    log1p = math.log1p(lam)
    big_d = d * (1 + lam) ** a * log1p
    w = lambert_w0(big_d)
    scale = (1 + lam) / lam
    gamma = scale * (1 + lam) ** a * log1p / (1 + w)
    beta = scale * big_d / (w * (1 + w))
    return ParamChoice(
        beta=beta, gamma=gamma, budget=scale * big_d / w, variant="mad",
        details={"D": big_d, "W": w, "yStar": w / log1p},
    )


def mad_beta_from_gamma(gamma: float, a: float, lam: float) -> float:
    log1p = math.log1p(lam)
    exponent = (1 + lam) ** (1 + a) / (gamma * lam) - a
    return gamma * (1 + lam) ** exponent / (math.e * log1p)


def mad_envelope(y: float, beta: float, gamma: float, a: float, lam: float) -> float:
    """Lower envelope of the occupancy inequality over F on y vertices with mad <= a."""
    return lam / (1 + lam) * (beta * (1 + lam) ** (-y) + gamma * y * (1 + lam) ** (-a))


def triangle_free_params(delta: float, lam: float) -> ParamChoice:
    """Triangle-free pair, written in its own form rather than via mad_params."""
    check_fugacity(lam)
    log1p = math.log1p(lam)
    w = lambert_w0(delta * log1p)
    gamma = (1 + lam) / lam * log1p / (1 + w)
    beta = gamma * (1 + lam) ** ((1 + lam) / (gamma * lam)) / (math.e * log1p)
    return ParamChoice(beta=beta, gamma=gamma, budget=(1 + lam) / lam * math.exp(w),
                       variant="triangle-free")


def hall_params(rho: float, d: float, lam: float) -> ParamChoice:
    check_fugacity(lam)
    if rho < 1 or not d > 0:
        raise DomainError("hall_params needs rho >= 1 and d > 0")
    lam = float(lam)
    k = k_function(rho * lam / math.log1p(lam))
    w = lambert_w0(k * d * lam / (1 + lam))
    beta = (1 + lam) / lam * math.exp(w) / (1 + w)
    gamma = k / (1 + w)
    return ParamChoice(beta=beta, gamma=gamma, budget=k * d / w, variant="hall",
                       details={"k": k, "W": w})


def hall_beta_from_gamma(gamma: float, k: float, lam: float) -> float:
    return gamma / k * (1 + lam) / lam * math.exp(k / gamma - 1)


def clique_zeta(xi: float) -> float:
    if not xi > 0:
        raise DomainError("xi must be positive")
    return 1 - (1 + xi) ** -0.5


def _log_variant_root(omega: int, d: float, lam: float, zeta: float) -> Optional[float]:
    """Solve d c e^{-z} = ((1-zeta)/(omega-2)) z / log z on z >= e, if a root exists."""
    c = lam / (1 + lam)
    s = (1 - zeta) / (omega - 2)
    const = math.log(d * c / s)

    def phi(z: float) -> float:
        return const - z - math.log(z) + math.log(math.log(z))

    def dphi(z: float) -> float:
        return -1 - 1 / z + 1 / (z * math.log(z))

    if phi(math.e) < 0:
        return None
    start = max(math.e + 1e-9, const - math.log(max(const, math.e)))
    try:
        sol = root_scalar(phi, fprime=dphi, x0=start, method="newton", xtol=1e-14)
        if sol.converged and sol.root >= math.e and abs(phi(sol.root)) < 1e-10:
            return float(sol.root)
    except (ValueError, ZeroDivisionError, OverflowError):
        pass
    hi = 2 * math.e
    while phi(hi) > 0:
        hi *= 2
    return float(root_scalar(phi, bracket=(math.e, hi), method="brentq", xtol=1e-14).root)


def _clique_candidates(omega: int, d: float, lam: float, zeta: float) -> Dict[str, ParamChoice]:
    c = lam / (1 + lam)
    out: Dict[str, ParamChoice] = {}
    z1 = _log_variant_root(omega, d, lam, zeta)
    if z1 is not None:
        lz = math.log(z1)
        denom = (1 + z1) * lz - 1
        beta = d * (omega - 2) / (1 - zeta) ** 2 * lz * (lz - 1) / (z1 * denom)
        gamma = (omega - 2) / (1 - zeta) ** 2 * lz * lz / denom
        out["log"] = ParamChoice(beta=beta, gamma=gamma, budget=beta + gamma * d,
                                 variant="log", details={"zStar": z1})
    log_omega = math.log(omega - 1)
    z2 = 0.5 * lambert_w0(8 * d * d * c * c * log_omega / (1 - zeta) ** 2)
    q = (1 - zeta) / (2 * math.sqrt(log_omega))
    beta2 = math.exp(z2) / (c * (1 + 2 * z2)) / (1 - zeta)
    gamma2 = 2 * math.sqrt(z2) / (q * (1 + 2 * z2)) / (1 - zeta)
    out["sqrt"] = ParamChoice(beta=beta2, gamma=gamma2, budget=beta2 + gamma2 * d,
                              variant="sqrt", details={"zStar": z2})
    return out


def clique_envelopes(z: float, beta: float, gamma: float, omega: int, lam: float,
                     zeta: float) -> Tuple[float, float]:
    """The two envelopes (log and sqrt forms) at log-partition-function value z."""
    c = lam / (1 + lam)
    g1 = beta * c * math.exp(-z) + gamma * (1 - zeta) / (omega - 2) * z / math.log(z)
    g2 = beta * c * math.exp(-z) + gamma * (1 - zeta) * math.sqrt(z) / (
        2 * math.sqrt(math.log(omega - 1)))
    return g1, g2


def clique_threshold(omega: int, lam: float, xi: float, y0: Optional[float] = None) -> float:
    """
    Least d at which the log-form stationary point exists and both candidate
    betas reach ((1+lam)/lam)(1+lam)^y0. Found by bisection in log d.
    """
    if omega < 3:
        raise DomainError("clique settings need omega >= 3")
    check_fugacity(lam)
    y0 = SETTINGS.CLIQUE_Y0 if y0 is None else y0
    zeta = clique_zeta(xi)
    target = (1 + lam) / lam * (1 + lam) ** y0

    def ok(log_d: float) -> bool:
        cands = _clique_candidates(omega, math.exp(log_d), lam, zeta)
        return "log" in cands and all(p.beta >= target for p in cands.values())

    lo, hi = 0.0, 1.0
    if ok(lo):
        return 1.0
    while not ok(hi):
        lo, hi = hi, hi * 2
        if hi > 700:
            raise RegimeError("no clique threshold below d = e^700")
    for _ in range(200):
        mid = (lo + hi) / 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-12:
            break
    return math.exp(hi)


def clique_params(omega: int, d: float, lam: float, xi: float,
                  y0: Optional[float] = None) -> ParamChoice:
    """Both candidate pairs for K_omega-free neighbourhoods; the cheaper one is returned."""
    if omega < 3:
        raise DomainError("clique settings need omega >= 3")
    check_fugacity(lam)
    y0 = SETTINGS.CLIQUE_Y0 if y0 is None else y0
    threshold = clique_threshold(omega, lam, xi, y0)
    if d < threshold * (1 - 1e-9):
        raise RegimeError(f"d = {d} is below the clique threshold d0 = {threshold:.6g}")
    zeta = clique_zeta(xi)
    cands = _clique_candidates(omega, d, lam, zeta)
    best = min(cands.values(), key=lambda p: p.budget)
    details = {"zeta": zeta, "d0": threshold, "y0": y0}
    for name, cand in cands.items():
        details[f"{name}Beta"] = cand.beta
        details[f"{name}Gamma"] = cand.gamma
        details[f"{name}Budget"] = cand.budget
        details[f"{name}ZStar"] = cand.details["zStar"]
    return ParamChoice(beta=best.beta, gamma=best.gamma, budget=best.budget,
                       variant=best.variant, details=details)


def params_for_setting(
    g: Graph, setting: SparsitySetting, lam: float, *, local: bool = False,
    strong: bool = True, xi: float = 0.5,
) -> OccupancyParams:
    """The certificate a sparsity setting prescribes, with d_u = Delta (or deg(u) if local)."""
    delta = max(g.max_degree, 1)
    betas, gammas = [], []
    for u in range(g.n):
        d = max(g.degree(u), 1) if local else delta
        if isinstance(setting, HallRatio):
            choice = hall_params(setting.rho, d, lam)
        elif isinstance(setting, Clique):
            choice = clique_params(setting.omega, d, lam, xi)
        else:
            choice = mad_params(setting.mad_exponent or 0.0, d, lam)
        betas.append(choice.beta)
        gammas.append(choice.gamma)
    return OccupancyParams(lam=lam, beta=betas, gamma=gammas, strong=strong)


def params_from_local_mad(g: Graph, lam: float, *, local: bool = False) -> OccupancyParams:
    """Closed-form pair per vertex with a_u = exact mad(G[N(u)])."""
    delta = max(g.max_degree, 1)
    betas, gammas = [], []
    for u in range(g.n):
        nb = g.induced(g.adjacency[u])
        a = float(max_average_degree(nb)) if nb.n else 0.0
        choice = mad_params(a, max(g.degree(u), 1) if local else delta, lam)
        betas.append(choice.beta)
        gammas.append(choice.gamma)
    return OccupancyParams(lam=lam, beta=betas, gamma=gammas, strong=True)


# -- numeric search -----------------------------------------------------------


def _constraint_points(tables: Sequence[_Table]) -> np.ndarray:
    pts = []
    for table in tables:
        pts.append(np.stack([table.z, table.y], axis=1))
    return np.unique(np.concatenate(pts), axis=0)


def _search_vertex(points: np.ndarray, d: float, lam: float, u: int) -> Tuple[float, float]:
    c = lam / (1 + lam)
    z, y = points[:, 0], points[:, 1]

    def beta_for(gamma: float) -> float:
        return float(np.max(z - gamma * y)) / c

    def cost(log_gamma: float) -> float:
        gamma = math.exp(log_gamma)
        return beta_for(gamma) + gamma * d

    lo, hi = math.log(SETTINGS.SEARCH_GAMMA_MIN), math.log(SETTINGS.SEARCH_GAMMA_MAX)
    grid = np.linspace(lo, hi, SETTINGS.SEARCH_GRID_POINTS)
    values = [cost(x) for x in grid]
    i = int(np.argmin(values))
    if i == len(grid) - 1:
        raise SearchExhaustedError(FailureReport(
            phase="search", vertex=u,
            message=f"vertex {u}: optimum lies beyond gamma = {SETTINGS.SEARCH_GAMMA_MAX}",
        ))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(cost, bounds=(a, b), method="bounded", options={"xatol": 1e-12})
    log_gamma = float(res.x) if res.fun < values[i] else float(grid[i])
    gamma = math.exp(log_gamma)
    beta = beta_for(gamma) * (1 + 1e-12) + 1e-15
    return beta, gamma


def numeric_param_search(
    g: Graph, lam: float, d: Optional[Sequence[float] | float] = None, *, strong: bool = False,
) -> OccupancyParams:
    """
    Per-vertex (beta, gamma) minimising beta + gamma d_u. For fixed gamma the
    least feasible beta is max_F (Z_F - gamma lam Z'_F) c^{-1}, so only gamma
    is searched: a log grid, then bounded Brent around the best grid point.
    """
    check_fugacity(lam)
    if d is None:
        ds = [float(max(g.degree(u), 1)) for u in range(g.n)]
    elif isinstance(d, (int, float)):
        ds = [float(d)] * g.n
    else:
        ds = [float(x) for x in d]
    for u in range(g.n):
        _check_caps(g, u, strong, SETTINGS.INDUCED_DEGREE_CAP, SETTINGS.STRONG_EDGE_CAP)

    cache: Dict[Tuple[int, ...], np.ndarray] = {}
    betas, gammas = [], []
    with tracer.start_as_current_span("numeric_param_search"):
        for u in range(g.n):
            nb = g.induced(g.adjacency[u])
            if nb.adjacency not in cache:
                cache[nb.adjacency] = _constraint_points(_tables(nb, lam, strong))
            beta, gamma = _search_vertex(cache[nb.adjacency], ds[u], lam, u)
            betas.append(beta)
            gammas.append(gamma)

    params = OccupancyParams(lam=lam, beta=betas, gamma=gammas, strong=strong)
    report = verify_local_occupancy(g, params)
    if not report.verified:
        raise SearchExhaustedError(FailureReport(
            phase="search", vertex=report.witness.vertex if report.witness else None,
            message=f"searched certificate failed re-verification (gap {report.min_gap:.3g})",
        ))
    enrich_context(event="numeric_param_search").info(
        "Search finished", n=g.n, max_budget=max((b + c * x for b, c, x in zip(betas, gammas, ds)),
                                                 default=0.0)
    )
    return params


def fractional_budgets(g: Graph, params: OccupancyParams) -> List[float]:
    """c_u = beta_u + gamma_u deg(u)."""
    return [params.budget(u, g.degree(u)) for u in range(g.n)]
