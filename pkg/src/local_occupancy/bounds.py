"""Finite evaluation of the occupancy, fractional, list and correspondence bounds."""

import math
from typing import Callable, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from pydantic.alias_generators import to_camel
from scipy.optimize import minimize_scalar

from local_occupancy.errors import DomainError, RegimeError
from local_occupancy.sparsity import (
    CkFree,
    Clique,
    HallRatio,
    PathCount,
    SparsitySetting,
    TriangleCount,
    TriangleFree,
    describe_setting,
)
from local_occupancy.special import k_function, lambert_w0

X_FLOOR = 1e-12

Mode = Literal["fractional", "list"]


class BoundResult(BaseModel):
    model_config = ConfigDict(alias_generator=to_camel, populate_by_name=True)

    value: float
    maximizer: Optional[float] = None
    formula: str
    setting: str
    substitutions: List[str] = Field(default_factory=list)
    details: Dict[str, float] = Field(default_factory=dict)


def _log(x: float, what: str) -> float:
    if not x > 0:
        raise RegimeError(f"{what}: log of non-positive argument {x:.6g}")
    return math.log(x)


def _positive_log(x: float, what: str) -> float:
    value = _log(x, what)
    if value <= 0:
        raise RegimeError(f"{what}: log({x:.6g}) <= 0 puts the parameters outside the bound")
    return value


def maximize_on_interval(f: Callable[[float], float], lo: float, hi: float) -> Tuple[float, float]:
    """Max of f on [lo, hi]: geometric grid scan, bounded Brent refinement, both endpoints."""
    grid = np.geomspace(lo, hi, 65)
    values = [f(float(x)) for x in grid]
    i = int(np.argmax(values))
    a, b = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, len(grid) - 1)])
    best_value, best_x = values[i], float(grid[i])
    if b > a:
        res = minimize_scalar(lambda x: -f(x), bounds=(a, b), method="bounded",
                              options={"xatol": 1e-10})
        if -res.fun > best_value:
            best_value, best_x = float(-res.fun), float(res.x)
    for x in (lo, hi):
        value = f(x)
        if value >= best_value:
            best_value, best_x = value, x
    return best_value, best_x


def _mad_occupancy(delta: int, a: float) -> Callable[[float], float]:
    def f(x: float) -> float:
        big_d = delta * (1 + x) ** a * math.log1p(x)
        return x / (1 + x) * lambert_w0(big_d) / big_d

    return f


def _hall_occupancy(delta: int, rho: float) -> Callable[[float], float]:
    def f(x: float) -> float:
        arg = rho * x / math.log1p(x)
        if arg < 1:
            return -math.inf
        k = k_function(arg)
        return lambert_w0(k * delta * x / (1 + x)) / (k * delta)

    return f


def occupancy_lower_bound(setting: SparsitySetting, delta: int, lam: float) -> BoundResult:
    """Lower bound on the occupancy fraction of a graph of max degree delta in the setting."""
    if delta < 1:
        raise DomainError("occupancy_lower_bound needs delta >= 1")
    if not lam > 0:
        raise DomainError("fugacity must be positive")
    name = describe_setting(setting)
    if isinstance(setting, Clique):
        omega = setting.omega
        if delta < 3:
            raise RegimeError("clique occupancy bound needs delta >= 3")
        log_d = math.log(delta)
        arms = {"sqrt": math.sqrt(log_d / math.log(omega - 1)) / (2 * delta)}
        subs = ["1-o(1) factor set to 1"]
        loglog = math.log(log_d)
        if loglog > 0:
            arms["log"] = log_d / ((omega - 2) * delta * loglog)
        else:
            subs.append("log-log arm undefined for delta <= e; omitted")
        return BoundResult(value=max(arms.values()), formula="clique-occupancy", setting=name,
                           substitutions=subs, details=arms)
    if isinstance(setting, HallRatio):
        f = _hall_occupancy(delta, setting.rho)
        formula = "hall-occupancy"
    else:
        a = setting.mad_exponent or 0.0
        f = _mad_occupancy(delta, a)
        formula = "mad-occupancy"
    lo = min(X_FLOOR, lam / 2)
    value, x_star = maximize_on_interval(f, lo, float(lam))
    return BoundResult(value=value, maximizer=x_star, formula=formula, setting=name)


def _scale(setting: SparsitySetting) -> float:
    if isinstance(setting, CkFree):
        return float(setting.k)
    if isinstance(setting, TriangleCount):
        return math.sqrt(setting.t)
    if isinstance(setting, PathCount):
        return setting.k + math.sqrt(setting.t)
    raise AssertionError(setting)


def clique_list_scale(omega: int, delta: int, eps: float) -> float:
    """min{(e^2 log(8 delta^4))^(omega-1), exp(sqrt(4 log(omega-1)(1+eps) log(8 delta^4)))}."""
    if omega < 3:
        raise DomainError("omega must be at least 3")
    big = math.log(8.0 * delta**4)
    first = (math.e**2 * big) ** (omega - 1)
    second = math.exp(math.sqrt(4 * math.log(omega - 1) * (1 + eps) * big))
    return min(first, second)


def _over_log(x: float, divisor: float, what: str) -> float:
    return x / _positive_log(x / divisor, what)


def chromatic_budget(
    setting: SparsitySetting,
    deg: float,
    *,
    delta0: float,
    delta: int,
    eps: float,
    mode: Mode = "fractional",
) -> BoundResult:
    """Per-vertex colour budget for fractional or list/correspondence colouring under a setting."""
    if eps < 0:
        raise DomainError("eps must be non-negative")
    name = describe_setting(setting)
    factor = 1 + eps
    details: Dict[str, float] = {}
    if mode not in ("fractional", "list"):
        raise DomainError(f"unknown mode {mode!r}")

    if isinstance(setting, TriangleFree):
        if mode == "fractional":
            value = max(_over_log(deg, 1, "deg"), _over_log(delta0, 1, "delta0"))
        else:
            log_delta = _positive_log(delta, "log delta")
            value = max(_over_log(deg, log_delta, "deg/log delta"),
                        delta0 / _positive_log(delta0, "delta0") * log_delta)
    elif isinstance(setting, (CkFree, TriangleCount, PathCount)):
        k = _scale(setting)
        details["k"] = k
        if mode == "fractional":
            value = max(_over_log(deg, k, "deg/k"), delta0 / _positive_log(delta0, "delta0") * k)
        else:
            log_delta = _positive_log(delta, "log delta")
            value = max(_over_log(deg, k * log_delta, "deg/(k log delta)"),
                        delta0 / _positive_log(delta0, "delta0") * k * log_delta)
    elif isinstance(setting, HallRatio):
        k = k_function(setting.rho)
        details["K"] = k
        if mode == "fractional":
            value = max(_over_log(k * deg, 1, "K deg"), _over_log(k * delta0, 1, "K delta0"))
        else:
            log_delta = _positive_log(delta, "log delta")
            floor = delta0 * setting.rho * log_delta
            divisor = setting.rho * log_delta
            value = max(_over_log(k * deg, divisor, "K deg/(rho log delta)"),
                        _over_log(k * floor, divisor, "K delta/(rho log delta)"))
            details["delta"] = floor
    elif isinstance(setting, Clique):
        omega = setting.omega
        if mode == "fractional":
            scale_deg, scale_floor = deg, delta0
        else:
            k = clique_list_scale(omega, delta, eps)
            details["k"] = k
            scale_deg, scale_floor = deg / k, delta0
        log_deg = _positive_log(scale_deg, "deg scale")
        log_floor = _positive_log(scale_floor, "delta0")
        loglog_deg = _positive_log(log_deg, "log deg")
        loglog_floor = _positive_log(log_floor, "log delta0")
        first = max((omega - 2) * deg * loglog_deg / log_deg,
                    (omega - 2) * delta0 * loglog_floor / log_floor)
        second = max(2 * deg * math.sqrt(math.log(omega - 1) / log_deg),
                     2 * delta0 * math.sqrt(math.log(omega - 1) / log_floor))
        if mode == "list":
            first = max(first, (omega - 2) * delta0 * details["k"] * loglog_floor / log_floor)
            second = max(second, 2 * delta0 * details["k"] * math.sqrt(
                math.log(omega - 1) / log_floor))
        details["logArm"] = factor * first
        details["sqrtArm"] = factor * second
        value = min(first, second)
    else:
        raise AssertionError(setting)
    return BoundResult(value=factor * value, formula=f"{setting.kind}-{mode}", setting=name,
                       details=details)


def list_size_requirement(
    beta: float, gamma: float, deg: float, lam: float, ell: float, delta: int
) -> float:
    """beta (lam/(1+lam)) ell / (1 - sqrt(7 log delta / ell)) + gamma deg."""
    if delta < 64:
        raise RegimeError(f"list requirement needs delta >= 64, got {delta}")
    if not ell > 7 * math.log(delta):
        raise RegimeError(f"list requirement needs ell > 7 log delta = {7 * math.log(delta):.4g}")
    eta = math.sqrt(7 * math.log(delta) / ell)
    return beta * lam / (1 + lam) * ell / (1 - eta) + gamma * deg


def residual_target(beta: float, gamma: float, list_size: float, deg: float, lam: float) -> float:
    """m_u = ((1+lam)/(beta lam)) (|L(u)| - gamma deg(u))."""
    return (1 + lam) / (beta * lam) * (list_size - gamma * deg)


def list_size_margin(
    beta: float, gamma: float, list_size: float, deg: float, lam: float, ell: float,
    eta: float, delta: int,
) -> Dict[str, float]:
    """
    Both arms of m_u >= max{ell/(1-eta), 6 log(2 delta)/eta^2}; a non-negative
    'margin' means the per-vertex list hypothesis holds.
    """
    if not 0 < eta < 1:
        raise DomainError("eta must lie in (0, 1)")
    m = residual_target(beta, gamma, list_size, deg, lam)
    first = ell / (1 - eta)
    second = 6 * math.log(2 * delta) / eta**2
    return {"m": m, "ellArm": first, "concentrationArm": second, "margin": m - max(first, second)}


def suggested_ell(setting: SparsitySetting, delta: int, lam: float) -> float:
    """The target residual list size each setting's list argument uses."""
    big = math.log(8.0 * delta**4)
    c = lam / (1 + lam)
    if isinstance(setting, Clique):
        return 8 * big * min(setting.omega - 1, 2 * math.sqrt(math.log(setting.omega - 1) * big))
    if isinstance(setting, HallRatio):
        return 40 * setting.rho * math.log(delta) / math.log1p(lam)
    a = setting.mad_exponent or 0.0
    if a == 0:
        return 8 * big / math.log1p(lam)
    # (1 - (1+lam)^-a) / a >= c - (a-1)/2 c^2, and >= c when a <= 1
    denom = c - max(a - 1, 0.0) / 2 * c * c
    if denom <= 0:
        raise RegimeError(f"lambda = {lam} too large for neighbourhood sparsity exponent {a:.4g}")
    return 8 * big / denom


# -- per-graph lower bounds ---------------------------------------------------


def entropy_occupancy_bound(log_z: float, y: float, lam: float) -> float:
    """lam Z'/Z >= log Z / K(y lam / log Z) for any graph on y vertices."""
    if log_z <= 0:
        return 0.0
    return log_z / k_function(y * lam / log_z)


def average_degree_occupancy_bound(y: float, d: float, lam: float) -> float:
    """lam Z'/Z >= (lam/(1+lam)) y (1+lam)^(-d) for y vertices of average degree d."""
    return lam / (1 + lam) * y * (1 + lam) ** (-d)


def average_degree_log_z_bound(y: float, d: float, lam: float) -> float:
    if d == 0:
        return y * math.log1p(lam)
    return y / d * (1 - (1 + lam) ** (-d))


def clique_log_z_bounds(y: float, omega: int, alpha: int, lam: float) -> Tuple[float, float]:
    """
    Two lower bounds on log Z for a K_omega-free graph on y vertices, valid
    once y reaches the Ramsey bound C(alpha+omega-2, omega-1).
    """
    if omega < 2 or alpha < 1:
        raise DomainError("need omega >= 2 and alpha >= 1")
    if y < math.comb(alpha + omega - 2, omega - 1):
        raise RegimeError("y below the Ramsey bound for this (omega, alpha)")
    head = math.log(y * lam)
    first = alpha * (head - (omega - 1) * math.log(math.e * (alpha - 1) / (omega - 1) + math.e))
    if alpha == 1:
        second = alpha * head
    else:
        second = alpha * (head - (alpha - 1) * math.log(
            math.e * (omega - 1) / (alpha - 1) + math.e))
    return first, second


def general_list_requirement(
    beta: float, gamma: float, deg: float, lam: float, ell: float, eta: float, delta: int
) -> float:
    """Smallest |L(u)| for which m_u reaches max{ell/(1-eta), 6 log(2 delta)/eta^2}."""
    if not 0 < eta < 1:
        raise DomainError("eta must lie in (0, 1)")
    target = max(ell / (1 - eta), 6 * math.log(2 * delta) / eta**2)
    return beta * lam / (1 + lam) * target + gamma * deg


# -- splitting ----------------------------------------------------------------


class SplitSequences(BaseModel):
    model_config = ConfigDict(alias_generator=to_camel, populate_by_name=True)

    j: int
    degrees: List[float]
    spans: List[float]
    target_degree: float
    target_span: float


def _sqrt_log(x: float) -> float:
    return math.sqrt(math.log(x)) if x > 1 else 0.0


def split_level(delta: float, f: float, dlt: float, zeta: float) -> int:
    """Least j >= 0 with f > ((1+dlt) delta / 2^j)^(zeta (2+dlt))."""
    if not 0 < dlt < 0.01:
        raise DomainError("delta must lie in (0, 1/100)")
    if not zeta > 0 or zeta * (2 + dlt) >= 0.1:
        raise DomainError("need zeta > 0 and zeta (2+delta) < 1/10")
    if not f > 0:
        raise DomainError("f must be positive")
    exponent = zeta * (2 + dlt)
    j = 0
    while f <= ((1 + dlt) * delta / 2**j) ** exponent:
        j += 1
    return j


def split_sequences(delta: float, f: float, dlt: float, zeta: float) -> SplitSequences:
    """
    delta_0 = delta, s_0 = delta^2/f and
    delta_{t+1} = delta_t/2 + 2 sqrt(delta_t log delta_t),
    s_{t+1} = s_t/4 + 2 delta_t^(3/2) sqrt(log delta_t), up to t = j.
    """
    j = split_level(delta, f, dlt, zeta)
    degrees, spans = [float(delta)], [delta**2 / f]
    for _ in range(j):
        d, s = degrees[-1], spans[-1]
        degrees.append(d / 2 + 2 * math.sqrt(d) * _sqrt_log(d))
        spans.append(s / 4 + 2 * d**1.5 * _sqrt_log(d))
    target = (1 + dlt) * delta / 2**j
    return SplitSequences(j=j, degrees=degrees, spans=spans, target_degree=target,
                          target_span=target**2 / f)
