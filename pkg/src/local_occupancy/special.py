"""Real Lambert W on both branches, and K(y) = -W_{-1}(-1/(e*y))."""

import math

from local_occupancy.errors import DomainError

BRANCH_POINT = -1.0 / math.e
_BOUNDARY_TOL = 1e-15
_MAX_ITER = 32


def _branch_series(p: float) -> float:
    # W around -1/e in p = +-sqrt(2(e*x + 1)); + gives W0, - gives W_{-1}
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p**3 - 43.0 / 540.0 * p**4 + 769.0 / 17280.0 * p**5


def _halley(x: float, w: float) -> float:
    for _ in range(_MAX_ITER):
        ew = math.exp(w)
        f = w * ew - x
        w1 = w + 1.0
        if w1 == 0.0:
            break
        dw = f / (ew * w1 - (w + 2.0) * f / (2.0 * w1))
        w -= dw
        if abs(dw) <= 1e-15 * (1.0 + abs(w)):
            break
    return w


def lambert_w0(x: float) -> float:
    """Principal branch W(x) for x >= -1/e."""
    x = float(x)
    if math.isnan(x) or x < BRANCH_POINT - _BOUNDARY_TOL:
        raise DomainError(f"lambert_w0 undefined at {x} < -1/e")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return math.inf
    q = 2.0 * (math.e * x + 1.0)
    if q <= 0.0:
        return -1.0
    p = math.sqrt(q)
    if p < 1e-3:
        return _branch_series(p)
    if p < 0.5:
        w = _branch_series(p)
    elif x < 3.0:
        w = math.log1p(x) * 0.75 if x > 0 else _branch_series(p)
    else:
        l1 = math.log(x)
        l2 = math.log(l1)
        w = l1 - l2 + l2 / l1
    return _halley(x, w)


def lambert_wm1(x: float) -> float:
    """Lower branch W_{-1}(x) for -1/e <= x < 0."""
    x = float(x)
    if math.isnan(x) or x >= 0.0 or x < BRANCH_POINT - _BOUNDARY_TOL:
        raise DomainError(f"lambert_wm1 undefined at {x}; domain is [-1/e, 0)")
    q = 2.0 * (math.e * x + 1.0)
    if q <= 0.0:
        return -1.0
    p = math.sqrt(q)
    if p < 1e-3:
        return _branch_series(-p)
    if p < 0.5:
        w = _branch_series(-p)
    else:
        l1 = math.log(-x)
        l2 = math.log(-l1)
        w = l1 - l2 + l2 / l1
    return min(_halley(x, w), -1.0)


def k_function(y: float) -> float:
    """K(y) = -W_{-1}(-1/(e*y)), defined for y >= 1 with K(1) = 1."""
    y = float(y)
    if math.isnan(y) or y < 1.0 - 1e-12:
        raise DomainError(f"k_function needs y >= 1, got {y}")
    if y <= 1.0:
        return 1.0
    return -lambert_wm1(-1.0 / (math.e * y))
