"""Small self-contained statistics: quartile summaries and Pearson
correlation with a t-distribution p-value.

The p-value needs the regularized incomplete beta function, which is
evaluated here with the classic continued-fraction expansion (modified
Lentz iteration) so the package carries no statistics dependency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateInputError, ParameterError

__all__ = ["EnsembleStats", "PearsonResult", "ensemble_stats", "pearson", "betainc_regularized"]

_LENTZ_TINY = 1e-300
_LENTZ_EPS = 1e-15
_LENTZ_MAX_ITER = 500


@dataclass(frozen=True)
class EnsembleStats:
    q1: float
    median: float
    q3: float
    mean: float
    std: float


@dataclass(frozen=True)
class PearsonResult:
    r: float
    p_value: float


def ensemble_stats(values: Sequence[float]) -> EnsembleStats:
    """Quartiles (linear interpolation between order statistics) plus
    population mean and standard deviation."""
    arr = np.asarray(list(values), dtype=np.float64)
    if arr.size == 0:
        raise ParameterError("ensemble statistics need a nonempty list")
    q1, med, q3 = np.percentile(arr, [25.0, 50.0, 75.0], method="linear")
    return EnsembleStats(
        q1=float(q1),
        median=float(med),
        q3=float(q3),
        mean=float(arr.mean()),
        std=float(arr.std()),
    )


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _LENTZ_TINY:
        d = _LENTZ_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _LENTZ_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _LENTZ_TINY:
            d = _LENTZ_TINY
        c = 1.0 + aa / c
        if abs(c) < _LENTZ_TINY:
            c = _LENTZ_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _LENTZ_TINY:
            d = _LENTZ_TINY
        c = 1.0 + aa / c
        if abs(c) < _LENTZ_TINY:
            c = _LENTZ_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _LENTZ_EPS:
            return h
    raise RuntimeError("incomplete beta continued fraction did not converge")


def betainc_regularized(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) for a, b > 0, 0 <= x <= 1."""
    if a <= 0.0 or b <= 0.0:
        raise ParameterError("incomplete beta needs a, b > 0")
    if not 0.0 <= x <= 1.0:
        raise ParameterError(f"x must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return float(x)
    log_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def _t_two_sided_p(t: float, dof: int) -> float:
    """Two-sided tail probability of Student's t with ``dof`` degrees of
    freedom: I_{dof/(dof+t^2)}(dof/2, 1/2)."""
    if math.isinf(t):
        return 0.0
    x = dof / (dof + t * t)
    return betainc_regularized(dof / 2.0, 0.5, x)


def pearson(x: Sequence[float], y: Sequence[float]) -> PearsonResult:
    """Sample Pearson correlation with a two-sided p-value from the
    t-distribution on n - 2 degrees of freedom."""
    xa = np.asarray(list(x), dtype=np.float64)
    ya = np.asarray(list(y), dtype=np.float64)
    if xa.size != ya.size:
        raise ParameterError("correlation inputs must have equal length")
    n = xa.size
    if n < 3:
        raise ParameterError(f"correlation needs at least 3 points, got {n}")
    xc = xa - xa.mean()
    yc = ya - ya.mean()
    sx = float(np.linalg.norm(xc))
    sy = float(np.linalg.norm(yc))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateInputError("correlation undefined for zero-variance input")
    r = float(np.dot(xc, yc) / (sx * sy))
    r = max(-1.0, min(1.0, r))
    dof = n - 2
    if abs(r) == 1.0:
        return PearsonResult(r=r, p_value=0.0)
    t = r * math.sqrt(dof / (1.0 - r * r))
    return PearsonResult(r=r, p_value=_t_two_sided_p(t, dof))
