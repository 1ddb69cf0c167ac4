"""Polarization measures.

``variance`` is the plain sum of squared deviations from the mean.  The
group-based measures (``bimodality``, ``local_agreement``) are invariant
to sign flips, constant shifts, and nonzero rescaling of the opinion
vector; ``evaluate_group_metric`` dispatches them by id.  Binary opinion
profiles across several issues live in ``ProfileMatrix``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import (
    IsolatedNodeError,
    ParameterError,
    UndefinedMetricError,
    UnknownMetricError,
)
from .graphs import Graph

__all__ = [
    "MetricSeries",
    "ProfileMatrix",
    "AlignmentReport",
    "variance",
    "sign_of_deviation",
    "bimodality",
    "local_agreement",
    "profile_matrix",
    "profile_histogram",
    "alignment_reached",
    "alignment_report",
    "evaluate_group_metric",
    "is_group_based",
    "metric_ids",
    "save_metric_series",
    "save_profile_histograms",
]

MAX_PROFILE_ISSUES = 20  # histogram materializes all 2^m profile bins


@dataclass(frozen=True)
class MetricSeries:
    """Time-indexed values of one metric along a trajectory.

    A ``None`` value marks a step where the metric was undefined.
    """

    metric: str
    points: tuple[tuple[int, float | None], ...]

    def values(self) -> list[float | None]:
        return [v for _, v in self.points]

    @property
    def final(self) -> float | None:
        return self.points[-1][1]


@dataclass(frozen=True)
class ProfileMatrix:
    """n x m sign matrix; row i is node i's binary opinion profile."""

    S: np.ndarray

    def __post_init__(self):
        if self.S.ndim != 2:
            raise ParameterError("profile matrix must be 2-D")
        if not np.all(np.abs(self.S) == 1):
            raise ParameterError("profile entries must be +1 or -1")

    @property
    def n(self) -> int:
        return self.S.shape[0]

    @property
    def m(self) -> int:
        return self.S.shape[1]


@dataclass(frozen=True)
class AlignmentReport:
    aligned: bool
    unique_rows: int
    single_profile: bool  # degenerate: every node on the same side everywhere


def variance(z: np.ndarray) -> float:
    """Sum of squared deviations from the unweighted mean (not divided
    by n).  Shift- and sign-invariant but scales quadratically."""
    z = np.asarray(z, dtype=np.float64)
    return float(np.sum((z - z.mean()) ** 2))


def sign_of_deviation(z: np.ndarray) -> np.ndarray:
    """Side of the mean for every node: +1 at or above, -1 below."""
    z = np.asarray(z, dtype=np.float64)
    return np.where(z - z.mean() >= 0.0, 1, -1).astype(np.int8)


def bimodality(z: np.ndarray) -> float:
    """Bimodality coefficient (gamma^2 + 1) / kappa from the population
    skewness gamma and kurtosis kappa of the opinion distribution.

    Lies in (0, 1]: 1 at a perfect two-point split, about 1/3 for
    normally distributed opinions.  Undefined on constant vectors.
    """
    z = np.asarray(z, dtype=np.float64)
    if z.size < 2:
        raise UndefinedMetricError("bimodality needs at least 2 opinions")
    if np.all(z == z[0]):
        raise UndefinedMetricError("bimodality is undefined on a constant vector")
    zb = z - z.mean()
    m2 = float(np.mean(zb**2))
    if m2 == 0.0:
        raise UndefinedMetricError("bimodality is undefined on a constant vector")
    gamma = float(np.mean(zb**3)) / m2**1.5
    kappa = float(np.mean(zb**4)) / (m2 * m2)
    return (gamma * gamma + 1.0) / kappa


def local_agreement(g: Graph, z: np.ndarray) -> float:
    """Average over nodes of the degree-weighted fraction of neighbors
    on the same side of the mean opinion.

    On a weight-1 graph this is exactly the average fraction of agreeing
    neighbors; with weights, agreement is weighted by connection strength.
    """
    if g.n and g.degrees.min() <= 0.0:
        node = int(np.argmin(g.degrees))
        raise IsolatedNodeError(node, f"node {node} is isolated (degree 0)")
    s = sign_of_deviation(z)
    if s.shape != (g.n,):
        raise ParameterError(f"vector length {s.size} does not match n={g.n}")
    agree = s[g.row_index] == s[g.indices]
    num = np.bincount(g.row_index, weights=g.weights * agree, minlength=g.n)
    return float(np.mean(num / g.degrees))


def profile_matrix(zs: Sequence[np.ndarray]) -> ProfileMatrix:
    """Stack per-issue deviation signs into an n x m profile matrix."""
    if len(zs) < 1:
        raise ParameterError("need at least one opinion vector")
    n = np.asarray(zs[0]).size
    cols = []
    for j, z in enumerate(zs):
        z = np.asarray(z, dtype=np.float64)
        if z.size != n:
            raise ParameterError(f"issue {j} has length {z.size}, expected {n}")
        cols.append(sign_of_deviation(z))
    return ProfileMatrix(S=np.stack(cols, axis=1))


def profile_key(row: np.ndarray) -> str:
    return "".join("+" if v > 0 else "-" for v in row)


def all_profile_keys(m: int) -> list[str]:
    """Every profile over m issues, first issue most significant,
    '+' before '-'."""
    return [
        "".join("+" if (code >> (m - 1 - j)) & 1 == 0 else "-" for j in range(m))
        for code in range(2**m)
    ]


def profile_histogram(S: ProfileMatrix) -> dict[str, int]:
    """Counts per profile; every one of the 2^m profiles is present as a
    key (zero-filled) so downstream tables have stable rows."""
    m = S.m
    if m > MAX_PROFILE_ISSUES:
        raise ParameterError(
            f"m={m} exceeds the {MAX_PROFILE_ISSUES}-issue histogram limit"
        )
    bits = (S.S < 0).astype(np.int64)
    codes = bits @ (1 << np.arange(m - 1, -1, -1, dtype=np.int64))
    counts = np.bincount(codes, minlength=2**m)
    return {key: int(counts[code]) for code, key in enumerate(all_profile_keys(m))}


def alignment_report(S: ProfileMatrix) -> AlignmentReport:
    uniq = np.unique(S.S, axis=0)
    if uniq.shape[0] == 1:
        return AlignmentReport(aligned=True, unique_rows=1, single_profile=True)
    if uniq.shape[0] == 2 and np.array_equal(uniq[0], -uniq[1]):
        return AlignmentReport(aligned=True, unique_rows=2, single_profile=False)
    return AlignmentReport(
        aligned=False, unique_rows=int(uniq.shape[0]), single_profile=False
    )


def alignment_reached(S: ProfileMatrix) -> bool:
    """True when at most two profiles remain and, if two, they are
    elementwise opposites."""
    return alignment_report(S).aligned


_GROUP_METRICS: dict[str, Callable[[Graph, np.ndarray], float]] = {
    "bimodality": lambda g, z: bimodality(z),
    "local_agreement": local_agreement,
}
_OTHER_METRICS: dict[str, Callable[[Graph, np.ndarray], float]] = {
    "variance": lambda g, z: variance(z),  # fails scale invariance
}


def metric_ids() -> list[str]:
    return sorted(_GROUP_METRICS | _OTHER_METRICS)


def is_group_based(metric: str) -> bool:
    if metric in _GROUP_METRICS:
        return True
    if metric in _OTHER_METRICS:
        return False
    raise UnknownMetricError(f"unknown metric id {metric!r}")


def evaluate_group_metric(metric: str, g: Graph | None, z: np.ndarray) -> float:
    """Uniform dispatch f(G, z) over the registered metrics."""
    fn = _GROUP_METRICS.get(metric) or _OTHER_METRICS.get(metric)
    if fn is None:
        raise UnknownMetricError(
            f"unknown metric id {metric!r}; known: {metric_ids()}"
        )
    return fn(g, z)


def save_metric_series(series: MetricSeries, path: str | Path) -> None:
    """Write a metric series as CSV ``t,value`` (empty value = undefined)."""
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("t,value\n")
        for t, v in series.points:
            fh.write(f"{t},{'' if v is None else repr(float(v))}\n")


def save_profile_histograms(
    rows: Sequence[tuple[int, dict[str, int]]], path: str | Path
) -> None:
    """Write per-time profile histograms as long CSV ``t,profile,count``."""
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("t,profile,count\n")
        for t, hist in rows:
            for key, count in hist.items():
                fh.write(f"{t},{key},{count}\n")
