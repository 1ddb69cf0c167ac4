"""Leading eigenpairs of the normalized adjacency matrix and the
equilibrium opinion direction they predict.

All iteration happens on the symmetric form N = D^{-1/2} A D^{-1/2},
which shares its eigenvalues with D^{-1} A; right eigenvectors map back
through D^{-1/2}.  The top pair is known analytically on a connected
graph (eigenvalue 1, eigenvector D^{1/2} 1 normalized) and is deflated
before iterating.  Because the remaining extreme eigenvalue may be
negative, the power step applies N twice (so the iteration is on N^2)
and the sign is recovered from the Rayleigh quotient on N.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DegenerateInputError,
    EigenConvergenceError,
    IsolatedNodeError,
    ParameterError,
    StructureError,
)
from .graphs import Graph

__all__ = [
    "SpectralSummary",
    "DegeneracyWarning",
    "top_eigenpairs",
    "sign_normalize",
    "equilibrium_direction",
    "normalized_deviation",
    "save_summary_json",
]

DEGENERACY_RTOL = 1e-8  # |l2| - |l3| below this times |l2| counts as a tie


class DegeneracyWarning(UserWarning):
    """The two trailing eigenvalues are (numerically) tied in magnitude,
    so the limit direction is not uniquely determined."""


@dataclass(frozen=True)
class SpectralSummary:
    """Top of the spectrum of D^{-1} A plus derived quantities.

    Eigenvalues are ordered by decreasing magnitude, positive first on a
    magnitude tie.  ``v2`` is the unit right eigenvector of D^{-1} A
    (sign pinned so its first nonzero entry is positive), ``v2_sym`` the
    matching unit eigenvector of the symmetric form, and ``sbar_star``
    the centered, sign-pinned, unit-norm version of ``v2``: the limit of
    normalized centered opinions under degree-weighted averaging.
    """

    lambda1: float
    lambda2: float
    lambda3: float | None
    v2: np.ndarray
    v2_sym: np.ndarray
    sbar_star: np.ndarray
    gap1: float
    gap2: float | None
    residuals: tuple[float, ...]
    degenerate: bool | None
    iterations: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "lambda3": self.lambda3,
            "gap1": self.gap1,
            "gap2": self.gap2,
            "degenerate": self.degenerate,
            "residuals": list(self.residuals),
        }


def sign_normalize(x: np.ndarray) -> np.ndarray:
    """Flip the vector, if needed, so its first nonzero entry is positive."""
    x = np.asarray(x, dtype=np.float64)
    nz = np.nonzero(x)[0]
    if nz.size == 0:
        raise DegenerateInputError("cannot sign-normalize the zero vector")
    return x.copy() if x[nz[0]] > 0 else -x


def normalized_deviation(z: np.ndarray) -> np.ndarray:
    """Mean-centered, sign-pinned, unit-norm copy of an opinion vector."""
    z = np.asarray(z, dtype=np.float64)
    if z.size == 0 or np.all(z == z[0]):
        raise DegenerateInputError("normalized deviation is undefined on a constant vector")
    zb = z - z.mean()
    nb = float(np.linalg.norm(zb))
    if nb == 0.0:
        raise DegenerateInputError("normalized deviation is undefined on a constant vector")
    return sign_normalize(zb) / nb


class _SymOperator:
    """Matvec with N = D^{-1/2} A D^{-1/2}."""

    def __init__(self, g: Graph):
        if g.degrees.min() <= 0.0:
            node = int(np.argmin(g.degrees))
            raise IsolatedNodeError(node)
        self.g = g
        self.dinv_sqrt = 1.0 / np.sqrt(g.degrees)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.dinv_sqrt * self.g.adjacency_multiply(self.dinv_sqrt * x)


def _project_out(x: np.ndarray, basis: list[np.ndarray]) -> np.ndarray:
    for b in basis:
        x = x - b * np.dot(b, x)
    return x


def _next_eigenpairs(
    mv: _SymOperator,
    basis: list[np.ndarray],
    tol: float,
    max_iters: int,
    rng: np.random.Generator,
) -> list[tuple[float, np.ndarray, float, int]]:
    """Largest-magnitude eigenpair(s) of N restricted to the complement
    of ``basis``.

    Returns one (eigenvalue, vector, residual, iterations) entry, or two
    when the extreme magnitude is attained by a +a/-a pair, which a
    power iteration on N^2 cannot separate: the pair is then split from
    the converged N^2 eigenvector.
    """
    n = basis[0].size
    x = _project_out(rng.standard_normal(n), basis)
    nx = float(np.linalg.norm(x))
    if nx == 0.0:  # astronomically unlikely; retry once with fresh noise
        x = _project_out(rng.standard_normal(n), basis)
        nx = float(np.linalg.norm(x))
    x /= nx
    last_res = np.inf
    for it in range(1, max_iters + 1):
        w = _project_out(mv(x), basis)  # N x on the deflated subspace
        theta = float(np.dot(x, w))
        res = float(np.linalg.norm(w - theta * x))
        if res <= tol:
            return [(theta, x, res, it)]
        last_res = res
        y = _project_out(mv(w), basis)  # N^2 x
        mu = float(np.dot(x, y))
        res2 = float(np.linalg.norm(y - mu * x))
        if res2 <= tol and mu > 0.0:
            # N^2 converged but N did not: x straddles a +a/-a pair
            a = float(np.sqrt(mu))
            plus = w + a * x
            minus = w - a * x
            out = []
            for lam, vec in ((a, plus), (-a, minus)):
                nv = float(np.linalg.norm(vec))
                if nv <= 1e-8:
                    continue
                vec = _project_out(vec / nv, basis)
                vec /= float(np.linalg.norm(vec))
                r = float(np.linalg.norm(_project_out(mv(vec), basis) - lam * vec))
                out.append((lam, vec, r, it))
            if out and all(r <= 10 * tol for _, _, r, _ in out):
                return out
        ny = float(np.linalg.norm(y))
        if ny == 0.0:
            # x lies in the kernel: N x = 0 already makes it an eigenvector
            return [(0.0, x, float(np.linalg.norm(w)), it)]
        x = y / ny
    raise EigenConvergenceError(residual=last_res, iterations=max_iters)


def top_eigenpairs(
    g: Graph,
    k: int = 3,
    tol: float = 1e-10,
    max_iters: int | None = None,
    seed: int = 0,
) -> SpectralSummary:
    """Deflated power iteration for the k largest-magnitude eigenpairs
    (k in {2, 3}) of the normalized adjacency matrix of a connected graph.

    ``seed`` drives the random start vectors; ``max_iters`` defaults to
    max(100 n, 100000) applications of N^2.
    Raises EigenConvergenceError when the residual tolerance is not met.
    """
    if k not in (2, 3):
        raise ParameterError(f"k must be 2 or 3, got {k}")
    if not g.structure.connected:
        raise StructureError("eigensolve requires a connected graph")
    if max_iters is None:
        max_iters = max(100 * g.n, 100_000)
    mv = _SymOperator(g)
    sq = np.sqrt(g.degrees)
    v1 = sq / float(np.linalg.norm(sq))
    pairs: list[tuple[float, np.ndarray, float, int]] = [
        (1.0, v1, float(np.linalg.norm(mv(v1) - v1)), 0)
    ]
    rng = np.random.default_rng(seed)
    basis = [v1]
    while len(pairs) < k:
        for lam, vec, res, its in _next_eigenpairs(mv, basis, tol, max_iters, rng):
            if len(pairs) < k:
                pairs.append((lam, vec, res, its))
                basis.append(vec)
    # magnitude-descending order, positive eigenvalue first on a tie
    head, rest = pairs[0], pairs[1:]
    rest.sort(key=lambda p: (-abs(p[0]), -p[0]))
    pairs = [head] + rest
    lam2, v2p, _, _ = pairs[1]
    lam3 = pairs[2][0] if k >= 3 else None
    v2p = sign_normalize(v2p)
    v2 = mv.dinv_sqrt * v2p
    v2 /= float(np.linalg.norm(v2))
    vbar = v2 - v2.mean()
    nbar = float(np.linalg.norm(vbar))
    if nbar == 0.0:
        raise AssertionError(
            "centered second eigenvector vanished on a connected graph"
        )
    sbar = sign_normalize(vbar) / nbar
    gap1 = (abs(1.0) - abs(lam2)) / 1.0
    gap2 = None if lam3 is None else (abs(lam2) - abs(lam3)) / abs(lam2)
    degenerate = None if gap2 is None else bool(gap2 < DEGENERACY_RTOL)
    return SpectralSummary(
        lambda1=1.0,
        lambda2=float(lam2),
        lambda3=None if lam3 is None else float(lam3),
        v2=v2,
        v2_sym=v2p,
        sbar_star=sbar,
        gap1=float(gap1),
        gap2=None if gap2 is None else float(gap2),
        residuals=tuple(float(p[2]) for p in pairs),
        degenerate=degenerate,
        iterations=tuple(int(p[3]) for p in pairs),
    )


def equilibrium_direction(g: Graph, summary: SpectralSummary | None = None, **kw) -> np.ndarray:
    """Predicted limit of the normalized centered opinion vector: the
    centered, sign-pinned, unit second eigenvector.

    Warns when the trailing eigenvalues are tied, in which case the
    direction is not unique.
    """
    if summary is None:
        summary = top_eigenpairs(g, **kw)
    if summary.degenerate:
        warnings.warn(
            "trailing eigenvalues tied in magnitude; equilibrium direction "
            "is not uniquely determined",
            DegeneracyWarning,
            stacklevel=2,
        )
    return summary.sbar_star


def save_summary_json(summary: SpectralSummary, path: str | Path) -> None:
    Path(path).write_text(json.dumps(summary.to_json_dict(), indent=2), encoding="utf-8")
