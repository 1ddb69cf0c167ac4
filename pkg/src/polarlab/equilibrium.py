"""Limiting metric values predicted from the graph alone.

Because group-based metrics are shift/scale/sign invariant, their limit
along degree-weighted averaging equals their value on the centered
second eigenvector; no initial opinions enter the prediction.  For
average local agreement there is additionally a one-number spectral
approximation, lambda2 / 2 + 1/2.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, EigenConvergenceError, ParameterError
from .graphs import Graph, generate_sbm, largest_component
from .metrics import bimodality, evaluate_group_metric
from .spectral import SpectralSummary, top_eigenpairs

__all__ = [
    "EquilibriumReport",
    "GaussianBimodality",
    "equilibrium_metric",
    "local_agreement_spectral_approx",
    "regular_quadratic_form",
    "gaussian_sample_bimodality",
    "sbm_bimodality_curve",
    "save_curve_csv",
]

log = logging.getLogger("polarlab.equilibrium")

GAUSSIAN_TRIALS_DEFAULT = 100


@dataclass(frozen=True)
class EquilibriumReport:
    """Predicted limiting value of one metric on one graph.

    ``approx_spectral`` is filled for local agreement only; ``simulated``
    is left for callers that also run the dynamics.  ``degenerate`` marks
    a tied trailing eigenpair, which makes the prediction unreliable.
    """

    metric: str
    predicted: float
    approx_spectral: float | None
    simulated: float | None
    degenerate: bool


def equilibrium_metric(
    metric: str,
    g: Graph,
    summary: SpectralSummary | None = None,
    **eig_kw,
) -> EquilibriumReport:
    """Evaluate a group-based metric on the equilibrium direction."""
    if summary is None:
        summary = top_eigenpairs(g, **eig_kw)
    predicted = evaluate_group_metric(metric, g, summary.sbar_star)
    approx = (
        summary.lambda2 / 2.0 + 0.5 if metric == "local_agreement" else None
    )
    return EquilibriumReport(
        metric=metric,
        predicted=float(predicted),
        approx_spectral=approx,
        simulated=None,
        degenerate=bool(summary.degenerate),
    )


def local_agreement_spectral_approx(
    g: Graph | None = None, summary: SpectralSummary | None = None, **eig_kw
) -> float:
    """lambda2 / 2 + 1/2: the one-number prediction of equilibrium
    average local agreement from the signed second eigenvalue."""
    if summary is None:
        if g is None:
            raise ParameterError("need a graph or a spectral summary")
        summary = top_eigenpairs(g, **eig_kw)
    return summary.lambda2 / 2.0 + 0.5


def regular_quadratic_form(g: Graph, s: np.ndarray) -> float:
    """s^T A s / (2 n d) + 1/2 for a weight-1 d-regular graph with no
    self-loops; equals the average local agreement of any opinion vector
    whose deviation signs are s."""
    if not g.unweighted:
        raise ParameterError("quadratic form requires a weight-1 graph")
    if g.has_self_loops:
        raise ParameterError("quadratic form requires a graph without self-loops")
    d = g.structure.regular
    if d is None:
        raise ParameterError("quadratic form requires a regular graph")
    s = np.asarray(s, dtype=np.float64)
    if s.shape != (g.n,):
        raise ParameterError(f"sign vector length {s.size} does not match n={g.n}")
    if not np.all(np.abs(s) == 1.0):
        raise ParameterError("sign vector entries must be +1 or -1")
    quad = float(np.dot(s, g.adjacency_multiply(s)))
    return quad / (2.0 * g.n * d) + 0.5


@dataclass(frozen=True)
class GaussianBimodality:
    """Monte-Carlo sample bimodality of k i.i.d. standard normals.

    ``kurtosis_mean``/``kurtosis_std`` track the population-form sample
    kurtosis of the same draws (its expectation is 3(k-1)/(k+1)).
    """

    k: int
    trials: int
    mean: float
    std: float
    kurtosis_mean: float
    kurtosis_std: float


def gaussian_sample_bimodality(
    k: int, trials: int = GAUSSIAN_TRIALS_DEFAULT, seed: int = 0
) -> GaussianBimodality:
    """Average sample bimodality over ``trials`` draws of k standard
    normals; the rare all-equal draw is resampled."""
    if k < 2:
        raise ParameterError(f"need k >= 2 samples, got {k}")
    if trials < 1:
        raise ParameterError(f"need trials >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    betas = np.empty(trials, dtype=np.float64)
    kurts = np.empty(trials, dtype=np.float64)
    for t in range(trials):
        while True:
            z = rng.standard_normal(k)
            if not np.all(z == z[0]):
                break
        betas[t] = bimodality(z)
        zb = z - z.mean()
        m2 = float(np.mean(zb**2))
        kurts[t] = float(np.mean(zb**4)) / (m2 * m2)
    return GaussianBimodality(
        k=k,
        trials=trials,
        mean=float(betas.mean()),
        std=float(betas.std()),
        kurtosis_mean=float(kurts.mean()),
        kurtosis_std=float(kurts.std()),
    )


@dataclass(frozen=True)
class BimodalityCurveRow:
    k: int
    n: int
    sbm_bimodality_mean: float
    sbm_bimodality_std: float
    gaussian_mean: float
    gaussian_std: float
    graphs_used: int
    graphs_skipped: int


def sbm_bimodality_curve(
    ks: list[int],
    n: int = 1000,
    p: float = 3 / 10,
    q: float = 2 / 100,
    graphs_per_k: int = 100,
    seed: int = 0,
    trials: int = GAUSSIAN_TRIALS_DEFAULT,
    **eig_kw,
) -> list[BimodalityCurveRow]:
    """Mean equilibrium bimodality of k-block SBM graphs for each k,
    paired with the matched k-sample Gaussian reference.

    Disconnected instances are reduced to their largest component (and
    logged); instances whose eigensolve fails or is degenerate are
    skipped (and logged).
    """
    rows = []
    for ki, k in enumerate(ks):
        values = []
        skipped = 0
        for i in range(graphs_per_k):
            gseed = seed ^ (ki * graphs_per_k + i + 1)
            g = generate_sbm(k, n, p, q, seed=gseed)
            if not g.structure.connected:
                g = largest_component(g)
                log.info(
                    "k=%d graph %d disconnected; kept largest component (%d of %d nodes)",
                    k, i, g.n, n,
                )
            try:
                report = equilibrium_metric("bimodality", g, **eig_kw)
            except (DegenerateInputError, EigenConvergenceError) as exc:
                skipped += 1
                log.warning("k=%d graph %d: %s; skipped", k, i, exc)
                continue
            if report.degenerate:
                skipped += 1
                log.info("k=%d graph %d: tied eigenvalues; skipped", k, i)
                continue
            values.append(report.predicted)
        gauss = gaussian_sample_bimodality(k, trials=trials, seed=seed ^ ((ki + 1) << 20))
        arr = np.asarray(values, dtype=np.float64)
        rows.append(
            BimodalityCurveRow(
                k=k,
                n=n,
                sbm_bimodality_mean=float(arr.mean()) if arr.size else float("nan"),
                sbm_bimodality_std=float(arr.std()) if arr.size else float("nan"),
                gaussian_mean=gauss.mean,
                gaussian_std=gauss.std,
                graphs_used=int(arr.size),
                graphs_skipped=skipped,
            )
        )
    return rows


def save_curve_csv(rows: list[BimodalityCurveRow], path) -> None:
    from pathlib import Path

    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("k,n,sbm_bimodality_mean,sbm_bimodality_std,gaussian_mean,gaussian_std\n")
        for r in rows:
            fh.write(
                f"{r.k},{r.n},{r.sbm_bimodality_mean!r},{r.sbm_bimodality_std!r},"
                f"{r.gaussian_mean!r},{r.gaussian_std!r}\n"
            )
