"""Experiment orchestration: named scenarios, convergence detection,
ensemble statistics, seed splitting, and all CSV/JSON output.

Every scenario is fully reproducible from its config and one master
seed: per-cell seeds are derived as
``sha256(master, scenario, cell labels...)``, so identical configs give
byte-identical CSV output (the manifest's wall-time field is the only
nondeterministic artifact).  The ``POLARLAB_THREADS`` environment
variable caps worker threads for independent cells; results are
gathered in deterministic order so parallelism never changes file
contents.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from . import __version__
from .dynamics import (
    StandardNormalInit,
    deviation_from_consensus,
    deviation_step,
    make_initial_opinions,
)
from .equilibrium import (
    equilibrium_metric,
    sbm_bimodality_curve,
    save_curve_csv,
)
from .errors import (
    DegenerateInputError,
    EigenConvergenceError,
    ParameterError,
    PolarlabError,
)
from .graphs import Graph, generate_geometric, generate_sbm, largest_component, load_edge_list
from .metrics import (
    MetricSeries,
    alignment_reached,
    all_profile_keys,
    evaluate_group_metric,
    is_group_based,
    profile_histogram,
    profile_matrix,
    sign_of_deviation,
    variance,
)
from .spectral import SpectralSummary, top_eigenpairs

__all__ = [
    "SBMSpec",
    "GeometricSpec",
    "EdgeListSpec",
    "GraphSpec",
    "parse_graph_spec",
    "ConvergenceCriterion",
    "ExperimentConfig",
    "iterations_to_convergence",
    "run_scenario",
    "fig6_scatter",
    "spring_layout",
    "SCENARIOS",
]

log = logging.getLogger("polarlab.harness")

INNER_PRODUCT_WARN = 1e-12  # start vector nearly orthogonal to the limit direction


# ---------------------------------------------------------------------------
# graph specs


@dataclass(frozen=True)
class SBMSpec:
    k: int
    n: int
    p: float
    q: float

    def __post_init__(self):
        if self.k < 1 or self.n < self.k:
            raise ParameterError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if not (0.0 <= self.q <= self.p <= 1.0):
            raise ParameterError(f"need 0 <= q <= p <= 1, got p={self.p}, q={self.q}")

    def label(self) -> str:
        # labels land in CSV fields, so no commas
        return f"sbm[k={self.k};n={self.n};p={self.p};q={self.q}]"

    def realize(self, seed: int) -> Graph:
        return generate_sbm(self.k, self.n, self.p, self.q, seed)


@dataclass(frozen=True)
class GeometricSpec:
    n: int
    r: float

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"need n >= 1, got {self.n}")
        if self.r <= 0:
            raise ParameterError(f"need r > 0, got {self.r}")

    def label(self) -> str:
        return f"geometric[n={self.n};r={self.r}]"

    def realize(self, seed: int) -> Graph:
        return generate_geometric(self.n, self.r, seed)


@dataclass(frozen=True)
class EdgeListSpec:
    path: str

    def label(self) -> str:
        return f"edgelist[{Path(self.path).name.replace(',', '_')}]"

    def realize(self, seed: int) -> Graph:
        return load_edge_list(self.path)


GraphSpec = Union[SBMSpec, GeometricSpec, EdgeListSpec]


def parse_graph_spec(text: str) -> GraphSpec:
    """Parse ``sbm:k=5,n=1000,p=0.1,q=0.01``, ``geometric:n=1000,r=0.1``
    or ``edgelist:PATH``."""
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind == "edgelist":
        if not rest:
            raise ParameterError("edgelist spec needs a path")
        return EdgeListSpec(path=rest)
    try:
        kv = dict(item.split("=", 1) for item in rest.split(",") if item)
    except ValueError:
        raise ParameterError(f"malformed graph spec {text!r}") from None
    try:
        if kind == "sbm":
            return SBMSpec(
                k=int(kv["k"]), n=int(kv["n"]), p=float(kv["p"]), q=float(kv["q"])
            )
        if kind == "geometric":
            return GeometricSpec(n=int(kv["n"]), r=float(kv["r"]))
    except KeyError as missing:
        raise ParameterError(f"graph spec {text!r} is missing {missing}") from None
    raise ParameterError(f"unknown graph kind {kind!r}")


# ---------------------------------------------------------------------------
# convergence


@dataclass(frozen=True)
class ConvergenceCriterion:
    """|value - target| <= epsilon must hold on ``window`` consecutive
    recorded steps; give up after ``max_steps`` updates."""

    epsilon: float = 1e-4
    window: int = 10
    max_steps: int = 100_000

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ParameterError("epsilon must be positive")
        if self.window < 1:
            raise ParameterError("window must be >= 1")


def iterations_to_convergence(
    series: MetricSeries, target: float, crit: ConvergenceCriterion
) -> int | None:
    """Smallest recorded t whose following ``window`` recorded values all
    lie within epsilon of the target; None when no such window exists."""
    pts = series.points
    run = 0
    for i, (_, v) in enumerate(pts):
        if v is not None and abs(v - target) <= crit.epsilon:
            run += 1
            if run >= crit.window:
                return pts[i - crit.window + 1][0]
        else:
            run = 0
    return None


# ---------------------------------------------------------------------------
# config


def _default_graphs() -> tuple[GraphSpec, ...]:
    return (
        SBMSpec(k=5, n=1000, p=0.1, q=0.01),
        GeometricSpec(n=1000, r=0.1),
    )


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete, reproducible description of one scenario run."""

    scenario: str
    out_dir: str
    graphs: tuple[GraphSpec, ...] = field(default_factory=_default_graphs)
    inits: int = 5
    issues: int = 4
    steps: int | None = None  # None = run to convergence
    stride: int = 1
    seed: int = 0
    metrics: tuple[str, ...] = ("bimodality", "local_agreement")
    convergence: ConvergenceCriterion = ConvergenceCriterion()
    # k-sweep scenario parameters
    ks: tuple[int, ...] = (2, 5, 10, 25, 50)
    graphs_per_k: int = 100
    sbm_n: int = 1000
    sbm_p: float = 3 / 10
    sbm_q: float = 2 / 100
    # directory of user-supplied edge lists for the tables scenario
    edge_list_dir: str | None = None

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["graphs"] = [
            {"kind": type(s).__name__, **dataclasses.asdict(s)} for s in self.graphs
        ]
        return d

    @staticmethod
    def from_dict(d: dict) -> "ExperimentConfig":
        d = dict(d)
        specs = []
        for s in d.get("graphs", []):
            s = dict(s)
            kind = s.pop("kind")
            cls = {"SBMSpec": SBMSpec, "GeometricSpec": GeometricSpec, "EdgeListSpec": EdgeListSpec}[kind]
            specs.append(cls(**s))
        d["graphs"] = tuple(specs)
        d["metrics"] = tuple(d.get("metrics", ()))
        d["ks"] = tuple(d.get("ks", ()))
        d["convergence"] = ConvergenceCriterion(**d["convergence"])
        return ExperimentConfig(**d)


def derive_seed(master: int, *parts) -> int:
    """Stable 63-bit seed from the master seed and any labels."""
    payload = repr((master,) + tuple(parts)).encode("utf-8")
    return int.from_bytes(hashlib.sha256(payload).digest()[:8], "big") >> 1


def _max_workers() -> int:
    raw = os.environ.get("POLARLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def parallel_map(fn: Callable, items: Sequence) -> list:
    """Map preserving input order; threaded when POLARLAB_THREADS > 1."""
    workers = _max_workers()
    if workers == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# shared scenario machinery


@dataclass
class _RunLog:
    notes: list[str] = field(default_factory=list)

    def note(self, msg: str) -> None:
        self.notes.append(msg)
        log.info("%s", msg)


def _prepare_graph(spec: GraphSpec, seed: int, runlog: _RunLog) -> Graph:
    g = spec.realize(seed)
    if not g.structure.connected:
        before = g.n
        g = largest_component(g)
        runlog.note(
            f"{spec.label()}: disconnected; kept largest component "
            f"({g.n} of {before} nodes)"
        )
    return g


def _check_start_overlap(
    summary: SpectralSummary, g: Graph, z0: np.ndarray, label: str, runlog: _RunLog
) -> None:
    ip = float(np.dot(np.sqrt(g.degrees) * summary.v2, z0))
    if abs(ip) < INNER_PRODUCT_WARN:
        runlog.note(
            f"{label}: start vector nearly orthogonal to the limit direction "
            f"(inner product {ip:.3e}); convergence may stall"
        )


class DeviationState:
    """Opinion state tracked as consensus + unit deviation direction.

    Group-based metrics of the opinions are evaluated directly on the
    unit direction (they are shift/scale invariant); the opinion spread
    is recovered from the logged scale.  This matches exact arithmetic
    for any horizon, where iterating the raw vector would collapse to an
    exactly constant float array once the spread falls below resolution.
    """

    def __init__(self, g: Graph, z0: np.ndarray):
        self.g = g
        self.c, self.w, self.log_scale = deviation_from_consensus(g, z0)
        self.t = 0

    def step(self) -> None:
        self.w, dlog = deviation_step(self.g, self.w)
        self.log_scale += dlog
        self.t += 1

    def group_metric(self, metric: str) -> float:
        return float(evaluate_group_metric(metric, self.g, self.w))

    def metric(self, name: str) -> float:
        if is_group_based(name):
            return self.group_metric(name)
        # variance is quadratic in the opinion scale
        return float(math.exp(2.0 * self.log_scale) * variance(self.w))

    def std(self) -> float:
        spread = math.sqrt(variance(self.w) / self.g.n)
        return float(math.exp(self.log_scale) * spread)

    def direction(self) -> np.ndarray:
        return self.w.copy()


def _evolve_series(
    g: Graph,
    z0: np.ndarray,
    metric_fns: dict[str, Callable[[DeviationState], float]],
    crit: ConvergenceCriterion,
    watch: str,
    target: float | None,
    steps: int | None = None,
) -> tuple[dict[str, list[tuple[int, float | None]]], DeviationState, int | None]:
    """Step the averaging dynamics recording every metric per step.

    Stops after ``steps`` updates when given; otherwise stops once the
    watched metric satisfies the convergence window against ``target``
    (or, with no target, once its step-to-step change stays within
    epsilon for a full window), or at ``crit.max_steps``.
    Returns (series points per metric, final state, convergence t).
    """

    def measure(state: DeviationState) -> dict[str, float | None]:
        out = {}
        for name, fn in metric_fns.items():
            try:
                out[name] = float(fn(state))
            except (DegenerateInputError, PolarlabError):
                out[name] = None
        return out

    state = DeviationState(g, z0)
    vals = measure(state)
    points = {name: [(0, vals[name])] for name in metric_fns}
    run = 0
    converged_at: int | None = None
    prev_watch = vals[watch]
    horizon = steps if steps is not None else crit.max_steps

    def in_band(value, previous) -> bool:
        if value is None:
            return False
        if target is not None:
            return abs(value - target) <= crit.epsilon
        return previous is not None and abs(value - previous) <= crit.epsilon

    if steps is None and target is not None and in_band(vals[watch], None):
        run = 1
    for t in range(1, horizon + 1):
        state.step()
        vals = measure(state)
        for name in metric_fns:
            points[name].append((t, vals[name]))
        if steps is None:
            if in_band(vals[watch], prev_watch):
                run += 1
                if run >= crit.window:
                    converged_at = t - crit.window + 1
                    break
            else:
                run = 0
        prev_watch = vals[watch]
    return points, state, converged_at


def _thin(points: list[tuple[int, float | None]], stride: int) -> list[tuple[int, float | None]]:
    last_t = points[-1][0]
    return [(t, v) for t, v in points if t % stride == 0 or t == last_t]


def _write_csv(path: Path, header: str, rows: Iterable[str]) -> None:
    with path.open("w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def _fmt(x: float | None) -> str:
    return "" if x is None else repr(float(x))


# ---------------------------------------------------------------------------
# scenarios


def _scenario_fig1(cfg: ExperimentConfig, out: Path, runlog: _RunLog) -> list[str]:
    """Opinion standard deviation and average local agreement per step."""
    rows: list[str] = []
    iters_note = {}
    for gi, spec in enumerate(cfg.graphs):
        g = _prepare_graph(spec, derive_seed(cfg.seed, cfg.scenario, gi), runlog)
        label = f"{spec.label()}#{gi}"
        z0 = make_initial_opinions(
            StandardNormalInit(derive_seed(cfg.seed, cfg.scenario, gi, "init")), g.n
        )
        target = None
        try:
            summary = top_eigenpairs(g)
            if summary.degenerate:
                runlog.note(f"{label}: tied trailing eigenvalues; self-targeted stop")
            else:
                target = equilibrium_metric(
                    "local_agreement", g, summary=summary
                ).predicted
            _check_start_overlap(summary, g, z0, label, runlog)
        except EigenConvergenceError as exc:
            runlog.note(f"{label}: eigensolve failed ({exc}); self-targeted stop")
        fns = {
            "std": DeviationState.std,
            "local_agreement": lambda st: st.group_metric("local_agreement"),
        }
        points, _, conv = _evolve_series(
            g, z0, fns, cfg.convergence, "local_agreement", target, cfg.steps
        )
        la = [v for _, v in points["local_agreement"]]
        if not (la[-1] > la[0] + 0.1):
            raise PolarlabError(
                f"{label}: final local agreement {la[-1]:.4f} did not rise "
                f"at least 0.1 above initial {la[0]:.4f}"
            )
        if g.structure.regular is not None:
            std = [v for _, v in points["std"]]
            drops = np.diff(np.asarray(std))
            if np.any(drops > 1e-9):
                raise PolarlabError(f"{label}: std increased on a regular graph")
        iters_note[label] = conv
        thinned_std = _thin(points["std"], cfg.stride)
        thinned_la = _thin(points["local_agreement"], cfg.stride)
        for (t, s), (_, a) in zip(thinned_std, thinned_la):
            rows.append(f"{label},{t},{_fmt(s)},{_fmt(a)}")
    _write_csv(out / "fig1.csv", "graph,t,std,local_agreement", rows)
    runlog.note(f"iterations to convergence: {iters_note}")
    return ["fig1.csv"]


def _scenario_fig2(cfg: ExperimentConfig, out: Path, runlog: _RunLog) -> list[str]:
    """Binary opinion profile histogram over time, one run per graph."""
    m = cfg.issues
    rows: list[str] = []
    for gi, spec in enumerate(cfg.graphs):
        g = _prepare_graph(spec, derive_seed(cfg.seed, cfg.scenario, gi), runlog)
        label = f"{spec.label()}#{gi}"
        states = [
            DeviationState(
                g,
                make_initial_opinions(
                    StandardNormalInit(
                        derive_seed(cfg.seed, cfg.scenario, gi, "issue", j)
                    ),
                    g.n,
                ),
            )
            for j in range(m)
        ]
        horizon = cfg.steps if cfg.steps is not None else cfg.convergence.max_steps
        keys = all_profile_keys(m)
        history: list[tuple[int, dict[str, int]]] = []
        aligned_run = 0
        t = 0
        while True:
            S = profile_matrix([st.w for st in states])
            history.append((t, profile_histogram(S)))
            if cfg.steps is None:
                aligned_run = aligned_run + 1 if alignment_reached(S) else 0
                if aligned_run >= cfg.convergence.window:
                    break
            if t >= horizon:
                break
            for st in states:
                st.step()
            t += 1
        last_t = history[-1][0]
        for ht, hist in history:
            if ht % cfg.stride == 0 or ht == last_t:
                for key in keys:
                    rows.append(f"{label},{ht},{key},{hist[key]}")
    _write_csv(out / "fig2.csv", "graph,t,profile,count", rows)
    return ["fig2.csv"]


def _scenario_fig3(cfg: ExperimentConfig, out: Path, runlog: _RunLog) -> list[str]:
    """Bimodality per step for several random starts on one graph."""
    spec = cfg.graphs[0]
    g = _prepare_graph(spec, derive_seed(cfg.seed, cfg.scenario, 0), runlog)
    target = None
    summary = top_eigenpairs(g)
    if summary.degenerate:
        runlog.note(f"{spec.label()}: tied trailing eigenvalues; self-targeted stop")
    else:
        target = equilibrium_metric("bimodality", g, summary=summary).predicted
        runlog.note(f"{spec.label()}: equilibrium bimodality {target!r}")

    def one_run(r: int) -> list[str]:
        z0 = make_initial_opinions(
            StandardNormalInit(derive_seed(cfg.seed, cfg.scenario, "run", r)), g.n
        )
        fns = {"bimodality": lambda st: st.group_metric("bimodality")}
        points, _, _ = _evolve_series(
            g, z0, fns, cfg.convergence, "bimodality", target, cfg.steps
        )
        return [f"{r},{t},{_fmt(v)}" for t, v in _thin(points["bimodality"], cfg.stride)]

    rows = [row for chunk in parallel_map(one_run, list(range(cfg.inits))) for row in chunk]
    _write_csv(out / "fig3.csv", "run,t,bimodality", rows)
    return ["fig3.csv"]


def _scenario_fig4(cfg: ExperimentConfig, out: Path, runlog: _RunLog) -> list[str]:
    """Equilibrium bimodality by block count, with Gaussian reference."""
    rows = sbm_bimodality_curve(
        list(cfg.ks),
        n=cfg.sbm_n,
        p=cfg.sbm_p,
        q=cfg.sbm_q,
        graphs_per_k=cfg.graphs_per_k,
        seed=cfg.seed,
    )
    for r in rows:
        if r.graphs_skipped:
            runlog.note(f"k={r.k}: skipped {r.graphs_skipped} instances")
    save_curve_csv(rows, out / "fig4.csv")
    return ["fig4.csv"]


def _node_agree_fraction(g: Graph, z: np.ndarray) -> np.ndarray:
    s = sign_of_deviation(z)
    agree = s[g.row_index] == s[g.indices]
    num = np.bincount(g.row_index, weights=g.weights * agree, minlength=g.n)
    return num / g.degrees


def _scenario_fig5(cfg: ExperimentConfig, out: Path, runlog: _RunLog) -> list[str]:
    """Per-node agreement snapshots at t = 0, 5 and at equilibrium."""
    rows: list[str] = []
    for gi, spec in enumerate(cfg.graphs):
        g = _prepare_graph(spec, derive_seed(cfg.seed, cfg.scenario, gi), runlog)
        label = f"{spec.label()}#{gi}"
        z0 = make_initial_opinions(
            StandardNormalInit(derive_seed(cfg.seed, cfg.scenario, gi, "init")), g.n
        )
        target = None
        summary = top_eigenpairs(g)
        if not summary.degenerate:
            target = equilibrium_metric("local_agreement", g, summary=summary).predicted
        state = DeviationState(g, z0)
        snapshots: dict[str, np.ndarray] = {"0": state.direction()}
        horizon = cfg.steps if cfg.steps is not None else cfg.convergence.max_steps
        run = 0
        prev = state.group_metric("local_agreement")
        while state.t < horizon:
            state.step()
            if state.t == 5:
                snapshots["5"] = state.direction()
            cur = state.group_metric("local_agreement")
            if cfg.steps is None:
                ok = (
                    abs(cur - target) <= cfg.convergence.epsilon
                    if target is not None
                    else abs(cur - prev) <= cfg.convergence.epsilon
                )
                run = run + 1 if ok else 0
                if run >= cfg.convergence.window and state.t >= 5:
                    break
            prev = cur
        snapshots.setdefault("5", state.direction())
        snapshots["equilibrium"] = state.direction()
        runlog.note(f"{label}: equilibrium snapshot at t={state.t}")
        if g.coords is not None:
            xy = g.coords
        else:
            xy = spring_layout(g, seed=derive_seed(cfg.seed, cfg.scenario, gi, "layout"))
        for phase in ("0", "5", "equilibrium"):
            zz = snapshots[phase]
            frac = _node_agree_fraction(g, zz)
            side = sign_of_deviation(zz)
            for i in range(g.n):
                rows.append(
                    f"{label},{phase},{i},{_fmt(frac[i])},{int(side[i])},"
                    f"{_fmt(xy[i, 0])},{_fmt(xy[i, 1])}"
                )
    _write_csv(out / "fig5.csv", "graph,phase,node,agree_frac,side,x,y", rows)
    return ["fig5.csv"]


def fig6_scatter(
    specs: Sequence[GraphSpec],
    seed: int = 0,
    scenario: str = "fig6_agreement_vs_lambda2",
) -> list[dict]:
    """One row per graph: second eigenvalue, equilibrium average local
    agreement, and the lambda2/2 + 1/2 approximation; degenerate
    instances are flagged rather than dropped."""
    if len(specs) < 2:
        raise ParameterError("scatter needs at least 2 graphs")

    def one(item: tuple[int, GraphSpec]) -> dict:
        gi, spec = item
        runlog = _RunLog()
        g = _prepare_graph(spec, derive_seed(seed, scenario, gi), runlog)
        label = f"{spec.label()}#{gi}"
        summary = top_eigenpairs(g)
        report = equilibrium_metric("local_agreement", g, summary=summary)
        return {
            "graph": label,
            "lambda2": summary.lambda2,
            "agreement": report.predicted,
            "approx": report.approx_spectral,
            "degenerate": report.degenerate,
        }

    return parallel_map(one, list(enumerate(specs)))


def _scenario_fig6(cfg: ExperimentConfig, out: Path, runlog: _RunLog) -> list[str]:
    rows = fig6_scatter(cfg.graphs, seed=cfg.seed, scenario=cfg.scenario)
    _write_csv(
        out / "fig6.csv",
        "graph,lambda2,agreement,approx,degenerate",
        [
            f"{r['graph']},{_fmt(r['lambda2'])},{_fmt(r['agreement'])},"
            f"{_fmt(r['approx'])},{int(r['degenerate'])}"
            for r in rows
        ],
    )
    return ["fig6.csv"]


def _scenario_tables(cfg: ExperimentConfig, out: Path, runlog: _RunLog) -> list[str]:
    """Equilibrium metrics per user-supplied network plus quartile summary."""
    from .stats import ensemble_stats

    if not cfg.edge_list_dir:
        raise ParameterError("table_ensemble_stats needs --edge-list-dir")
    root = Path(cfg.edge_list_dir)
    files = sorted(p for p in root.iterdir() if p.is_file())
    if not files:
        raise ParameterError(f"no edge-list files found in {root}")
    per_network: list[str] = []
    collected: dict[str, list[float]] = {m: [] for m in cfg.metrics}
    for path in files:
        name = path.stem
        g = _prepare_graph(EdgeListSpec(path=str(path)), 0, runlog)
        try:
            summary = top_eigenpairs(g)
        except EigenConvergenceError as exc:
            runlog.note(f"{name}: eigensolve failed ({exc}); skipped")
            continue
        for metric in cfg.metrics:
            report = equilibrium_metric(metric, g, summary=summary)
            per_network.append(f"{name},{metric},{_fmt(report.predicted)}")
            if report.degenerate:
                runlog.note(f"{name}: tied eigenvalues; {metric} value unreliable")
            else:
                collected[metric].append(report.predicted)
    _write_csv(out / "tables.csv", "network,metric,value", per_network)
    summary_rows = []
    for metric in cfg.metrics:
        vals = collected[metric]
        if not vals:
            continue
        st = ensemble_stats(vals)
        summary_rows.append(
            f"{metric},{st.q1!r},{st.median!r},{st.q3!r},{st.mean!r},{st.std!r}"
        )
    _write_csv(out / "tables_summary.csv", "metric,q1,median,q3,mean,std", summary_rows)
    return ["tables.csv", "tables_summary.csv"]


def _scenario_custom(cfg: ExperimentConfig, out: Path, runlog: _RunLog) -> list[str]:
    """Generic metric-over-time sweep for arbitrary graphs and metrics."""
    rows: list[str] = []
    for gi, spec in enumerate(cfg.graphs):
        g = _prepare_graph(spec, derive_seed(cfg.seed, cfg.scenario, gi), runlog)
        label = f"{spec.label()}#{gi}"
        target_by_metric: dict[str, float | None] = {}
        summary = None
        try:
            summary = top_eigenpairs(g)
        except EigenConvergenceError as exc:
            runlog.note(f"{label}: eigensolve failed ({exc}); self-targeted stops")
        for metric in cfg.metrics:
            target_by_metric[metric] = None
            if summary is not None and not summary.degenerate and is_group_based(metric):
                target_by_metric[metric] = equilibrium_metric(
                    metric, g, summary=summary
                ).predicted
        for r in range(cfg.inits):
            z0 = make_initial_opinions(
                StandardNormalInit(derive_seed(cfg.seed, cfg.scenario, gi, "run", r)),
                g.n,
            )
            watch = cfg.metrics[0]
            fns = {m: (lambda st, m=m: st.metric(m)) for m in cfg.metrics}
            points, _, _ = _evolve_series(
                g, z0, fns, cfg.convergence, watch, target_by_metric[watch], cfg.steps
            )
            for metric in cfg.metrics:
                for t, v in _thin(points[metric], cfg.stride):
                    rows.append(f"{label},{r},{t},{metric},{_fmt(v)}")
    _write_csv(out / "custom.csv", "graph,run,t,metric,value", rows)
    return ["custom.csv"]


SCENARIOS: dict[str, Callable[[ExperimentConfig, Path, _RunLog], list[str]]] = {
    "fig1_metrics_vs_time": _scenario_fig1,
    "fig2_profiles": _scenario_fig2,
    "fig3_bimodality_runs": _scenario_fig3,
    "fig4_bimodality_by_k": _scenario_fig4,
    "fig5_local_snapshots": _scenario_fig5,
    "fig6_agreement_vs_lambda2": _scenario_fig6,
    "table_ensemble_stats": _scenario_tables,
    "custom": _scenario_custom,
}


def run_scenario(cfg: ExperimentConfig) -> Path:
    """Run one named scenario; returns the result directory, which holds
    the scenario CSVs, a JSON manifest, and a plain-text log."""
    if cfg.scenario not in SCENARIOS:
        raise ParameterError(
            f"unknown scenario {cfg.scenario!r}; known: {sorted(SCENARIOS)}"
        )
    if cfg.stride < 1:
        raise ParameterError("stride must be >= 1")
    if cfg.steps is not None and cfg.steps < 0:
        raise ParameterError("steps must be >= 0")
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    runlog = _RunLog()
    t0 = time.monotonic()
    outputs = SCENARIOS[cfg.scenario](cfg, out, runlog)
    wall = time.monotonic() - t0
    manifest = {
        "library": "polarlab",
        "version": __version__,
        "scenario": cfg.scenario,
        "config": cfg.to_dict(),
        "seed_scheme": "sha256(master, scenario, cell labels), 63-bit",
        "outputs": outputs,
        "notes": runlog.notes,
        "wall_time_s": wall,
    }
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=2), encoding="utf-8"
    )
    with (out / "run.log").open("w", encoding="utf-8") as fh:
        for note in runlog.notes:
            fh.write(note + "\n")
    return out


def spring_layout(g: Graph, seed: int = 0, iterations: int = 60) -> np.ndarray:
    """Deterministic force-directed 2-D layout (repulsion between all
    pairs, attraction along edges, cooling step size)."""
    rng = np.random.default_rng(seed)
    pos = rng.random((g.n, 2))
    if g.n <= 2:
        return pos
    k = 1.0 / np.sqrt(g.n)
    temp = 0.1
    rows, cols = g.row_index, g.indices
    for _ in range(iterations):
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.sqrt(np.einsum("ijk,ijk->ij", delta, delta))
        np.fill_diagonal(dist, 1.0)
        dist = np.maximum(dist, 1e-3)
        force = (k * k) / (dist * dist)  # pairwise repulsion
        disp = np.einsum("ij,ijk->ik", force, delta)
        # attraction along edges
        evec = pos[rows] - pos[cols]
        edist = np.maximum(np.sqrt(np.einsum("ij,ij->i", evec, evec)), 1e-9)
        pull = (edist / k)[:, None] * (evec / edist[:, None])
        disp -= np.vstack(
            [
                np.bincount(rows, weights=pull[:, 0], minlength=g.n),
                np.bincount(rows, weights=pull[:, 1], minlength=g.n),
            ]
        ).T
        norm = np.maximum(np.sqrt(np.einsum("ij,ij->i", disp, disp)), 1e-12)
        pos = pos + disp / norm[:, None] * np.minimum(norm, temp)[:, None]
        temp *= 0.95
    pos -= pos.min(axis=0)
    span = np.maximum(pos.max(axis=0), 1e-12)
    return pos / span
