"""Renderers: one figure per scenario CSV.

All plotting happens after the input fully validates, so a schema error
never leaves a partial image behind.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import io  # noqa: E402

AGREEMENT_THRESHOLD = 2 / 3  # blue at or above, red below
FORMATS = ("png", "svg")


@dataclass(frozen=True)
class FigureSpec:
    figure: str  # fig1 .. fig6
    input_csv: str | Path
    output: str | Path
    format: str | None = None  # inferred from the output suffix when None

    def resolved_format(self) -> str:
        if self.format:
            fmt = self.format.lower()
        else:
            fmt = Path(self.output).suffix.lstrip(".").lower() or "png"
        if fmt not in FORMATS:
            raise ValueError(f"unsupported format {fmt!r}; use one of {FORMATS}")
        return fmt


def agreement_color(frac: float) -> str:
    """Node color convention: blue for locally agreeing nodes."""
    return "tab:blue" if frac >= AGREEMENT_THRESHOLD else "tab:red"


def approx_line(lambdas: np.ndarray) -> np.ndarray:
    """The straight-line prediction agreement = lambda/2 + 1/2."""
    return np.asarray(lambdas) / 2.0 + 0.5


def _render_fig1(path, ax):
    data = io.load_fig1(path)
    ax_std = ax.twinx()
    for i, g in enumerate(data.graphs):
        color = f"C{i}"
        ax.plot(data.t[g], data.agreement[g], color=color, label=g)
        ax_std.plot(data.t[g], data.std[g], color=color, linestyle=":")
    ax.set_xlabel("iteration")
    ax.set_ylabel("average local agreement (solid)")
    ax_std.set_ylabel("opinion standard deviation (dotted)")
    ax.set_ylim(0.0, 1.0)
    ax.legend(fontsize=7, loc="lower right")


def _render_fig2(path, fig):
    heatmaps = io.load_fig2(path)
    axes = fig.subplots(len(heatmaps), 1, squeeze=False)[:, 0]
    for ax, hm in zip(axes, heatmaps):
        ax.imshow(hm.counts, aspect="auto", interpolation="nearest", cmap="viridis")
        ax.set_yticks(range(len(hm.profiles)))
        ax.set_yticklabels(hm.profiles, fontsize=6)
        ax.set_xticks(range(0, hm.times.size, max(1, hm.times.size // 8)))
        ax.set_xticklabels(
            hm.times[:: max(1, hm.times.size // 8)], fontsize=6
        )
        ax.set_title(hm.graph, fontsize=8)
        ax.set_xlabel("recorded step")
        ax.set_ylabel("opinion profile")


def _render_fig3(path, ax):
    runs = io.load_fig3(path)
    for run, (t, v) in sorted(runs.items()):
        ax.plot(t, v, label=f"start {run}")
    ax.set_xlabel("iteration")
    ax.set_ylabel("bimodality")
    ax.legend(fontsize=7)


def _render_fig4(path, ax):
    by_n = io.load_fig4(path)
    for n, rows in sorted(by_n.items()):
        ks = [r["k"] for r in rows]
        ax.errorbar(
            ks,
            [r["sbm_mean"] for r in rows],
            yerr=[r["sbm_std"] for r in rows],
            marker="o",
            capsize=3,
            label=f"block-model equilibrium (n={n})",
        )
    first = by_n[sorted(by_n)[0]]
    ax.errorbar(
        [r["k"] for r in first],
        [r["gaussian_mean"] for r in first],
        yerr=[r["gaussian_std"] for r in first],
        marker="s",
        capsize=3,
        linestyle="--",
        label="k-sample normal reference",
    )
    ax.axhline(1 / 3, color="gray", linewidth=0.8, linestyle=":")
    ax.set_xlabel("number of blocks k")
    ax.set_ylabel("bimodality")
    ax.legend(fontsize=7)


def _render_fig5(path, fig):
    snaps = io.load_fig5(path)
    graphs = sorted({s.graph for s in snaps})
    phases = ["0", "5", "equilibrium"]
    axes = fig.subplots(len(graphs), len(phases), squeeze=False)
    for gi, graph in enumerate(graphs):
        for pi, phase in enumerate(phases):
            ax = axes[gi][pi]
            snap = next(
                (s for s in snaps if s.graph == graph and s.phase == phase), None
            )
            if snap is None:
                ax.axis("off")
                continue
            colors = [agreement_color(f) for f in snap.agree_frac]
            ax.scatter(snap.xy[:, 0], snap.xy[:, 1], c=colors, s=8)
            ax.set_xticks([])
            ax.set_yticks([])
            if gi == 0:
                ax.set_title(f"{phase} iterations" if phase != "equilibrium" else phase,
                             fontsize=8)
            if pi == 0:
                ax.set_ylabel(graph, fontsize=6)


def _render_fig6(path, ax):
    rows = io.load_fig6(path)
    lams = np.array([r["lambda2"] for r in rows])
    agree = np.array([r["agreement"] for r in rows])
    degen = np.array([r["degenerate"] for r in rows])
    ax.scatter(lams[~degen], agree[~degen], s=18, label="graphs")
    if degen.any():
        ax.scatter(
            lams[degen], agree[degen], s=24, marker="x", color="gray",
            label="tied eigenvalues",
        )
    grid = np.linspace(min(0.0, lams.min()), max(1.0, lams.max()), 50)
    ax.plot(grid, approx_line(grid), color="black", linewidth=1.0,
            label="lambda/2 + 1/2")
    ax.set_xlabel("second eigenvalue of the normalized adjacency")
    ax.set_ylabel("equilibrium average local agreement")
    ax.legend(fontsize=7)


def render(spec: FigureSpec) -> Path:
    """Render one figure; returns the written image path.

    Raises SchemaError (naming the missing column) or FileNotFoundError
    before any output is written.
    """
    fmt = spec.resolved_format()
    path = Path(spec.input_csv)
    if not path.exists():
        raise FileNotFoundError(f"input CSV not found: {path}")
    out = Path(spec.output)
    if spec.figure in ("fig2", "fig5"):
        fig = plt.figure(figsize=(7, 5), dpi=150)
        {"fig2": _render_fig2, "fig5": _render_fig5}[spec.figure](path, fig)
    elif spec.figure in ("fig1", "fig3", "fig4", "fig6"):
        fig, ax = plt.subplots(figsize=(6, 4), dpi=150)
        {
            "fig1": _render_fig1,
            "fig3": _render_fig3,
            "fig4": _render_fig4,
            "fig6": _render_fig6,
        }[spec.figure](path, ax)
    else:
        raise ValueError(
            f"unknown figure id {spec.figure!r}; expected fig1..fig6"
        )
    fig.tight_layout()
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, format=fmt)
    plt.close(fig)
    return out
