"""CSV loaders, one per figure id, with schema validation.

Each loader checks the header against the scenario runner's documented
schema (reporting the first missing column by name), rejects empty
files, and returns plain numpy-backed structures for the renderers.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

import numpy as np

FIGURE_COLUMNS = {
    "fig1": ["graph", "t", "std", "local_agreement"],
    "fig2": ["graph", "t", "profile", "count"],
    "fig3": ["run", "t", "bimodality"],
    "fig4": [
        "k",
        "n",
        "sbm_bimodality_mean",
        "sbm_bimodality_std",
        "gaussian_mean",
        "gaussian_std",
    ],
    "fig5": ["graph", "phase", "node", "agree_frac", "side", "x", "y"],
    "fig6": ["graph", "lambda2", "agreement", "approx", "degenerate"],
}


class SchemaError(ValueError):
    """The CSV does not match the expected scenario-output schema."""


def read_rows(path: str | Path, figure: str) -> list[dict[str, str]]:
    required = FIGURE_COLUMNS[figure]
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: file is empty")
        for col in required:
            if col not in reader.fieldnames:
                raise SchemaError(f"{path}: missing column {col!r}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


@dataclass(frozen=True)
class SeriesPerGraph:
    graphs: list[str]
    t: dict[str, np.ndarray]
    std: dict[str, np.ndarray]
    agreement: dict[str, np.ndarray]


def load_fig1(path) -> SeriesPerGraph:
    rows = read_rows(path, "fig1")
    by_graph: dict[str, list[tuple[int, float, float]]] = defaultdict(list)
    for r in rows:
        by_graph[r["graph"]].append(
            (int(r["t"]), float(r["std"]), float(r["local_agreement"]))
        )
    graphs = sorted(by_graph)
    t, std, agree = {}, {}, {}
    for g in graphs:
        pts = sorted(by_graph[g])
        t[g] = np.array([p[0] for p in pts])
        std[g] = np.array([p[1] for p in pts])
        agree[g] = np.array([p[2] for p in pts])
    return SeriesPerGraph(graphs=graphs, t=t, std=std, agreement=agree)


@dataclass(frozen=True)
class ProfileHeatmap:
    graph: str
    profiles: list[str]  # all 2^m, stable order
    times: np.ndarray
    counts: np.ndarray  # shape (2^m, len(times))


def load_fig2(path) -> list[ProfileHeatmap]:
    rows = read_rows(path, "fig2")
    per_graph: dict[str, dict[int, dict[str, int]]] = defaultdict(dict)
    for r in rows:
        per_graph[r["graph"]].setdefault(int(r["t"]), {})[r["profile"]] = int(
            r["count"]
        )
    out = []
    for graph in sorted(per_graph):
        hists = per_graph[graph]
        times = np.array(sorted(hists))
        profiles = sorted(hists[int(times[0])], key=lambda p: p.replace("+", "0").replace("-", "1"))
        m = len(profiles[0])
        if len(profiles) != 2**m:
            raise SchemaError(
                f"{path}: expected {2**m} profile rows for m={m}, found {len(profiles)}"
            )
        counts = np.zeros((len(profiles), times.size))
        for j, t in enumerate(times):
            for i, p in enumerate(profiles):
                counts[i, j] = hists[int(t)].get(p, 0)
        out.append(
            ProfileHeatmap(graph=graph, profiles=profiles, times=times, counts=counts)
        )
    return out


def load_fig3(path) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    rows = read_rows(path, "fig3")
    by_run: dict[str, list[tuple[int, float]]] = defaultdict(list)
    for r in rows:
        if r["bimodality"] == "":
            continue
        by_run[r["run"]].append((int(r["t"]), float(r["bimodality"])))
    return {
        run: (
            np.array([t for t, _ in sorted(pts)]),
            np.array([v for _, v in sorted(pts)]),
        )
        for run, pts in by_run.items()
    }


def load_fig4(path) -> dict[int, list[dict[str, float]]]:
    rows = read_rows(path, "fig4")
    by_n: dict[int, list[dict[str, float]]] = defaultdict(list)
    for r in rows:
        by_n[int(r["n"])].append(
            {
                "k": float(r["k"]),
                "sbm_mean": float(r["sbm_bimodality_mean"]),
                "sbm_std": float(r["sbm_bimodality_std"]),
                "gaussian_mean": float(r["gaussian_mean"]),
                "gaussian_std": float(r["gaussian_std"]),
            }
        )
    for rows_n in by_n.values():
        rows_n.sort(key=lambda d: d["k"])
    return dict(by_n)


@dataclass(frozen=True)
class Snapshot:
    graph: str
    phase: str
    xy: np.ndarray
    agree_frac: np.ndarray
    side: np.ndarray


PHASE_ORDER = {"0": 0, "5": 1, "equilibrium": 2}


def load_fig5(path) -> list[Snapshot]:
    rows = read_rows(path, "fig5")
    grouped: dict[tuple[str, str], list[dict[str, str]]] = defaultdict(list)
    for r in rows:
        grouped[(r["graph"], r["phase"])].append(r)
    snaps = []
    for (graph, phase), rs in sorted(
        grouped.items(), key=lambda kv: (kv[0][0], PHASE_ORDER.get(kv[0][1], 9))
    ):
        rs.sort(key=lambda r: int(r["node"]))
        n = len(rs)
        xy = np.zeros((n, 2))
        have_xy = all(r["x"] != "" and r["y"] != "" for r in rs)
        if have_xy:
            xy[:, 0] = [float(r["x"]) for r in rs]
            xy[:, 1] = [float(r["y"]) for r in rs]
        else:
            # no coordinates in the file: deterministic circular arrangement
            angles = 2 * np.pi * np.arange(n) / n
            xy[:, 0] = 0.5 + 0.45 * np.cos(angles)
            xy[:, 1] = 0.5 + 0.45 * np.sin(angles)
        snaps.append(
            Snapshot(
                graph=graph,
                phase=phase,
                xy=xy,
                agree_frac=np.array([float(r["agree_frac"]) for r in rs]),
                side=np.array([int(r["side"]) for r in rs]),
            )
        )
    return snaps


def load_fig6(path) -> list[dict]:
    rows = read_rows(path, "fig6")
    return [
        {
            "graph": r["graph"],
            "lambda2": float(r["lambda2"]),
            "agreement": float(r["agreement"]),
            "approx": float(r["approx"]),
            "degenerate": r["degenerate"] not in ("0", "", "false", "False"),
        }
        for r in rows
    ]
