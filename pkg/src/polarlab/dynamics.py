"""Opinion evolution: synchronous degree-weighted averaging and the
stubborn-anchor variant, trajectory recording, and the conserved consensus
value on connected graphs.

Numerical note: under the averaging update the spread around consensus
contracts geometrically, and in float64 the raw opinion vector reaches an
exactly constant state within roughly ``16 / -log10(lambda2)`` steps; any
centered quantity evaluated on the raw vector afterwards is rounding
noise (or 0/0).  ``deviation_step`` therefore evolves the unit deviation
direction ``(z - c 1) / ||z - c 1||`` instead, which follows the same
linear dynamics, determines every shift- and scale-invariant metric of z
exactly, and stays well-conditioned for any horizon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .errors import (
    DegenerateInputError,
    IsolatedNodeError,
    ParameterError,
    StructureError,
)
from .graphs import Graph

__all__ = [
    "StandardNormalInit",
    "UniformInit",
    "ExplicitInit",
    "InitSpec",
    "Trajectory",
    "make_initial_opinions",
    "degroot_step",
    "run_degroot",
    "consensus_value",
    "fj_step",
    "deviation_from_consensus",
    "deviation_step",
    "save_opinions",
    "load_opinions",
    "save_trajectory",
]


@dataclass(frozen=True)
class StandardNormalInit:
    seed: int


@dataclass(frozen=True)
class UniformInit:
    lo: float
    hi: float
    seed: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ParameterError(f"need lo < hi, got [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class ExplicitInit:
    values: np.ndarray


InitSpec = Union[StandardNormalInit, UniformInit, ExplicitInit]


def make_initial_opinions(init: InitSpec, n: int) -> np.ndarray:
    """Materialize an initial opinion vector of length n."""
    if isinstance(init, StandardNormalInit):
        return np.random.default_rng(init.seed).standard_normal(n)
    if isinstance(init, UniformInit):
        return np.random.default_rng(init.seed).uniform(init.lo, init.hi, n)
    if isinstance(init, ExplicitInit):
        z = np.asarray(init.values, dtype=np.float64)
        if z.shape != (n,):
            raise ParameterError(f"explicit vector has length {z.size}, expected {n}")
        if not np.all(np.isfinite(z)):
            raise ParameterError("explicit vector contains non-finite entries")
        return z.copy()
    raise ParameterError(f"unknown init spec {init!r}")


@dataclass(frozen=True)
class Trajectory:
    """Thinned record of an opinion evolution.

    ``snapshots`` holds (t, opinions) pairs with strictly increasing t;
    the initial state at t=0 is always present and the final state is
    always the last entry.
    """

    snapshots: tuple[tuple[int, np.ndarray], ...]
    stride: int

    @property
    def times(self) -> list[int]:
        return [t for t, _ in self.snapshots]

    @property
    def final(self) -> tuple[int, np.ndarray]:
        return self.snapshots[-1]

    def at(self, t: int) -> np.ndarray:
        for ti, z in self.snapshots:
            if ti == t:
                return z
        raise KeyError(f"no snapshot recorded at t={t}")


def _check_degrees(g: Graph) -> None:
    if g.n and g.degrees.min() <= 0.0:
        node = int(np.argmin(g.degrees))
        raise IsolatedNodeError(node, f"node {node} is isolated (degree 0)")


def degroot_step(g: Graph, z: np.ndarray) -> np.ndarray:
    """One synchronous update: every node adopts the degree-weighted
    average of its neighbors' opinions.  The input is not modified."""
    _check_degrees(g)
    return g.adjacency_multiply(z) / g.degrees


def run_degroot(g: Graph, init: InitSpec, steps: int, stride: int = 1) -> Trajectory:
    """Evolve for ``steps`` updates, recording t=0, every ``stride``-th
    state, and the final state."""
    if steps < 0:
        raise ParameterError(f"steps must be >= 0, got {steps}")
    if stride < 1:
        raise ParameterError(f"stride must be >= 1, got {stride}")
    z = make_initial_opinions(init, g.n)
    snaps: list[tuple[int, np.ndarray]] = [(0, z.copy())]
    for t in range(1, steps + 1):
        z = degroot_step(g, z)
        if t % stride == 0 or t == steps:
            snaps.append((t, z.copy()))
    return Trajectory(snapshots=tuple(snaps), stride=stride)


def consensus_value(g: Graph, z0: np.ndarray) -> float:
    """Degree-weighted average opinion; the common limit of all opinions
    on a connected non-bipartite graph, and invariant along a trajectory."""
    if not g.structure.connected:
        raise StructureError("consensus value requires a connected graph")
    z0 = np.asarray(z0, dtype=np.float64)
    if z0.shape != (g.n,):
        raise ParameterError(f"vector length {z0.size} does not match n={g.n}")
    return float(np.dot(g.degrees, z0) / g.degrees.sum())


def fj_step(g: Graph, z: np.ndarray, s: np.ndarray) -> np.ndarray:
    """One update anchored to innate opinions s:
    z'_i = (s_i + sum_j A_ij z_j) / (d_i + 1)."""
    z = np.asarray(z, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    if z.shape != (g.n,) or s.shape != (g.n,):
        raise ParameterError("opinion and innate vectors must have length n")
    return (s + g.adjacency_multiply(z)) / (g.degrees + 1.0)


def deviation_from_consensus(g: Graph, z0: np.ndarray) -> tuple[float, np.ndarray, float]:
    """Split z0 into consensus value, unit deviation direction, and the
    log of the deviation magnitude: z0 = c 1 + exp(log_scale) w."""
    c = consensus_value(g, z0)
    w = np.asarray(z0, dtype=np.float64) - c
    nrm = float(np.linalg.norm(w))
    if nrm == 0.0:
        raise DegenerateInputError("opinions already at exact consensus")
    return c, w / nrm, math.log(nrm)


def deviation_step(g: Graph, w: np.ndarray) -> tuple[np.ndarray, float]:
    """One averaging update of a unit deviation direction.

    Returns the new unit direction and the log of the contraction factor,
    so that ``z_{t+1} - c 1 = exp(dlog) * ||z_t - c 1|| * w_next``.  The
    degree-weighted mean of a consensus deviation is zero and stays zero
    under the update; the explicit projection below only removes float
    drift toward the constant direction, keeping long runs well-posed.
    """
    _check_degrees(g)
    y = g.adjacency_multiply(w) / g.degrees
    y = y - (float(np.dot(g.degrees, y)) / float(g.degrees.sum()))
    nrm = float(np.linalg.norm(y))
    if nrm == 0.0:
        raise DegenerateInputError("deviation direction vanished exactly")
    return y / nrm, math.log(nrm)


def save_opinions(z: np.ndarray, path: str | Path, header: bool = False) -> None:
    """Write an opinion vector as CSV, one value per line; with
    ``header=True`` uses the two-column ``node,value`` form."""
    with Path(path).open("w", encoding="utf-8") as fh:
        if header:
            fh.write("node,value\n")
            for i, v in enumerate(z):
                fh.write(f"{i},{float(v)!r}\n")
        else:
            for v in z:
                fh.write(f"{float(v)!r}\n")


def load_opinions(path: str | Path) -> np.ndarray:
    """Read an opinion vector saved by ``save_opinions`` (either form)."""
    lines = [ln.strip() for ln in Path(path).read_text(encoding="utf-8").splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParameterError(f"{path}: empty opinion file")
    if lines[0].lower().replace(" ", "") == "node,value":
        pairs = [ln.split(",") for ln in lines[1:]]
        values = np.empty(len(pairs), dtype=np.float64)
        for node, value in pairs:
            values[int(node)] = float(value)
        return values
    return np.asarray([float(ln) for ln in lines], dtype=np.float64)


def save_trajectory(traj: Trajectory, path: str | Path) -> None:
    """Write a trajectory in long CSV form ``t,node,value``."""
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("t,node,value\n")
        for t, z in traj.snapshots:
            for i, v in enumerate(z):
                fh.write(f"{t},{i},{float(v)!r}\n")
