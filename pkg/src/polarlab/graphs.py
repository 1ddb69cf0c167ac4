"""Sparse undirected graphs: representation, generators, ingestion, validation.

The adjacency is stored in CSR form with both directions of every edge
materialized (a self-loop is stored once in its own row).  Weights are
strictly positive float64; the weighted degree of node i is the sum of
row i, so a self-loop contributes its weight once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import EdgeListFormatError, ParameterError

__all__ = [
    "Graph",
    "StructureReport",
    "generate_sbm",
    "generate_geometric",
    "load_edge_list",
    "validate",
    "largest_component",
    "export_coords",
]


@dataclass(frozen=True)
class StructureReport:
    """Structural facts about a graph established by traversal."""

    connected: bool
    bipartite: bool
    regular: int | None
    n_components: int
    num_edges: int


@dataclass(frozen=True)
class Graph:
    """Immutable weighted undirected graph in CSR form.

    Attributes:
        n: node count.
        indptr: (n+1,) int64 row offsets.
        indices: (nnz,) int64 column ids, sorted within each row.
        weights: (nnz,) float64 edge weights, strictly positive.
        degrees: (n,) float64 weighted degrees (row sums).
        coords: optional (n, 2) node positions (geometric graphs).
        node_ids: optional (n,) original labels retained by
            ``largest_component``.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    degrees: np.ndarray
    coords: np.ndarray | None = None
    node_ids: np.ndarray | None = None

    @staticmethod
    def from_pairs(
        n: int,
        u: np.ndarray,
        v: np.ndarray,
        w: np.ndarray | None = None,
        coords: np.ndarray | None = None,
        node_ids: np.ndarray | None = None,
    ) -> "Graph":
        """Build a graph from unique undirected pairs (u_i, v_i).

        Pairs must not repeat (in either orientation); weights default to 1.
        """
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if w is None:
            w = np.ones(u.shape[0], dtype=np.float64)
        w = np.asarray(w, dtype=np.float64)
        if not (u.shape == v.shape == w.shape):
            raise ParameterError("edge arrays must have identical length")
        if n <= 0:
            raise ParameterError(f"node count must be positive, got {n}")
        if u.size:
            if u.min() < 0 or v.min() < 0 or max(u.max(), v.max()) >= n:
                raise ParameterError("edge endpoint out of range")
            if not np.all(np.isfinite(w)) or w.min() <= 0.0:
                raise ParameterError("edge weights must be finite and positive")
        loops = u == v
        # duplicate non-loop edges in both directions; store loops once
        rows = np.concatenate([u, v[~loops]])
        cols = np.concatenate([v, u[~loops]])
        vals = np.concatenate([w, w[~loops]])
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        counts = np.bincount(rows, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        degrees = np.bincount(rows, weights=vals, minlength=n)
        return Graph(
            n=n,
            indptr=indptr,
            indices=cols,
            weights=vals,
            degrees=degrees,
            coords=coords,
            node_ids=node_ids,
        )

    @cached_property
    def row_index(self) -> np.ndarray:
        """Row id of every stored CSR entry."""
        return np.repeat(
            np.arange(self.n, dtype=np.int64), np.diff(self.indptr)
        )

    @cached_property
    def num_edges(self) -> int:
        """Undirected edge count; a self-loop counts as one edge."""
        n_loops = int(np.sum(self.row_index == self.indices))
        return (self.indices.shape[0] + n_loops) // 2

    @cached_property
    def has_self_loops(self) -> bool:
        return bool(np.any(self.row_index == self.indices))

    @cached_property
    def unweighted(self) -> bool:
        return bool(np.all(self.weights == 1.0))

    @cached_property
    def structure(self) -> StructureReport:
        return _analyze_structure(self)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def adjacency_multiply(self, z: np.ndarray) -> np.ndarray:
        """Return A @ z in one pass over the stored entries."""
        z = np.asarray(z, dtype=np.float64)
        if z.shape != (self.n,):
            raise ParameterError(
                f"vector length {z.shape} does not match n={self.n}"
            )
        return np.bincount(
            self.row_index, weights=self.weights * z[self.indices], minlength=self.n
        )

    def _gather_neighbors(self, frontier: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """All CSR entries of the frontier rows: (source per entry, target)."""
        starts = self.indptr[frontier]
        counts = self.indptr[frontier + 1] - starts
        total = int(counts.sum())
        if total == 0:
            empty = np.empty(0, dtype=np.int64)
            return empty, empty
        offsets = np.repeat(starts - np.concatenate(([0], np.cumsum(counts)[:-1])), counts)
        entry = offsets + np.arange(total, dtype=np.int64)
        src = np.repeat(frontier, counts)
        return src, self.indices[entry]


def generate_sbm(k: int, n: int, p: float, q: float, seed: int) -> Graph:
    """Stochastic block model with k blocks on n nodes.

    Within-block pairs get an edge with probability p, cross-block pairs
    with probability q (independently, weight 1, no self-loops).  When k
    does not divide n, the first n mod k blocks receive one extra node.
    """
    if k < 1 or n < k:
        raise ParameterError(f"need 1 <= k <= n, got k={k}, n={n}")
    if not (0.0 <= q <= p <= 1.0):
        raise ParameterError(f"need 0 <= q <= p <= 1, got p={p}, q={q}")
    base, extra = divmod(n, k)
    sizes = [base + 1 if b < extra else base for b in range(k)]
    starts = np.concatenate(([0], np.cumsum(sizes)))
    rng = np.random.default_rng(seed)
    us: list[np.ndarray] = []
    vs: list[np.ndarray] = []
    for a in range(k):
        sa = sizes[a]
        if sa > 1:
            mask = np.triu(rng.random((sa, sa)) < p, 1)
            iu, iv = np.nonzero(mask)
            us.append(iu + starts[a])
            vs.append(iv + starts[a])
        for b in range(a + 1, k):
            sb = sizes[b]
            iu, iv = np.nonzero(rng.random((sa, sb)) < q)
            us.append(iu + starts[a])
            vs.append(iv + starts[b])
    if us:
        u = np.concatenate(us)
        v = np.concatenate(vs)
    else:
        u = v = np.empty(0, dtype=np.int64)
    return Graph.from_pairs(n, u, v)


def generate_geometric(n: int, r: float, seed: int) -> Graph:
    """Random geometric graph on the unit square.

    Nodes are placed i.i.d. uniform; a weight-1 edge joins every pair at
    Euclidean distance <= r.  Positions are kept on the graph as ``coords``.
    """
    if n < 1:
        raise ParameterError(f"node count must be positive, got {n}")
    if r <= 0.0:
        raise ParameterError(f"radius must be positive, got {r}")
    rng = np.random.default_rng(seed)
    coords = rng.random((n, 2))
    r2 = r * r
    us: list[np.ndarray] = []
    vs: list[np.ndarray] = []
    chunk = max(1, int(2**21 // max(n, 1)))
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        diff = coords[lo:hi, None, :] - coords[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        iu, iv = np.nonzero(d2 <= r2)
        keep = iv > iu + lo
        us.append(iu[keep] + lo)
        vs.append(iv[keep])
    u = np.concatenate(us) if us else np.empty(0, dtype=np.int64)
    v = np.concatenate(vs) if vs else np.empty(0, dtype=np.int64)
    return Graph.from_pairs(n, u, v, coords=coords)


def load_edge_list(path: str | Path) -> Graph:
    """Parse a whitespace-separated edge-list file into a Graph.

    Each non-comment line is ``u v`` or ``u v w``; lines starting with
    ``#`` are ignored.  Duplicate (u,v)/(v,u) lines collapse by weight
    summation, and ``u u w`` creates a self-loop.  Node ids may be 0- or
    1-based; if no 0 appears anywhere the ids are treated as 1-based and
    shifted down.
    """
    path = Path(path)
    us: list[int] = []
    vs: list[int] = []
    ws: list[float] = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) not in (2, 3):
                raise EdgeListFormatError(
                    f"expected 2 or 3 fields, found {len(tokens)}", lineno
                )
            ids = []
            for col, tok in enumerate(tokens[:2], start=1):
                try:
                    ids.append(int(tok))
                except ValueError:
                    raise EdgeListFormatError(
                        f"node id {tok!r} is not an integer", lineno, col
                    ) from None
                if ids[-1] < 0:
                    raise EdgeListFormatError(
                        f"node id {ids[-1]} is negative", lineno, col
                    )
            weight = 1.0
            if len(tokens) == 3:
                try:
                    weight = float(tokens[2])
                except ValueError:
                    raise EdgeListFormatError(
                        f"weight {tokens[2]!r} is not a number", lineno, 3
                    ) from None
                if not math.isfinite(weight) or weight <= 0.0:
                    raise EdgeListFormatError(
                        f"weight must be finite and positive, got {tokens[2]}",
                        lineno,
                        3,
                    )
            us.append(ids[0])
            vs.append(ids[1])
            ws.append(weight)
    if not us:
        raise EdgeListFormatError("file contains no edges", 1)
    u = np.asarray(us, dtype=np.int64)
    v = np.asarray(vs, dtype=np.int64)
    w = np.asarray(ws, dtype=np.float64)
    if u.min() > 0 and v.min() > 0:  # no 0 id anywhere: treat as 1-based
        u -= 1
        v -= 1
    n = int(max(u.max(), v.max())) + 1
    # collapse duplicates on the canonical (min, max) orientation
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    key = lo * n + hi
    uniq, inverse = np.unique(key, return_inverse=True)
    summed = np.bincount(inverse, weights=w)
    return Graph.from_pairs(n, uniq // n, uniq % n, summed)


def _analyze_structure(g: Graph) -> StructureReport:
    """BFS over all components: connectivity, 2-colorability, regularity."""
    color = np.full(g.n, -1, dtype=np.int8)
    bipartite = not g.has_self_loops
    n_components = 0
    for seed in range(g.n):
        if color[seed] != -1:
            continue
        n_components += 1
        color[seed] = 0
        frontier = np.array([seed], dtype=np.int64)
        level = 0
        while frontier.size:
            src, dst = g._gather_neighbors(frontier)
            if dst.size and bipartite:
                if np.any(color[dst] == level % 2):
                    bipartite = False
            fresh = dst[color[dst] == -1]
            if fresh.size:
                fresh = np.unique(fresh)
                color[fresh] = (level + 1) % 2
            frontier = fresh
            level += 1
    row_len = np.diff(g.indptr)
    regular = int(row_len[0]) if g.n > 0 and np.all(row_len == row_len[0]) else None
    return StructureReport(
        connected=n_components <= 1,
        bipartite=bipartite,
        regular=regular,
        n_components=n_components,
        num_edges=g.num_edges,
    )


def validate(g: Graph) -> StructureReport:
    """Structural report for ``g`` (cached on the graph)."""
    return g.structure


def largest_component(g: Graph) -> Graph:
    """Induced subgraph on the largest connected component.

    Nodes are relabeled contiguously; the original labels are retained
    in ``node_ids``.
    """
    if g.n < 1:
        raise ParameterError("graph has no nodes")
    labels = np.full(g.n, -1, dtype=np.int64)
    comp = 0
    for seed in range(g.n):
        if labels[seed] != -1:
            continue
        labels[seed] = comp
        frontier = np.array([seed], dtype=np.int64)
        while frontier.size:
            _, dst = g._gather_neighbors(frontier)
            fresh = np.unique(dst[labels[dst] == -1]) if dst.size else dst
            labels[fresh] = comp
            frontier = fresh
        comp += 1
    if comp == 1:
        return g
    sizes = np.bincount(labels, minlength=comp)
    best = int(np.argmax(sizes))
    keep = labels == best
    old_ids = np.nonzero(keep)[0]
    new_id = np.full(g.n, -1, dtype=np.int64)
    new_id[old_ids] = np.arange(old_ids.size, dtype=np.int64)
    entry_keep = keep[g.row_index]
    u = new_id[g.row_index[entry_keep]]
    v = new_id[g.indices[entry_keep]]
    w = g.weights[entry_keep]
    # both directions present in the entry scan: keep one orientation
    one_way = u <= v
    return Graph.from_pairs(
        int(old_ids.size),
        u[one_way],
        v[one_way],
        w[one_way],
        coords=g.coords[old_ids] if g.coords is not None else None,
        node_ids=old_ids,
    )


def export_coords(g: Graph, path: str | Path) -> None:
    """Write node coordinates as CSV ``node,x,y``."""
    if g.coords is None:
        raise ParameterError("graph carries no coordinates")
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("node,x,y\n")
        for i in range(g.n):
            fh.write(f"{i},{g.coords[i, 0]!r},{g.coords[i, 1]!r}\n")
