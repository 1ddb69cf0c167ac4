"""Shared builders and independent oracles for the test suite.

The dense helpers here are deliberately naive (full matrices, double
loops): they are the reference computations the sparse implementations
are checked against, so they must not share code with the package.
"""

from __future__ import annotations

import numpy as np
import pytest

from polarlab.graphs import Graph


def graph_from_edges(n, edges, weights=None) -> Graph:
    edges = list(edges)
    u = np.array([e[0] for e in edges], dtype=np.int64)
    v = np.array([e[1] for e in edges], dtype=np.int64)
    w = None if weights is None else np.asarray(weights, dtype=np.float64)
    return Graph.from_pairs(n, u, v, w)


def path_graph(k: int) -> Graph:
    return graph_from_edges(k, [(i, i + 1) for i in range(k - 1)])


def cycle_graph(n: int) -> Graph:
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return graph_from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves: int) -> Graph:
    return graph_from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def circulant_graph(n: int, offsets) -> Graph:
    """Regular graph connecting i to i +/- off (mod n) for each offset."""
    edges = set()
    for off in offsets:
        for i in range(n):
            j = (i + off) % n
            edges.add((min(i, j), max(i, j)))
    return graph_from_edges(n, sorted(edges))


def random_connected_graph(rng: np.random.Generator, n: int, extra: int = 0,
                           weighted: bool = False) -> Graph:
    """Random tree plus ``extra`` random chords; connected by construction."""
    edges = set()
    for i in range(1, n):
        edges.add((int(rng.integers(0, i)), i))
    attempts = 0
    while len(edges) < n - 1 + extra and attempts < 50 * (extra + 1):
        a, b = rng.integers(0, n, 2)
        if a != b:
            edges.add((min(int(a), int(b)), max(int(a), int(b))))
        attempts += 1
    edges = sorted(edges)
    weights = rng.uniform(0.5, 2.0, len(edges)) if weighted else None
    return graph_from_edges(n, edges, weights)


def dense_adjacency(g: Graph) -> np.ndarray:
    A = np.zeros((g.n, g.n))
    for i in range(g.n):
        for j, w in zip(
            g.indices[g.indptr[i] : g.indptr[i + 1]],
            g.weights[g.indptr[i] : g.indptr[i + 1]],
        ):
            A[i, j] = w
    return A


def dense_sym_normalized(g: Graph) -> np.ndarray:
    A = dense_adjacency(g)
    d = A.sum(axis=1)
    inv_sqrt = 1.0 / np.sqrt(d)
    return A * inv_sqrt[:, None] * inv_sqrt[None, :]


def dense_eigenpairs_by_magnitude(g: Graph):
    """Full symmetric eigendecomposition, magnitude-descending order."""
    M = dense_sym_normalized(g)
    w, V = np.linalg.eigh(M)
    order = np.argsort(-np.abs(w), kind="stable")
    return w[order], V[:, order]


def naive_local_agreement(g: Graph, z: np.ndarray) -> float:
    """Double-loop reference for the average local agreement."""
    zb = z - np.mean(z)
    s = [1 if x >= 0 else -1 for x in zb]
    A = dense_adjacency(g)
    total = 0.0
    for i in range(g.n):
        d = A[i].sum()
        acc = 0.0
        for j in range(g.n):
            if A[i, j] > 0 and s[i] == s[j]:
                acc += A[i, j]
        total += acc / d
    return total / g.n


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
