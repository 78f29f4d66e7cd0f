"""Watts-Strogatz small-world graphs and their directed adjacency structure.

A graph starts as a ring lattice (every vertex tied to its k nearest
neighbours on each side) and each lattice edge is independently rewired
with probability p. Rewiring never changes the edge count, and only
connected graphs are emitted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .randomness import RngStream
from .util import FileFormatError, fmt

# Whole-graph rejection cap: regenerate from the ring lattice until connected.
REWIRE_ATTEMPT_LIMIT = 1000

# Cap on per-edge target redraws before falling back to explicit enumeration
# of the valid complement (only matters for near-complete graphs).
_TARGET_REDRAW_LIMIT = 64


@dataclass(frozen=True)
class RingLatticeSpec:
    """Ring lattice with n vertices, each linked to k neighbours per side."""

    n: int
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"half-degree k must be positive, got {self.k}")
        if self.n <= 2 * self.k:
            raise ValueError(
                f"ring lattice needs n > 2k, got n={self.n}, k={self.k}"
            )


@dataclass(frozen=True, eq=False)
class WsGraph:
    """Undirected edge set of a Watts-Strogatz graph.

    ``edges`` has shape (n*k, 2) with each row (a, b), a < b, rows sorted
    lexicographically. This canonical form makes serialization and
    weight assignment order deterministic.
    """

    n: int
    k: int
    p: float
    edges: np.ndarray

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(a), int(b)) for a, b in self.edges}

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n)


def _ring_edge_sweep(n: int, k: int) -> np.ndarray:
    """Lattice edges in the classic rewiring sweep order.

    Vertices 0..n-1, and for each vertex its k clockwise edges
    (a, a+1), ..., (a, a+k) mod n.
    """
    a = np.repeat(np.arange(n), k)
    b = (a + np.tile(np.arange(1, k + 1), n)) % n
    return np.column_stack([a, b])


def _canonical_edges(pairs) -> np.ndarray:
    arr = np.asarray(sorted((min(a, b), max(a, b)) for a, b in pairs), dtype=np.uint32)
    return arr.reshape(-1, 2)


def build_ring_lattice(spec: RingLatticeSpec) -> WsGraph:
    """The p=0 starting point: every vertex has degree exactly 2k."""
    sweep = _ring_edge_sweep(spec.n, spec.k)
    return WsGraph(spec.n, spec.k, 0.0, _canonical_edges(sweep))


def _connected(n: int, neighbours: list[list[int]]) -> bool:
    seen = np.zeros(n, dtype=bool)
    stack = [0]
    seen[0] = True
    found = 1
    while stack:
        v = stack.pop()
        for w in neighbours[v]:
            if not seen[w]:
                seen[w] = True
                found += 1
                stack.append(w)
    return found == n


def is_connected(graph: WsGraph) -> bool:
    """True iff a traversal from vertex 0 reaches all n vertices."""
    neighbours: list[list[int]] = [[] for _ in range(graph.n)]
    for a, b in graph.edges:
        neighbours[a].append(int(b))
        neighbours[b].append(int(a))
    return _connected(graph.n, neighbours)


def _rewire_once(graph: WsGraph, p: float, rng: RngStream) -> set[int]:
    """One rewiring sweep over the lattice edges; returns packed edge keys."""
    n = graph.n
    gen = rng.generator
    sweep = _ring_edge_sweep(n, graph.k)
    # packed key a*n+b with a<b; membership tests during the sweep
    lo = np.minimum(sweep[:, 0], sweep[:, 1])
    hi = np.maximum(sweep[:, 0], sweep[:, 1])
    edges = set((lo * n + hi).tolist())
    degree = np.full(n, 2 * graph.k, dtype=np.int64)
    # one Bernoulli decision per lattice edge, in sweep order
    decisions = gen.random(size=len(sweep)) < p
    for (a, b), rewired in zip(sweep.tolist(), decisions.tolist()):
        if not rewired:
            continue
        if degree[a] >= n - 1:
            # vertex already tied to everyone else: no valid target, keep edge
            continue
        key = a * n + b if a < b else b * n + a
        edges.remove(key)
        c = -1
        for _ in range(_TARGET_REDRAW_LIMIT):
            cand = int(gen.integers(0, n))
            ck = a * n + cand if a < cand else cand * n + a
            if cand != a and cand != b and ck not in edges:
                c = cand
                break
        if c < 0:
            # dense corner case: enumerate the valid complement, still uniform
            valid = [v for v in range(n)
                     if v != a and v != b
                     and (a * n + v if a < v else v * n + a) not in edges]
            c = valid[int(gen.integers(0, len(valid)))]
        edges.add(a * n + c if a < c else c * n + a)
        degree[b] -= 1
        degree[c] += 1
    return edges


def rewire(graph: WsGraph, p: float, rng: RngStream) -> WsGraph:
    """Rewire each lattice edge independently with probability p.

    The rewired endpoint is replaced by a uniform target c not in {a, b},
    redrawing targets that would duplicate an existing edge, so the edge
    count n*k is conserved exactly. Disconnected outcomes are rejected and
    the whole graph is regenerated from the same ring lattice with fresh
    randomness, capped at REWIRE_ATTEMPT_LIMIT attempts.
    """
    if graph.p != 0.0:
        raise ValueError("rewire starts from the p=0 ring lattice")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"rewiring probability must be in [0, 1], got {p}")
    n = graph.n
    for _ in range(REWIRE_ATTEMPT_LIMIT):
        packed = _rewire_once(graph, p, rng)
        neighbours: list[list[int]] = [[] for _ in range(n)]
        for key in packed:
            a, b = divmod(key, n)
            neighbours[a].append(b)
            neighbours[b].append(a)
        if _connected(n, neighbours):
            pairs = [divmod(key, n) for key in packed]
            return WsGraph(n, graph.k, p, _canonical_edges(pairs))
    raise RuntimeError(
        f"no connected graph after {REWIRE_ATTEMPT_LIMIT} rewiring attempts "
        f"(n={n}, k={graph.k}, p={p})"
    )


def sample_ws_graph(n: int, k: int, p: float, rng: RngStream) -> WsGraph:
    """Convenience: build the ring lattice and rewire it."""
    return rewire(build_ring_lattice(RingLatticeSpec(n, k)), p, rng)


def orient(graph: WsGraph) -> np.ndarray:
    """Signed adjacency A with A[a, b] = +1 for each edge a < b, A = -A^T."""
    a = np.zeros((graph.n, graph.n), dtype=np.int8)
    a[graph.edges[:, 0], graph.edges[:, 1]] = 1
    a[graph.edges[:, 1], graph.edges[:, 0]] = -1
    return a


def save_graph(graph: WsGraph, path, seed: int) -> None:
    """Text format: line 1 ``ws <n> <k> <p> <seed>``, then one ``a b`` pair
    per line, a < b, sorted lexicographically."""
    with open(path, "w") as fh:
        fh.write(f"ws {graph.n} {graph.k} {fmt(graph.p)} {seed}\n")
        for a, b in graph.edges:
            fh.write(f"{a} {b}\n")


def load_graph(path) -> tuple[WsGraph, int]:
    """Inverse of save_graph; returns (graph, seed)."""
    with open(path) as fh:
        first = fh.readline().split()
        if len(first) != 5 or first[0] != "ws":
            raise FileFormatError(f"{path}: expected header 'ws <n> <k> <p> <seed>'")
        n, k = int(first[1]), int(first[2])
        p, seed = float(first[3]), int(first[4])
        pairs = []
        for line in fh:
            if not line.strip():
                continue
            a, b = (int(tok) for tok in line.split())
            if not 0 <= a < b < n:
                raise FileFormatError(f"{path}: bad edge ({a}, {b}) for n={n}")
            pairs.append((a, b))
    if len(pairs) != n * k:
        raise FileFormatError(f"{path}: expected {n * k} edges, found {len(pairs)}")
    return WsGraph(n, k, p, _canonical_edges(pairs)), seed
