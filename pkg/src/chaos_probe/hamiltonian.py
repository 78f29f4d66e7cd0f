"""Gaussian random weights on a graph, stored as a real skew-symmetric matrix.

The full single-particle operator is i*S with S real and S = -S^T, so it is
Hermitian by construction and all structure lives in S: one Gaussian weight
per undirected edge, entered with opposite signs across the diagonal. The
diagonal is identically zero (pure hopping disorder, no on-site terms).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .graph import WsGraph
from .randomness import RngStream, sample_gaussian
from .util import FileFormatError


def edge_weight_variance(n: int, k: int) -> float:
    """Per-edge weight variance (n-1)/(2nk)."""
    return (n - 1) / (2.0 * n * k)


@dataclass(frozen=True, eq=False)
class CouplingMatrix:
    """Skew-symmetric coefficient matrix S plus graph provenance.

    ``seed`` records the stream id that generated the weights; together
    with the run's master seed it identifies the realization exactly.
    """

    n: int
    k: int
    p: float
    seed: int
    entries: np.ndarray  # (n, n) float64, entries = -entries.T, zero diagonal


def assign_weights(graph: WsGraph, rng: RngStream) -> CouplingMatrix:
    """One Gaussian draw per edge, in canonical sorted-edge order.

    Each draw r is applied as S[a, b] = +r, S[b, a] = -r (a < b), so
    skew-symmetry holds to exact floating-point equality.
    """
    var = edge_weight_variance(graph.n, graph.k)
    weights = sample_gaussian(rng, 0.0, var, size=len(graph.edges))
    s = np.zeros((graph.n, graph.n))
    a = graph.edges[:, 0].astype(np.intp)
    b = graph.edges[:, 1].astype(np.intp)
    s[a, b] = weights
    s[b, a] = -weights
    return CouplingMatrix(graph.n, graph.k, graph.p, rng.stream_id, s)


def flatten(matrix: CouplingMatrix) -> np.ndarray:
    """Row-major vector of length n^2, zero entries included."""
    return matrix.entries.reshape(-1)


# Corpus record: header (n, k, p, seed) then n*k triples (a, b, r) with a < b
# in lexicographic order; little-endian throughout. A corpus file is a plain
# concatenation of records.
_RECORD_HEADER = struct.Struct("<IIdQ")
_TRIPLE_DTYPE = np.dtype([("a", "<u4"), ("b", "<u4"), ("r", "<f8")])


def write_record(fh, matrix: CouplingMatrix) -> None:
    upper = np.triu(matrix.entries)
    a, b = np.nonzero(upper)
    if len(a) != matrix.n * matrix.k:
        raise ValueError(
            f"matrix support has {len(a)} upper-triangle entries, "
            f"expected {matrix.n * matrix.k}"
        )
    rec = np.empty(len(a), dtype=_TRIPLE_DTYPE)
    rec["a"] = a
    rec["b"] = b
    rec["r"] = upper[a, b]
    fh.write(_RECORD_HEADER.pack(matrix.n, matrix.k, matrix.p, matrix.seed))
    fh.write(rec.tobytes())


def read_records(fh) -> Iterator[CouplingMatrix]:
    """Lazily yield records from an open binary file."""
    while True:
        head = fh.read(_RECORD_HEADER.size)
        if not head:
            return
        if len(head) < _RECORD_HEADER.size:
            raise FileFormatError("truncated record header")
        n, k, p, seed = _RECORD_HEADER.unpack(head)
        count = n * k
        body = fh.read(count * _TRIPLE_DTYPE.itemsize)
        if len(body) < count * _TRIPLE_DTYPE.itemsize:
            raise FileFormatError("truncated record body")
        rec = np.frombuffer(body, dtype=_TRIPLE_DTYPE)
        a = rec["a"].astype(np.intp)
        b = rec["b"].astype(np.intp)
        if np.any(a >= b) or np.any(b >= n):
            raise FileFormatError("record edge indices out of range")
        s = np.zeros((n, n))
        s[a, b] = rec["r"]
        s[b, a] = -rec["r"]
        yield CouplingMatrix(n, k, p, seed, s)


def write_corpus(path, matrices: Iterable[CouplingMatrix]) -> int:
    """Write a corpus file; returns the number of records written."""
    count = 0
    with open(path, "wb") as fh:
        for matrix in matrices:
            write_record(fh, matrix)
            count += 1
    return count


def read_corpus(path) -> Iterator[CouplingMatrix]:
    with open(path, "rb") as fh:
        yield from read_records(fh)


def corpus_record_count(path, n: int, k: int) -> int:
    """Record count from the file size (records of one (n, k) are fixed-size)."""
    import os

    record_size = _RECORD_HEADER.size + n * k * _TRIPLE_DTYPE.itemsize
    total = os.path.getsize(path)
    if total % record_size:
        raise FileFormatError(
            f"{path}: size {total} is not a multiple of the record size {record_size}"
        )
    return total // record_size
