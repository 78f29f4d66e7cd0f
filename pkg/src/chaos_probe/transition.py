"""Turning neuron hit counts into a transition signal.

A trained map is scanned over a grid of rewiring probabilities: for each
grid point a batch of fresh Hamiltonians is classified and the normalized
winner counts are recorded. Neurons whose hit rate grows systematically
with the rewiring probability carry the signal; piecewise-linear fits of
their summed hit curve against log10 p locate the transition region.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Mapping

import numpy as np

from .som import SomMap, classify
from .util import (
    FileFormatError,
    fmt,
    provenance_lines,
    read_csv_table,
)


@dataclass(frozen=True, eq=False)
class HitProfile:
    """Per-p normalized neuron hit counts; each row sums to 1."""

    p_values: np.ndarray  # (n_p,)
    hits: np.ndarray      # (n_p, n_neurons)
    samples_per_p: int


def scan_hits(
    som: SomMap,
    generator: Callable[[float, int], Iterable[np.ndarray]],
    p_grid,
    count: int,
    workers: int = 1,
) -> HitProfile:
    """Classify ``count`` fresh inputs per grid point.

    ``generator(p, count)`` must yield flattened Hamiltonian vectors and be
    safe to call from worker threads (the built-in generators derive an
    independent stream per sample, so any schedule gives identical counts).
    """
    p_grid = np.asarray(p_grid, dtype=float)
    if p_grid.size == 0:
        raise ValueError("p grid must be nonempty")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")

    def one_point(p: float) -> np.ndarray:
        winners = np.fromiter(
            (classify(som, x) for x in generator(float(p), count)),
            dtype=np.int64,
        )
        if len(winners) != count:
            raise ValueError(
                f"generator yielded {len(winners)} inputs at p={p}, expected {count}"
            )
        return np.bincount(winners, minlength=som.config.n_neurons)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(one_point, p_grid))
    else:
        counts = [one_point(p) for p in p_grid]
    hits = np.stack(counts).astype(float) / float(count)
    return HitProfile(p_grid, hits, count)


def responsive_neurons(profile: HitProfile, gain_threshold: float = 2.0) -> np.ndarray:
    """Neurons whose mean hit rate over the top decade of p exceeds
    gain_threshold times their mean rate over the bottom decade.

    Returns sorted neuron indices; may be empty (e.g. for a flat profile).
    """
    p = profile.p_values
    if len(p) < 2:
        raise ValueError("responsive-neuron detection needs at least 2 grid points")
    bottom = p <= p.min() * 10.0
    top = p >= p.max() / 10.0
    low = profile.hits[bottom].mean(axis=0)
    high = profile.hits[top].mean(axis=0)
    return np.flatnonzero(high > gain_threshold * low)


def summed_responsive_curve(
    profile: HitProfile, gain_threshold: float = 2.0
) -> tuple[np.ndarray, np.ndarray]:
    """(p, summed hit rate of the responsive neurons) for plotting/fitting."""
    idx = responsive_neurons(profile, gain_threshold)
    return profile.p_values, profile.hits[:, idx].sum(axis=1)


@dataclass(frozen=True)
class SegmentFit:
    """Continuous piecewise-linear least-squares fit y(x).

    ``breakpoints`` holds the segments-1 interior knots (in x units) and
    ``slopes`` the per-segment slopes, left to right.
    """

    breakpoints: tuple[float, ...]
    slopes: tuple[float, ...]
    intercept: float
    residual: float

    def predict(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = self.intercept + self.slopes[0] * x
        for b, s_prev, s_next in zip(self.breakpoints, self.slopes, self.slopes[1:]):
            y += (s_next - s_prev) * np.maximum(x - b, 0.0)
        return y


def _pw_linear_lstsq(x, y, knots) -> tuple[np.ndarray, float]:
    cols = [np.ones_like(x), x]
    cols.extend(np.maximum(x - b, 0.0) for b in knots)
    a = np.column_stack(cols)
    coef, _, _, _ = np.linalg.lstsq(a, y, rcond=None)
    resid = float(np.sum((y - a @ coef) ** 2))
    return coef, resid


def segment_fit(x, y, segments: int = 3) -> SegmentFit:
    """Least-squares continuous piecewise-linear fit with ``segments`` pieces.

    Breakpoints are searched exhaustively over the data's x values,
    requiring at least 3 points per segment (relaxed to 2 when the series
    is too short); points sitting exactly on a knot count for both sides.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-D arrays of equal length")
    if np.any(np.diff(x) <= 0):
        raise ValueError("x must be strictly increasing")
    if segments < 1:
        raise ValueError(f"segments must be >= 1, got {segments}")
    if len(x) < segments + 1:
        raise ValueError(
            f"{len(x)} points are too few for a {segments}-segment fit"
        )
    if segments == 1:
        coef, resid = _pw_linear_lstsq(x, y, ())
        return SegmentFit((), (float(coef[1]),), float(coef[0]), resid)

    min_per = 3 if len(x) >= 2 * segments + 1 else 2
    best: tuple[float, tuple[float, ...], np.ndarray] | None = None
    for knot_idx in combinations(range(1, len(x) - 1), segments - 1):
        knots = x[list(knot_idx)]
        bounds = np.concatenate([[x[0]], knots, [x[-1]]])
        counts = [
            int(np.sum((x >= bounds[i]) & (x <= bounds[i + 1])))
            for i in range(segments)
        ]
        if min(counts) < min_per:
            continue
        coef, resid = _pw_linear_lstsq(x, y, knots)
        if best is None or resid < best[0] - 1e-15:
            best = (resid, tuple(float(b) for b in knots), coef)
    if best is None:
        raise ValueError(
            f"no admissible breakpoints for {segments} segments over {len(x)} points"
        )
    resid, knots, coef = best
    slopes = tuple(float(s) for s in np.cumsum(coef[1:]))
    return SegmentFit(knots, slopes, float(coef[0]), resid)


def final_slope_vs_system_size(
    profiles: Mapping[int, HitProfile],
    segments: int = 3,
    gain_threshold: float = 2.0,
) -> list[tuple[int, float]]:
    """Slope of the last fitted segment of the summed responsive-neuron
    curve (vs log10 p), one entry per system size, sorted by size."""
    series = []
    for n in sorted(profiles):
        p, curve = summed_responsive_curve(profiles[n], gain_threshold)
        fit = segment_fit(np.log10(p), curve, segments)
        series.append((int(n), fit.slopes[-1]))
    return series


def write_profile_csv(
    profile: HitProfile,
    path,
    n: int | None = None,
    seed: int = 0,
    cfg_hash: str = "-",
) -> None:
    """Columns p, neuron_0..neuron_{j-1}; provenance in '#' comments."""
    n_neurons = profile.hits.shape[1]
    extra = {"samples_per_p": str(profile.samples_per_p)}
    if n is not None:
        extra["n"] = str(n)
    with open(path, "w", newline="") as fh:
        for line in provenance_lines(seed, cfg_hash, extra):
            fh.write(line + "\n")
        fh.write("p," + ",".join(f"neuron_{m}" for m in range(n_neurons)) + "\n")
        for p, row in zip(profile.p_values, profile.hits):
            fh.write(fmt(p) + "," + ",".join(fmt(v) for v in row) + "\n")


def read_profile_csv(path) -> tuple[HitProfile, dict[str, str]]:
    """Returns the profile and its metadata comments (n, seed, ...)."""
    meta, header, rows = read_csv_table(path)
    if not header or header[0] != "p":
        raise FileFormatError(f"{path}: missing column(s) p")
    n_neurons = len(header) - 1
    expected = [f"neuron_{m}" for m in range(n_neurons)]
    if header[1:] != expected:
        raise FileFormatError(
            f"{path}: neuron columns must be neuron_0..neuron_{n_neurons - 1}"
        )
    if not rows:
        raise FileFormatError(f"{path}: no data rows")
    p = np.array([float(r[0]) for r in rows])
    hits = np.array([[float(v) for v in r[1:]] for r in rows])
    samples = int(meta.get("samples_per_p", 0))
    return HitProfile(p, hits, samples), meta
