"""Eigenvalues of i*S and level-spacing ratio statistics.

The chaos indicator is the mean ratio of consecutive level spacings,
r_i = min(s_{i+1}/s_i, s_i/s_{i+1}), evaluated on a central window of the
sorted spectrum. Uncorrelated (Poissonian) levels give <r> ~ 0.38629 while
GUE-correlated levels give <r> ~ 0.5996, so scanning <r> against the
rewiring probability exposes the integrable-to-chaotic crossover.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .graph import sample_ws_graph
from .hamiltonian import CouplingMatrix, assign_weights
from .randomness import (
    KIND_GRAPH,
    KIND_WEIGHTS,
    derive_stream,
    substream_id,
)
from .util import (
    FileFormatError,
    TooFewLevelsError,
    fmt,
    provenance_lines,
    read_csv_table,
    require_columns,
    worker_count,
)

# Reference values of the mean spacing ratio.
POISSON_MEAN_R = 2.0 * math.log(2.0) - 1.0  # 0.38629..., uncorrelated levels
GUE_MEAN_R = 0.5996
R_CROSSOVER_LEVEL = 0.493  # midpoint between the two plateaus


def eigenvalues(matrix: CouplingMatrix | np.ndarray) -> np.ndarray:
    """All n real eigenvalues of i*S, sorted ascending.

    S must be exactly skew-symmetric; i*S is then Hermitian and the
    spectrum is real and symmetric about zero.
    """
    s = matrix.entries if isinstance(matrix, CouplingMatrix) else np.asarray(matrix, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {s.shape}")
    if not np.isfinite(s).all():
        raise ValueError("matrix contains non-finite entries")
    if not np.array_equal(s, -s.T):
        raise ValueError("matrix is not skew-symmetric")
    return np.linalg.eigvalsh(1j * s)


def central_window(levels: np.ndarray, fraction: float) -> np.ndarray:
    """The contiguous block of ceil(fraction*n) levels centered on index n/2."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"window fraction must be in (0, 1], got {fraction}")
    levels = np.asarray(levels)
    n = len(levels)
    count = math.ceil(fraction * n)
    if count < 3:
        raise TooFewLevelsError(
            f"window of {count} levels is too small for ratio statistics (need >= 3)"
        )
    start = min(math.floor(n * (1.0 - fraction) / 2.0), n - count)
    return levels[start : start + count]


def spacings(levels: np.ndarray) -> np.ndarray:
    """Nearest-neighbour spacings s_i = E_{i+1} - E_i of a sorted spectrum."""
    levels = np.asarray(levels)
    if len(levels) < 2:
        raise TooFewLevelsError("spacings need at least 2 levels")
    return np.diff(levels)


def r_statistics(levels: np.ndarray) -> float:
    """Mean of r_i = min(s_{i+1}/s_i, s_i/s_{i+1}) over the spectrum.

    Degenerate spacings take their limiting values: both spacings zero
    gives r_i = 1, exactly one zero gives r_i = 0. The result is always
    in [0, 1].
    """
    s = spacings(levels)
    if len(s) < 2:
        raise TooFewLevelsError("ratio statistics need at least 3 levels")
    lo = np.minimum(s[:-1], s[1:])
    hi = np.maximum(s[:-1], s[1:])
    with np.errstate(invalid="ignore"):
        r = lo / hi
    r[hi == 0.0] = 1.0
    return float(np.mean(r))


@dataclass(frozen=True, eq=False)
class RScanResult:
    """Ensemble-averaged <r> over a grid of rewiring probabilities."""

    p_grid: np.ndarray
    mean_r: np.ndarray
    stderr_r: np.ndarray
    n: int
    k: int
    realizations: int
    window_fraction: float
    master_seed: int
    graph_resamples: int = 1


def r_scan(
    n: int,
    k: int,
    p_grid,
    realizations: int,
    window_fraction: float = 0.25,
    master_seed: int = 0,
    graph_resamples: int = 1,
    workers: int | None = None,
) -> RScanResult:
    """Scan <r> over rewiring probabilities.

    For each grid point one graph is generated (or ``graph_resamples``
    independent graphs) and endowed with ``realizations`` independent
    weight sets; the per-realization mean r on the central window is then
    averaged. Every (graph, weight set) uses its own derived stream, so
    the result is a pure function of the arguments regardless of worker
    count.
    """
    p_grid = np.asarray(p_grid, dtype=float)
    if p_grid.size == 0:
        raise ValueError("p grid must be nonempty")
    if np.any(np.diff(p_grid) <= 0):
        raise ValueError("p grid must be strictly increasing")
    if np.any((p_grid < 0) | (p_grid > 1)):
        raise ValueError("p grid values must lie in [0, 1]")
    if realizations < 1:
        raise ValueError(f"realizations must be >= 1, got {realizations}")
    if graph_resamples < 1:
        raise ValueError(f"graph_resamples must be >= 1, got {graph_resamples}")
    if workers is None:
        workers = worker_count()

    jobs: list[tuple[int, object, int]] = []
    for pi, p in enumerate(p_grid):
        for g in range(graph_resamples):
            graph_stream = derive_stream(
                master_seed, substream_id(KIND_GRAPH, n, pi * graph_resamples + g)
            )
            try:
                graph = sample_ws_graph(n, k, float(p), graph_stream)
            except (ValueError, RuntimeError) as exc:
                raise type(exc)(f"at grid point p={p}: {exc}") from exc
            base = (pi * graph_resamples + g) * realizations
            for ri in range(realizations):
                jobs.append((pi, graph, substream_id(KIND_WEIGHTS, n, base + ri)))

    def run(job):
        pi, graph, weight_id = job
        matrix = assign_weights(graph, derive_stream(master_seed, weight_id))
        window = central_window(eigenvalues(matrix), window_fraction)
        return r_statistics(window)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(run, jobs))
    else:
        values = [run(job) for job in jobs]

    per_point = graph_resamples * realizations
    mean_r = np.empty(len(p_grid))
    stderr_r = np.empty(len(p_grid))
    for pi in range(len(p_grid)):
        vals = np.array(values[pi * per_point : (pi + 1) * per_point])
        mean_r[pi] = vals.mean()
        stderr_r[pi] = vals.std(ddof=1) / math.sqrt(len(vals)) if len(vals) > 1 else 0.0
    return RScanResult(
        p_grid, mean_r, stderr_r, n, k, realizations, window_fraction,
        master_seed, graph_resamples,
    )


def crossover_probability(
    p_grid, mean_r, level: float = R_CROSSOVER_LEVEL
) -> float | None:
    """First crossing of <r> through ``level``, interpolated in log10 p.

    Returns None when the curve never crosses.
    """
    p_grid = np.asarray(p_grid, dtype=float)
    mean_r = np.asarray(mean_r, dtype=float)
    d = mean_r - level
    for i in range(len(d) - 1):
        if d[i] == 0.0:
            return float(p_grid[i])
        if d[i] * d[i + 1] < 0.0:
            x0, x1 = np.log10(p_grid[i]), np.log10(p_grid[i + 1])
            t = d[i] / (d[i] - d[i + 1])
            return float(10.0 ** (x0 + t * (x1 - x0)))
    if d[-1] == 0.0:
        return float(p_grid[-1])
    return None


def fit_crossover_width(p_grid, mean_r) -> tuple[float, float]:
    """Logistic fit of the crossover in log10 p with plateaus pinned at the
    Poisson and GUE reference values; returns (center, width) in log10 p."""
    from scipy.optimize import curve_fit
    from scipy.special import expit

    logp = np.log10(np.asarray(p_grid, dtype=float))

    def model(x, center, width):
        return POISSON_MEAN_R + (GUE_MEAN_R - POISSON_MEAN_R) * expit((x - center) / width)

    popt, _ = curve_fit(
        model,
        logp,
        np.asarray(mean_r, dtype=float),
        p0=(math.log10(0.02), 0.3),
        bounds=([logp.min() - 1.0, 1e-3], [logp.max() + 1.0, 10.0]),
        maxfev=20000,
    )
    return float(popt[0]), float(popt[1])


_RSCAN_COLUMNS = ["p", "mean_r", "stderr_r", "N", "k", "realizations", "seed"]


def write_rscan_csv(result: RScanResult, path, cfg_hash: str = "-") -> None:
    """One row per grid point; provenance in '#' comments."""
    extra = {
        "window_fraction": fmt(result.window_fraction),
        "graph_resamples": str(result.graph_resamples),
    }
    with open(path, "w", newline="") as fh:
        for line in provenance_lines(result.master_seed, cfg_hash, extra):
            fh.write(line + "\n")
        fh.write(",".join(_RSCAN_COLUMNS) + "\n")
        for p, mean, err in zip(result.p_grid, result.mean_r, result.stderr_r):
            fh.write(
                f"{fmt(p)},{fmt(mean)},{fmt(err)},{result.n},{result.k},"
                f"{result.realizations},{result.master_seed}\n"
            )


def read_rscan_csv(path) -> RScanResult:
    meta, header, rows = read_csv_table(path)
    require_columns(header, _RSCAN_COLUMNS, path)
    if not rows:
        raise FileFormatError(f"{path}: no data rows")
    col = {name: header.index(name) for name in _RSCAN_COLUMNS}
    p = np.array([float(r[col["p"]]) for r in rows])
    mean = np.array([float(r[col["mean_r"]]) for r in rows])
    err = np.array([float(r[col["stderr_r"]]) for r in rows])
    first = rows[0]
    return RScanResult(
        p,
        mean,
        err,
        int(first[col["N"]]),
        int(first[col["k"]]),
        int(first[col["realizations"]]),
        float(meta.get("window_fraction", 0.25)),
        int(first[col["seed"]]),
        int(meta.get("graph_resamples", 1)),
    )
