"""Self-organizing map with unit-norm inputs and weights.

Training follows the classic three steps: normalize the input to unit
length, pick the neuron whose weight vector is closest in Euclidean
distance, then pull every neuron toward the input with a Gaussian kernel
of the distance to the winner, renormalizing all weight vectors after each
update. Both the learning rate and the kernel width decay monotonically
with the iteration counter.

Two neighbourhood metrics are supported. The default measures distances
between weight vectors themselves ("weight"); the conventional Kohonen
alternative measures distances between neuron positions on the 2-D output
lattice ("grid").
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np

from .randomness import RngStream, sample_gaussian
from .util import FileFormatError

_METRICS = ("weight", "grid")


@dataclass
class SomConfig:
    """Geometry, schedules, and neighbourhood metric of a map.

    ``tau_alpha``/``tau_sigma`` default to total_iterations/4, giving
    exponential decay schedules alpha0*exp(-it/tau) and sigma0*exp(-it/tau).

    The default sigma0 is small compared to the typical distance sqrt(2)
    between random unit vectors. Under the weight-space metric this keeps
    the kernel local; a width of order 1 couples every neuron to every
    update and the whole map contracts onto a single weight vector, which
    kills the probe. Grid-metric maps want sigma0 of order the lattice
    radius instead.
    """

    rows: int
    cols: int
    input_dim: int
    alpha0: float = 0.5
    sigma0: float = 0.3
    total_iterations: int = 10_000
    tau_alpha: float | None = None
    tau_sigma: float | None = None
    schedule: str = "exponential"
    metric: str = "weight"
    init_seed: int = 0

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"grid must be at least 1x1, got {self.rows}x{self.cols}")
        if self.input_dim < 1:
            raise ValueError(f"input_dim must be positive, got {self.input_dim}")
        if not 0.0 < self.alpha0 <= 1.0:
            raise ValueError(f"alpha0 must be in (0, 1], got {self.alpha0}")
        if self.sigma0 <= 0.0:
            raise ValueError(f"sigma0 must be positive, got {self.sigma0}")
        if self.total_iterations < 1:
            raise ValueError(f"total_iterations must be >= 1, got {self.total_iterations}")
        if self.schedule != "exponential":
            raise ValueError(f"unknown schedule {self.schedule!r}")
        if self.metric not in _METRICS:
            raise ValueError(f"metric must be one of {_METRICS}, got {self.metric!r}")
        if self.tau_alpha is None:
            self.tau_alpha = self.total_iterations / 4.0
        if self.tau_sigma is None:
            self.tau_sigma = self.total_iterations / 4.0
        if self.tau_alpha <= 0.0 or self.tau_sigma <= 0.0:
            raise ValueError("decay constants must be positive")

    @property
    def n_neurons(self) -> int:
        return self.rows * self.cols

    def alpha(self, iteration: int) -> float:
        return self.alpha0 * math.exp(-iteration / self.tau_alpha)

    def sigma(self, iteration: int) -> float:
        return self.sigma0 * math.exp(-iteration / self.tau_sigma)


@dataclass
class SomMap:
    """Map state: one unit-norm weight vector per output neuron.

    ``weights`` has shape (n_neurons, input_dim); row m is neuron m, with
    neurons numbered row-major over the output lattice.
    """

    weights: np.ndarray
    config: SomConfig
    trained_iterations: int = 0
    _grid_sq_dist: np.ndarray | None = field(default=None, repr=False)

    def grid_sq_dist(self) -> np.ndarray:
        """Squared lattice distances between all neuron pairs (cached)."""
        if self._grid_sq_dist is None:
            idx = np.arange(self.config.n_neurons)
            r, c = divmod(idx, self.config.cols)
            self._grid_sq_dist = (
                (r[:, None] - r[None, :]) ** 2 + (c[:, None] - c[None, :]) ** 2
            ).astype(float)
        return self._grid_sq_dist


def normalize_input(x: np.ndarray) -> np.ndarray:
    """x / ||x||; raises on the zero vector."""
    x = np.asarray(x, dtype=float)
    norm = np.linalg.norm(x)
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return x / norm


def init_map(config: SomConfig, rng: RngStream) -> SomMap:
    """Random initialization: iid Gaussian entries, rows renormalized."""
    w = sample_gaussian(rng, 0.0, 1.0, size=(config.n_neurons, config.input_dim))
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    return SomMap(w, config, 0)


def find_winner(som: SomMap, x: np.ndarray) -> int:
    """Index of the neuron with the smallest Euclidean distance to x.

    Ties break toward the lowest index.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (som.config.input_dim,):
        raise ValueError(
            f"input has shape {x.shape}, map expects ({som.config.input_dim},)"
        )
    d2 = np.einsum("ij,ij->i", som.weights - x, som.weights - x)
    return int(np.argmin(d2))


def _neighbourhood_sq_dist(som: SomMap, winner: int) -> np.ndarray:
    if som.config.metric == "weight":
        diff = som.weights - som.weights[winner]
        return np.einsum("ij,ij->i", diff, diff)
    return som.grid_sq_dist()[winner]


def train_step(som: SomMap, x: np.ndarray, iteration: int) -> SomMap:
    """One update: move every neuron toward x, weighted by a Gaussian kernel
    of its distance to the winner, then renormalize all weight vectors.

    Mutates the map in place and returns it; the iteration counter advances
    by one.
    """
    winner = find_winner(som, x)
    alpha = som.config.alpha(iteration)
    if alpha == 0.0:  # fully decayed schedule: a zero step is the exact identity
        som.trained_iterations = iteration + 1
        return som
    sigma = som.config.sigma(iteration)
    kernel = np.exp(-_neighbourhood_sq_dist(som, winner) / (2.0 * sigma * sigma))
    som.weights += alpha * kernel[:, None] * (x - som.weights)
    norms = np.linalg.norm(som.weights, axis=1, keepdims=True)
    np.maximum(norms, 1e-300, out=norms)  # zero rows cannot occur for alpha <= 1/2
    som.weights /= norms
    som.trained_iterations = iteration + 1
    return som


def train(som: SomMap, corpus: Iterable[np.ndarray]) -> SomMap:
    """Sequential training over the corpus in presentation order.

    Each vector is normalized to unit length before the update. Training
    resumes from the map's current iteration counter and stops once
    config.total_iterations is reached; raises on an empty corpus.
    """
    stream = iter(corpus)
    first = next(stream, None)
    if first is None:
        raise ValueError("training corpus is empty")
    for vec in itertools.chain([first], stream):
        if som.trained_iterations >= som.config.total_iterations:
            break
        train_step(som, normalize_input(vec), som.trained_iterations)
    return som


def classify(som: SomMap, x: np.ndarray) -> int:
    """Winner index for a raw (unnormalized) input; the map is not modified."""
    return find_winner(som, normalize_input(x))


def hit_histogram(som: SomMap, batch) -> np.ndarray:
    """Normalized winner counts over a batch of raw inputs (sums to 1)."""
    winners = [classify(som, x) for x in batch]
    if not winners:
        raise ValueError("hit histogram needs a nonempty batch")
    counts = np.bincount(winners, minlength=som.config.n_neurons)
    return counts / float(len(winners))


def save_map(som: SomMap, path) -> None:
    """Text header ``som <rows> <cols> <input_dim> <trained_iterations>``
    followed by row-major little-endian float64 weights; exact round-trip."""
    cfg = som.config
    header = f"som {cfg.rows} {cfg.cols} {cfg.input_dim} {som.trained_iterations}\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(np.ascontiguousarray(som.weights, dtype="<f8").tobytes())


def load_map(path, config: SomConfig | None = None) -> SomMap:
    """Inverse of save_map.

    Geometry comes from the file; training hyperparameters are not stored,
    so pass ``config`` to override the defaults when retraining a loaded map.
    """
    with open(path, "rb") as fh:
        header = bytearray()
        while True:
            ch = fh.read(1)
            if not ch:
                raise FileFormatError(f"{path}: missing map header")
            if ch == b"\n":
                break
            header.extend(ch)
        fields = header.decode("ascii", errors="replace").split()
        if len(fields) != 5 or fields[0] != "som":
            raise FileFormatError(
                f"{path}: expected header 'som <rows> <cols> <input_dim> <iters>'"
            )
        rows, cols, input_dim, trained = (int(v) for v in fields[1:])
        payload = fh.read()
    expected = rows * cols * input_dim * 8
    if len(payload) != expected:
        raise FileFormatError(
            f"{path}: expected {expected} weight bytes, found {len(payload)}"
        )
    weights = np.frombuffer(payload, dtype="<f8").reshape(rows * cols, input_dim).copy()
    if config is None:
        config = SomConfig(rows=rows, cols=cols, input_dim=input_dim,
                           total_iterations=max(trained, 1))
    else:
        config = replace(config, rows=rows, cols=cols, input_dim=input_dim)
    return SomMap(weights, config, trained)
