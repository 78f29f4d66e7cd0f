"""Deterministic, seedable randomness for ensemble experiments.

Every random quantity in the library is drawn from an :class:`RngStream`
keyed by ``(master_seed, stream_id)``. The underlying generator is Philox,
a counter-based generator: distinct keys select statistically independent
sequences without any serial coupling, so realizations can be generated in
parallel while remaining bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Stage tags for substream_id; they keep the seed spaces of the different
# experiment stages disjoint.
KIND_GRAPH = 1
KIND_WEIGHTS = 2
KIND_SOM_INIT = 3
KIND_CORPUS = 4
KIND_SCAN = 5

_U64 = 1 << 64


@dataclass
class RngStream:
    """A reproducible random stream.

    A stream owns mutable generator state and must not be shared across
    concurrent tasks; allocate one stream per realization instead (streams
    are cheap to derive and safe to hand off to a worker).
    """

    master_seed: int
    stream_id: int
    generator: np.random.Generator = field(repr=False)


def derive_stream(master_seed: int, stream_id: int) -> RngStream:
    """Create the deterministic stream identified by (master_seed, stream_id).

    Identical arguments always yield an identical draw sequence; distinct
    stream ids yield independent sequences.
    """
    if not 0 <= master_seed < _U64:
        raise ValueError(f"master_seed must fit in a u64, got {master_seed}")
    if not 0 <= stream_id < _U64:
        raise ValueError(f"stream_id must fit in a u64, got {stream_id}")
    key = np.array([master_seed, stream_id], dtype=np.uint64)
    return RngStream(master_seed, stream_id, np.random.Generator(np.random.Philox(key=key)))


def substream_id(kind: int, major: int = 0, minor: int = 0) -> int:
    """Pack a stage tag and two indices into a single u64 stream id.

    Layout: kind in the top 8 bits, major in the next 24, minor in the low
    32. Collisions are impossible within these ranges, so every
    (stage, system size, item) triple gets its own independent stream.
    """
    if not 0 <= kind < (1 << 8):
        raise ValueError(f"kind must fit in 8 bits, got {kind}")
    if not 0 <= major < (1 << 24):
        raise ValueError(f"major must fit in 24 bits, got {major}")
    if not 0 <= minor < (1 << 32):
        raise ValueError(f"minor must fit in 32 bits, got {minor}")
    return (kind << 56) | (major << 32) | minor


def sample_gaussian(rng: RngStream, mean: float, variance: float, size=None):
    """Draw from N(mean, variance); scalar when size is None."""
    if variance < 0:
        raise ValueError(f"variance must be nonnegative, got {variance}")
    if variance == 0.0:
        return float(mean) if size is None else np.full(size, float(mean))
    draw = rng.generator.normal(mean, math.sqrt(variance), size=size)
    return float(draw) if size is None else draw


def sample_log_uniform(rng: RngStream, lo: float, hi: float, size=None):
    """Draw x in [lo, hi] with log(x) uniform (equal expected counts per decade)."""
    if not (0 < lo < hi):
        raise ValueError(f"need 0 < lo < hi, got lo={lo}, hi={hi}")
    u = rng.generator.uniform(math.log(lo), math.log(hi), size=size)
    # clip: exp(log .) can land 1 ulp outside the interval
    draw = np.clip(np.exp(u), lo, hi)
    return float(draw) if size is None else draw
