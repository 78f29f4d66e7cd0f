"""Shared plumbing: version string, config hashing, CSV provenance headers."""

from __future__ import annotations

import hashlib
import json
import os
from typing import Any

__version__ = "0.1.0"


class FileFormatError(ValueError):
    """A serialized artifact does not match its expected schema."""


class TooFewLevelsError(ValueError):
    """Not enough eigenvalues for the requested spectral statistic."""


def canonical_json(obj: Any) -> str:
    """Serialize to a byte-stable form (sorted keys, no whitespace)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def config_hash(obj: Any) -> str:
    """Hex digest of the canonical serialization of a config mapping."""
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()[:16]


def fmt(x: float) -> str:
    # 17 significant digits: lossless float64 round-trip
    return f"{float(x):.17g}"


def worker_count() -> int:
    """Worker pool size, capped by the CHAOS_PROBE_THREADS environment variable."""
    raw = os.environ.get("CHAOS_PROBE_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"CHAOS_PROBE_THREADS must be an integer, got {raw!r}") from exc
    return max(1, value)


def provenance_lines(seed: int, cfg_hash: str, extra: dict | None = None) -> list[str]:
    """Comment lines placed at the top of every text output file."""
    lines = [
        f"# chaos-probe {__version__}",
        f"# config_hash: {cfg_hash}",
        f"# seed: {seed}",
    ]
    for key, value in (extra or {}).items():
        lines.append(f"# {key}: {value}")
    return lines


def read_csv_table(path) -> tuple[dict[str, str], list[str], list[list[str]]]:
    """Read a CSV with a '#' comment preamble.

    Returns (metadata parsed from ``# key: value`` comments, column names,
    data rows as strings).
    """
    meta: dict[str, str] = {}
    header: list[str] | None = None
    rows: list[list[str]] = []
    with open(path, newline="") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                key, sep, value = body.partition(":")
                if sep:
                    meta[key.strip()] = value.strip()
                continue
            cells = line.split(",")
            if header is None:
                header = cells
            else:
                rows.append(cells)
    if header is None:
        raise FileFormatError(f"{path}: no header row found")
    return meta, header, rows


def require_columns(header: list[str], expected: list[str], path) -> None:
    missing = [c for c in expected if c not in header]
    if missing:
        raise FileFormatError(f"{path}: missing column(s) {', '.join(missing)}")
