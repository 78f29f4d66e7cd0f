"""Experiment orchestration: configs, pipelines, persistence, reports.

Two pipelines mirror the two probes. ``run_rscan`` diagonalizes ensembles
over a grid of rewiring probabilities and writes the <r>-vs-p tables;
``run_som_pipeline`` generates a log-uniform training corpus, trains one
map per system size, scans the grid with fresh matrices, and writes hit
profiles plus the responsive-neuron report. Every output is a pure
function of (config, master_seed).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Iterator

import numpy as np

from .graph import sample_ws_graph
from .hamiltonian import CouplingMatrix, assign_weights, flatten
from .randomness import (
    KIND_CORPUS,
    KIND_SCAN,
    KIND_SOM_INIT,
    derive_stream,
    sample_log_uniform,
    substream_id,
)
from .som import SomConfig, SomMap, init_map, save_map, train
from .spectra import (
    RScanResult,
    crossover_probability,
    fit_crossover_width,
    r_scan,
    read_rscan_csv,
    write_rscan_csv,
)
from .transition import (
    HitProfile,
    read_profile_csv,
    responsive_neurons,
    scan_hits,
    segment_fit,
    summed_responsive_curve,
    write_profile_csv,
)
from .util import __version__, canonical_json, config_hash, fmt, worker_count


class ConfigError(ValueError):
    """An experiment configuration violates its invariants."""


@dataclass
class ExperimentConfig:
    """Knobs for one pipeline run; hashable for provenance headers."""

    mode: str = "rscan"
    system_sizes: tuple[int, ...] = (1000,)
    k: int = 2
    p_lo: float = 1e-4
    p_hi: float = 1.0
    grid: int = 20
    realizations: int = 50
    graph_resamples: int = 1
    corpus_size: int = 100_000
    count_per_p: int = 500
    window_fraction: float = 0.25
    som: SomConfig = field(default_factory=lambda: SomConfig(rows=10, cols=10, input_dim=1))
    master_seed: int = 0
    out_dir: str = "out"

    def __post_init__(self):
        modes = ("rscan", "som-train", "som-scan", "som-slopes", "report")
        if self.mode not in modes:
            raise ConfigError(f"mode must be one of {modes}, got {self.mode!r}")
        if not self.system_sizes:
            raise ConfigError("system_sizes must be nonempty")
        if any(n < 3 for n in self.system_sizes):
            raise ConfigError(f"system sizes must be >= 3, got {self.system_sizes}")
        if self.k < 1:
            raise ConfigError(f"k must be positive, got {self.k}")
        if not (0.0 < self.p_lo < self.p_hi <= 1.0):
            raise ConfigError(
                f"need 0 < p_lo < p_hi <= 1, got [{self.p_lo}, {self.p_hi}]"
            )
        for name in ("grid", "realizations", "graph_resamples", "corpus_size", "count_per_p"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0.0 < self.window_fraction <= 1.0:
            raise ConfigError(
                f"window_fraction must be in (0, 1], got {self.window_fraction}"
            )

    def p_grid(self) -> np.ndarray:
        return np.logspace(math.log10(self.p_lo), math.log10(self.p_hi), self.grid)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["system_sizes"] = list(self.system_sizes)
        return d

    def hash(self) -> str:
        # output locations do not affect results, so they are not hashed
        d = self.to_dict()
        d.pop("out_dir")
        return config_hash(d)


def _write_manifest(cfg: ExperimentConfig, out_dir: Path, outputs: list[str]) -> None:
    manifest = {
        "tool": f"chaos-probe {__version__}",
        "config": cfg.to_dict(),
        "config_hash": cfg.hash(),
        "seed": cfg.master_seed,
        "outputs": sorted(outputs),
    }
    path = out_dir / f"{cfg.mode.replace('-', '_')}_manifest.json"
    path.write_text(canonical_json(manifest) + "\n")


def run_rscan(cfg: ExperimentConfig) -> dict[int, RScanResult]:
    """Scan <r> for every configured system size; one CSV per size plus a
    combined table."""
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    grid = cfg.p_grid()
    results: dict[int, RScanResult] = {}
    outputs: list[str] = []
    for n in cfg.system_sizes:
        result = r_scan(
            n,
            cfg.k,
            grid,
            cfg.realizations,
            window_fraction=cfg.window_fraction,
            master_seed=cfg.master_seed,
            graph_resamples=cfg.graph_resamples,
            workers=worker_count(),
        )
        path = out_dir / f"rscan_n{n}.csv"
        write_rscan_csv(result, path, cfg.hash())
        outputs.append(path.name)
        results[n] = result
    combined = out_dir / "rscan_combined.csv"
    with open(combined, "w", newline="") as fh:
        first = True
        for n in cfg.system_sizes:
            text = (out_dir / f"rscan_n{n}.csv").read_text()
            if first:
                fh.write(text)
                first = False
            else:
                fh.write("".join(
                    line + "\n" for line in text.splitlines()
                    if not (line.startswith("#") or line.startswith("p,"))
                ))
    outputs.append(combined.name)
    _write_manifest(cfg, out_dir, outputs)
    return results


def corpus_stream(
    n: int,
    k: int,
    p_lo: float,
    p_hi: float,
    count: int,
    master_seed: int,
) -> Iterator[CouplingMatrix]:
    """Training corpus: rewiring probabilities log-uniform on [p_lo, p_hi],
    one independent stream per sample (graph and weights share it)."""
    for s in range(count):
        stream = derive_stream(master_seed, substream_id(KIND_CORPUS, n, s))
        p = sample_log_uniform(stream, p_lo, p_hi)
        graph = sample_ws_graph(n, k, p, stream)
        yield assign_weights(graph, stream)


def scan_generator(n: int, k: int, p_grid, master_seed: int):
    """Classification batches: fresh matrices per (grid point, sample) in a
    seed space disjoint from the training corpus."""
    p_grid = np.asarray(p_grid, dtype=float)

    def generate(p: float, count: int):
        pi = int(np.searchsorted(p_grid, p))
        for s in range(count):
            stream = derive_stream(
                master_seed, substream_id(KIND_SCAN, n, pi * count + s)
            )
            graph = sample_ws_graph(n, k, p, stream)
            yield flatten(assign_weights(graph, stream))

    return generate


def _som_config_for(cfg: ExperimentConfig, n: int) -> SomConfig:
    """Per-size training config: the corpus defines the training length.

    Decay constants left at their default (total/4) are recomputed for the
    new length; explicitly chosen ones are kept.
    """
    base = cfg.som
    default_tau = base.total_iterations / 4.0
    return replace(
        base,
        input_dim=n * n,
        total_iterations=cfg.corpus_size,
        tau_alpha=None if base.tau_alpha == default_tau else base.tau_alpha,
        tau_sigma=None if base.tau_sigma == default_tau else base.tau_sigma,
    )


def run_som_pipeline(cfg: ExperimentConfig) -> dict[int, tuple[SomMap, HitProfile]]:
    """Corpus -> train -> scan for every configured system size.

    Writes map_n{N}.som, profile_n{N}.csv and responsive_n{N}.json per
    size. Classification matrices never reuse training streams.
    """
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    grid = cfg.p_grid()
    results: dict[int, tuple[SomMap, HitProfile]] = {}
    outputs: list[str] = []
    for n in cfg.system_sizes:
        som_cfg = _som_config_for(cfg, n)
        som = init_map(
            som_cfg,
            derive_stream(cfg.master_seed, substream_id(KIND_SOM_INIT, n, som_cfg.init_seed)),
        )
        stage = "corpus"
        try:
            vectors = (
                flatten(m)
                for m in corpus_stream(n, cfg.k, cfg.p_lo, cfg.p_hi,
                                       som_cfg.total_iterations, cfg.master_seed)
            )
            stage = "train"
            train(som, vectors)
            stage = "scan"
            profile = scan_hits(
                som,
                scan_generator(n, cfg.k, grid, cfg.master_seed),
                grid,
                cfg.count_per_p,
                workers=worker_count(),
            )
        except Exception as exc:
            raise RuntimeError(f"som pipeline stage '{stage}' failed for n={n}: {exc}") from exc

        map_path = out_dir / f"map_n{n}.som"
        save_map(som, map_path)
        profile_path = out_dir / f"profile_n{n}.csv"
        write_profile_csv(profile, profile_path, n=n, seed=cfg.master_seed, cfg_hash=cfg.hash())
        report_path = out_dir / f"responsive_n{n}.json"
        report_path.write_text(canonical_json(_responsive_report(profile, n)) + "\n")
        outputs += [map_path.name, profile_path.name, report_path.name]
        results[n] = (som, profile)
    _write_manifest(cfg, out_dir, outputs)
    return results


def _responsive_report(profile: HitProfile, n: int) -> dict:
    idx = responsive_neurons(profile)
    entry: dict = {"n": n, "responsive_neurons": [int(m) for m in idx]}
    p, curve = summed_responsive_curve(profile)
    entry["summed_hits"] = [float(v) for v in curve]
    entry["p_values"] = [float(v) for v in p]
    if len(p) >= 7:
        fit = segment_fit(np.log10(p), curve, 3)
        entry["breakpoints_p"] = [float(10.0 ** b) for b in fit.breakpoints]
        entry["slopes"] = [float(s) for s in fit.slopes]
    return entry


def _svg_figure(draw) -> str:
    """Render a matplotlib figure to an SVG string via a callback."""
    import io

    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.5, 4.2))
    draw(ax)
    buf = io.StringIO()
    fig.savefig(buf, format="svg", bbox_inches="tight")
    plt.close(fig)
    return buf.getvalue()


def emit_report(
    rscan_csvs=(),
    profile_csvs=(),
    out_path="report.html",
    offset: float = 0.0,
) -> Path:
    """Static report: SVG charts plus a summary table (crossover p*,
    logistic widths, fitted breakpoints, final slopes).

    ``offset`` adds a constant vertical shift between successive summed
    hit curves so their shapes can be compared in one panel.
    """
    rscans = [read_rscan_csv(p) for p in rscan_csvs]
    profiles = [read_profile_csv(p) for p in profile_csvs]

    sections: list[str] = []
    if rscans:
        def draw_rscan(ax):
            for res in rscans:
                ax.errorbar(res.p_grid, res.mean_r, yerr=res.stderr_r,
                            marker="o", ms=3, lw=1, label=f"N={res.n}")
            ax.set_xscale("log")
            ax.set_xlabel("rewiring probability p")
            ax.set_ylabel("mean spacing ratio")
            ax.axhline(0.38629, color="gray", lw=0.8, ls="--")
            ax.axhline(0.5996, color="gray", lw=0.8, ls="--")
            ax.legend()

        rows = []
        for res in rscans:
            p_star = crossover_probability(res.p_grid, res.mean_r)
            try:
                _, width = fit_crossover_width(res.p_grid, res.mean_r)
            except Exception:
                width = float("nan")
            rows.append(
                f"<tr><td>{res.n}</td><td>{res.k}</td>"
                f"<td>{'-' if p_star is None else f'{p_star:.4g}'}</td>"
                f"<td>{width:.4g}</td></tr>"
            )
        sections.append(
            "<h2>Spectral crossover</h2>"
            + _svg_figure(draw_rscan)
            + "<table><tr><th>N</th><th>k</th><th>crossover p*</th>"
              "<th>logistic width (log10 p)</th></tr>"
            + "".join(rows) + "</table>"
        )

    if profiles:
        def draw_profiles(ax):
            for i, (profile, meta) in enumerate(profiles):
                p, curve = summed_responsive_curve(profile)
                label = f"N={meta.get('n', '?')}"
                ax.plot(p, curve + i * offset, marker="o", ms=3, lw=1, label=label)
            ax.set_xscale("log")
            ax.set_xlabel("rewiring probability p")
            ax.set_ylabel("summed responsive-neuron hits"
                          + (" (offset)" if offset else ""))
            ax.legend()

        rows = []
        for profile, meta in profiles:
            idx = responsive_neurons(profile)
            p, curve = summed_responsive_curve(profile)
            if len(p) >= 7:
                fit = segment_fit(np.log10(p), curve, 3)
                bps = ", ".join(f"{10.0 ** b:.4g}" for b in fit.breakpoints)
                slopes = ", ".join(f"{s:.4g}" for s in fit.slopes)
            else:
                bps, slopes = "-", "-"
            rows.append(
                f"<tr><td>{meta.get('n', '?')}</td><td>{len(idx)}</td>"
                f"<td>{bps}</td><td>{slopes}</td></tr>"
            )
        sections.append(
            "<h2>Map hit response</h2>"
            + _svg_figure(draw_profiles)
            + "<table><tr><th>N</th><th>responsive neurons</th>"
              "<th>breakpoints (p)</th><th>segment slopes</th></tr>"
            + "".join(rows) + "</table>"
        )

        if len(profiles) > 1:
            by_n = {}
            for profile, meta in profiles:
                try:
                    by_n[int(meta["n"])] = profile
                except (KeyError, ValueError):
                    pass
            if len(by_n) > 1:
                from .transition import final_slope_vs_system_size

                series = final_slope_vs_system_size(by_n)
                rows = "".join(
                    f"<tr><td>{n}</td><td>{s:.4g}</td></tr>" for n, s in series
                )
                sections.append(
                    "<h2>Final-segment slope vs system size</h2>"
                    "<table><tr><th>N</th><th>final slope</th></tr>" + rows + "</table>"
                )

    out_path = Path(out_path)
    out_path.write_text(
        "<!DOCTYPE html><html><head><meta charset='utf-8'>"
        f"<title>chaos-probe report</title></head><body>"
        f"<h1>chaos-probe {__version__}</h1>"
        + "".join(sections)
        + "</body></html>"
    )
    return out_path


def load_config(path) -> ExperimentConfig:
    """Load an ExperimentConfig from a JSON file."""
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    som_raw = raw.pop("som", None)
    try:
        som = SomConfig(**som_raw) if som_raw else SomConfig(rows=10, cols=10, input_dim=1)
        raw["system_sizes"] = tuple(raw.get("system_sizes", (1000,)))
        return ExperimentConfig(som=som, **raw)
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
