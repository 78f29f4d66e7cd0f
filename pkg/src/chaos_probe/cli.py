"""Command-line entry point.

Exit codes: 0 success, 1 validation error (bad flags or config), 2 runtime
error. The worker pool is capped by the CHAOS_PROBE_THREADS environment
variable.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .experiments import (
    ConfigError,
    ExperimentConfig,
    emit_report,
    load_config,
    run_rscan,
    run_som_pipeline,
)
from .graph import sample_ws_graph, save_graph
from .hamiltonian import read_corpus, write_corpus
from .randomness import KIND_GRAPH, KIND_SOM_INIT, derive_stream, substream_id
from .som import SomConfig, init_map, load_map, save_map, train
from .transition import final_slope_vs_system_size, read_profile_csv
from .util import FileFormatError, __version__, fmt, provenance_lines


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chaos-probe",
        description="Spectral and map-based probes of the integrable-to-chaotic "
                    "transition on rewired ring lattices.",
    )
    parser.add_argument("--version", action="version", version=f"chaos-probe {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graph", help="generate one Watts-Strogatz graph")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--p", type=float, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)

    c = sub.add_parser("corpus", help="generate a training corpus of Hamiltonians")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--p-lo", type=float, default=1e-4)
    c.add_argument("--p-hi", type=float, default=1.0)
    c.add_argument("--count", type=int, required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", required=True)

    r = sub.add_parser("rscan", help="scan the mean spacing ratio over p")
    r.add_argument("--n", type=int, action="append", required=True,
                   help="system size; repeat for multiple sizes")
    r.add_argument("--k", type=int, default=2)
    r.add_argument("--p-lo", type=float, default=1e-4)
    r.add_argument("--p-hi", type=float, default=1.0)
    r.add_argument("--grid", type=int, default=20)
    r.add_argument("--realizations", type=int, default=50)
    r.add_argument("--graph-resamples", type=int, default=1,
                   help="independent graphs per grid point")
    r.add_argument("--window", type=float, default=0.25)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out", required=True,
                   help="output directory for the CSV tables")
    r.add_argument("--config", help="JSON config file providing defaults")

    t = sub.add_parser("som-train", help="train a map on a corpus file")
    t.add_argument("--corpus", required=True)
    t.add_argument("--rows", type=int, default=10)
    t.add_argument("--cols", type=int, default=10)
    t.add_argument("--alpha0", type=float, default=0.5)
    t.add_argument("--sigma0", type=float, default=1.0)
    t.add_argument("--iters", type=int, default=0,
                   help="training length; 0 means the whole corpus")
    t.add_argument("--metric", choices=("weight", "grid"), default="weight")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out", required=True)

    s = sub.add_parser("som-scan", help="scan hit histograms over p with a trained map")
    s.add_argument("--map", dest="map_path", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--p-lo", type=float, default=1e-4)
    s.add_argument("--p-hi", type=float, default=1.0)
    s.add_argument("--grid", type=int, default=20)
    s.add_argument("--count", type=int, default=500)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)

    f = sub.add_parser("som-slopes", help="final-segment slope per system size")
    f.add_argument("--profiles", nargs="+", required=True)
    f.add_argument("--out", required=True)

    p = sub.add_parser("report", help="render an HTML report from CSV outputs")
    p.add_argument("--rscan", nargs="*", default=[])
    p.add_argument("--profiles", nargs="*", default=[])
    p.add_argument("--offset", type=float, default=0.0,
                   help="vertical shift between successive hit curves")
    p.add_argument("--out", default="report.html")

    return parser


def _cmd_graph(args) -> int:
    stream = derive_stream(args.seed, substream_id(KIND_GRAPH, args.n, 0))
    graph = sample_ws_graph(args.n, args.k, args.p, stream)
    save_graph(graph, args.out, args.seed)
    print(f"wrote {args.out} ({graph.n * graph.k} edges)")
    return 0


def _cmd_corpus(args) -> int:
    from .experiments import corpus_stream

    count = write_corpus(
        args.out,
        corpus_stream(args.n, args.k, args.p_lo, args.p_hi, args.count, args.seed),
    )
    print(f"wrote {args.out} ({count} records)")
    return 0


def _cmd_rscan(args) -> int:
    base = load_config(args.config) if args.config else ExperimentConfig()
    cfg = ExperimentConfig(
        mode="rscan",
        system_sizes=tuple(args.n),
        k=args.k,
        p_lo=args.p_lo,
        p_hi=args.p_hi,
        grid=args.grid,
        realizations=args.realizations,
        graph_resamples=args.graph_resamples,
        window_fraction=args.window,
        som=base.som,
        master_seed=args.seed,
        out_dir=args.out,
    )
    results = run_rscan(cfg)
    for n, res in results.items():
        print(f"N={n}: mean_r from {fmt(res.mean_r[0])} to {fmt(res.mean_r[-1])}")
    return 0


def _cmd_som_train(args) -> int:
    from .hamiltonian import corpus_record_count, flatten

    with open(args.corpus, "rb") as fh:
        from .hamiltonian import read_records

        first = next(read_records(fh), None)
    if first is None:
        raise FileFormatError(f"{args.corpus}: empty corpus")
    total = corpus_record_count(args.corpus, first.n, first.k)
    iters = args.iters if args.iters > 0 else total
    config = SomConfig(
        rows=args.rows,
        cols=args.cols,
        input_dim=first.n * first.n,
        alpha0=args.alpha0,
        sigma0=args.sigma0,
        total_iterations=iters,
        metric=args.metric,
        init_seed=args.seed,
    )
    som = init_map(config, derive_stream(args.seed, substream_id(KIND_SOM_INIT, first.n, args.seed)))
    train(som, (flatten(m) for m in read_corpus(args.corpus)))
    save_map(som, args.out)
    print(f"wrote {args.out} ({som.trained_iterations} iterations)")
    return 0


def _cmd_som_scan(args) -> int:
    import math

    from .experiments import scan_generator
    from .transition import scan_hits, write_profile_csv
    from .util import worker_count

    som = load_map(args.map_path)
    n = int(round(math.sqrt(som.config.input_dim)))
    if n * n != som.config.input_dim:
        raise FileFormatError(
            f"{args.map_path}: input_dim {som.config.input_dim} is not a square"
        )
    if n != args.n:
        raise ConfigError(
            f"--n {args.n} does not match the map's input size {n}x{n}"
        )
    grid = np.logspace(math.log10(args.p_lo), math.log10(args.p_hi), args.grid)
    profile = scan_hits(
        som,
        scan_generator(args.n, args.k, grid, args.seed),
        grid,
        args.count,
        workers=worker_count(),
    )
    write_profile_csv(profile, args.out, n=args.n, seed=args.seed)
    print(f"wrote {args.out} ({len(grid)} grid points x {args.count} samples)")
    return 0


def _cmd_som_slopes(args) -> int:
    by_n = {}
    for path in args.profiles:
        profile, meta = read_profile_csv(path)
        if "n" not in meta:
            raise FileFormatError(f"{path}: missing '# n:' metadata")
        by_n[int(meta["n"])] = profile
    series = final_slope_vs_system_size(by_n)
    with open(args.out, "w", newline="") as fh:
        for line in provenance_lines(0, "-"):
            fh.write(line + "\n")
        fh.write("N,final_slope\n")
        for n, slope in series:
            fh.write(f"{n},{fmt(slope)}\n")
    print(f"wrote {args.out} ({len(series)} sizes)")
    return 0


def _cmd_report(args) -> int:
    out = emit_report(args.rscan, args.profiles, args.out, offset=args.offset)
    print(f"wrote {out}")
    return 0


_COMMANDS = {
    "graph": _cmd_graph,
    "corpus": _cmd_corpus,
    "rscan": _cmd_rscan,
    "som-train": _cmd_som_train,
    "som-scan": _cmd_som_scan,
    "som-slopes": _cmd_som_slopes,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage; that's a validation failure here
        return 0 if exc.code in (0, None) else 1
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, FileFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
