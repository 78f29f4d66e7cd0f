"""Two independent probes of the integrable-to-chaotic transition on
Gaussian-weighted Watts-Strogatz hopping Hamiltonians: level-spacing ratio
statistics of the exact spectrum, and hit histograms of an unsupervised
self-organizing map fed the raw matrices."""

from .experiments import (
    ConfigError,
    ExperimentConfig,
    emit_report,
    load_config,
    run_rscan,
    run_som_pipeline,
)
from .graph import (
    RingLatticeSpec,
    WsGraph,
    build_ring_lattice,
    is_connected,
    load_graph,
    orient,
    rewire,
    sample_ws_graph,
    save_graph,
)
from .hamiltonian import (
    CouplingMatrix,
    assign_weights,
    edge_weight_variance,
    flatten,
    read_corpus,
    write_corpus,
)
from .randomness import (
    RngStream,
    derive_stream,
    sample_gaussian,
    sample_log_uniform,
    substream_id,
)
from .som import (
    SomConfig,
    SomMap,
    classify,
    find_winner,
    hit_histogram,
    init_map,
    load_map,
    normalize_input,
    save_map,
    train,
    train_step,
)
from .spectra import (
    GUE_MEAN_R,
    POISSON_MEAN_R,
    R_CROSSOVER_LEVEL,
    RScanResult,
    central_window,
    crossover_probability,
    eigenvalues,
    fit_crossover_width,
    r_scan,
    r_statistics,
    read_rscan_csv,
    spacings,
    write_rscan_csv,
)
from .transition import (
    HitProfile,
    SegmentFit,
    final_slope_vs_system_size,
    read_profile_csv,
    responsive_neurons,
    scan_hits,
    segment_fit,
    summed_responsive_curve,
    write_profile_csv,
)
from .util import FileFormatError, TooFewLevelsError, __version__

__all__ = [
    "ConfigError",
    "CouplingMatrix",
    "ExperimentConfig",
    "FileFormatError",
    "GUE_MEAN_R",
    "HitProfile",
    "POISSON_MEAN_R",
    "R_CROSSOVER_LEVEL",
    "RScanResult",
    "RingLatticeSpec",
    "RngStream",
    "SegmentFit",
    "SomConfig",
    "SomMap",
    "TooFewLevelsError",
    "WsGraph",
    "__version__",
    "assign_weights",
    "build_ring_lattice",
    "central_window",
    "classify",
    "crossover_probability",
    "derive_stream",
    "edge_weight_variance",
    "eigenvalues",
    "emit_report",
    "final_slope_vs_system_size",
    "find_winner",
    "fit_crossover_width",
    "flatten",
    "hit_histogram",
    "init_map",
    "is_connected",
    "load_config",
    "load_graph",
    "load_map",
    "normalize_input",
    "orient",
    "r_scan",
    "r_statistics",
    "read_corpus",
    "read_profile_csv",
    "read_rscan_csv",
    "responsive_neurons",
    "rewire",
    "run_rscan",
    "run_som_pipeline",
    "sample_gaussian",
    "sample_log_uniform",
    "sample_ws_graph",
    "save_graph",
    "save_map",
    "scan_hits",
    "segment_fit",
    "spacings",
    "substream_id",
    "summed_responsive_curve",
    "train",
    "train_step",
    "write_corpus",
    "write_profile_csv",
    "write_rscan_csv",
]
