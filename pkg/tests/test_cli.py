import numpy as np
import pytest

from chaos_probe import load_graph, load_map, read_profile_csv
from chaos_probe.cli import main
from chaos_probe.hamiltonian import read_corpus
from chaos_probe.util import read_csv_table


def test_graph_command(tmp_path):
    out = tmp_path / "g.ws"
    code = main(["graph", "--n", "20", "--k", "2", "--p", "0.3",
                 "--seed", "4", "--out", str(out)])
    assert code == 0
    graph, seed = load_graph(out)
    assert (graph.n, graph.k, graph.p, seed) == (20, 2, 0.3, 4)
    assert len(graph.edges) == 40
    first = out.read_text().splitlines()[0]
    assert first.startswith("ws 20 2 ")
    assert first.endswith(" 4")


def test_graph_command_validation_error(tmp_path):
    code = main(["graph", "--n", "4", "--k", "2", "--p", "0.3",
                 "--out", str(tmp_path / "g.ws")])
    assert code == 1


def test_bad_usage_exits_one():
    assert main(["graph", "--n", "not-a-number"]) == 1
    assert main(["no-such-command"]) == 1


def test_corpus_and_som_train_commands(tmp_path):
    corpus = tmp_path / "corpus.bin"
    code = main(["corpus", "--n", "10", "--k", "2", "--p-lo", "1e-3",
                 "--p-hi", "1.0", "--count", "60", "--seed", "2",
                 "--out", str(corpus)])
    assert code == 0
    records = list(read_corpus(corpus))
    assert len(records) == 60
    assert all(m.n == 10 for m in records)

    map_path = tmp_path / "map.som"
    code = main(["som-train", "--corpus", str(corpus), "--rows", "3",
                 "--cols", "3", "--sigma0", "0.3", "--seed", "2",
                 "--out", str(map_path)])
    assert code == 0
    som = load_map(map_path)
    assert som.trained_iterations == 60
    assert som.config.input_dim == 100


def test_som_scan_and_slopes_commands(tmp_path):
    corpus = tmp_path / "corpus.bin"
    main(["corpus", "--n", "8", "--k", "2", "--count", "40",
          "--seed", "3", "--out", str(corpus)])
    map_path = tmp_path / "map.som"
    main(["som-train", "--corpus", str(corpus), "--rows", "2", "--cols", "2",
          "--sigma0", "0.3", "--seed", "3", "--out", str(map_path)])

    profile = tmp_path / "profile.csv"
    code = main(["som-scan", "--map", str(map_path), "--n", "8", "--k", "2",
                 "--grid", "8", "--count", "20", "--seed", "3",
                 "--out", str(profile)])
    assert code == 0
    loaded, meta = read_profile_csv(profile)
    assert loaded.hits.shape == (8, 4)
    assert meta["n"] == "8"

    slopes = tmp_path / "slopes.csv"
    code = main(["som-slopes", "--profiles", str(profile), "--out", str(slopes)])
    assert code == 0
    _, header, rows = read_csv_table(slopes)
    assert header == ["N", "final_slope"]
    assert rows[0][0] == "8"


def test_som_scan_size_mismatch(tmp_path):
    corpus = tmp_path / "corpus.bin"
    main(["corpus", "--n", "8", "--k", "2", "--count", "10",
          "--seed", "1", "--out", str(corpus)])
    map_path = tmp_path / "map.som"
    main(["som-train", "--corpus", str(corpus), "--rows", "2", "--cols", "2",
          "--sigma0", "0.3", "--seed", "1", "--out", str(map_path)])
    code = main(["som-scan", "--map", str(map_path), "--n", "12",
                 "--out", str(tmp_path / "p.csv")])
    assert code == 1


def test_rscan_command_and_report(tmp_path):
    out_dir = tmp_path / "scan"
    code = main(["rscan", "--n", "24", "--k", "2", "--p-lo", "1e-2",
                 "--p-hi", "1.0", "--grid", "3", "--realizations", "2",
                 "--window", "0.5", "--seed", "6", "--out", str(out_dir)])
    assert code == 0
    assert (out_dir / "rscan_n24.csv").exists()

    report = tmp_path / "report.html"
    code = main(["report", "--rscan", str(out_dir / "rscan_n24.csv"),
                 "--out", str(report)])
    assert code == 0
    assert "<svg" in report.read_text()


def test_rscan_multiple_sizes(tmp_path):
    out_dir = tmp_path / "scan"
    code = main(["rscan", "--n", "16", "--n", "24", "--grid", "2",
                 "--p-lo", "0.1", "--p-hi", "1.0",
                 "--realizations", "2", "--window", "0.5",
                 "--out", str(out_dir)])
    assert code == 0
    assert (out_dir / "rscan_n16.csv").exists()
    assert (out_dir / "rscan_n24.csv").exists()
    combined = (out_dir / "rscan_combined.csv").read_text()
    assert combined.count("\n16,") + combined.count(",16,") >= 2


def test_version_flag():
    assert main(["--version"]) == 0
