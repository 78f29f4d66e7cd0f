import numpy as np
import pytest

from chaos_probe import (
    GUE_MEAN_R,
    POISSON_MEAN_R,
    assign_weights,
    central_window,
    crossover_probability,
    derive_stream,
    eigenvalues,
    fit_crossover_width,
    r_scan,
    r_statistics,
    read_rscan_csv,
    sample_ws_graph,
    spacings,
    write_rscan_csv,
)
from chaos_probe.util import FileFormatError, TooFewLevelsError

from conftest import gue_matrix, poisson_levels, random_skew
from oracles import skew_spectrum_oracle


def test_two_by_two_spectrum_is_plus_minus_w():
    w = 0.83
    s = np.array([[0.0, w], [-w, 0.0]])
    assert eigenvalues(s) == pytest.approx([-w, w], abs=1e-15)


def test_eigenvalues_match_charpoly_oracle(gen):
    for n in (2, 3, 4, 5, 6):
        for _ in range(20):
            s = random_skew(n, gen)
            fast = eigenvalues(s)
            slow = skew_spectrum_oracle(s)
            scale = max(np.max(np.abs(slow)), 1e-30)
            assert np.max(np.abs(fast - slow)) / scale < 1e-10


def test_odd_dimension_has_a_zero_mode(gen):
    for n in (3, 5, 11):
        s = random_skew(n, gen)
        ev = eigenvalues(s)
        norm = np.linalg.norm(s, 2)
        assert np.min(np.abs(ev)) < 1e-10 * norm


def test_spectrum_symmetric_about_zero(gen):
    for n in (8, 57, 200):
        s = random_skew(n, gen, density=0.2)
        ev = eigenvalues(s)
        assert np.max(np.abs(ev + ev[::-1])) <= 1e-9 * np.max(np.abs(ev))


def test_eigenvalues_input_validation():
    with pytest.raises(ValueError):
        eigenvalues(np.ones((2, 3)))
    with pytest.raises(ValueError):
        eigenvalues(np.array([[0.0, 1.0], [1.0, 0.0]]))  # symmetric, not skew
    bad = np.array([[0.0, np.nan], [-np.nan, 0.0]])
    with pytest.raises(ValueError):
        eigenvalues(bad)


def test_central_window_full_fraction_is_identity():
    levels = np.linspace(-1, 1, 11)
    assert np.array_equal(central_window(levels, 1.0), levels)


def test_central_window_quarter_of_1000():
    levels = np.arange(1000.0)
    window = central_window(levels, 0.25)
    assert len(window) == 250
    assert window[0] == 375.0
    assert window[-1] == 624.0


def test_central_window_too_small_rejected():
    with pytest.raises(TooFewLevelsError):
        central_window(np.arange(8.0), 0.25)
    with pytest.raises(ValueError):
        central_window(np.arange(8.0), 0.0)
    with pytest.raises(ValueError):
        central_window(np.arange(8.0), 1.5)


def test_spacings_basic():
    assert np.array_equal(spacings(np.array([0.0, 1.0, 3.0])), [1.0, 2.0])
    assert np.all(spacings(np.linspace(0, 1, 9)) >= 0.0)
    assert spacings(np.full(5, 2.0)) == pytest.approx([0.0] * 4)
    with pytest.raises(TooFewLevelsError):
        spacings(np.array([1.0]))


def test_r_statistics_equal_spacing_is_one():
    assert r_statistics(np.arange(50.0)) == 1.0


def test_r_statistics_needs_three_levels():
    with pytest.raises(TooFewLevelsError):
        r_statistics(np.array([0.0, 1.0]))


def test_r_statistics_degenerate_spacings():
    # spacings (0, 0, 1): both-zero pair gives r=1, zero/nonzero pair gives r=0
    levels = np.array([0.0, 0.0, 0.0, 1.0])
    assert r_statistics(levels) == pytest.approx(0.5)


def test_r_statistics_poisson_reference(gen):
    levels = poisson_levels(100_000, gen)
    assert r_statistics(levels) == pytest.approx(POISSON_MEAN_R, abs=0.005)
    assert r_statistics(levels) == pytest.approx(0.38629, abs=0.005)


def test_r_statistics_affine_invariance(gen):
    levels = np.sort(gen.standard_normal(500))
    base = r_statistics(levels)
    assert r_statistics(2.5 * levels + 7.0) == pytest.approx(base, abs=1e-12)


def test_r_statistics_bounds(gen):
    for _ in range(20):
        levels = np.sort(gen.random(30))
        assert 0.0 <= r_statistics(levels) <= 1.0


def test_gue_exceeds_poisson_by_a_gap(gen):
    gue_vals = [
        r_statistics(central_window(np.linalg.eigvalsh(gue_matrix(400, gen)), 0.25))
        for _ in range(10)
    ]
    poisson_vals = [r_statistics(poisson_levels(4000, gen)) for _ in range(10)]
    assert np.mean(gue_vals) - np.mean(poisson_vals) > 0.2


def test_r_scan_is_deterministic():
    kwargs = dict(realizations=3, window_fraction=0.5, master_seed=123)
    a = r_scan(64, 2, [1e-3, 0.1, 1.0], **kwargs)
    b = r_scan(64, 2, [1e-3, 0.1, 1.0], **kwargs)
    assert np.array_equal(a.mean_r, b.mean_r)
    assert np.array_equal(a.stderr_r, b.stderr_r)


def test_r_scan_worker_count_does_not_change_results():
    a = r_scan(48, 2, [0.01, 1.0], realizations=4, master_seed=5, workers=1)
    b = r_scan(48, 2, [0.01, 1.0], realizations=4, master_seed=5, workers=4)
    assert np.array_equal(a.mean_r, b.mean_r)


def test_r_scan_validation():
    with pytest.raises(ValueError):
        r_scan(32, 2, [], realizations=1)
    with pytest.raises(ValueError):
        r_scan(32, 2, [0.5, 0.1], realizations=1)
    with pytest.raises(ValueError):
        r_scan(32, 2, [0.1, 2.0], realizations=1)
    with pytest.raises(ValueError):
        r_scan(32, 2, [0.1], realizations=0)


def test_r_scan_mean_in_bounds():
    res = r_scan(64, 2, [1e-3, 1.0], realizations=4, master_seed=2)
    assert np.all((res.mean_r >= 0.0) & (res.mean_r <= 1.0))


def test_crossover_interpolation():
    p = np.array([1e-3, 1e-2, 1e-1, 1.0])
    r = np.array([0.39, 0.42, 0.55, 0.60])
    p_star = crossover_probability(p, r, level=0.493)
    assert 1e-2 < p_star < 1e-1
    assert crossover_probability(p, np.full(4, 0.39)) is None


def test_logistic_width_recovery():
    from scipy.special import expit

    logp = np.linspace(-4, 0, 25)
    true_center, true_width = -1.7, 0.25
    r = POISSON_MEAN_R + (GUE_MEAN_R - POISSON_MEAN_R) * expit((logp - true_center) / true_width)
    center, width = fit_crossover_width(10.0**logp, r)
    assert center == pytest.approx(true_center, abs=1e-6)
    assert width == pytest.approx(true_width, abs=1e-6)


def test_rscan_csv_roundtrip(tmp_path):
    res = r_scan(48, 2, [1e-3, 0.1, 1.0], realizations=3, master_seed=9)
    path = tmp_path / "scan.csv"
    write_rscan_csv(res, path, "deadbeef")
    back = read_rscan_csv(path)
    assert np.array_equal(back.p_grid, res.p_grid)
    assert np.array_equal(back.mean_r, res.mean_r)
    assert np.array_equal(back.stderr_r, res.stderr_r)
    assert (back.n, back.k, back.realizations) == (48, 2, 3)
    assert back.window_fraction == res.window_fraction
    assert back.master_seed == 9
    head = path.read_text().splitlines()[:3]
    assert head[0].startswith("# chaos-probe")
    assert "config_hash" in head[1]
    assert "seed" in head[2]


def test_rscan_csv_missing_column(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("p,mean_r\n0.1,0.4\n")
    with pytest.raises(FileFormatError) as err:
        read_rscan_csv(path)
    assert "stderr_r" in str(err.value)
