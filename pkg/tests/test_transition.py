import numpy as np
import pytest

from chaos_probe import (
    HitProfile,
    SomConfig,
    final_slope_vs_system_size,
    init_map,
    read_profile_csv,
    responsive_neurons,
    scan_hits,
    segment_fit,
    summed_responsive_curve,
    write_profile_csv,
)
from chaos_probe.randomness import derive_stream
from chaos_probe.util import FileFormatError


def toy_som():
    return init_map(SomConfig(rows=2, cols=2, input_dim=6, sigma0=0.3), derive_stream(0, 0))


def toy_generator(gen):
    def generate(p, count):
        for _ in range(count):
            yield gen.standard_normal(6) + p
    return generate


def test_scan_hits_rows_are_probability_vectors(gen):
    som = toy_som()
    profile = scan_hits(som, toy_generator(gen), [0.01, 0.1, 1.0], count=40)
    assert profile.hits.shape == (3, 4)
    np.testing.assert_allclose(profile.hits.sum(axis=1), 1.0, atol=1e-12)
    assert np.all(profile.hits >= 0.0)
    assert profile.samples_per_p == 40


def test_scan_hits_workers_do_not_change_counts():
    som = toy_som()

    def generate(p, count):
        gen = np.random.default_rng(int(p * 1000))
        for _ in range(count):
            yield gen.standard_normal(6)

    a = scan_hits(som, generate, [0.01, 0.1, 1.0], count=30, workers=1)
    b = scan_hits(som, generate, [0.01, 0.1, 1.0], count=30, workers=8)
    assert np.array_equal(a.hits, b.hits)


def test_scan_hits_validation(gen):
    som = toy_som()
    with pytest.raises(ValueError):
        scan_hits(som, toy_generator(gen), [], count=10)
    with pytest.raises(ValueError):
        scan_hits(som, toy_generator(gen), [0.1], count=0)

    def short_generator(p, count):
        yield gen.standard_normal(6)

    with pytest.raises(ValueError):
        scan_hits(som, short_generator, [0.1], count=5)


def flat_profile(n_p=12, j=10, value=None):
    p = np.logspace(-4, 0, n_p)
    hits = np.full((n_p, j), 1.0 / j)
    return HitProfile(p, hits, 100)


def test_responsive_neurons_flat_profile_is_empty():
    assert len(responsive_neurons(flat_profile())) == 0


def rising_profile(n_p=16, j=10, riser=4):
    p = np.logspace(-4, 0, n_p)
    hits = np.full((n_p, j), 1.0 / j)
    boost = np.where(p > 0.2, 5.0 / j, 0.0)
    hits[:, riser] += boost
    hits /= hits.sum(axis=1, keepdims=True)
    return HitProfile(p, hits, 500)


def test_responsive_neurons_detects_the_riser():
    profile = rising_profile()
    assert list(responsive_neurons(profile)) == [4]


def test_responsive_neurons_permutation_equivariant():
    profile = rising_profile()
    perm = np.array([3, 1, 4, 0, 2, 9, 8, 7, 6, 5])
    permuted = HitProfile(profile.p_values, profile.hits[:, perm], profile.samples_per_p)
    base = set(responsive_neurons(profile).tolist())
    moved = set(responsive_neurons(permuted).tolist())
    assert moved == {int(np.where(perm == m)[0][0]) for m in base}


def test_responsive_neurons_needs_two_grid_points():
    profile = HitProfile(np.array([0.1]), np.array([[1.0]]), 10)
    with pytest.raises(ValueError):
        responsive_neurons(profile)


def test_summed_curve_tracks_the_riser():
    profile = rising_profile()
    p, curve = summed_responsive_curve(profile)
    assert np.array_equal(p, profile.p_values)
    assert curve[-1] > curve[0]


def polyline(x, knots, slopes, intercept=0.3):
    y = intercept + slopes[0] * x
    for b, s_prev, s_next in zip(knots, slopes, slopes[1:]):
        y = y + (s_next - s_prev) * np.maximum(x - b, 0.0)
    return y


def test_segment_fit_recovers_noiseless_polyline():
    x = np.linspace(-4, 0, 21)
    knots = (x[6], x[14])
    slopes = (0.05, 0.6, 1.8)
    y = polyline(x, knots, slopes)
    fit = segment_fit(x, y, segments=3)
    assert fit.breakpoints == pytest.approx(knots, abs=1e-9)
    assert fit.slopes == pytest.approx(slopes, abs=1e-9)
    assert fit.residual < 1e-18
    np.testing.assert_allclose(fit.predict(x), y, atol=1e-9)


def test_segment_fit_nested_models_reduce_residual(gen):
    x = np.linspace(-4, 0, 20)
    y = polyline(x, (x[7],), (0.1, 1.0)) + 0.05 * gen.standard_normal(20)
    one = segment_fit(x, y, segments=1)
    three = segment_fit(x, y, segments=3)
    assert three.residual <= one.residual + 1e-12


def test_segment_fit_single_segment_matches_polyfit(gen):
    x = np.linspace(0, 1, 15)
    y = 0.7 * x - 0.2 + 0.01 * gen.standard_normal(15)
    fit = segment_fit(x, y, segments=1)
    slope, intercept = np.polyfit(x, y, 1)
    assert fit.slopes[0] == pytest.approx(slope, abs=1e-10)
    assert fit.intercept == pytest.approx(intercept, abs=1e-10)


def test_segment_fit_validation():
    x = np.linspace(0, 1, 3)
    with pytest.raises(ValueError):
        segment_fit(x, x, segments=3)
    with pytest.raises(ValueError):
        segment_fit(np.array([0.0, 0.0, 1.0, 2.0]), np.zeros(4), segments=1)
    with pytest.raises(ValueError):
        segment_fit(x, x, segments=0)


def test_final_slope_series_sorted_by_size():
    profiles = {84: rising_profile(), 16: rising_profile(), 56: rising_profile()}
    series = final_slope_vs_system_size(profiles)
    assert [n for n, _ in series] == [16, 56, 84]


def test_final_slope_single_size():
    series = final_slope_vs_system_size({20: rising_profile()})
    assert len(series) == 1
    assert series[0][0] == 20


def test_profile_csv_roundtrip(tmp_path):
    profile = rising_profile()
    path = tmp_path / "profile.csv"
    write_profile_csv(profile, path, n=16, seed=3, cfg_hash="abc")
    back, meta = read_profile_csv(path)
    assert meta["n"] == "16"
    assert meta["seed"] == "3"
    assert np.array_equal(back.p_values, profile.p_values)
    assert np.array_equal(back.hits, profile.hits)
    assert back.samples_per_p == 500


def test_profile_csv_missing_column(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("q,neuron_0\n0.1,1.0\n")
    with pytest.raises(FileFormatError) as err:
        read_profile_csv(path)
    assert "p" in str(err.value)
    path.write_text("p,neuron_0,neuron_2\n0.1,0.5,0.5\n")
    with pytest.raises(FileFormatError):
        read_profile_csv(path)
