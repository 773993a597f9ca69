import numpy as np
import pytest

from spfa.errors import ConfigurationError
from spfa.sei import histogram, null_sei_mean, sei, sei_rows


def test_point_mass_value():
    # all mass in one bin scores 1 - 1/bins, the maximum
    counts = np.zeros(256, dtype=np.int64)
    counts[7] = 1000
    assert sei(counts) == 255.0 / 256.0
    counts4 = np.zeros(16, dtype=np.int64)
    counts4[3] = 50
    assert sei(counts4) == 15.0 / 16.0


def test_uniform_is_zero():
    assert sei(np.full(256, 4, dtype=np.int64)) == 0.0
    assert sei(np.full(16, 125, dtype=np.int64)) == 0.0


def test_small_exact_value():
    # [3, 1] over 2 bins: (3/4 - 1/2)^2 + (1/4 - 1/2)^2 = 1/8
    assert sei(np.array([3, 1])) == 0.125


def test_bounds_seeded():
    rng = np.random.default_rng(11)
    for _ in range(100):
        counts = np.bincount(rng.integers(0, 256, 400), minlength=256)
        s = sei(counts)
        assert 0.0 <= s <= 255.0 / 256.0


def test_rejects_bad_input():
    with pytest.raises(ConfigurationError):
        sei(np.array([5]))
    with pytest.raises(ConfigurationError):
        sei(np.array([[1, 2], [3, 4]]))
    with pytest.raises(ConfigurationError):
        sei(np.array([1, -1]))
    with pytest.raises(ConfigurationError):
        sei(np.zeros(16, dtype=np.int64))


def test_xor_relabeling_is_exact():
    # permuting bins permutes counts, so the integer path gives bit-equality
    rng = np.random.default_rng(23)
    deltas = rng.integers(0, 256, 500)
    base = sei(np.bincount(deltas, minlength=256))
    for c in range(1, 256, 5):
        assert sei(np.bincount(deltas ^ c, minlength=256)) == base


def test_float_path_matches_integer_path():
    rng = np.random.default_rng(5)
    counts = np.bincount(rng.integers(0, 16, 300), minlength=16)
    assert sei(counts.astype(np.float64)) == pytest.approx(sei(counts), abs=1e-14)


def test_null_mean_analytic_form():
    assert null_sei_mean(256, 1000) == 255.0 / (256.0 * 1000.0)
    assert null_sei_mean(16, 50) == 15.0 / (16.0 * 50.0)


def test_null_mean_monte_carlo():
    rng = np.random.default_rng(2)
    trials, n, bins = 2000, 1000, 256
    draws = rng.integers(0, bins, (trials, n))
    vals = [sei(np.bincount(row, minlength=bins)) for row in draws]
    mean = float(np.mean(vals))
    expected = null_sei_mean(bins, n)
    assert abs(mean - expected) < 0.05 * expected


def test_sei_rows_matches_scalar():
    rng = np.random.default_rng(7)
    hists = np.stack([np.bincount(rng.integers(0, 16, 200), minlength=16) for _ in range(40)])
    rows = sei_rows(hists, 200)
    for i in range(40):
        assert rows[i] == sei(hists[i])


def test_sei_rows_rejects_bad_shapes():
    with pytest.raises(ConfigurationError):
        sei_rows(np.zeros(16, dtype=np.int64), 10)
    with pytest.raises(ConfigurationError):
        sei_rows(np.zeros((3, 16), dtype=np.int64), 0)


def test_histogram_counts_and_range():
    h = histogram([0, 3, 3, 15], 16)
    assert h[0] == 1 and h[3] == 2 and h[15] == 1 and h.sum() == 4
    with pytest.raises(ConfigurationError):
        histogram([16], 16)
    with pytest.raises(ConfigurationError):
        histogram([-1], 16)
