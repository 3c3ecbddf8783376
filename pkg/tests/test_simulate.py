import math

import numpy as np
import pytest

from spectral_levy.ecf import compute_ecf
from spectral_levy.model import JumpDensity, LevyTriplet, char_fn_X
from spectral_levy.simulate import (
    SampleFormatError,
    make_rng,
    read_sample_csv,
    sample_jump,
    sample_jumps,
    simulate_increments,
    write_sample_csv,
)

FAMILIES = [
    JumpDensity.gaussian(0.0, 1.0),
    JumpDensity.laplace(0.0, 1.0),
    JumpDensity.bilateral_exponential(2.0),
    JumpDensity.uniform_sym(1.0),
]


class TestSimulateIncrements:
    def test_degenerate_is_constant(self):
        s = simulate_increments(LevyTriplet(0.37, 0.0, 0.0), 100, 1)
        assert np.all(s.values == 0.37)

    def test_deterministic(self, gaussian_triplet):
        a = simulate_increments(gaussian_triplet, 1000, 42)
        b = simulate_increments(gaussian_triplet, 1000, 42)
        c = simulate_increments(gaussian_triplet, 1000, 43)
        assert a.values.tobytes() == b.values.tobytes()
        assert np.any(a.values != c.values)

    def test_stream_keys(self, gaussian_triplet):
        a = simulate_increments(gaussian_triplet, 50, (7, 500, 0))
        b = simulate_increments(gaussian_triplet, 50, (7, 500, 1))
        assert np.any(a.values != b.values)

    def test_rejects_empty(self, gaussian_triplet):
        with pytest.raises(ValueError):
            simulate_increments(gaussian_triplet, 0, 1)

    def test_mean_within_four_se(self):
        tr = LevyTriplet(1.0, 1.0, 2.0, JumpDensity.gaussian())
        n = 100_000
        se = math.sqrt(3.0 / n)  # var = sigma2 + lam * E[W^2]
        for seed in range(5):
            s = simulate_increments(tr, n, seed)
            assert abs(s.values.mean() - 1.0) < 4 * se

    def test_jump_counts_poisson(self):
        s = simulate_increments(LevyTriplet(0.0, 1.0, 1.5, JumpDensity.gaussian()), 100_000, 3)
        assert s.jump_counts.sum() > 0
        assert abs(s.jump_counts.mean() - 1.5) < 4 * math.sqrt(1.5 / 1e5)

    def test_jump_counts_drive_values(self):
        tr = LevyTriplet(0.5, 0.0, 1.0, JumpDensity.uniform_sym(1.0))
        s = simulate_increments(tr, 1000, 3)
        assert np.all(s.values[s.jump_counts == 0] == 0.5)
        assert np.all(np.abs(s.values - 0.5) <= s.jump_counts + 1e-12)

    def test_lag_one_autocorrelation(self, gaussian_triplet):
        x = simulate_increments(gaussian_triplet, 100_000, 17).values
        x = x - x.mean()
        assert abs(np.dot(x[:-1], x[1:]) / np.dot(x, x)) < 0.02


class TestJumps:
    def test_uniform_support(self):
        d = sample_jumps(JumpDensity.uniform_sym(1.0), make_rng(0), 100_000)
        assert np.all(np.abs(d) <= 1.0)

    def test_gaussian_variance(self):
        d = sample_jumps(JumpDensity.gaussian(), make_rng(1), 100_000)
        assert 0.97 <= d.var() <= 1.03

    @pytest.mark.parametrize("density", FAMILIES, ids=lambda d: d.family)
    def test_kolmogorov_distance(self, density):
        # DKW: P(sup|F_n - F| > 0.01) <= 2 exp(-2 n 0.01^2) ~ 4e-9 at n = 1e5
        d = np.sort(sample_jumps(density, make_rng(2), 100_000))
        F = density.cdf(d)
        n = d.size
        ks = max(np.max(np.arange(1, n + 1) / n - F), np.max(F - np.arange(n) / n))
        assert ks < 0.01

    def test_single_draw(self):
        v = sample_jump(JumpDensity.laplace(), make_rng(3))
        assert isinstance(v, float)


@pytest.mark.parametrize("density", FAMILIES, ids=lambda d: d.family)
def test_ecf_consistency(density):
    tr = LevyTriplet(0.3, 0.5, 1.0, density)
    good = 0
    for seed in range(20):
        x = simulate_increments(tr, 100_000, (1, seed)).values
        g = compute_ecf(x, 3.0, 61)
        good += np.max(np.abs(g.values - char_fn_X(g.points, tr))) < 0.02
    assert good >= 19


class TestCsv:
    def test_roundtrip(self, tmp_path, gaussian_triplet):
        s = simulate_increments(gaussian_triplet, 100, 5)
        write_sample_csv(s.values, tmp_path / "x.csv")
        back = read_sample_csv(tmp_path / "x.csv")
        assert back.tobytes() == s.values.tobytes()

    def test_header_tolerated(self, tmp_path):
        (tmp_path / "x.csv").write_text("x\n1.5\n-2\n")
        assert list(read_sample_csv(tmp_path / "x.csv")) == [1.5, -2.0]

    def test_bad_line_reported(self, tmp_path):
        (tmp_path / "x.csv").write_text("1.0\n2.0\nfoo\n")
        with pytest.raises(SampleFormatError, match=":3:"):
            read_sample_csv(tmp_path / "x.csv")

    def test_two_columns_rejected(self, tmp_path):
        (tmp_path / "x.csv").write_text("1.0,2.0\n")
        with pytest.raises(SampleFormatError, match=":1:"):
            read_sample_csv(tmp_path / "x.csv")
