import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from spectral_levy.kernels import (
    SpectralKernel,
    build_kernel_u,
    build_kernel_v,
    build_kernel_w,
    dirichlet_term,
    verify_moments,
)

BETAS = [0.5, 1, 2, 2.5, 3, 4.2]


def solve_moments(rows, rhs):
    return np.linalg.solve(np.array(rows, dtype=float), np.array(rhs, dtype=float))


class TestClosedForms:
    def test_v_low_beta(self):
        # 2a/3 + 2b/5 = 0, -(a/5 + b/7) = 1
        a, b = solve_moments([[2 / 3, 2 / 5], [-1 / 5, -1 / 7]], [0, 1])
        assert (a, b) == pytest.approx((105 / 4, -175 / 4), rel=1e-13)
        for beta in (0.5, 1, 2):
            k = build_kernel_v(beta)
            assert k.exact_terms == ((2, Fraction(105, 4)), (4, Fraction(-175, 4)))

    def test_u_low_beta(self):
        a, b = solve_moments([[2 / 3, 2 / 5], [2 / 5, 2 / 7]], [-1, 0])
        assert (a, b) == pytest.approx((-75 / 8, 105 / 8), rel=1e-13)
        for beta in (0.5, 1, 2):
            assert build_kernel_u(beta).exact_terms == ((2, Fraction(-75, 8)), (4, Fraction(105, 8)))

    def test_w_low_beta(self):
        for beta in (0.5, 1, 2):
            assert build_kernel_w(beta).exact_terms == ((3, Fraction(5, 2)),)

    @pytest.mark.parametrize("builder", [build_kernel_v, build_kernel_u, build_kernel_w])
    def test_rejects_nonpositive_beta(self, builder):
        with pytest.raises(ValueError):
            builder(0)


@pytest.mark.parametrize("beta", BETAS)
class TestProperties:
    def test_moments(self, beta):
        for k in (build_kernel_v(beta), build_kernel_u(beta), build_kernel_w(beta)):
            report = verify_moments(k)
            assert report.passed, report
            assert max(report.residuals) < 1e-12 * 10 ** (beta > 2)

    def test_moments_exact(self, beta):
        def moment(kernel, power):
            return sum(c * (Fraction(0) if (e + power) % 2 else Fraction(2, e + power + 1)) for e, c in kernel.exact_terms)

        v, u, w = build_kernel_v(beta), build_kernel_u(beta), build_kernel_w(beta)
        assert moment(v, 0) == 0 and -moment(v, 2) / 2 == 1
        assert moment(u, 0) == -1 and moment(u, 2) == 0
        assert moment(w, 1) == 1

    def test_parity_and_support(self, beta):
        t = np.linspace(-1, 1, 201)
        v, u, w = build_kernel_v(beta), build_kernel_u(beta), build_kernel_w(beta)
        assert np.array_equal(v(t), v(-t))
        assert np.array_equal(u(t), u(-t))
        assert np.array_equal(w(t), -w(-t))
        for k in (v, u, w):
            assert np.all(k(np.array([-1.5, 1.0001, 3.0])) == 0)

    def test_vanishes_like_power(self, beta):
        t = np.linspace(-1, 1, 2001)
        for k in (build_kernel_v(beta), build_kernel_u(beta), build_kernel_w(beta)):
            assert k.min_exponent >= beta
            const = sum(abs(c) for _, c in k.terms)
            assert np.all(np.abs(k(t)) <= const * np.abs(t) ** beta + 1e-15)

    @pytest.mark.parametrize("h", [1.0, 0.5, 0.1])
    def test_scaled_identities(self, beta, h):
        v, u, w = build_kernel_v(beta), build_kernel_u(beta), build_kernel_w(beta)
        T = 1 / h

        def q(f):
            return integrate.quad(f, -T, T, epsabs=1e-13, epsrel=1e-13, limit=200)[0]

        assert abs(q(lambda t: v(t, h))) < 1e-10
        assert abs(q(lambda t: -t * t / 2 * v(t, h)) - 1) < 1e-10
        assert abs(q(lambda t: u(t, h)) + 1) < 1e-10
        assert abs(q(lambda t: t * t * u(t, h))) < 1e-10
        assert abs(q(lambda t: t * w(t, h)) - 1) < 1e-10


def test_bad_v_kernel_reported():
    report = verify_moments(SpectralKernel("V", ((2, 1.0),), 1.0))
    assert not report.passed
    assert report.residuals[0] == pytest.approx(2 / 3, abs=1e-12)


def test_parity_enforced():
    with pytest.raises(ValueError):
        SpectralKernel("W", ((2, 1.0),), 1.0)
    with pytest.raises(ValueError):
        SpectralKernel("V", ((3, 1.0),), 1.0)


def test_json_roundtrip():
    k = build_kernel_u(3)
    back = SpectralKernel.from_dict(k.to_dict())
    assert back.terms == k.terms and back.kind == "U" and back.beta == 3


def dirichlet_oracle(order, x, T):
    re = integrate.quad(lambda t: math.cos(t * x) * t**order, -T, T, epsabs=1e-14, epsrel=1e-14, limit=400)[0]
    im = integrate.quad(lambda t: -math.sin(t * x) * t**order, -T, T, epsabs=1e-14, epsrel=1e-14, limit=400)[0]
    return complex(re, im) / (2 * math.pi)


class TestDirichlet:
    def test_center(self):
        assert dirichlet_term(0, 0.0, math.pi) == pytest.approx(1.0, abs=1e-15)

    def test_sine_zero(self):
        assert abs(dirichlet_term(0, math.pi, 1.0)) < 1e-16

    def test_order2_against_quadrature(self):
        assert abs(dirichlet_term(2, 0.7, 2.0) - dirichlet_oracle(2, 0.7, 2.0)) < 1e-10

    def test_random_pairs(self):
        rng = np.random.default_rng(11)
        xs = np.concatenate([rng.uniform(-8, 8, 80), rng.uniform(-1e-6, 1e-6, 20)])
        Ts = rng.uniform(0.2, 5, 100)
        worst = 0.0
        with np.errstate(all="ignore"):
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                for x, T in zip(xs, Ts):
                    for order in (0, 1, 2):
                        worst = max(worst, abs(dirichlet_term(order, x, T) - dirichlet_oracle(order, x, T)))
        assert worst < 1e-10

    def test_parity(self):
        x = np.linspace(0.01, 5, 50)
        assert np.allclose(dirichlet_term(1, x, 2.0), -dirichlet_term(1, -x, 2.0), atol=1e-15)
        assert np.all(dirichlet_term(1, x, 2.0).real == 0)
        assert np.all(dirichlet_term(2, x, 2.0).imag == 0)

    def test_continuous_across_series_switch(self):
        T = 2.0
        x = np.array([0.25 - 1e-12, 0.25 + 1e-12])
        for order in (0, 1, 2):
            a, b = dirichlet_term(order, x, T)
            assert abs(a - b) < 1e-11
