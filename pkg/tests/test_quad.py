from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import roots_jacobi

from cesarolab import quad, specfun
from cesarolab.errors import ConvergenceError, ParameterError, TailError
from cesarolab.verify import quadrature_battery


class TestQuadSpec:
    def test_defaults(self):
        q = quad.DEFAULT_SPEC
        assert (q.nodes, q.truncation, q.abs_tol, q.rel_tol, q.max_refinements) == (64, 40, 1e-10, 1e-9, 12)

    @pytest.mark.parametrize("kw", [{"nodes": 0}, {"abs_tol": -1.0}, {"rel_tol": 0.0, "abs_tol": 0.0},
                                    {"truncation": 0}, {"max_refinements": -1}])
    def test_invalid(self, kw):
        with pytest.raises(ParameterError):
            quad.QuadSpec(**kw)

    def test_with_replaces_fields(self):
        q = quad.DEFAULT_SPEC.with_(nodes=16)
        assert q.nodes == 16 and q.truncation == quad.DEFAULT_SPEC.truncation


class TestNodes:
    def test_legendre_on_unit_interval(self):
        x, w = quad.gauss_legendre(20)
        assert np.all((x > 0) & (x < 1))
        assert w.sum() == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("a, b", [(0.0, 0.0), (-0.5, 0.3), (1.7, -0.9), (-0.99, 2.0)])
    def test_jacobi_matches_scipy(self, a, b):
        x, w = quad.gauss_jacobi(24, a, b)
        # scipy uses (1-y)^a (1+y)^b on [-1, 1]; map y = 2x - 1
        y, v = roots_jacobi(24, a, b)
        assert np.allclose(np.sort(x), np.sort((y + 1) / 2), atol=1e-14)
        assert w.sum() == pytest.approx(v.sum() / 2 ** (a + b + 1), rel=1e-13)

    @pytest.mark.parametrize("a, b", [(-0.5, 0.7), (0.0, -0.75), (2.5, 1.5)])
    def test_jacobi_polynomial_exactness(self, a, b):
        n = 12
        x, w = quad.gauss_jacobi(n, a, b)
        for k in range(2 * n):
            exact = math.exp(math.lgamma(a + 1) + math.lgamma(b + k + 1) - math.lgamma(a + b + k + 2))
            assert np.sum(w * x ** k) == pytest.approx(exact, rel=1e-13)

    def test_cache_returns_same_arrays(self):
        assert quad.gauss_jacobi(10, 0.2, 0.3)[0] is quad.gauss_jacobi(10, 0.2, 0.3)[0]


class TestIntegrators:
    @pytest.mark.parametrize("row", range(20))
    def test_battery_error_estimates_honest(self, row):
        run, exact = quadrature_battery()[row]
        r = run()
        err = abs(complex(r.value) - exact)
        assert err <= 3 * r.error + 4 * np.finfo(float).eps * abs(exact)
        assert err <= 1e-9 * max(1.0, abs(exact))

    def test_weighted_left_singularity(self):
        r = quad.integrate_weighted(lambda x: np.exp(x), 0.0, 2.0, -0.5, 0.0)
        # int_0^2 x^-1/2 e^x dx = sqrt(pi) erfi(sqrt 2), mpmath at 30 digits
        assert r.value == pytest.approx(6.6876855256219745, rel=1e-12)

    @pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
    @pytest.mark.parametrize("beta", [0.5, 1.0, 2.0, 3.7])
    def test_subordination_weight_moment(self, p, beta):
        for a in (1 - 1 / p, 1 / p):
            F = lambda r: beta * (-np.expm1(-r)) ** (beta - 1) * np.exp(-a * r)  # noqa: E731
            v = quad.integrate_halfline(F, origin_power=beta - 1).value
            exact = math.gamma(beta + 1) * specfun.gamma_ratio(a, beta + a).real
            assert v == pytest.approx(exact, rel=1e-8)

    def test_halfline_slow_exponential_tail(self):
        r = quad.integrate_halfline(lambda r: np.exp(-0.02 * r), tail_correction=True)
        assert r.value == pytest.approx(50.0, rel=1e-8)

    def test_halfline_tail_error(self):
        with pytest.raises(TailError):
            quad.integrate_halfline(lambda r: 1 / (1 + r) ** 1.5)

    def test_tail_error_is_convergence_error(self):
        assert issubclass(TailError, ConvergenceError)

    def test_positive_power_law(self):
        r = quad.integrate_positive(lambda t: t ** 0.5 / (1 + t) ** 2)
        assert r.value == pytest.approx(math.pi / 2, rel=1e-9)

    def test_singular_halfline(self):
        r = quad.integrate_singular_halfline(lambda u: u ** -0.5 / (1 + u) ** 2, origin_power=-0.5)
        assert r.value == pytest.approx(math.pi / 2, rel=1e-9)

    def test_jacobi_endpoint(self):
        r = quad.integrate_jacobi_endpoint(lambda r: np.ones_like(r), 0.5)
        assert r.value == pytest.approx(2.0, rel=1e-12)

    def test_finite_complex_integrand(self):
        r = quad.integrate_finite(lambda x: np.exp(1j * x), 0, math.pi)
        assert r.value == pytest.approx(2j, abs=1e-13)

    def test_bad_interval(self):
        with pytest.raises(ParameterError):
            quad.integrate_finite(np.exp, 1.0, 0.0)

    def test_non_convergence_raises(self):
        q = quad.QuadSpec(nodes=4, max_refinements=1, abs_tol=1e-14, rel_tol=1e-14)
        with pytest.raises(ConvergenceError):
            quad.integrate_finite(lambda x: np.sin(200 * x), 0.0, 1.0, q)

    @given(st.floats(0.1, 5.0), st.floats(0.1, 5.0))
    @settings(max_examples=25, deadline=None)
    def test_beta_integrals(self, a, b):
        r = quad.integrate_jacobi(lambda x: np.ones_like(x), a - 1, b - 1)
        assert r.value == pytest.approx(specfun.beta_fn(a, b).real, rel=1e-11)

    def test_oscillating_tail_with_envelope(self):
        # int cos(7x) sech(x) dx = pi sech(7 pi / 2)
        sech = lambda x: 1 / np.cosh(x)  # noqa: E731
        r = quad.integrate_real(lambda x: np.cos(7 * x) * sech(x), envelope=sech)
        assert r.value == pytest.approx(math.pi / math.cosh(3.5 * math.pi), abs=1e-12)
