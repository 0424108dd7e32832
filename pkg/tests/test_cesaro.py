from __future__ import annotations

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cesarolab import cesaro, specfun
from cesarolab.cesaro import Kind, OperatorSpec
from cesarolab.errors import ConvergenceError, DivergenceWarning, DomainError, ParameterError
from cesarolab.funcspace import (Constant, Domain, Exponential, Gaussian, GridFn, LinComb, MittagLefflerFn,
                                 Pointwise, PowerKernel, ShiftedPower, d_alpha, pairing, weyl_plus_at)
from cesarolab.verify import two_stage

E1_1 = 0.21938393439552027  # exponential integral E_1(1), mpmath
E1_2 = 0.048900510708061118  # E_1(2)
HALF = Domain.HALF_LINE
REAL = Domain.REAL_LINE


def C(beta, p=2.0, domain=HALF):
    return OperatorSpec(Kind.CESARO, beta, domain, p)


def Cs(beta, p=2.0, domain=HALF):
    return OperatorSpec(Kind.CESARO_DUAL, beta, domain, p)


FAMILY = [Exponential(1.0), ShiftedPower(1.0, 2.0), ShiftedPower(2.0, 1.5),
          LinComb(((1.0, Exponential(2.0)), (0.5, ShiftedPower(1.0, 1.0))))]


class TestOperatorSpec:
    def test_p_one_rejected_for_cesaro(self):
        with pytest.raises(ParameterError):
            C(1.0, p=1.0)

    def test_p_one_allowed_for_dual(self):
        assert Cs(1.0, p=1.0).a == 1.0

    @pytest.mark.parametrize("beta", [0.0, -1.0, math.inf, math.nan])
    def test_bad_beta(self, beta):
        with pytest.raises(ParameterError):
            C(beta)

    def test_string_kinds(self):
        assert OperatorSpec("dual", 1.0, "real-line", 2.0).kind is Kind.CESARO_DUAL


class TestDirectKernels:
    def test_constant_is_fixed(self):
        for b in (0.5, 1.0, 3.0):
            assert cesaro.cesaro_apply(C(b), Constant(1.0), 2.0) == pytest.approx(1.0, rel=1e-13)

    def test_exponential_average(self):
        assert cesaro.cesaro_apply(C(1.0), Exponential(1.0), 1.0).real == pytest.approx(1 - math.exp(-1), rel=1e-13)

    def test_power_kernel_eigenvalue(self):
        assert cesaro.cesaro_apply(C(1.0), PowerKernel(2.0), 1.0).real == pytest.approx(0.5, rel=1e-13)

    def test_second_order_exponential(self):
        t = np.array([0.2, 1.0, 3.0])
        exact = 2 * (np.exp(-t) - 1 + t) / t ** 2
        assert np.allclose(cesaro.cesaro_apply(C(2.0), Exponential(1.0), t), exact, rtol=1e-12)

    @pytest.mark.parametrize("gamma", [0.5, 1.0, 2.0, 3.3])
    @pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
    def test_eigenfunction_law(self, gamma, beta):
        t = np.array([0.1, 1.0, 10.0])
        f = PowerKernel(gamma)
        lam = math.gamma(beta + 1) * math.gamma(gamma) / math.gamma(beta + gamma)
        assert np.allclose(cesaro.cesaro_apply(C(beta), f, t), lam * f(t), rtol=1e-8, atol=0)

    @pytest.mark.parametrize("gamma", [0.25, 0.5, 0.75])
    @pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
    def test_dual_eigenfunction_law(self, gamma, beta):
        t = np.array([0.1, 1.0, 10.0])
        f = PowerKernel(gamma)
        lam = math.gamma(beta + 1) * math.gamma(1 - gamma) / math.gamma(beta - gamma + 1)
        assert np.allclose(cesaro.cesaro_dual_apply(Cs(beta), f, t), lam * f(t), rtol=1e-7, atol=0)

    def test_dual_exponential_integral(self):
        assert cesaro.cesaro_dual_apply(Cs(1.0), Exponential(1.0), 1.0).real == pytest.approx(E1_1, rel=1e-10)
        assert cesaro.cesaro_dual_apply(Cs(1.0), Exponential(1.0), 2.0).real == pytest.approx(E1_2, rel=1e-10)

    def test_dual_power_kernel(self):
        assert cesaro.cesaro_dual_apply(Cs(1.0), PowerKernel(0.5), 1.0).real == pytest.approx(
            2 / math.sqrt(math.pi), rel=1e-10)

    @pytest.mark.parametrize("beta", [0.5, 1.0])
    def test_mittag_leffler_identity(self, beta):
        t = np.array([0.5, 1.0, 2.0])
        f = MittagLefflerFn(beta, -1.0)
        rhs = (1 - np.asarray(f(t))) * math.gamma(beta + 1) / t ** beta
        assert np.allclose(cesaro.cesaro_apply(C(beta), f, t), rhs, rtol=1e-6, atol=0)

    def test_real_line_negative_t(self):
        g = Gaussian(1.0, 0.5)
        # C_1 g(t) = (1/t) int_0^t g for t < 0 too
        t = -1.3
        exact = math.sqrt(math.pi / 2) * (math.erf((0 - 0.5) / math.sqrt(2)) - math.erf((t - 0.5) / math.sqrt(2))) / (-t)
        assert cesaro.cesaro_apply(C(1.0, domain=REAL), g, t).real == pytest.approx(exact, rel=1e-11)

    def test_real_line_origin_value(self):
        assert cesaro.cesaro_apply(C(1.5, domain=REAL), Gaussian(1.0), 0.0) == pytest.approx(1.0)

    def test_dual_real_line_origin_warns(self):
        with pytest.warns(DivergenceWarning):
            v = cesaro.cesaro_dual_apply(Cs(1.0, domain=REAL), Gaussian(1.0), 0.0)
        assert v == 0

    def test_dual_half_line_origin_rejected(self):
        with pytest.raises(DomainError):
            cesaro.cesaro_dual_apply(Cs(1.0), Exponential(1.0), 0.0)

    def test_half_line_non_positive_t_rejected(self):
        with pytest.raises(DomainError):
            cesaro.cesaro_apply(C(1.0), Exponential(1.0), -1.0)

    def test_domain_mismatch(self):
        with pytest.raises(DomainError):
            cesaro.cesaro_apply(C(1.0), Gaussian(1.0), 1.0)

    def test_wrong_kind(self):
        with pytest.raises(ParameterError):
            cesaro.cesaro_apply(Cs(1.0), Exponential(1.0), 1.0)

    def test_non_integrable_origin(self):
        # t^-1.2 is not integrable at the origin, so the average cannot converge
        f = Pointwise(lambda t: np.asarray(t) ** -1.2, Domain.HALF_LINE, -1.2, 1.2)
        with pytest.raises(ConvergenceError):
            cesaro.cesaro_apply(C(1.0), f, 1.0)

    def test_grid_input(self):
        grid = np.geomspace(1e-4, 50, 3000)
        g = GridFn.sample(Exponential(1.0), grid)
        assert cesaro.cesaro_apply(C(1.0), g, 1.0).real == pytest.approx(1 - math.exp(-1), rel=1e-8)

    @given(st.floats(0.05, 20.0), st.floats(0.3, 4.0))
    @settings(max_examples=30, deadline=None)
    def test_positivity_and_bound(self, t, beta):
        # C_beta averages: for 0 < f <= 1 decreasing, f(t) <= C_beta f(t) <= 1
        v = cesaro.cesaro_apply(C(beta), Exponential(1.0), t).real
        assert math.exp(-t) - 1e-12 <= v <= 1 + 1e-12


class TestGroupForms:
    @pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
    @pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("f", FAMILY, ids=repr)
    def test_subordination_agrees(self, p, beta, f):
        t = np.array([0.3, 1.0, 4.0])
        assert np.allclose(cesaro.cesaro_subordination(C(beta, p), f, t), cesaro.cesaro_apply(C(beta, p), f, t),
                           atol=1e-8, rtol=0)
        assert np.allclose(cesaro.cesaro_dual_subordination(Cs(beta, p), f, t),
                           cesaro.cesaro_dual_apply(Cs(beta, p), f, t), atol=1e-8, rtol=0)

    def test_subordination_reference_values(self):
        assert cesaro.cesaro_subordination(C(2.0), Exponential(1.0), 1.0).real == pytest.approx(2 * math.exp(-1))
        assert cesaro.cesaro_dual_subordination(Cs(1.0), Exponential(1.0), 2.0).real == pytest.approx(E1_2)
        assert cesaro.cesaro_dual_subordination(Cs(1.0), PowerKernel(0.5), 1.0).real == pytest.approx(
            2 / math.sqrt(math.pi))

    def test_real_line_subordination(self):
        g = Gaussian(1.0, 0.3)
        t = np.array([-2.0, -0.5, 0.7, 1.9])
        assert np.allclose(cesaro.cesaro_subordination(C(1.5, domain=REAL), g, t),
                           cesaro.cesaro_apply(C(1.5, domain=REAL), g, t), atol=1e-8)
        assert np.allclose(cesaro.cesaro_dual_subordination(Cs(1.5, domain=REAL), g, t),
                           cesaro.cesaro_dual_apply(Cs(1.5, domain=REAL), g, t), atol=1e-8)

    @pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
    @pytest.mark.parametrize("f", FAMILY, ids=repr)
    def test_resolvents(self, p, f):
        t = np.array([0.3, 1.0, 4.0])
        assert np.allclose(cesaro.resolvent_apply(1 - 1 / p, p, f, t), cesaro.cesaro_apply(C(1.0, p), f, t),
                           atol=1e-7, rtol=0)
        assert np.allclose(cesaro.resolvent_apply(1 / p, p, f, t, reverse=True),
                           cesaro.cesaro_dual_apply(Cs(1.0, p), f, t), atol=1e-7, rtol=0)

    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_integer_resolvent_sum(self, n):
        f = Exponential(1.0)
        assert cesaro.cesaro_integer_resolvent(n, 2.0, f, 1.0) == pytest.approx(
            cesaro.cesaro_apply(C(n + 1.0), f, 1.0), abs=1e-7)

    def test_integer_resolvent_reference(self):
        assert cesaro.cesaro_integer_resolvent(1, 2.0, Exponential(1.0), 1.0).real == pytest.approx(
            2 * math.exp(-1), abs=1e-9)

    def test_resolvent_large_mu(self):
        f = Exponential(1.0)
        assert 1e3 * cesaro.resolvent_apply(1e3, 2.0, f, 1.0).real == pytest.approx(f(1.0), rel=1e-3)

    def test_resolvent_needs_positive_real_part(self):
        with pytest.raises(ParameterError):
            cesaro.resolvent_apply(1j, 2.0, Exponential(1.0), 1.0)

    def test_generator_values(self):
        assert cesaro.generator_apply(2.0, Exponential(1.0), 1.0) == pytest.approx(math.exp(-1) / 2)
        assert cesaro.generator_apply(2.0, ShiftedPower(1.0, 1.0), 1.0) == pytest.approx(0.0, abs=1e-16)

    @pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
    def test_generator_inverts_resolvent(self, p):
        f, lam = ShiftedPower(1.0, 2.0), 1 - 1 / p
        for s in (0.5, 1.0, 2.0):
            h = 1e-4 * s
            r = cesaro.resolvent_apply(lam, p, f, np.array([s - h, s, s + h]))
            lam_r = -s * (r[2] - r[0]) / (2 * h) - r[1] / p
            assert abs(lam * r[1] - lam_r - f(s)) < 1e-6

    @pytest.mark.parametrize("f", FAMILY, ids=repr)
    def test_averaging_ode(self, f):
        for t in (0.3, 1.0, 4.0):
            h = 1e-3 * t
            v = [x * cesaro.cesaro_apply(C(1.0), f, x) for x in (t - 2 * h, t - h, t + h, t + 2 * h)]
            d = (v[0] - 8 * v[1] + 8 * v[2] - v[3]) / (12 * h)
            assert abs(d - f(t)) < 1e-6


PTS8 = np.array([0.2, 0.5, 0.8, 1.0, 1.5, 2.5, 4.0, 7.0])


class TestComposition:
    def test_reference_value(self):
        v = cesaro.composition_apply(1.0, 1.0, Exponential(1.0), 1.0).real
        assert v == pytest.approx(1 - math.exp(-1) + E1_1, abs=1e-9)

    def test_sum_rule(self):
        f = ShiftedPower(1.0, 2.0)
        lhs = cesaro.composition_apply(1.0, 1.0, f, PTS8)
        rhs = cesaro.cesaro_apply(C(1.0), f, PTS8) + cesaro.cesaro_dual_apply(Cs(1.0), f, PTS8)
        assert np.allclose(lhs, rhs, atol=1e-6, rtol=0)

    @pytest.mark.parametrize("alpha, beta", [(1.0, 1.0), (1.5, 0.7), (0.6, 2.0)])
    def test_kernel_matches_two_stage(self, alpha, beta):
        f = Exponential(1.0)
        assert np.allclose(cesaro.composition_apply(alpha, beta, f, PTS8), two_stage(alpha, beta, f, PTS8),
                           atol=1e-5, rtol=0)

    @pytest.mark.parametrize("alpha, beta", [(1.0, 1.0), (1.5, 0.7)])
    def test_commutation(self, alpha, beta):
        f = Exponential(1.0)
        assert np.allclose(two_stage(alpha, beta, f, PTS8), two_stage(alpha, beta, f, PTS8, "cesaro-first"),
                           atol=1e-5, rtol=0)

    def test_iterate_is_not_second_order(self):
        e1 = Exponential(1.0)
        once = cesaro.cesaro_image(C(1.0), e1)
        gap = abs(cesaro.cesaro_apply(C(1.0), once, 1.0) - cesaro.cesaro_apply(C(2.0), e1, 1.0))
        assert gap > 1e-3

    def test_rejects_bad_orders(self):
        with pytest.raises(ParameterError):
            cesaro.composition_apply(0.0, 1.0, Exponential(1.0), 1.0)


class TestBatchAndCommutation:
    @pytest.mark.parametrize("dual", [False, True])
    @pytest.mark.parametrize("order", [0, 1, 2, 3])
    def test_batch_matches_pointwise(self, dual, order):
        f = ShiftedPower(1.0, 2.0)
        x = np.geomspace(0.05, 30, 17)
        v = cesaro.cesaro_batch(1.5, f, x, dual, order)
        ref = [cesaro._pointwise_derivative(1.5, f, s, dual, order, cesaro._Q) for s in x]
        assert np.allclose(v, ref, rtol=1e-9, atol=1e-12)

    def test_batch_order_zero_is_operator(self):
        f = Exponential(1.0)
        x = np.array([0.3, 1.0, 3.0])
        assert np.allclose(cesaro.cesaro_batch(2.0, f, x), cesaro.cesaro_apply(C(2.0), f, x), rtol=1e-10)

    @pytest.mark.parametrize("alpha", [0.5, 1.0])
    def test_commutes_with_d_alpha(self, alpha):
        f = ShiftedPower(1.0, 1.0)
        t = np.array([0.5, 1.0, 2.0])
        img = cesaro.cesaro_image(C(1.0), f)
        lhs = t ** alpha * np.asarray(weyl_plus_at(img, alpha, t)) / math.gamma(alpha + 1)
        rhs = cesaro.cesaro_apply(C(1.0), d_alpha(f, alpha), t)
        assert np.allclose(lhs, rhs, atol=1e-6, rtol=0)

    @pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("alpha", [0.0, 1.0])
    def test_duality(self, beta, alpha):
        f, g = Exponential(1.0), ShiftedPower(1.0, 2.0)
        lhs = pairing(cesaro.cesaro_image(C(beta), f), g, alpha)
        rhs = pairing(f, cesaro.cesaro_image(Cs(beta), g), alpha)
        assert abs(lhs - rhs) <= 1e-6 * abs(rhs)

    def test_apply_operator_dispatch(self):
        f = Exponential(1.0)
        assert cesaro.apply_operator(Cs(1.0), f, 1.0) == cesaro.cesaro_dual_apply(Cs(1.0), f, 1.0)
        assert cesaro.apply_operator(C(1.0), f, 1.0) == cesaro.cesaro_apply(C(1.0), f, 1.0)


def test_no_warnings_on_regular_evaluation():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        cesaro.cesaro_dual_apply(Cs(1.0, domain=REAL), Gaussian(1.0), np.array([-1.0, 1.0]))


def test_dual_eigenvalue_at_half():
    # Gamma(2) Gamma(1/2) / Gamma(3/2) = 2
    assert specfun.gamma_ratio(0.5, 1.5).real * math.gamma(2) == pytest.approx(2.0, rel=1e-14)
