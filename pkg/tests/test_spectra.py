from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cesarolab import spectra
from cesarolab.cesaro import Kind, OperatorSpec
from cesarolab.errors import ParameterError
from cesarolab.funcspace import Domain, Exponential, PowerKernel, ShiftedPower, SobolevParams, pairing

HALF = Domain.HALF_LINE


def C(beta, p=2.0):
    return OperatorSpec(Kind.CESARO, beta, HALF, p)


def Cs(beta, p=2.0):
    return OperatorSpec(Kind.CESARO_DUAL, beta, HALF, p)


class TestOperatorNorm:
    @pytest.mark.parametrize("p", [1.25, 1.5, 2.0, 3.0, 4.0, 10.0])
    def test_first_order(self, p):
        assert spectra.operator_norm(C(1.0, p)) == pytest.approx(p / (p - 1), rel=1e-13)
        assert spectra.operator_norm(Cs(1.0, p)) == pytest.approx(p, rel=1e-13)

    def test_second_order_p2(self):
        # Gamma(3) Gamma(1/2) / Gamma(5/2) = 8/3
        assert spectra.operator_norm(C(2.0)) == pytest.approx(8 / 3, rel=1e-13)

    def test_dual_unbounded_at_p1(self):
        assert spectra.operator_norm(Cs(1.0, 1.0)) == math.inf

    def test_cesaro_rejects_p1(self):
        with pytest.raises(ParameterError):
            C(1.0, 1.0)

    @given(st.floats(0.1, 6.0), st.floats(1.1, 8.0))
    @settings(max_examples=40)
    def test_norm_equals_curve_value_at_zero(self, beta, p):
        for spec in (C(beta, p), Cs(beta, p)):
            w0 = spectra.spectral_curve(spec, -1.0, 1.0, 3).points[1]
            assert w0.real == pytest.approx(spectra.operator_norm(spec), rel=1e-11)
            assert abs(w0.imag) < 1e-11 * abs(w0)


class TestSpectralCurve:
    @pytest.mark.parametrize("kind", [Kind.CESARO, Kind.CESARO_DUAL])
    @pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
    def test_first_order_circle(self, kind, p):
        curve = spectra.spectral_curve(OperatorSpec(kind, 1.0, HALF, p), -40, 40, 1601)
        assert spectra.circle_check(curve) < 1e-10

    def test_circle_centres(self):
        assert spectra.circle_center(C(1.0, 4.0)) == pytest.approx(2 / 3)
        assert spectra.circle_center(Cs(1.0, 4.0)) == pytest.approx(2.0)

    def test_circle_check_rejects_other_orders(self):
        with pytest.raises(ParameterError):
            spectra.circle_check(spectra.spectral_curve(C(2.0), n=11))

    @pytest.mark.parametrize("spec", [C(2.0), C(3.0, 4.0), Cs(2.0, 1.5), Cs(4.0)])
    def test_integer_product_form(self, spec):
        curve = spectra.spectral_curve(spec, -20, 20, 401)
        prod = spectra.integer_order_curve(spec, curve.params)
        assert np.max(np.abs(curve.points - prod) / np.abs(prod)) < 1e-10

    @pytest.mark.parametrize("n, p", [(1, 2.0), (2, 1.5), (3, 4.0)])
    def test_scaled_parametrization_traces_same_set(self, n, p):
        # n! p^n / prod (kp - 1 + i s) with s = t p is the same curve as n! / prod (k - 1/p + i t)
        spec = C(float(n), p)
        t = np.linspace(-20, 20, 401)
        s = t * p
        prod = np.ones(s.shape, dtype=complex)
        for k in range(1, n + 1):
            prod = prod * (k * p - 1 + 1j * s)
        alt = math.factorial(n) * p ** n / prod
        a = spectra.SpectrumCurve(t, spectra.integer_order_curve(spec, t), spec)
        b = spectra.SpectrumCurve(s, alt, spec)
        assert spectra.curve_distance(a, b) < 1e-12

    def test_product_form_needs_integer(self):
        with pytest.raises(ParameterError):
            spectra.integer_order_curve(C(1.5), [0.0])

    @pytest.mark.parametrize("spec", [C(0.5), C(2.5, 3.0), Cs(1.7, 1.2)])
    def test_schwarz_symmetry(self, spec):
        curve = spectra.spectral_curve(spec, -10, 10, 201)
        assert np.allclose(curve.points[::-1], np.conj(curve.points), rtol=1e-13, atol=0)

    def test_curve_tends_to_closure_point(self):
        curve = spectra.spectral_curve(C(1.0), 1e3, 1e4, 5)
        assert np.all(np.abs(curve.points) < 2e-3)
        assert curve.closure_point == 0

    def test_p2_self_duality(self):
        a = spectra.spectral_curve(C(1.5), -20, 20, 401)
        b = spectra.spectral_curve(Cs(1.5), -20, 20, 401)
        assert spectra.curve_distance(a, b) == 0.0

    @pytest.mark.parametrize("kw", [{"n": 1}, {"n": 2.5}, {"t_min": 1.0, "t_max": 0.0}])
    def test_bad_sampling(self, kw):
        with pytest.raises(ParameterError):
            spectra.spectral_curve(C(1.0), **kw)


class TestSerialization:
    def test_json_round_trip_is_bitwise(self):
        curve = spectra.spectral_curve(Cs(0.7, 3.0), -5, 5, 41)
        back = spectra.SpectrumCurve.from_json(curve.dumps())
        assert np.array_equal(back.params, curve.params)
        assert np.array_equal(back.points, curve.points)
        assert back.meta == curve.meta

    def test_csv_round_trip_is_bitwise(self, tmp_path):
        curve = spectra.spectral_curve(C(2.0), -5, 5, 41)
        path = tmp_path / "curve.csv"
        curve.to_csv(path)
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        assert np.array_equal(data[:, 0], curve.params)
        assert np.array_equal(data[:, 1] + 1j * data[:, 2], curve.points)

    def test_rejects_non_finite(self):
        with pytest.raises(ParameterError):
            spectra.SpectrumCurve(np.array([0.0]), np.array([np.nan]), C(1.0))


class TestGroup:
    @pytest.mark.parametrize("f", [Exponential(1.0), ShiftedPower(1.0, 2.0), PowerKernel(0.5)])
    def test_group_law(self, f):
        t = np.array([0.1, 1.0, 3.0])
        A, B = spectra.GroupElement(0.4, 1.5), spectra.GroupElement(-1.1, 1.5)
        lhs = spectra.group_action(A, spectra.group_action(B, f))(t)
        rhs = spectra.group_action(spectra.GroupElement(-0.7, 1.5), f)(t)
        assert np.allclose(lhs, rhs, rtol=1e-13, atol=0)

    def test_inverse(self):
        f, g = Exponential(2.0), spectra.GroupElement(1.3, 4.0)
        t = np.array([0.5, 2.0])
        back = spectra.group_action(g.inverse(), spectra.group_action(g, f))
        assert np.allclose(back(t), f(t), rtol=1e-14)

    def test_explicit_action(self):
        # T_{t,p} e_1(s) = e^(-t/p) exp(-e^(-t) s)
        v = spectra.group_action(spectra.GroupElement(1.0, 2.0), Exponential(1.0))(2.0)
        assert v == pytest.approx(math.exp(-0.5) * math.exp(-2 * math.exp(-1.0)), rel=1e-14)

    @pytest.mark.parametrize("kw", [{"t": 0.0, "p": 0.5}, {"t": math.inf}])
    def test_bad_element(self, kw):
        with pytest.raises(ParameterError):
            spectra.GroupElement(**kw)

    @pytest.mark.parametrize("p, alpha", [(2.0, 0.0), (4.0, 1.0)])
    def test_dual_group_pairing(self, p, alpha):
        f, g = ShiftedPower(1.0, 1.5), Exponential(1.0)
        lhs = pairing(spectra.group_action(spectra.GroupElement(0.5, p), f), g, alpha)
        rhs = pairing(f, spectra.group_action(spectra.GroupElement(-0.5, p / (p - 1)), g), alpha)
        assert lhs == pytest.approx(rhs, rel=1e-7)

    def test_isometry_and_resolvent(self):
        out = spectra.group_spectrum_check(2.0, 0.7, (Exponential(1.0),), mus=(0.5 + 0.3j,), points=(1.0,))
        assert out["isometry"] < 1e-10
        assert out["resolvent"] < 1e-6


class TestEmpiricalNorms:
    @pytest.mark.parametrize("spec", [C(1.0), Cs(1.0), C(2.0), C(1.0, 4.0)])
    @pytest.mark.parametrize("f", [Exponential(1.0), ShiftedPower(1.0, 1.0)])
    def test_ratio_below_norm(self, spec, f):
        r = spectra.empirical_norm_ratio(spec, f, SobolevParams(0.0, spec.p))
        assert 0 < r <= spectra.operator_norm(spec) * (1 + 1e-9)

    def test_first_order_weighted_norm(self):
        r = spectra.empirical_norm_ratio(C(1.0), ShiftedPower(1.0, 2.0), SobolevParams(1.0, 2.0))
        assert 0 < r <= 2.0

    @pytest.mark.parametrize("spec", [C(1.0), Cs(1.0)])
    def test_near_extremal_approaches_norm(self, spec):
        f = spectra.near_extremal(spec.p, 0.01)
        r = spectra.empirical_norm_ratio(spec, f, SobolevParams(0.0, spec.p))
        assert r / spectra.operator_norm(spec) >= 0.95

    def test_exponent_mismatch(self):
        with pytest.raises(ParameterError):
            spectra.empirical_norm_ratio(C(1.0), Exponential(1.0), SobolevParams(0.0, 3.0))
