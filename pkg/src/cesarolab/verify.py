"""Registry of named numerical invariants, grouped into suites.

Every check returns a residual that is compared with its tolerance, either
as an upper bound (the usual case) or as a lower bound for witnesses of
non-equality.  Failures and exceptions are recorded per check, never fatal.
"""

from __future__ import annotations

import json
import math
import time
import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import cesaro, fourier, quad, specfun, spectra
from .cesaro import Kind, OperatorSpec
from .errors import CesaroLabError, DivergenceWarning, ParameterError
from .funcspace import (Domain, Exponential, Gaussian, LinComb, MittagLefflerFn, Pointwise,
                        PowerKernel, ShiftedPower, SobolevParams, d_alpha, decay_sup, pairing,
                        sobolev_norm, weyl_plus_at, weyl_plus_closed, convolve_at)

__all__ = ["SUITES", "CheckResult", "Report", "register", "run_suite", "checks_in"]

SUITES = ("specfun", "weyl", "cesaro", "spectra", "fourier")


@dataclass(frozen=True)
class _Check:
    suite: str
    name: str
    tolerance: float
    paper_ref: str
    fn: Callable[[], float]
    lower: bool = False


@dataclass
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool
    paper_ref: str
    seconds: float = 0.0
    error: str | None = None

    def to_json(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


@dataclass
class Report:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"suite": self.suite, "checks": [c.to_json() for c in self.checks]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


_REGISTRY: list[_Check] = []


def register(suite: str, name: str, tolerance: float, paper_ref: str, lower: bool = False):
    """Decorator adding a residual-returning function to a suite."""
    if suite not in SUITES:
        raise ParameterError(f"unknown suite {suite!r}")

    def deco(fn):
        _REGISTRY.append(_Check(suite, name, tolerance, paper_ref, fn, lower))
        return fn
    return deco


def checks_in(suite: str) -> list[_Check]:
    if suite == "all":
        return list(_REGISTRY)
    if suite not in SUITES:
        raise ParameterError(f"unknown suite {suite!r}; expected one of {SUITES + ('all',)}")
    return [c for c in _REGISTRY if c.suite == suite]


def _run(c: _Check) -> CheckResult:
    t0 = time.perf_counter()
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DivergenceWarning)
            r = float(c.fn())
        ok = (r >= c.tolerance) if c.lower else (r <= c.tolerance)
        ok = ok and math.isfinite(r)
        return CheckResult(c.name, r, c.tolerance, ok, c.paper_ref, time.perf_counter() - t0)
    except (CesaroLabError, ArithmeticError, ValueError, TypeError) as exc:
        return CheckResult(c.name, math.nan, c.tolerance, False, c.paper_ref,
                           time.perf_counter() - t0, f"{type(exc).__name__}: {exc}")


def run_suite(suite: str = "all", names=None) -> Report:
    """Run every check of ``suite`` (or only those in ``names``)."""
    sel = checks_in(suite)
    if names is not None:
        sel = [c for c in sel if c.name in set(names)]
    return Report(suite, [_run(c) for c in sel])


def _rel(a, b) -> float:
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def _abs(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex))))


# ---------------------------------------------------------------------------
# specfun and quadrature


@register("specfun", "log_gamma_reflection", 1e-10, "Gamma reflection formula")
def _lg_reflection():
    rng = np.random.default_rng(1)
    z = rng.uniform(-9.9, 9.9, 100) + 1j * rng.uniform(-2.0, 2.0, 100)
    z = np.where(np.abs(z.real - np.round(z.real)) < 1e-3, z + 0.01, z)
    lhs = np.exp(specfun.log_gamma(z) + specfun.log_gamma(1 - z))
    return _rel(lhs, np.pi / np.sin(np.pi * z))


@register("specfun", "gamma_ratio_recurrence", 1e-12, "Gamma recurrence")
def _gr_recurrence():
    zs = [0.3, 2.5, 7.1 + 3j, -0.4 + 0.2j, 0.5 + 20j]
    return max(abs(specfun.gamma_ratio(z + 1, z) - z) / abs(z) for z in zs)


@register("specfun", "hyp2f1_pfaff", 1e-9, "Pfaff transformation of 2F1")
def _pfaff():
    rng = np.random.default_rng(2)
    x = rng.uniform(-0.9, 0.9, 40)
    res = 0.0
    for a, b, c in [(1.0, 0.5, 2.0), (2.5, 1.2, 3.7), (0.3, -1.4, 1.1)]:
        lhs = (1 - x) ** a * specfun.hyp2f1(a, b, c, x)
        rhs = specfun.hyp2f1(a, c - b, c, x / (x - 1))
        res = max(res, _rel(lhs, rhs))
    return res


@register("specfun", "hyp2f1_logarithm", 1e-10, "2F1(1,1;2;x) = -log(1-x)/x")
def _hyp_log():
    x = np.array([-0.95, -0.5, -0.1, 0.1, 0.4, 0.6, 0.9, 0.99])
    return _rel(specfun.hyp2f1(1, 1, 2, x), -np.log1p(-x) / x)


@register("specfun", "mittag_leffler_exponential", 1e-12, "E_1(z) = e^z")
def _ml_exp():
    zs = [-5.0, -2.5, -0.3, 0.0, 1.0, 3.0, 5.0, 3j, -2 + 2j, 4 - 3j]
    return max(abs(specfun.mittag_leffler(1.0, z) - np.exp(z)) / abs(np.exp(z)) for z in zs)


@register("specfun", "jacobi_polynomial_exactness", 1e-13, "Gauss-Jacobi exactness")
def _jacobi_exact():
    n, a, b = 16, -0.5, 0.7
    x, w = quad.gauss_jacobi(n, a, b)
    res = 0.0
    for k in range(2 * n):
        exact = math.exp(math.lgamma(a + 1) + math.lgamma(b + k + 1) - math.lgamma(a + b + k + 2))
        res = max(res, abs(np.sum(w * x ** k) - exact) / exact)
    return res


@register("specfun", "halfline_subordination_weight", 1e-8, "Beta-function moment of the subordination weight")
def _halfline_weight():
    res = 0.0
    for p in (1.5, 2.0, 4.0):
        for a in (1 - 1 / p, 1 / p):
            for beta in (0.5, 1.0, 2.0, 3.7):
                F = lambda r: beta * (-np.expm1(-r)) ** (beta - 1) * np.exp(-a * r)  # noqa: E731
                v = quad.integrate_halfline(F, origin_power=beta - 1).value
                exact = math.gamma(beta + 1) * specfun.gamma_ratio(a, beta + a).real
                res = max(res, abs(v - exact) / exact)
    return res


def quadrature_battery():
    """Twenty (integrator, exact value) pairs with known closed forms, each inside its rule's scope."""
    Q = quad.DEFAULT_SPEC
    rows = [
        (lambda: quad.integrate_finite(np.exp, 0, 1), math.e - 1),
        (lambda: quad.integrate_finite(np.sin, 0, math.pi), 2.0),
        (lambda: quad.integrate_finite(lambda x: 1 / (1 + x * x), -1, 1), math.pi / 2),
        (lambda: quad.integrate_finite(np.sqrt, 0, 1), 2 / 3),
        (lambda: quad.integrate_finite(np.log1p, 0, 1), 2 * math.log(2) - 1),
        (lambda: quad.integrate_finite(lambda x: np.abs(x - 0.3), 0, 1, breakpoints=[0.3]), 0.29),
        (lambda: quad.integrate_finite(lambda x: np.cos(30 * x), 0, 1), math.sin(30) / 30),
        (lambda: quad.integrate_weighted(lambda x: np.ones_like(x), 0, 1, -0.5, 0.0), 2.0),
        (lambda: quad.integrate_weighted(np.cos, 0, 1, -0.5, 0.0), 1.8090484758005438),
        (lambda: quad.integrate_weighted(lambda x: x, 0, 1, 0.0, -0.75), 16 / 5),
        (lambda: quad.integrate_jacobi(lambda x: np.ones_like(x), 0.5, 0.5), math.pi / 8),
        (lambda: quad.integrate_jacobi(np.exp, 0.0, -0.5), 2.9253034918143632),
        (lambda: quad.integrate_halfline(lambda r: np.exp(-r)), 1.0),
        (lambda: quad.integrate_halfline(lambda r: r * np.exp(-2 * r)), 0.25),
        (lambda: quad.integrate_halfline(lambda r: r ** -0.5 * np.exp(-r), origin_power=-0.5), math.sqrt(math.pi)),
        (lambda: quad.integrate_halfline(lambda r: np.exp(-r) * np.cos(r)), 0.5),
        (lambda: quad.integrate_positive(lambda t: 1 / (1 + t) ** 2), 1.0),
        (lambda: quad.integrate_real(lambda x: np.exp(-x * x)), math.sqrt(math.pi)),
        (lambda: quad.integrate_real(lambda x: 1 / np.cosh(x), Q), math.pi),
        (lambda: quad.integrate_positive(lambda t: 1 / (1 + t ** 3)), 2 * math.pi / (3 * math.sqrt(3))),
    ]
    return rows


@register("specfun", "quadrature_error_honesty", 1.0, "reported quadrature errors bound the true error")
def _honesty():
    worst = 0.0
    for run, exact in quadrature_battery():
        r = run()
        err = abs(complex(r.value) - exact)
        bound = 3.0 * r.error + 4 * np.finfo(float).eps * abs(exact)
        worst = max(worst, err / bound)
    return worst


# ---------------------------------------------------------------------------
# Weyl calculus


def numeric_only(f):
    """Hide the closed-form rule of ``f`` so the quadrature path is exercised."""
    return Pointwise(f, f.domain, f.origin_power, f.decay_power, f.derivative, "numeric")


_T = np.array([0.1, 0.5, 1.0, 2.0, 5.0])


@register("weyl", "shiftedpower_closed_rule", 1e-7, "Weyl derivative of (a+t)^(-beta)")
def _sp_rule():
    res = 0.0
    for a, b in [(1.0, 1.0), (2.0, 1.5), (0.5, 0.8)]:
        f = ShiftedPower(a, b)
        for al in (0.5, 1.0, 1.5, 2.3):
            exact = specfun.gamma_ratio(al + b, b) * (a + _T) ** (-(al + b))
            res = max(res, _rel(weyl_plus_at(numeric_only(f), al, _T), exact))
    return res


@register("weyl", "dilation_scaling_law", 1e-8, "scaling law of the Weyl derivative")
def _escala():
    res = 0.0
    for f in (ShiftedPower(1.0, 1.5), Exponential(1.0)):
        for lam in (0.5, 2.0, 3.0):
            fl = Pointwise(lambda t, f=f, lam=lam: f(lam * np.asarray(t)), f.domain, 0.0, f.decay_power,
                           lambda t, k, f=f, lam=lam: lam ** k * f.derivative(lam * np.asarray(t), k))
            for al in (0.5, 1.0, 1.5):
                lhs = weyl_plus_at(fl, al, _T)
                rhs = lam ** al * np.asarray(weyl_plus_closed(f, al)(lam * _T))
                res = max(res, _rel(lhs, rhs))
    return res


@register("weyl", "weyl_composition", 1e-7, "semigroup law of Weyl derivatives")
def _weyl_comp():
    f = ShiftedPower(1.0, 1.0)
    res = 0.0
    for a in (0.5, 1.0):
        for b in (0.5, 1.0):
            inner = weyl_plus_closed(f, b)
            lhs = weyl_plus_at(numeric_only(inner), a, _T)
            rhs = weyl_plus_closed(f, a + b)(_T)
            res = max(res, _rel(lhs, rhs))
    return res


@register("weyl", "d_alpha_isometry", 1e-8, "D^alpha is an isometry onto L^p")
def _isometry():
    res = 0.0
    for f in (ShiftedPower(1.0, 1.0), ShiftedPower(2.0, 1.5), Exponential(1.0)):
        for al, p in [(0.5, 2.0), (1.0, 2.0), (1.5, 3.0), (1.0, 1.5)]:
            g = d_alpha(f, al)
            lp = quad.integrate_positive(lambda t: np.abs(np.asarray(g(t))) ** p).value ** (1 / p)
            ref = sobolev_norm(f, SobolevParams(al, p))
            res = max(res, abs(lp - ref) / ref)
    return res


@register("weyl", "decay_bound_corrected", 0.0, "pointwise decay bound from the weighted norm")
def _decay_bound():
    # sup t^(1/p)|f| <= (p - 1)^(1/p') ||f||_{1,p}; returns the excess, <= 0 when it holds
    res = -math.inf
    for f in (ShiftedPower(1.0, 1.0), ShiftedPower(1.0, 2.0), Exponential(1.0)):
        for p in (1.5, 2.0, 4.0):
            pp = p / (p - 1)
            bound = (p - 1) ** (1 / pp) * sobolev_norm(f, SobolevParams(1.0, p))
            res = max(res, decay_sup(f, p) - bound)
    return res


@register("weyl", "convolution_vs_rectangle_rule", 1e-6, "half-line convolution")
def _convolution():
    f, g = Exponential(1.0), ShiftedPower(1.0, 2.0)
    rng = np.random.default_rng(3)
    ts = rng.uniform(0.05, 6.0, 16)
    res = 0.0
    for t in ts:
        n = 200_000
        s = (np.arange(n) + 0.5) * (t / n)
        brute = np.sum(f(t - s) * g(s)) * (t / n)
        res = max(res, abs(convolve_at(f, g, t) - brute))
    return res


@register("weyl", "pairing_isometry", 1e-8, "pairing through D^alpha")
def _pair_iso():
    res = 0.0
    pairs = [(ShiftedPower(1.0, 1.0), Exponential(1.0)), (ShiftedPower(2.0, 1.5), ShiftedPower(1.0, 0.8))]
    for f, g in pairs:
        for al in (0.5, 1.0):
            df, dg = d_alpha(f, al), d_alpha(g, al)
            rhs = quad.integrate_positive(lambda t: np.asarray(df(t)) * np.asarray(dg(t))).value
            lhs = pairing(numeric_only(f), numeric_only(g), al)
            res = max(res, abs(lhs - rhs) / abs(rhs))
    return res


# ---------------------------------------------------------------------------
# Cesaro operators

_HALF = Domain.HALF_LINE


def _C(beta, p=2.0, domain=_HALF):
    return OperatorSpec(Kind.CESARO, beta, domain, p)


def _Cs(beta, p=2.0, domain=_HALF):
    return OperatorSpec(Kind.CESARO_DUAL, beta, domain, p)


@register("cesaro", "eigenfunction_law", 1e-8, "power kernels are eigenfunctions of C_beta")
def _eigen():
    res, t = 0.0, np.array([0.1, 1.0, 10.0])
    for g in (0.5, 1.0, 2.0, 3.3):
        for b in (0.5, 1.0, 2.0):
            f = PowerKernel(g)
            lam = math.gamma(b + 1) * specfun.gamma_ratio(g, b + g).real
            res = max(res, _rel(cesaro.cesaro_apply(_C(b), f, t), lam * f(t)))
    return res


@register("cesaro", "dual_eigenfunction_law", 1e-7, "power kernels are eigenfunctions of C*_beta")
def _dual_eigen():
    res, t = 0.0, np.array([0.1, 1.0, 10.0])
    for g in (0.25, 0.5, 0.75):
        for b in (0.5, 1.0, 2.0):
            f = PowerKernel(g)
            lam = math.gamma(b + 1) * specfun.gamma_ratio(1 - g, b - g + 1).real
            res = max(res, _rel(cesaro.cesaro_dual_apply(_Cs(b), f, t), lam * f(t)))
    return res


@register("cesaro", "mittag_leffler_identity", 1e-6, "Mittag-Leffler functions under C_beta")
def _ml_identity():
    res, t, lam = 0.0, np.array([0.5, 1.0, 2.0]), 1.0
    for b in (0.5, 1.0):
        f = MittagLefflerFn(b, -lam)
        rhs = (1 - np.asarray(f(t))) * math.gamma(b + 1) / (lam * t ** b)
        res = max(res, _rel(cesaro.cesaro_apply(_C(b), f, t), rhs))
    return res


@register("cesaro", "second_order_exponential", 1e-10, "C_2 of an exponential")
def _c2_exp():
    t = np.array([0.2, 1.0, 3.0])
    exact = 2 * (np.exp(-t) - 1 + t) / t ** 2
    return _rel(cesaro.cesaro_apply(_C(2.0), Exponential(1.0), t), exact)


@register("cesaro", "iterate_differs_from_second_order", 1e-3, "C_1 squared is not C_2", lower=True)
def _witness():
    e1 = Exponential(1.0)
    once = cesaro.cesaro_image(_C(1.0), e1)
    return abs(cesaro.cesaro_apply(_C(1.0), once, 1.0) - cesaro.cesaro_apply(_C(2.0), e1, 1.0))


_FAMILY = (Exponential(1.0), ShiftedPower(1.0, 2.0), ShiftedPower(2.0, 1.5))


@register("cesaro", "subordination_agreement", 1e-8, "subordination formulas for C_beta and C*_beta")
def _subordination():
    res, t = 0.0, np.array([0.3, 1.0, 4.0])
    for p in (1.5, 2.0, 4.0):
        for b in (0.5, 1.0, 2.0):
            for f in _FAMILY:
                res = max(res, _abs(cesaro.cesaro_subordination(_C(b, p), f, t),
                                    cesaro.cesaro_apply(_C(b, p), f, t)))
                res = max(res, _abs(cesaro.cesaro_dual_subordination(_Cs(b, p), f, t),
                                    cesaro.cesaro_dual_apply(_Cs(b, p), f, t)))
    return res


@register("cesaro", "resolvent_representation", 1e-7, "C_1 and C*_1 as resolvents of the generator")
def _resolvent():
    res, t = 0.0, np.array([0.3, 1.0, 4.0])
    for p in (1.5, 2.0, 4.0):
        for f in _FAMILY:
            res = max(res, _abs(cesaro.resolvent_apply(1 - 1 / p, p, f, t), cesaro.cesaro_apply(_C(1.0, p), f, t)))
            res = max(res, _abs(cesaro.resolvent_apply(1 / p, p, f, t, reverse=True),
                                cesaro.cesaro_dual_apply(_Cs(1.0, p), f, t)))
            for n in (1, 2):
                res = max(res, _abs(cesaro.cesaro_integer_resolvent(n, p, f, t),
                                    cesaro.cesaro_apply(_C(n + 1.0, p), f, t)))
    return res


@register("cesaro", "averaging_ode", 1e-6, "d/dt [t C_1 f] = f")
def _ode():
    res = 0.0
    for f in _FAMILY:
        for t in (0.3, 1.0, 4.0):
            h = 1e-3 * t
            v = [x * cesaro.cesaro_apply(_C(1.0), f, x) for x in (t - 2 * h, t - h, t + h, t + 2 * h)]
            d = (v[0] - 8 * v[1] + 8 * v[2] - v[3]) / (12 * h)
            res = max(res, abs(d - f(t)))
    return res


_PTS8 = np.array([0.2, 0.5, 0.8, 1.0, 1.5, 2.5, 4.0, 7.0])


def two_stage(alpha, beta, f, t, order="dual-first"):
    """C_alpha C*_beta f (dual-first) or C*_beta C_alpha f by nested pointwise quadrature."""
    if order == "dual-first":
        return cesaro.cesaro_apply(_C(alpha), cesaro.cesaro_image(_Cs(beta), f), t)
    return cesaro.cesaro_dual_apply(_Cs(beta), cesaro.cesaro_image(_C(alpha), f), t)


@register("cesaro", "composition_kernel", 1e-5, "hypergeometric kernel of C_alpha C*_beta")
def _composition():
    res = 0.0
    f = Exponential(1.0)
    for a, b in [(1.0, 1.0), (1.5, 0.7)]:
        res = max(res, _abs(cesaro.composition_apply(a, b, f, _PTS8), two_stage(a, b, f, _PTS8)))
    return res


@register("cesaro", "c1_c1dual_sum_rule", 1e-6, "C_1 C*_1 = C_1 + C*_1")
def _sum_rule():
    f = Exponential(1.0)
    lhs = two_stage(1.0, 1.0, f, _PTS8)
    rhs = cesaro.cesaro_apply(_C(1.0), f, _PTS8) + cesaro.cesaro_dual_apply(_Cs(1.0), f, _PTS8)
    return _abs(lhs, rhs)


@register("cesaro", "commutation", 1e-5, "C_alpha and C*_beta commute")
def _commute():
    res = 0.0
    f = Exponential(1.0)
    for a, b in [(1.0, 1.0), (1.5, 0.7)]:
        res = max(res, _abs(two_stage(a, b, f, _PTS8), two_stage(a, b, f, _PTS8, "cesaro-first")))
    return res


@register("cesaro", "commutes_with_d_alpha", 1e-6, "D^alpha commutes with C_beta")
def _commute_d():
    f = ShiftedPower(1.0, 1.0)
    t = np.array([0.5, 1.0, 2.0])
    res = 0.0
    for al in (0.5, 1.0):
        img = cesaro.cesaro_image(_C(1.0), f)
        lhs = t ** al * np.asarray(weyl_plus_at(img, al, t)) / math.gamma(al + 1)
        rhs = cesaro.cesaro_apply(_C(1.0), d_alpha(f, al), t)
        res = max(res, _abs(lhs, rhs))
    return res


@register("cesaro", "duality_pairing", 1e-6, "C*_beta is the dual of C_beta")
def _duality():
    f, g = Exponential(1.0), ShiftedPower(1.0, 2.0)
    res = 0.0
    for b in (0.5, 1.0, 2.0):
        for al in (0.0, 1.0):
            lhs = pairing(cesaro.cesaro_image(_C(b), f), g, al)
            rhs = pairing(f, cesaro.cesaro_image(_Cs(b), g), al)
            res = max(res, abs(lhs - rhs) / abs(rhs))
    return res


@register("cesaro", "p1_rejection", 0.0, "C_beta is unbounded on L^1")
def _p1():
    try:
        OperatorSpec(Kind.CESARO, 1.0, _HALF, 1.0)
    except ParameterError:
        return 0.0
    return 1.0


@register("cesaro", "dual_origin_divergence_warning", 0.0, "C*_beta at t = 0 on the real line")
def _divergence():
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        v = cesaro.cesaro_dual_apply(_Cs(1.0, domain=Domain.REAL_LINE), Gaussian(1.0), 0.0)
    emitted = any(issubclass(x.category, DivergenceWarning) for x in w)
    return 0.0 if emitted and v == 0 else 1.0


# ---------------------------------------------------------------------------
# norms and spectra


@register("spectra", "norm_constants", 1e-12, "Hardy constants p/(p-1) and p")
def _norms():
    res = 0.0
    for p in (1.5, 2.0, 4.0):
        res = max(res, abs(spectra.operator_norm(_C(1.0, p)) - p / (p - 1)) / (p / (p - 1)))
        res = max(res, abs(spectra.operator_norm(_Cs(1.0, p)) - p) / p)
    return res


_NORM_FAMILY = (Exponential(1.0), ShiftedPower(1.0, 1.0), ShiftedPower(2.0, 2.0), ShiftedPower(0.5, 1.5))


@register("spectra", "norm_upper_bound", 1e-6, "test-family ratios stay below the norm")
def _norm_bound():
    excess = -math.inf
    for kind in (Kind.CESARO, Kind.CESARO_DUAL):
        for b, p, al in [(1.0, 2.0, 0.0), (2.0, 2.0, 0.0), (1.0, 4.0, 0.0), (1.0, 2.0, 1.0)]:
            spec = OperatorSpec(kind, b, _HALF, p)
            bound = spectra.operator_norm(spec)
            for f in _NORM_FAMILY:
                r = spectra.empirical_norm_ratio(spec, f, SobolevParams(al, p))
                excess = max(excess, r - bound)
    return excess


@register("spectra", "near_extremal_fraction", 0.95, "near-extremal family approaches the norm", lower=True)
def _near_extremal():
    worst = math.inf
    for spec in (_C(1.0, 2.0), _C(2.0, 2.0), _Cs(1.0, 2.0), _C(1.0, 4.0)):
        f = spectra.near_extremal(spec.p, 0.01)
        r = spectra.empirical_norm_ratio(spec, f, SobolevParams(0.0, spec.p))
        worst = min(worst, r / spectra.operator_norm(spec))
    return worst


@register("spectra", "circle_law", 1e-10, "beta = 1 spectra are circles")
def _circles():
    res = 0.0
    for kind in (Kind.CESARO, Kind.CESARO_DUAL):
        for p in (1.5, 2.0, 4.0):
            curve = spectra.spectral_curve(OperatorSpec(kind, 1.0, _HALF, p), -20, 20, 401)
            res = max(res, spectra.circle_check(curve))
    return res


@register("spectra", "p2_self_duality", 1.0, "Cesaro and dual spectra coincide at p = 2")
def _self_dual():
    res = 0.0
    for b in (0.5, 1.0, 2.5):
        c1 = spectra.spectral_curve(_C(b), -40, 40, 1601)
        c2 = spectra.spectral_curve(_Cs(b), -40, 40, 1601)
        resolution = np.max(np.abs(np.diff(c1.points)))
        res = max(res, spectra.curve_distance(c1, c2) / (2 * resolution))
    return res


@register("spectra", "integer_order_product", 1e-10, "product form of integer-order spectra")
def _integer_curve():
    res = 0.0
    for kind in (Kind.CESARO, Kind.CESARO_DUAL):
        for n in (1, 2):
            for p in (1.5, 2.0, 4.0):
                spec = OperatorSpec(kind, float(n), _HALF, p)
                c = spectra.spectral_curve(spec, -20, 20, 401)
                res = max(res, _abs(c.points, spectra.integer_order_curve(spec, c.params)))
    return res


@register("spectra", "schwarz_symmetry", 1e-12, "w(-t) is the conjugate of w(t)")
def _schwarz():
    c = spectra.spectral_curve(_C(1.7, 3.0), -30, 30, 601)
    return _abs(c.points[::-1], np.conj(c.points))


@register("spectra", "group_law", 1e-12, "T_s T_t = T_(s+t)")
def _group_law():
    t = np.array([0.1, 1.0, 3.0])
    res = 0.0
    for f in _FAMILY + (PowerKernel(0.5),):
        for s, u, p in [(0.3, 0.9, 2.0), (-1.2, 0.4, 1.5), (2.0, -2.0, 4.0)]:
            A, B = spectra.GroupElement(s, p), spectra.GroupElement(u, p)
            lhs = spectra.group_action(A, spectra.group_action(B, f))(t)
            rhs = spectra.group_action(spectra.GroupElement(s + u, p), f)(t)
            res = max(res, _rel(lhs, rhs))
    return res


@register("spectra", "dual_group_pairing", 1e-7, "T_(t,p) and T_(-t,p') are dual")
def _dual_group():
    f, g = ShiftedPower(1.0, 1.5), Exponential(1.0)
    res = 0.0
    for p, al in [(2.0, 0.0), (2.0, 1.0), (4.0, 1.0)]:
        pp = p / (p - 1)
        for t in (0.5, -1.0):
            lhs = pairing(spectra.group_action(spectra.GroupElement(t, p), f), g, al)
            rhs = pairing(f, spectra.group_action(spectra.GroupElement(-t, pp), g), al)
            res = max(res, abs(lhs - rhs) / abs(rhs))
    return res


@register("spectra", "group_isometry", 1e-10, "T_(t,p) preserves the weighted norm")
def _group_iso():
    return spectra.group_spectrum_check(2.0, 0.7, (ShiftedPower(1.0, 1.0), Exponential(1.0)), mus=())["isometry"]


@register("spectra", "resolvent_solvability", 1e-6, "resolvent integrals invert mu - L for Re mu > 0")
def _resolvent_solve():
    out = spectra.group_spectrum_check(2.0, 0.7, (ShiftedPower(1.0, 1.0), Exponential(1.0)))
    return out["resolvent"]


# ---------------------------------------------------------------------------
# Fourier analysis


@register("fourier", "gaussian_transform_quadrature", 1e-8, "Gaussian transform")
def _gauss_ft():
    res = 0.0
    for s, t in [(1.0, 0.0), (2.0, 1.0), (0.5, 3.0)]:
        exact = s * math.sqrt(2 * math.pi) * math.exp(-0.5 * (s * t) ** 2)
        res = max(res, abs(fourier.fourier_at(Gaussian(s), t, method="quadrature") - exact))
    return res


@register("fourier", "conjugate_symmetry", 1e-10, "real functions have Hermitian transforms")
def _conj():
    f = Gaussian(1.0, 0.7)
    t = np.array([0.3, 1.0, 2.5])
    return _abs(fourier.fourier_at(f, -t, method="quadrature"), np.conj(fourier.fourier_at(f, t, method="quadrature")))


@register("fourier", "plancherel", 1e-6, "Plancherel identity")
def _plancherel():
    return max(fourier.plancherel_residual(Gaussian(s)) for s in (1.0, 2.0))


@register("fourier", "riemann_lebesgue", 1e-4, "Riemann-Lebesgue decay at |t| = 30")
def _rl():
    return max(abs(fourier.fourier_at(Gaussian(s), t, method="quadrature"))
               for s in (1.0, 2.0) for t in (-30.0, 30.0))


@register("fourier", "group_intertwining", 1e-6, "the transform intertwines T_(t,p) and T_(-t,p')")
def _group_ft():
    return max(fourier.verify_group_intertwine(0.5, 2.0, Gaussian(1.0), method="auto"),
               fourier.verify_group_intertwine(-1.0, 1.5, Gaussian(2.0)),
               fourier.verify_group_intertwine(0.8, 1.25, Gaussian(1.0)))


@register("fourier", "cesaro_intertwining", 1e-5, "the transform exchanges C_beta and C*_beta")
def _cesaro_ft():
    return max(fourier.verify_cesaro_intertwine(b, Gaussian(1.0), d)
               for b in (0.5, 1.0, 2.0) for d in ("forward", "dual"))


@register("fourier", "cesaro_intertwining_combination", 1e-4, "intertwining for a Gaussian combination")
def _cesaro_ft_lc():
    f = LinComb(((1.0, Gaussian(1.0)), (0.5, Gaussian(2.0))))
    return fourier.verify_cesaro_intertwine(2.0, f, "forward")


@register("fourier", "moment_identity_first", 1e-6, "moment identity for n = 1")
def _moment1():
    return fourier.moment_derivative_check(1, Gaussian(1.0))


@register("fourier", "moment_identity_second", 1e-5, "moment identity for n = 2")
def _moment2():
    return max(fourier.moment_derivative_check(2, Gaussian(s)) for s in (1.0, 2.0))
