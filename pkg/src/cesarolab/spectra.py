"""Dilation group, spectral curves, circle checks and operator norms."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from . import cesaro, quad, specfun
from .cesaro import Kind, OperatorSpec
from .errors import ParameterError
from .funcspace import (Domain, FnExpr, GridFn, SobolevParams, d_alpha, sobolev_norm)

__all__ = [
    "GroupElement",
    "SpectrumCurve",
    "group_action",
    "spectral_curve",
    "circle_check",
    "circle_center",
    "integer_order_curve",
    "curve_distance",
    "operator_norm",
    "empirical_norm_ratio",
    "near_extremal",
    "group_spectrum_check",
]


@dataclass(frozen=True)
class GroupElement:
    """The dilation T_{t,p} f(s) = e^(-t/p) f(e^(-t) s)."""

    t: float
    p: float = 2.0

    def __post_init__(self):
        if not self.p >= 1:
            raise ParameterError("group exponent p must be >= 1")
        if not math.isfinite(self.t):
            raise ParameterError("group parameter must be finite")

    def inverse(self) -> "GroupElement":
        return GroupElement(-self.t, self.p)


def group_action(g: GroupElement, f):
    """Apply T_{t,p}; closed-form inputs stay closed-form, grids are rescaled exactly."""
    if g.t == 0:
        return f
    if isinstance(f, GridFn):
        e = math.exp(g.t)
        return GridFn(f.abscissae * e, f.values * math.exp(-g.t / g.p), f.domain)
    return f.group(g.t, g.p)


@dataclass(frozen=True, eq=False)
class SpectrumCurve:
    """Samples w(t) of a spectral curve; the closure point 0 is metadata, not a sample."""

    params: np.ndarray
    points: np.ndarray
    meta: OperatorSpec
    closure_point: complex = field(default=0j)

    def __post_init__(self):
        t = np.asarray(self.params, dtype=float)
        w = np.asarray(self.points, dtype=complex)
        if t.shape != w.shape or t.ndim != 1:
            raise ParameterError("params and points must be 1-d of equal length")
        if not np.all(np.isfinite(w)):
            raise ParameterError("spectral curve samples must be finite")
        object.__setattr__(self, "params", t)
        object.__setattr__(self, "points", w)

    def to_csv(self, path=None) -> str:
        lines = ["t,re_w,im_w"]
        lines += [f"{t:.17g},{w.real:.17g},{w.imag:.17g}" for t, w in zip(self.params, self.points)]
        text = "\n".join(lines) + "\n"
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    def to_json(self) -> dict:
        return {
            "kind": self.meta.kind.value,
            "beta": self.meta.beta,
            "p": self.meta.p,
            "domain": self.meta.domain.value,
            "closure_point": [self.closure_point.real, self.closure_point.imag],
            "t": self.params.tolist(),
            "re_w": self.points.real.tolist(),
            "im_w": self.points.imag.tolist(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, d) -> "SpectrumCurve":
        if isinstance(d, str):
            d = json.loads(d)
        meta = OperatorSpec(Kind(d["kind"]), d["beta"], Domain(d.get("domain", "half-line")), d["p"])
        cp = d.get("closure_point", [0.0, 0.0])
        return cls(np.asarray(d["t"]), np.asarray(d["re_w"]) + 1j * np.asarray(d["im_w"]), meta,
                   complex(cp[0], cp[1]))


def spectral_curve(spec: OperatorSpec, t_min: float = -40.0, t_max: float = 40.0,
                   n: int = 1601) -> SpectrumCurve:
    """w(t) = Gamma(beta+1) Gamma(a+it) / Gamma(beta+a+it), a = 1-1/p or 1/p."""
    if int(n) != n or n < 2:
        raise ParameterError("n must be an integer >= 2")
    if not t_min < t_max:
        raise ParameterError("t_min must be below t_max")
    t = np.linspace(t_min, t_max, int(n))
    z = spec.a + 1j * t
    lg = specfun.log_gamma(spec.beta + 1.0) + specfun.log_gamma(z) - specfun.log_gamma(spec.beta + z)
    return SpectrumCurve(t, np.exp(lg), spec)


def circle_center(spec: OperatorSpec) -> float:
    """Centre (= radius) of the beta = 1 circle: p/(2(p-1)) or p/2."""
    if spec.kind is Kind.CESARO:
        return spec.p / (2.0 * (spec.p - 1.0))
    return spec.p / 2.0


def circle_check(curve: SpectrumCurve) -> float:
    """max | |w - c| - c | over the samples; defined for beta = 1 only."""
    if curve.meta.beta != 1:
        raise ParameterError("the circle law holds only for beta = 1")
    c = circle_center(curve.meta)
    return float(np.max(np.abs(np.abs(curve.points - c) - c)))


def integer_order_curve(spec: OperatorSpec, t) -> np.ndarray:
    """n! / prod_{k=1..n} (k - 1 + a + it) for integer beta = n."""
    n = spec.beta
    if n != int(n):
        raise ParameterError("product form needs an integer order")
    t = np.asarray(t, dtype=float)
    prod = np.ones(t.shape, dtype=complex)
    for k in range(1, int(n) + 1):
        prod = prod * (k - 1.0 + spec.a + 1j * t)
    return math.factorial(int(n)) / prod


def curve_distance(c1: SpectrumCurve, c2: SpectrumCurve) -> float:
    """Symmetric Hausdorff distance between the sampled point sets."""
    d = cdist(np.column_stack([c1.points.real, c1.points.imag]),
              np.column_stack([c2.points.real, c2.points.imag]))
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def operator_norm(spec: OperatorSpec) -> float:
    """Gamma(beta+1) Gamma(a) / Gamma(beta+a) with a = 1-1/p (C_beta) or 1/p (C*_beta)."""
    if spec.kind is Kind.CESARO_DUAL and spec.p == 1:
        return math.inf
    return specfun.gamma_ratio(spec.a, spec.beta + spec.a).real * math.gamma(spec.beta + 1.0)


def near_extremal(p: float, eps: float) -> FnExpr:
    """(1 + t)^(-(1/p + eps)): just inside L^p, approaching the critical decay."""
    from .funcspace import ShiftedPower
    return ShiftedPower(1.0, 1.0 / p + eps)


def _image_norm(spec: OperatorSpec, f: FnExpr, params: SobolevParams, q: quad.QuadSpec) -> float:
    a, p = params.alpha, params.p
    dual = spec.kind is Kind.CESARO_DUAL
    if a == int(a):
        # W^n (Op f) = (-1)^n (Op f)^(n): exact derivatives under the integral
        k = int(a)

        def F(t):
            v = cesaro.cesaro_batch(spec.beta, f, t, dual, k, q)
            return t ** (a * p) * np.abs(v) ** p
        val = quad.integrate_positive(F, q).value ** (1.0 / p)
        return val / math.gamma(a + 1.0)
    # fractional order: ||Op f||_{a,p} = ||Op(D^a f)||_p since D^a commutes with Op
    g = d_alpha(f, a)

    def F(t):
        return np.abs(cesaro.cesaro_batch(spec.beta, g, t, dual, 0, q)) ** p
    return quad.integrate_positive(F, q).value ** (1.0 / p)


def empirical_norm_ratio(spec: OperatorSpec, f: FnExpr, params: SobolevParams,
                         q: quad.QuadSpec = quad.DEFAULT_SPEC) -> float:
    """||Op f||_{alpha,p} / ||f||_{alpha,p} on the half-line."""
    if spec.domain is not Domain.HALF_LINE:
        raise ParameterError("empirical norms are computed on the half-line")
    if params.p != spec.p:
        raise ParameterError("Sobolev exponent must match the operator exponent")
    return _image_norm(spec, f, params, q) / sobolev_norm(f, params, q)


def group_spectrum_check(p: float, t: float, f_sample, mus=(0.1, 0.5 + 0.3j, 1.0),
                         points=(0.5, 1.0, 2.0), alpha: float = 1.0,
                         q: quad.QuadSpec = quad.DEFAULT_SPEC) -> dict:
    """Numerical shadow of a purely imaginary generator spectrum.

    (a) T_{t,p} is an isometry of the weighted norm; (b) for Re mu > 0 the
    resolvent integral solves (mu - L) R f = f, with L applied to R f by
    centred finite differences.
    """
    params = SobolevParams(alpha, p)
    g = GroupElement(t, p)
    iso, res = [], []
    for f in f_sample:
        n0 = sobolev_norm(f, params, q)
        n1 = sobolev_norm(group_action(g, f), params, q)
        iso.append(abs(n1 - n0))
        for mu in mus:
            for s in points:
                h = 1e-4 * s
                rf = cesaro.resolvent_apply(mu, p, f, np.array([s - h, s, s + h]), q)
                deriv = (rf[2] - rf[0]) / (2 * h)
                lam_rf = -s * deriv - rf[1] / p
                res.append(abs(mu * rf[1] - lam_rf - f(s)))
    return {"isometry": max(iso, default=0.0), "resolvent": max(res, default=0.0)}
