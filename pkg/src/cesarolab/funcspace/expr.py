"""Closed-form test functions.

Each ``FnExpr`` is an immutable, vectorized callable that also knows its
derivatives, its algebraic behaviour at the origin and at infinity, how the
dilation group acts on it, and how to serialize itself.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import hermite_e

from .. import specfun
from ..errors import DomainError, ParameterError, UnsupportedFunction

__all__ = [
    "Domain",
    "FnExpr",
    "PowerKernel",
    "Exponential",
    "ShiftedPower",
    "MittagLefflerFn",
    "Gaussian",
    "LinComb",
    "Pointwise",
    "Constant",
    "scaled",
    "from_json",
]


class Domain(str, enum.Enum):
    HALF_LINE = "half-line"
    REAL_LINE = "real-line"


def _arr(t):
    return np.asarray(t, dtype=float)


def _ret(t, v):
    # scalar in, scalar out
    if np.ndim(t) == 0:
        v = np.asarray(v).reshape(())[()]
        return complex(v) if np.iscomplexobj(v) else float(v)
    return v


class FnExpr:
    """Base class of the closed-form family."""

    domain: Domain = Domain.HALF_LINE

    # behaviour |f(t)| ~ t^origin_power as t -> 0+
    @property
    def origin_power(self) -> float:
        return 0.0

    # behaviour |f(t)| ~ t^(-decay_power) as t -> inf; inf for exponential type
    @property
    def decay_power(self) -> float:
        return math.inf

    def __call__(self, t):
        t = _arr(t)
        self._check(t)
        return _ret(t, self._eval(t))

    def derivative(self, t, order: int = 1):
        if order == 0:
            return self(t)
        t = _arr(t)
        self._check(t)
        return _ret(t, self._deriv(t, order))

    def _check(self, t):
        if self.domain is Domain.HALF_LINE and np.any(t < 0):
            raise DomainError(f"{type(self).__name__} is defined on t >= 0")

    def _eval(self, t):
        raise NotImplementedError

    def _deriv(self, t, order):
        raise UnsupportedFunction(f"no derivative rule for {type(self).__name__}")

    def group(self, s: float, p: float) -> "FnExpr":
        """T_{s,p} f(x) = e^(-s/p) f(e^(-s) x)."""
        raise UnsupportedFunction(f"no group rule for {type(self).__name__}")

    def reflect(self) -> "FnExpr":
        """x -> f(-x) for real-line functions."""
        raise UnsupportedFunction(f"no reflection rule for {type(self).__name__}")

    def to_json(self) -> dict:
        raise UnsupportedFunction(f"{type(self).__name__} is not serializable")

    def __add__(self, other: "FnExpr") -> "LinComb":
        return LinComb(tuple(_terms(self)) + tuple(_terms(other)))

    def __rmul__(self, c) -> "LinComb":
        return scaled(c, self)

    def __neg__(self):
        return scaled(-1.0, self)

    def __sub__(self, other):
        return self + scaled(-1.0, other)


def _terms(f: FnExpr):
    if isinstance(f, LinComb):
        return f.terms
    return ((1.0, f),)


def scaled(c, f: FnExpr) -> "LinComb":
    return LinComb(tuple((c * a, g) for a, g in _terms(f)))


@dataclass(frozen=True)
class PowerKernel(FnExpr):
    """g_gamma(t) = t^(gamma - 1) / Gamma(gamma) on the half-line."""

    gamma: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise ParameterError("PowerKernel requires gamma > 0")

    @property
    def origin_power(self):
        return self.gamma - 1.0

    @property
    def decay_power(self):
        return 1.0 - self.gamma

    def _check(self, t):
        super()._check(t)
        if self.gamma < 1 and np.any(t == 0):
            raise DomainError("g_gamma with gamma < 1 is singular at t = 0")

    def _eval(self, t):
        return _pk(self.gamma, t)

    def _deriv(self, t, order):
        # d/dt g_gamma = g_(gamma - 1); 1/Gamma vanishes at the poles
        if np.any(t == 0) and self.gamma - order < 1:
            raise DomainError("derivative of g_gamma singular at t = 0")
        return _pk(self.gamma - order, t)

    def group(self, s, p):
        return scaled(math.exp(-s / p - s * (self.gamma - 1.0)), self)

    def to_json(self):
        return {"tag": "powerkernel", "gamma": self.gamma}


def _pk(gamma, t):
    rg = specfun.rgamma(gamma).real
    if rg == 0.0:
        return np.zeros_like(t)
    with np.errstate(divide="ignore"):
        return np.where(t == 0, 1.0 if gamma == 1 else 0.0, t ** (gamma - 1.0)) * rg


def _cjson(z) -> object:
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def _cparse(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


def _creal(z: complex):
    return z.real if z.imag == 0 else z


@dataclass(frozen=True)
class Exponential(FnExpr):
    """e_lambda(t) = exp(-lambda t) on the half-line, Re lambda > 0."""

    lam: complex

    def __post_init__(self):
        lam = specfun.as_complex(self.lam)
        if not lam.real > 0:
            raise ParameterError("Exponential requires Re lambda > 0")
        object.__setattr__(self, "lam", _creal(lam))

    def _eval(self, t):
        return np.exp(-self.lam * t)

    def _deriv(self, t, order):
        return (-self.lam) ** order * np.exp(-self.lam * t)

    def group(self, s, p):
        return scaled(math.exp(-s / p), Exponential(self.lam * math.exp(-s)))

    def to_json(self):
        return {"tag": "exp", "lambda": _cjson(self.lam)}


@dataclass(frozen=True)
class ShiftedPower(FnExpr):
    """(a + t)^(-beta) on the half-line, a > 0, Re beta > 0."""

    a: float
    beta: complex

    def __post_init__(self):
        if not self.a > 0:
            raise ParameterError("ShiftedPower requires a > 0")
        b = specfun.as_complex(self.beta)
        if not b.real > 0:
            raise ParameterError("ShiftedPower requires Re beta > 0")
        object.__setattr__(self, "beta", _creal(b))

    @property
    def decay_power(self):
        return complex(self.beta).real

    def _eval(self, t):
        return (self.a + t) ** (-self.beta)

    def _deriv(self, t, order):
        # (-1)^k (beta)_k (a + t)^(-beta - k)
        c = 1.0
        for k in range(order):
            c *= -(self.beta + k)
        return c * (self.a + t) ** (-self.beta - order)

    def group(self, s, p):
        b = self.beta
        return scaled(cmath.exp(-s / p + s * b) if isinstance(b, complex) else math.exp(-s / p + s * b),
                      ShiftedPower(self.a * math.exp(s), b))

    def to_json(self):
        return {"tag": "shiftedpower", "a": self.a, "beta": _cjson(self.beta)}


@dataclass(frozen=True)
class MittagLefflerFn(FnExpr):
    """E_beta(lambda t^beta) on the half-line."""

    beta: float
    lam: complex

    def __post_init__(self):
        if not self.beta > 0:
            raise ParameterError("MittagLefflerFn requires beta > 0")
        object.__setattr__(self, "lam", _creal(specfun.as_complex(self.lam)))

    @property
    def decay_power(self):
        lam = complex(self.lam)
        if lam.imag == 0 and lam.real < 0:
            return self.beta if self.beta < 1 else math.inf
        return -math.inf

    def _eval(self, t):
        out = np.array([specfun.mittag_leffler(self.beta, self.lam * x ** self.beta)
                        for x in np.ravel(t)]).reshape(np.shape(t))
        return _maybe_real(out)

    def _deriv(self, t, order):
        if np.any(t == 0):
            raise DomainError("Mittag-Leffler derivative evaluated at t = 0")
        out = np.array([specfun.mittag_leffler_derivative(self.beta, self.lam, x, order)
                        for x in np.ravel(t)]).reshape(np.shape(t))
        return _maybe_real(out)

    def group(self, s, p):
        return scaled(math.exp(-s / p), MittagLefflerFn(self.beta, self.lam * math.exp(-s * self.beta)))

    def to_json(self):
        return {"tag": "ml", "beta": self.beta, "lambda": _cjson(self.lam)}


def _maybe_real(v):
    v = np.asarray(v, dtype=complex)
    if np.all(v.imag == 0):
        return v.real
    return v


@dataclass(frozen=True)
class Gaussian(FnExpr):
    """exp(-(t - center)^2 / (2 sigma^2)) on the real line."""

    sigma: float
    center: float = 0.0
    domain: Domain = field(default=Domain.REAL_LINE, init=False)

    def __post_init__(self):
        if not self.sigma > 0:
            raise ParameterError("Gaussian requires sigma > 0")

    def _eval(self, t):
        u = (t - self.center) / self.sigma
        return np.exp(-0.5 * u * u)

    def _deriv(self, t, order):
        # d^k/dt^k e^{-u^2/2} = (-1)^k He_k(u) e^{-u^2/2} / sigma^k
        u = (t - self.center) / self.sigma
        coef = np.zeros(order + 1)
        coef[order] = 1.0
        return (-1) ** order * hermite_e.hermeval(u, coef) * np.exp(-0.5 * u * u) / self.sigma ** order

    def group(self, s, p):
        e = math.exp(s)
        return scaled(math.exp(-s / p), Gaussian(self.sigma * e, self.center * e))

    def reflect(self):
        return Gaussian(self.sigma, -self.center)

    def to_json(self):
        d = {"tag": "gauss", "sigma": self.sigma}
        if self.center:
            d["center"] = self.center
        return d


@dataclass(frozen=True)
class Constant(FnExpr):
    """The constant function c on either domain."""

    value: complex = 1.0
    domain: Domain = Domain.HALF_LINE

    @property
    def decay_power(self):
        return 0.0

    def _eval(self, t):
        return np.full(np.shape(t), self.value, dtype=complex if isinstance(self.value, complex) else float)

    def _deriv(self, t, order):
        return np.zeros(np.shape(t))

    def group(self, s, p):
        return Constant(self.value * math.exp(-s / p), self.domain)

    def reflect(self):
        return self

    def to_json(self):
        return {"tag": "const", "value": _cjson(self.value), "domain": self.domain.value}


@dataclass(frozen=True)
class LinComb(FnExpr):
    """Finite linear combination sum_k c_k f_k of members sharing a domain."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((_creal(specfun.as_complex(c)), f) for c, f in self.terms)
        if not terms:
            raise ParameterError("LinComb needs at least one term")
        doms = {f.domain for _, f in terms}
        if len(doms) != 1:
            raise ParameterError("LinComb members must share a domain")
        if any(isinstance(f, LinComb) for _, f in terms):
            terms = tuple((c * a, g) for c, f in terms for a, g in _terms(f))
        object.__setattr__(self, "terms", terms)

    @property
    def domain(self):
        return self.terms[0][1].domain

    @property
    def origin_power(self):
        return min(f.origin_power for _, f in self.terms)

    @property
    def decay_power(self):
        return min(f.decay_power for _, f in self.terms)

    def __call__(self, t):
        return _ret(_arr(t), sum(c * np.asarray(f(_arr(t))) for c, f in self.terms))

    def derivative(self, t, order=1):
        return _ret(_arr(t), sum(c * np.asarray(f.derivative(_arr(t), order)) for c, f in self.terms))

    def group(self, s, p):
        return LinComb(tuple((c, f.group(s, p)) for c, f in self.terms))

    def reflect(self):
        return LinComb(tuple((c, f.reflect()) for c, f in self.terms))

    def to_json(self):
        return {"tag": "sum", "terms": [[_cjson(c), f.to_json()] for c, f in self.terms]}


@dataclass(frozen=True, eq=False)
class Pointwise(FnExpr):
    """A numerically defined function, e.g. the image of an operator.

    ``deriv(t, k)`` supplies derivatives when known; otherwise derivatives
    are unavailable.  ``origin`` and ``decay`` declare the algebraic
    behaviour used by the quadrature routines.
    """

    fn: Callable
    domain: Domain = Domain.HALF_LINE
    origin: float = 0.0
    decay: float = math.inf
    deriv: Optional[Callable] = None
    label: str = "pointwise"

    @property
    def origin_power(self):
        return self.origin

    @property
    def decay_power(self):
        return self.decay

    def _eval(self, t):
        return np.asarray(self.fn(t))

    def _deriv(self, t, order):
        if self.deriv is None:
            raise UnsupportedFunction(f"{self.label} has no derivative rule")
        return np.asarray(self.deriv(t, order))

    def group(self, s, p):
        c = math.exp(-s / p)
        e = math.exp(-s)
        d = None
        if self.deriv is not None:
            def d(t, k):
                return c * e ** k * np.asarray(self.deriv(e * np.asarray(t), k))
        return Pointwise(lambda t: c * np.asarray(self.fn(e * np.asarray(t))), self.domain,
                         self.origin, self.decay, d, f"T({s:g},{p:g}){self.label}")

    def reflect(self):
        d = None
        if self.deriv is not None:
            def d(t, k):
                return (-1) ** k * np.asarray(self.deriv(-np.asarray(t), k))
        return Pointwise(lambda t: self.fn(-np.asarray(t)), self.domain, self.origin,
                         self.decay, d, f"reflect({self.label})")


_TAGS = {
    "powerkernel": lambda d: PowerKernel(float(d["gamma"])),
    "exp": lambda d: Exponential(_cparse(d["lambda"])),
    "shiftedpower": lambda d: ShiftedPower(float(d["a"]), _cparse(d["beta"])),
    "ml": lambda d: MittagLefflerFn(float(d["beta"]), _cparse(d["lambda"])),
    "gauss": lambda d: Gaussian(float(d["sigma"]), float(d.get("center", 0.0))),
    "const": lambda d: Constant(_creal(_cparse(d.get("value", 1.0))), Domain(d.get("domain", "half-line"))),
    "sum": lambda d: LinComb(tuple((_cparse(c), from_json(f)) for c, f in d["terms"])),
}


def from_json(d: dict) -> FnExpr:
    """Inverse of ``FnExpr.to_json``."""
    try:
        build = _TAGS[d["tag"]]
    except (KeyError, TypeError):
        raise ParameterError(f"unknown function descriptor {d!r}") from None
    try:
        return build(d)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParameterError):
            raise
        raise ParameterError(f"malformed function descriptor {d!r}: {exc}") from None
