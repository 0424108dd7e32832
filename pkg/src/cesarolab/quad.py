"""Adaptive Gauss quadrature for finite, endpoint-singular and semi-infinite integrals.

Every integrand is called with a NumPy array of nodes and must return an
array of the same shape (real or complex).  The panel engine bisects the
panels whose local error estimate exceeds their share of the tolerance;
panels that touch an endpoint with an algebraic singularity use
Gauss-Jacobi nodes so the singular factor is absorbed into the weight.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ConvergenceError, ParameterError, TailError

__all__ = [
    "QuadSpec",
    "QuadResult",
    "DEFAULT_SPEC",
    "gauss_legendre",
    "gauss_jacobi",
    "integrate_finite",
    "integrate_weighted",
    "integrate_jacobi",
    "integrate_jacobi_endpoint",
    "integrate_halfline",
    "integrate_positive",
    "integrate_real",
    "integrate_singular_halfline",
]

Integrand = Callable[[np.ndarray], np.ndarray]

_ROUNDOFF = 64 * np.finfo(float).eps
_MAX_PANELS = 4096


@dataclass(frozen=True)
class QuadSpec:
    """Quadrature configuration.

    ``nodes`` is the per-panel Gauss order, ``truncation`` the initial
    cutoff of half-line integrals, ``max_refinements`` the number of
    bisection rounds before giving up.
    """

    nodes: int = 64
    truncation: float = 40.0
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_refinements: int = 12

    def __post_init__(self):
        if int(self.nodes) != self.nodes or self.nodes < 4:
            raise ParameterError("nodes must be an integer >= 4")
        if not self.truncation > 0:
            raise ParameterError("truncation must be positive")
        for name in ("abs_tol", "rel_tol"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ParameterError(f"{name} must lie in (0, 1)")
        if int(self.max_refinements) != self.max_refinements or self.max_refinements < 1:
            raise ParameterError("max_refinements must be a positive integer")

    def tolerance(self, value) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))

    def with_(self, **kw) -> "QuadSpec":
        fields = dict(nodes=self.nodes, truncation=self.truncation, abs_tol=self.abs_tol,
                      rel_tol=self.rel_tol, max_refinements=self.max_refinements)
        fields.update(kw)
        return QuadSpec(**fields)


DEFAULT_SPEC = QuadSpec()


class QuadResult(NamedTuple):
    value: complex | float
    error: float


# ---------------------------------------------------------------------------
# node tables

_cache: dict = {}
_cache_lock = threading.Lock()


def _cached(key, build):
    table = _cache.get(key)
    if table is None:
        table = build()
        with _cache_lock:
            table = _cache.setdefault(key, table)
    return table


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1]."""
    def build():
        x, w = np.polynomial.legendre.leggauss(n)
        return 0.5 * (x + 1.0), 0.5 * w
    return _cached(("legendre", n), build)


def _golub_welsch(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    # Jacobi weight (1 - t)^a (1 + t)^b on [-1, 1]
    k = np.arange(n, dtype=float)
    s = 2.0 * k + a + b
    diag = np.empty(n)
    with np.errstate(divide="ignore", invalid="ignore"):
        diag[:] = (b * b - a * a) / (s * (s + 2.0))
    diag[0] = (b - a) / (a + b + 2.0)
    m = np.arange(1, n, dtype=float)
    s = 2.0 * m + a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        off2 = 4.0 * m * (m + a) * (m + b) * (m + a + b) / (s * s * (s + 1.0) * (s - 1.0))
    if n > 1:
        off2[0] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) ** 2 * (3.0 + a + b))
    nodes, vecs = eigh_tridiagonal(diag, np.sqrt(off2))
    return nodes, vecs[0, :] ** 2


def gauss_jacobi(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [0, 1] for the weight (1 - x)^a x^b, a, b > -1."""
    if not (a > -1 and b > -1):
        raise ParameterError("Jacobi exponents must exceed -1")

    def build():
        t, v = _golub_welsch(n, float(a), float(b))
        mass = math.exp(math.lgamma(a + 1) + math.lgamma(b + 1) - math.lgamma(a + b + 2))
        return 0.5 * (t + 1.0), mass * v
    return _cached(("jacobi", n, float(a), float(b)), build)


# ---------------------------------------------------------------------------
# panel engine


def _panel_rule(n, lo, hi, a, b, lp, rp):
    """Nodes and weights for one panel of the weighted integral.

    The full weight is (x - a)^lp (b - x)^rp; factors singular at a panel
    endpoint go into a Jacobi rule, the rest are folded into the weights.
    """
    h = hi - lo
    left = lo == a and lp != 0
    right = hi == b and rp != 0
    if left or right:
        x, w = gauss_jacobi(n, rp if right else 0.0, lp if left else 0.0)
        pts = lo + h * x
        wts = w * h
        if left:
            wts = wts * h ** lp
        elif lp != 0:
            wts = wts * (pts - a) ** lp
        if right:
            wts = wts * h ** rp
        elif rp != 0:
            wts = wts * (b - pts) ** rp
        return pts, wts
    x, w = gauss_legendre(n)
    pts = lo + h * x
    wts = w * h
    if lp != 0:
        wts = wts * (pts - a) ** lp
    if rp != 0:
        wts = wts * (b - pts) ** rp
    return pts, wts


def _eval_panels(f, n, panels, a, b, lp, rp):
    pts, wts = [], []
    for lo, hi in panels:
        x, w = _panel_rule(n, lo, hi, a, b, lp, rp)
        pts.append(x)
        wts.append(w)
    pts = np.concatenate(pts)
    wts = np.concatenate(wts)
    vals = np.asarray(f(pts))
    if vals.shape != pts.shape:
        vals = np.broadcast_to(vals, pts.shape)
    if not np.all(np.isfinite(vals)):
        raise ConvergenceError("integrand returned a non-finite value")
    contrib = (wts * vals).reshape(len(panels), n)
    absmass = (np.abs(wts * vals)).reshape(len(panels), n).sum(axis=1)
    return contrib.sum(axis=1), absmass


def _adaptive(f, a, b, breaks, spec: QuadSpec, lp=0.0, rp=0.0, tol_scale=1.0):
    n = spec.nodes
    panels = list(zip(breaks[:-1], breaks[1:]))
    coarse, _ = _eval_panels(f, n, panels, a, b, lp, rp)
    done_val, done_err, done_mass = 0.0, 0.0, 0.0
    active = panels
    for _ in range(spec.max_refinements + 1):
        halves = []
        for lo, hi in active:
            mid = 0.5 * (lo + hi)
            halves += [(lo, mid), (mid, hi)]
        hv, hm = _eval_panels(f, n, halves, a, b, lp, rp)
        fine = hv[0::2] + hv[1::2]
        mass = hm[0::2] + hm[1::2]
        err = np.abs(fine - coarse)
        total = done_val + fine.sum()
        tol = spec.tolerance(total) * tol_scale
        width = b - a
        share = np.array([(hi - lo) / width for lo, hi in active])
        bad = err > tol * share
        if done_err + err.sum() <= tol:
            bad[:] = False
        keep = ~bad
        done_val = done_val + fine[keep].sum()
        done_err += err[keep].sum()
        done_mass += mass[keep].sum()
        if not np.any(bad):
            return QuadResult(done_val, done_err + _ROUNDOFF * done_mass)
        next_active = []
        next_coarse = []
        for i in np.flatnonzero(bad):
            next_active += [halves[2 * i], halves[2 * i + 1]]
            next_coarse += [hv[2 * i], hv[2 * i + 1]]
        if len(next_active) > _MAX_PANELS:
            break
        active = next_active
        coarse = np.array(next_coarse)
    raise ConvergenceError(
        f"quadrature on [{a}, {b}] did not converge in {spec.max_refinements} refinements"
    )


def _check_interval(a, b):
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise ParameterError(f"invalid interval [{a}, {b}]")


def integrate_finite(f: Integrand, a: float, b: float, spec: QuadSpec = DEFAULT_SPEC,
                     breakpoints=()) -> QuadResult:
    """Adaptive panel-split Gauss-Legendre integral of ``f`` over [a, b]."""
    _check_interval(a, b)
    br = sorted({a, b, *(x for x in breakpoints if a < x < b)})
    return _adaptive(f, a, b, br, spec)


def integrate_weighted(f: Integrand, a: float, b: float, left_power: float = 0.0,
                       right_power: float = 0.0, spec: QuadSpec = DEFAULT_SPEC) -> QuadResult:
    """Integral of (x - a)^left_power (b - x)^right_power f(x) over [a, b]."""
    _check_interval(a, b)
    if not (left_power > -1 and right_power > -1):
        raise ParameterError("endpoint exponents must exceed -1")
    return _adaptive(f, a, b, [a, b], spec, float(left_power), float(right_power))


def integrate_jacobi(f: Integrand, a: float, b: float, spec: QuadSpec = DEFAULT_SPEC) -> QuadResult:
    """Integral of (1 - x)^a x^b f(x) over [0, 1]."""
    return integrate_weighted(f, 0.0, 1.0, b, a, spec)


def integrate_jacobi_endpoint(f: Integrand, beta: float, spec: QuadSpec = DEFAULT_SPEC,
                              origin_power: float = 0.0) -> QuadResult:
    """Integral of (1 - r)^(beta - 1) r^origin_power f(r) over [0, 1]."""
    if not beta > 0:
        raise ParameterError("beta must be positive")
    return integrate_weighted(f, 0.0, 1.0, origin_power, beta - 1.0, spec)


def _initial_breaks(T: float) -> list[float]:
    br = [0.0, 1.0]
    while br[-1] * 2 < T:
        br.append(br[-1] * 2)
    br.append(T)
    return br


def _tail_bound(f, T):
    """Exponential-fit estimate of the integral of f over [T, inf).

    Returns (bound on the integral of |f|, fitted signed tail, uncertainty of
    the fitted tail).  Decay rates fitted on [T-2, T-1] and [T-1, T] are
    compared to judge how exponential the tail really is.
    """
    x = np.array([T - 2.0, T - 1.0, T])
    v = np.asarray(f(x))
    m = np.abs(v)
    if m[-1] == 0:
        return 0.0, 0.0, 0.0
    if m[0] == 0 or m[1] == 0 or not (m[-1] < m[1] < m[0]):
        return math.inf, 0.0, math.inf
    k1 = math.log(m[0] / m[1])
    k2 = math.log(m[1] / m[2])
    est = v[-1] / k2
    return m[-1] / min(k1, k2), est, abs(est) * abs(k1 - k2) / k2


def integrate_halfline(f: Integrand, spec: QuadSpec = DEFAULT_SPEC,
                       origin_power: float = 0.0, tail_correction: bool = False,
                       envelope: Integrand | None = None) -> QuadResult:
    """Integral of ``f`` over (0, inf) for exponentially decaying integrands.

    ``f`` is the full integrand; ``origin_power`` declares its algebraic
    behaviour r^origin_power at 0, which the first panel absorbs into a
    Jacobi weight.  The region [0, T] is integrated adaptively; the tail
    beyond T is bounded from an exponential fit of the last unit of the
    range and added to the error.  T doubles up to 8 times the configured
    truncation before a TailError is raised.  With ``tail_correction`` the
    fitted tail is also added to the value, which suits slowly decaying
    exponential tails.  ``envelope`` is a majorant of |f| whose exponential
    fit bounds the tail instead, for oscillating integrands such as
    Fourier kernels.
    """
    if not origin_power > -1:
        raise ParameterError("origin_power must exceed -1")
    op = float(origin_power)
    g = f
    if op != 0:
        def g(r):
            return np.asarray(f(r)) / r ** op
    T = float(spec.truncation)
    head = _adaptive(g, 0.0, T, _initial_breaks(T), spec, op, 0.0, tol_scale=0.5)
    value, err = head.value, head.error
    while True:
        if envelope is None:
            bound, est, unc = _tail_bound(f, T)
        else:
            bound, est, unc = _tail_bound(envelope, T)[0], 0.0, math.inf
        if tail_correction and unc <= 0.5 * spec.tolerance(value):
            return QuadResult(value + est, err + unc)
        if bound <= 0.5 * spec.tolerance(value):
            return QuadResult(value, err + bound)
        if 2 * T > 8 * spec.truncation:
            raise TailError(f"tail beyond r = {T:g} estimated at {bound:.3g}")
        piece = _adaptive(f, T, 2 * T, [T, 1.5 * T, 2 * T], spec, tol_scale=0.5)
        value += piece.value
        err += piece.error
        T *= 2


def integrate_positive(F: Integrand, spec: QuadSpec = DEFAULT_SPEC,
                       tail_correction: bool = True) -> QuadResult:
    """Integral of ``F`` over (0, inf) for algebraic behaviour at 0 and infinity.

    Substitutes t = e^x so power laws become exponentials, then integrates
    both half-lines in x.
    """
    def right(x):
        t = np.exp(x)
        return np.asarray(F(t)) * t

    def left(x):
        t = np.exp(-x)
        return np.asarray(F(t)) * t

    r = integrate_halfline(right, spec, tail_correction=tail_correction)
    l = integrate_halfline(left, spec, tail_correction=tail_correction)
    return QuadResult(r.value + l.value, r.error + l.error)


def integrate_real(F: Integrand, spec: QuadSpec = DEFAULT_SPEC,
                   envelope: Integrand | None = None) -> QuadResult:
    """Integral of ``F`` over the real line for exponentially decaying integrands.

    ``envelope`` is an optional majorant of |F| used for the tail bound.
    """
    def folded(x):
        return np.asarray(F(x)) + np.asarray(F(-x))
    env = None
    if envelope is not None:
        def env(x):
            return np.abs(np.asarray(envelope(x))) + np.abs(np.asarray(envelope(-x)))
    return integrate_halfline(folded, spec, envelope=env)


def integrate_singular_halfline(F: Integrand, spec: QuadSpec = DEFAULT_SPEC,
                                origin_power: float = 0.0,
                                power_tail: bool = True) -> QuadResult:
    """Integral of ``F`` over (0, inf) with F ~ u^origin_power at 0.

    [0, 1] uses a Jacobi weight for the origin; [1, inf) is mapped by
    u = e^x when ``F`` decays algebraically, or shifted by one when it
    decays exponentially.
    """
    op = float(origin_power)

    def smooth(u):
        return np.asarray(F(u)) / u ** op if op else F(u)

    head = integrate_weighted(smooth, 0.0, 1.0, op, 0.0, spec.with_(abs_tol=0.5 * spec.abs_tol))
    if power_tail:
        def tail(x):
            u = np.exp(x)
            return np.asarray(F(u)) * u
        rest = integrate_halfline(tail, spec, tail_correction=True)
    else:
        rest = integrate_halfline(lambda r: F(1.0 + r), spec)
    return QuadResult(head.value + rest.value, head.error + rest.error)
