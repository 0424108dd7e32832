"""Fourier transform on the real line and the intertwining identities.

Convention: f^(t) = int e^(-i x t) f(x) dx.  Gaussians (and combinations of
centred Gaussians) have closed-form transforms; everything else goes
through quadrature.  Operator images are transformed with rules adapted to
their shape: C_beta f decays only like 1/|x|, so its transform is taken
after three integrations by parts; C*_beta f has a logarithmic singularity
at 0, so the region |x| < 1 is integrated in the variable x = e^z.
"""

from __future__ import annotations

import math

import numpy as np

from . import cesaro, quad
from .cesaro import Kind, OperatorSpec
from .errors import ParameterError, TailError, UnsupportedFunction
from .funcspace import Domain, FnExpr, Gaussian, GridFn, LinComb, default_grid, scaled
from .spectra import GroupElement, group_action

__all__ = [
    "fourier_closed",
    "fourier_at",
    "fourier_transform",
    "operator_image_transform",
    "verify_group_intertwine",
    "verify_cesaro_intertwine",
    "moment_derivative_check",
    "plancherel_residual",
]

_Q = quad.DEFAULT_SPEC
_SQRT2PI = math.sqrt(2.0 * math.pi)


def _is_centred_family(f) -> bool:
    if isinstance(f, Gaussian):
        return f.center == 0
    if isinstance(f, LinComb):
        return all(_is_centred_family(g) for _, g in f.terms)
    return False


def fourier_closed(f):
    """Closed-form transform as an FnExpr for combinations of centred Gaussians, else None."""
    if isinstance(f, Gaussian) and f.center == 0:
        return scaled(f.sigma * _SQRT2PI, Gaussian(1.0 / f.sigma))
    if isinstance(f, LinComb) and _is_centred_family(f):
        return LinComb(tuple((c * a, g) for c, term in f.terms for a, g in fourier_closed(term).terms))
    return None


def _gauss_value(g: Gaussian, t):
    return g.sigma * _SQRT2PI * np.exp(-1j * g.center * t - 0.5 * (g.sigma * t) ** 2)


def _closed_values(f, t):
    if isinstance(f, Gaussian):
        return _gauss_value(f, t)
    if isinstance(f, LinComb) and all(isinstance(g, (Gaussian, LinComb)) for _, g in f.terms):
        parts = [_closed_values(g, t) for _, g in f.terms]
        if all(p is not None for p in parts):
            return sum(c * p for (c, _), p in zip(f.terms, parts))
    return None


def _quad_values(f, t, q):
    out = np.zeros(np.shape(t), dtype=complex)
    flat = out.reshape(-1)
    for i, s in enumerate(np.ravel(t)):
        if isinstance(f, GridFn):
            x = f.abscissae
            edge = max(abs(f.values[0]), abs(f.values[-1]))
            if edge > q.abs_tol:
                raise TailError("GridFn has not decayed at the ends of its grid")
            br = x[::8].tolist() + [x[-1]]
            r = quad.integrate_finite(lambda u, s=s: np.exp(-1j * u * s) * np.asarray(f(u)),
                                      x[0], x[-1], quad.QuadSpec(nodes=8, max_refinements=6),
                                      breakpoints=br)
        else:
            r = quad.integrate_real(lambda u, s=s: np.exp(-1j * u * s) * np.asarray(f(u)), q,
                                    envelope=f)
        flat[i] = r.value
    return out


def fourier_at(f, t, q: quad.QuadSpec = _Q, method: str = "auto"):
    """f^(t) at the given frequencies; ``method`` is auto, closed or quadrature."""
    if getattr(f, "domain", Domain.REAL_LINE) is not Domain.REAL_LINE:
        raise ParameterError("the Fourier transform acts on real-line functions")
    tt = np.asarray(t, dtype=float)
    if method not in ("auto", "closed", "quadrature"):
        raise ParameterError(f"unknown method {method!r}")
    vals = None
    if method != "quadrature" and not isinstance(f, GridFn):
        vals = _closed_values(f, tt)
        if vals is None and method == "closed":
            raise UnsupportedFunction("no closed-form transform for this function")
    if vals is None:
        vals = _quad_values(f, tt, q)
    vals = np.asarray(vals, dtype=complex)
    return complex(vals) if tt.ndim == 0 else vals


def fourier_transform(f, q: quad.QuadSpec = _Q, grid=None, method: str = "auto") -> GridFn:
    """f^ sampled on a frequency grid (default: the real-line default grid)."""
    t = default_grid(Domain.REAL_LINE) if grid is None else np.asarray(grid, dtype=float)
    return GridFn(t, fourier_at(f, t, q, method), Domain.REAL_LINE)


# ---------------------------------------------------------------------------
# transforms of operator images


def _legendre_nodes(edges, n):
    x, w = quad.gauss_legendre(n)
    lo, hi = np.asarray(edges[:-1]), np.asarray(edges[1:])
    h = hi - lo
    return (lo[:, None] + h[:, None] * x).ravel(), (h[:, None] * w).ravel()


def _batch_chunks(beta, f, x, dual, order, q, chunk=2048):
    out = np.empty(x.shape, dtype=complex)
    for i in range(0, len(x), chunk):
        out[i:i + chunk] = cesaro.cesaro_batch(beta, f, x[i:i + chunk], dual, order, q)
    return out


def _extent(f: FnExpr) -> float:
    """Radius beyond which the Gaussian-family function is below 1e-17 relative."""
    if isinstance(f, Gaussian):
        return abs(f.center) + 9.0 * f.sigma
    if isinstance(f, LinComb):
        return max(_extent(g) for _, g in f.terms)
    raise UnsupportedFunction("operator-image transforms need a Gaussian-family function")


def _forward_image_transform(beta, f, t, q, X=600.0, width=2.0, nodes=32):
    """(C_beta f)^(t) = (i t)^(-3) int e^(-ixt) (C_beta f)'''(x) dx over [-X, X]."""
    edges = np.arange(-X, X + width / 2, width)
    x, w = _legendre_nodes(edges, nodes)
    d3 = _batch_chunks(beta, f, x, False, 3, q)
    t = np.atleast_1d(t)
    phase = np.exp(-1j * np.outer(t, x))
    return (phase @ (w * d3)) / (1j * t) ** 3


def _dual_image_transform(beta, f, t, q, nodes=32):
    """(C*_beta f)^(t): |x| < 1 in x = e^z, z in [-45, 0]; |x| >= 1 directly."""
    R = max(_extent(f), 2.0)
    zs, zw = _legendre_nodes(np.arange(-45.0, 0.01, 0.5), nodes)
    xs, xw = _legendre_nodes(np.arange(1.0, R + 1.0, 1.0), nodes)
    inner = np.exp(zs)
    pts = np.concatenate([inner, xs])
    wts = np.concatenate([zw * inner, xw])
    pos = _batch_chunks(beta, f, pts, True, 0, q)
    neg = _batch_chunks(beta, f, -pts, True, 0, q)
    t = np.atleast_1d(t)
    ph = np.exp(-1j * np.outer(t, pts))
    return ph @ (wts * pos) + np.conj(ph) @ (wts * neg)


def operator_image_transform(spec: OperatorSpec, f: FnExpr, t, q: quad.QuadSpec = _Q):
    """Transform of C_beta f or C*_beta f at frequencies t != 0."""
    t = np.asarray(t, dtype=float)
    if np.any(t == 0):
        raise ParameterError("operator-image transforms are evaluated at t != 0")
    if spec.kind is Kind.CESARO:
        return _forward_image_transform(spec.beta, f, t, q)
    return _dual_image_transform(spec.beta, f, t, q)


def _default_freqs():
    pos = np.linspace(0.2, 5.0, 13)
    return np.concatenate([-pos[::-1], pos])


def verify_cesaro_intertwine(beta: float, f: FnExpr, direction: str = "forward",
                             q: quad.QuadSpec = _Q, freqs=None) -> float:
    """max |(Op f)^ - Op' f^| over |t| in [0.2, 5], Op' the partner operator.

    forward: (C_beta f)^ = C*_beta f^;  dual: (C*_beta f)^ = C_beta f^.
    """
    t = _default_freqs() if freqs is None else np.asarray(freqs, dtype=float)
    fhat = fourier_closed(f)
    if fhat is None:
        raise UnsupportedFunction("intertwining checks use the centred Gaussian family")
    if direction == "forward":
        lhs = operator_image_transform(OperatorSpec(Kind.CESARO, beta, Domain.REAL_LINE), f, t, q)
        rhs = cesaro.cesaro_dual_apply(OperatorSpec(Kind.CESARO_DUAL, beta, Domain.REAL_LINE), fhat, t, q)
    elif direction == "dual":
        lhs = operator_image_transform(OperatorSpec(Kind.CESARO_DUAL, beta, Domain.REAL_LINE), f, t, q)
        rhs = cesaro.cesaro_apply(OperatorSpec(Kind.CESARO, beta, Domain.REAL_LINE), fhat, t, q)
    else:
        raise ParameterError("direction must be 'forward' or 'dual'")
    return float(np.max(np.abs(np.asarray(lhs) - np.asarray(rhs))))


def verify_group_intertwine(t: float, p: float, f: FnExpr, q: quad.QuadSpec = _Q,
                            freqs=None, method: str = "quadrature") -> float:
    """max |(T_{t,p} f)^ - T_{-t,p'} f^| over a frequency grid, 1/p + 1/p' = 1."""
    if not 1 < p <= 2:
        raise ParameterError("the transform intertwines the groups for 1 < p <= 2")
    pp = p / (p - 1.0)
    s = np.linspace(-6.0, 6.0, 25) if freqs is None else np.asarray(freqs, dtype=float)
    lhs = fourier_at(group_action(GroupElement(t, p), f), s, q, method)
    # T_{-t,p'} g(s) = e^(t/p') g(e^t s) applied to the transform values
    rhs = math.exp(t / pp) * fourier_at(f, math.exp(t) * s, q, method)
    return float(np.max(np.abs(lhs - rhs)))


def moment_derivative_check(n: int, f: FnExpr, t=(0.5, 1.0, 2.0), q: quad.QuadSpec = _Q,
                            form: str = "corrected") -> float:
    """Residual of t^n (f^)^(n)(t) = (-1)^n sum_j binom(n,j) (n!/j!) (x^j f^(j))^(t).

    ``form='stated'`` uses (i t)^n on the left instead, which differs by i^n.
    """
    if n not in (1, 2):
        raise ParameterError("the moment identity is checked for n in {1, 2}")
    fhat = fourier_closed(f)
    if fhat is None:
        raise UnsupportedFunction("moment checks use the centred Gaussian family")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    pref = t ** n if form == "corrected" else (1j * t) ** n
    lhs = pref * np.asarray(fhat.derivative(t, n))
    rhs = np.zeros(t.shape, dtype=complex)
    for j in range(n + 1):
        c = math.comb(n, j) * math.factorial(n) / math.factorial(j)

        def g(x, j=j):
            return x ** j * np.asarray(f.derivative(x, j))
        rhs += c * np.array([quad.integrate_real(lambda x, s=s: np.exp(-1j * x * s) * g(x), q,
                                                 envelope=g).value for s in t])
    rhs *= (-1) ** n
    return float(np.max(np.abs(lhs - rhs)))


def plancherel_residual(f: FnExpr, q: quad.QuadSpec = _Q) -> float:
    """| int |f|^2 - (1/2 pi) int |f^|^2 |, with f^ by quadrature."""
    lhs = quad.integrate_real(lambda x: np.abs(np.asarray(f(x))) ** 2, q).value
    floor = q.abs_tol ** 2

    def fh(s):
        # squared quadrature noise is not monotone and would defeat the tail fit
        v = np.abs(fourier_at(f, s, q, "quadrature")) ** 2
        return np.where(v < floor, 0.0, v)
    rhs = quad.integrate_real(fh, q.with_(nodes=24)).value / (2 * math.pi)
    return abs(lhs - rhs)
