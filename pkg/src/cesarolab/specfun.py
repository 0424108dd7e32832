"""Complex special functions: log-Gamma, Gamma ratios, Beta, Gauss 2F1, Mittag-Leffler.

All functions accept Python scalars; ``log_gamma``, ``rgamma``, ``digamma`` and
``hyp2f1`` also accept NumPy arrays and evaluate elementwise.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import ConvergenceError, DomainError, ParameterError, PoleError

__all__ = [
    "as_complex",
    "log_gamma",
    "gamma_ratio",
    "beta_fn",
    "rgamma",
    "digamma",
    "gauss_2f1",
    "hyp2f1",
    "mittag_leffler",
    "mittag_leffler_derivative",
]

# Lanczos coefficients for g = 607/128, n = 15 (Godfrey).
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = np.array([
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_EPS = np.finfo(float).eps


def as_complex(z) -> complex:
    """Coerce ``z`` to ``complex``; NaN or infinite components are rejected."""
    w = complex(z)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise ParameterError(f"non-finite complex value {z!r}")
    return w


def _is_pole(z: np.ndarray) -> np.ndarray:
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


def _lanczos(z: np.ndarray) -> np.ndarray:
    # valid for Re z >= 1/2
    zm = z - 1.0
    x = np.full(z.shape, _LANCZOS_C[0], dtype=complex)
    for i in range(1, len(_LANCZOS_C)):
        x = x + _LANCZOS_C[i] / (zm + i)
    t = zm + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm + 0.5) * np.log(t) - t + np.log(x)


def log_gamma(z):
    """Principal branch of log Gamma(z).

    Uses the Lanczos approximation on Re z >= 1/2 and the upward recurrence
    log Gamma(z) = log Gamma(z + n) - sum_k log(z + k) elsewhere, which keeps
    the branch continuous off the negative real axis.

    Raises
    ------
    PoleError
        If any argument is a non-positive integer.
    """
    scalar = np.isscalar(z)
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    if not np.all(np.isfinite(zz)):
        raise ParameterError("log_gamma argument must be finite")
    if np.any(_is_pole(zz)):
        raise PoleError(f"log_gamma evaluated at a pole: {z!r}")
    shift = np.maximum(np.ceil(0.5 - zz.real), 0).astype(int)
    out = _lanczos(zz + shift)
    for k in range(int(shift.max(initial=0))):
        m = shift > k
        out[m] -= np.log(zz[m] + k)
    if scalar:
        return complex(out[0])
    return out.reshape(np.shape(z))


def gamma_ratio(z, w) -> complex:
    """Gamma(z) / Gamma(w), computed in log space so large |Im| cannot overflow."""
    return cmath.exp(log_gamma(as_complex(z)) - log_gamma(as_complex(w)))


def beta_fn(x, y) -> complex:
    """Euler Beta function Gamma(x) Gamma(y) / Gamma(x + y)."""
    x, y = as_complex(x), as_complex(y)
    return cmath.exp(log_gamma(x) + log_gamma(y) - log_gamma(x + y))


def rgamma(z):
    """Reciprocal Gamma function, entire: zero at the poles of Gamma."""
    scalar = np.isscalar(z)
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.zeros(zz.shape, dtype=complex)
    ok = ~_is_pole(zz)
    if np.any(ok):
        out[ok] = np.exp(-log_gamma(zz[ok]))
    if scalar:
        return complex(out[0])
    return out.reshape(np.shape(z))


def _rgamma_real(x: float) -> float:
    if x <= 0 and x == round(x):
        return 0.0
    lg = math.lgamma(x)
    sign = 1.0
    if x < 0:
        sign = -1.0 if math.floor(-x) % 2 == 0 else 1.0
    return sign * math.exp(-lg)


def digamma(z):
    """Digamma function via upward recurrence and the asymptotic series."""
    scalar = np.isscalar(z)
    zz = np.atleast_1d(np.asarray(z, dtype=complex)).copy()
    if np.any(_is_pole(zz)):
        raise PoleError(f"digamma evaluated at a pole: {z!r}")
    acc = np.zeros(zz.shape, dtype=complex)
    shift = np.maximum(np.ceil(10.0 - zz.real), 0).astype(int)
    for k in range(int(shift.max(initial=0))):
        m = shift > k
        acc[m] -= 1.0 / (zz[m] + k)
    w = zz + shift
    w2 = 1.0 / (w * w)
    # Bernoulli terms B_{2k} / (2k), k = 1..7
    series = w2 * (1 / 12 - w2 * (1 / 120 - w2 * (1 / 252 - w2 * (
        1 / 240 - w2 * (1 / 132 - w2 * (691 / 32760 - w2 / 12))))))
    out = acc + np.log(w) - 0.5 / w - series
    if scalar:
        return complex(out[0])
    return out.reshape(np.shape(z))


# ---------------------------------------------------------------------------
# Gauss hypergeometric function

_MAX_TERMS = 20000


def _neg_int(v: complex) -> bool:
    return v.imag == 0 and v.real <= 0 and v.real == round(v.real)


def _kahan_series(first: np.ndarray, ratio, x: np.ndarray) -> np.ndarray:
    """Sum sum_n t_n with t_0 = first and t_{n+1} = t_n * ratio(n) * x.

    Compensated accumulation, vectorized over ``x``.
    """
    term = np.array(first, dtype=complex) * np.ones_like(x, dtype=complex)
    total = term.copy()
    comp = np.zeros_like(total)
    ax = np.abs(x)
    for n in range(_MAX_TERMS):
        r = ratio(n)
        term = term * r * x
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if abs(r) * ax.max(initial=0.0) < 0.9 and np.all(
            np.abs(term) <= _EPS * 0.1 * np.maximum(np.abs(total), 1e-300)
        ):
            return total
    raise ConvergenceError("hypergeometric series did not converge")


def _series(a: complex, b: complex, c: complex, x: np.ndarray) -> np.ndarray:
    return _kahan_series(1.0, lambda n: (a + n) * (b + n) / ((c + n) * (n + 1)), x)


def _terminating(a: complex, b: complex, c: complex, x: np.ndarray) -> np.ndarray:
    # a is a non-positive integer; the polynomial is exact for any x
    deg = int(round(-a.real))
    term = np.ones_like(x, dtype=complex)
    total = term.copy()
    for n in range(deg):
        term = term * (a + n) * (b + n) / ((c + n) * (n + 1)) * x
        total = total + term
    return total


def _lg(z: complex) -> complex:
    return log_gamma(z)


def _near_one(a: complex, b: complex, c: complex, x: np.ndarray) -> np.ndarray:
    """2F1 for x in (1/2, 1) through the connection formulas in w = 1 - x."""
    w = 1.0 - x
    m = c - a - b
    mr = round(m.real)
    if m.imag != 0 or abs(m.real - mr) > 1e-12:
        coef_a = cmath.exp(_lg(c) + _lg(m)) * rgamma(c - a) * rgamma(c - b)
        coef_b = cmath.exp(_lg(c) + _lg(-m)) * rgamma(a) * rgamma(b)
        out = np.zeros_like(w, dtype=complex)
        if coef_a != 0:
            out += coef_a * _series(a, b, 1 - m, w)
        if coef_b != 0:
            out += coef_b * w.astype(complex) ** m * _series(c - a, c - b, m + 1, w)
        return out
    m = int(mr)
    if m < 0:
        # Euler transformation maps c - a - b to -m
        return w.astype(complex) ** m * _near_one(c - a, c - b, c, x)
    return _degenerate(a, b, m, w)


def _degenerate(a: complex, b: complex, m: int, w: np.ndarray) -> np.ndarray:
    """2F1(a, b; a + b + m; 1 - w) for integer m >= 0 (logarithmic case)."""
    c = a + b + m
    logw = np.log(w)
    out = np.zeros_like(w, dtype=complex)
    if m > 0:
        pre = cmath.exp(_lg(m) + _lg(c)) * rgamma(a + m) * rgamma(b + m)
        term = np.ones_like(w, dtype=complex)
        part = term.copy()
        for n in range(m - 1):
            term = term * (a + n) * (b + n) / ((n + 1) * (1 - m + n)) * w
            part = part + term
        out += pre * part
    pre2 = cmath.exp(_lg(c)) * rgamma(a) * rgamma(b)
    if pre2 == 0:
        return out
    # n = 0 term of the logarithmic series
    psi1 = complex(digamma(1.0))
    psim = complex(digamma(m + 1.0))
    psia = complex(digamma(a + m))
    psib = complex(digamma(b + m))
    coef = 1.0 / math.factorial(m)
    total = np.zeros_like(w, dtype=complex)
    comp = np.zeros_like(total)
    powk = np.ones_like(w, dtype=complex)
    for n in range(_MAX_TERMS):
        term = coef * powk * (logw - psi1 - psim + psia + psib)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if n > 2 and np.all(np.abs(term) <= _EPS * 0.1 * np.maximum(np.abs(total), 1e-300)):
            break
        coef = coef * (a + m + n) * (b + m + n) / ((n + 1) * (n + 1 + m))
        powk = powk * w
        psi1 += 1.0 / (n + 1)
        psim += 1.0 / (n + 1 + m)
        psia += 1.0 / (a + m + n)
        psib += 1.0 / (b + m + n)
    else:
        raise ConvergenceError("logarithmic 2F1 series did not converge")
    if m == 0:
        # the m = 0 formula is written with the opposite sign convention
        return -pre2 * total
    return out - (-1) ** m * pre2 * w.astype(complex) ** m * total


def hyp2f1(a, b, c, x):
    """Vectorized Gauss hypergeometric function for real ``x < 1``.

    Direct series on |x| <= 1/2, the Pfaff transformation for x < -1/2,
    and the connection formulas in 1 - x on (1/2, 1), including the
    logarithmic cases where c - a - b is an integer.
    """
    a, b, c = as_complex(a), as_complex(b), as_complex(c)
    if _neg_int(c):
        raise ParameterError(f"2F1 parameter c = {c} is a pole")
    scalar = np.isscalar(x)
    xx = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(~np.isfinite(xx)) or np.any(xx >= 1.0):
        raise DomainError("2F1 argument must be finite and < 1")
    out = np.empty(xx.shape, dtype=complex)
    if _neg_int(a) or _neg_int(b):
        if not _neg_int(a):
            a, b = b, a
        out[:] = _terminating(a, b, c, xx)
    elif _neg_int(c - a) or _neg_int(c - b):
        ca, cb = (c - a, c - b) if _neg_int(c - a) else (c - b, c - a)
        out[:] = (1.0 - xx) ** (c - a - b) * _terminating(ca, cb, c, xx)
    else:
        mid = np.abs(xx) <= 0.5
        hi = xx > 0.5
        lo = xx < -0.5
        if np.any(mid):
            out[mid] = _series(a, b, c, xx[mid])
        if np.any(hi):
            out[hi] = _near_one(a, b, c, xx[hi])
        if np.any(lo):
            z = xx[lo] / (xx[lo] - 1.0)
            pre = (1.0 - xx[lo]).astype(complex) ** (-a)
            out[lo] = pre * hyp2f1(a, c - b, c, z)
    if scalar:
        return complex(out[0])
    return out.reshape(np.shape(x))


def gauss_2f1(a, b, c, x: float) -> complex:
    """Gauss hypergeometric function 2F1(a, b; c; x), normalized so 2F1(.; 0) = 1.

    >>> round(gauss_2f1(1, 2, 2, -1).real, 12)
    0.5
    """
    return hyp2f1(a, b, c, float(x))


# ---------------------------------------------------------------------------
# Mittag-Leffler

_ML_ENVELOPE = 50.0
# the largest series term is about exp(|z|^(1/beta)); beyond this the sum needs
# hundreds of digits and floating-point terms overflow
_ML_PEAK_EXPONENT = 600.0


def _ml_envelope(beta: float, z: complex) -> None:
    r = abs(z)
    if r > _ML_ENVELOPE:
        raise ConvergenceError(f"|z| = {r:.3g} outside the series envelope {_ML_ENVELOPE}")
    if r > 1 and math.log(r) / beta > math.log(_ML_PEAK_EXPONENT):
        raise ConvergenceError(f"|z|^(1/beta) = {r ** (1 / beta):.3g} exceeds {_ML_PEAK_EXPONENT:g}")


def _ml_terms(beta: float, z: complex, shift: float = 1.0):
    terms = []
    if z == 0:
        return [_rgamma_real(shift)]
    real = z.imag == 0
    logr, theta = math.log(abs(z)), cmath.phase(z)
    n = 0
    peak = 0.0
    while True:
        arg = beta * n + shift
        if arg <= 0 and arg == round(arg):
            term = 0.0
        else:
            sign = 1.0 if arg > 0 or math.floor(-arg) % 2 == 1 else -1.0
            mag = math.exp(n * logr - math.lgamma(arg))
            if real:
                term = sign * mag * (-1.0 if z.real < 0 and n % 2 else 1.0)
            else:
                term = sign * cmath.rect(mag, n * theta)
        terms.append(term)
        mag = abs(term)
        peak = max(peak, mag)
        # terms decay super-geometrically once beta*n exceeds |z|^(1/beta)
        if n > 3 and arg > 2 and mag <= 1e-18 * max(peak, 1.0) and mag < abs(terms[-2]) + 1e-300:
            break
        n += 1
        if n > 5000:
            raise ConvergenceError("Mittag-Leffler series did not converge")
    return terms


def _fsum_complex(terms) -> complex:
    return complex(math.fsum(t.real for t in map(complex, terms)),
                   math.fsum(t.imag for t in map(complex, terms)))


def _ml_mp(beta: float, z: complex, shift: float, digits: int) -> complex:
    import mpmath

    with mpmath.workdps(digits):
        zz = mpmath.mpc(z.real, z.imag)
        total = mpmath.mpc(0)
        n = 0
        while True:
            arg = mpmath.mpf(beta) * n + shift
            term = zz ** n * mpmath.rgamma(arg)
            total += term
            if n > 5 and arg > 2 and abs(term) < mpmath.mpf(10) ** (-20) * max(abs(total), 1):
                break
            n += 1
        return complex(total)


def _ml(beta: float, z: complex, shift: float) -> complex:
    terms = _ml_terms(beta, z, shift)
    peak = max(abs(complex(t)) for t in terms)
    s = _fsum_complex(terms)
    loss = peak / max(abs(s), 1e-300)
    if peak > 1e2 or loss > 16.0:
        # cancellation would cost more than one digit of the relative accuracy
        return _ml_mp(beta, z, shift, 25 + int(math.log10(max(peak, 1.0)) + min(math.log10(loss), 40)))
    return s


def mittag_leffler(beta: float, z) -> complex:
    """One-parameter Mittag-Leffler function E_beta(z) = sum z^n / Gamma(beta n + 1).

    Plain power series with exactly rounded summation; when the terms grow
    large enough to cancel, the same series is summed in extended precision.
    """
    if not beta > 0:
        raise ParameterError("Mittag-Leffler order must be positive")
    z = as_complex(z)
    _ml_envelope(beta, z)
    return _ml(beta, z, 1.0)


def mittag_leffler_derivative(beta: float, lam, t: float, order: int = 1) -> complex:
    """d^k/dt^k E_beta(lam t^beta) for t > 0, by termwise differentiation."""
    if t <= 0:
        raise DomainError("derivative of E_beta(lam t^beta) requires t > 0")
    lam = as_complex(lam)
    z = lam * t ** beta
    _ml_envelope(beta, z)
    if order == 0:
        return _ml(beta, z, 1.0)
    # sum_n lam^n t^(beta n - k) / Gamma(beta n + 1 - k)
    return _ml(beta, z, 1.0 - order) * t ** (-order)
