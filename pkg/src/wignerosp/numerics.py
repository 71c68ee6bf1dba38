"""Scalar building blocks: Pochhammer symbols, hypergeometric series, the
complex gamma function, adaptive Gauss-Legendre quadrature and two
generating-function identity checkers, plus smoothed summation of slowly
convergent series and central finite differences.

Terminating hypergeometric sums such as ``2F1(-n, b; c; 2)`` suffer from
catastrophic cancellation (the terms grow like ``3**n`` while the sum stays
O(1)).  They are therefore accumulated exactly in scaled integer arithmetic;
see :func:`terminating_2f1_table`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import mpmath
import numpy as np

from .exceptions import ConvergenceError, DomainError, PoleError

__all__ = [
    "QuadratureSpec",
    "pochhammer_rising",
    "terminating_2f1",
    "terminating_1f1",
    "terminating_2f1_table",
    "terminating_1f1_table",
    "hyp0f1",
    "hyp1f1",
    "gamma_complex",
    "abs_gamma",
    "log_abs_gamma",
    "integrate",
    "integrate_vector",
    "jagannathan_pair",
    "intseries_pair",
    "smooth_window",
    "smoothed_sum",
    "central_difference",
]


def pochhammer_rising(a: float, n: int) -> float:
    """Rising factorial ``(a)_n = a (a+1) ... (a+n-1)``; ``(a)_0 = 1``."""
    if n < 0:
        raise DomainError("n must be non-negative")
    out = 1.0
    for k in range(n):
        out *= a + k
    return out


# ---------------------------------------------------------------------------
# terminating series
# ---------------------------------------------------------------------------

_GUARD_BITS = 64


def _binomial_transform(coeffs: Sequence[int]) -> list[int]:
    # F_n = sum_k C(n, k) c_k, via repeated pairwise sums (additions only).
    row = list(coeffs)
    out = [row[0]]
    while len(row) > 1:
        row = [u + v for u, v in zip(row, row[1:])]
        out.append(row[0])
    return out


def _scaled_terms(nmax, b, c, z, prec):
    """Return the terms ``d_k = (b)_k / (c)_k * (-z)**k`` scaled by ``2**prec``
    and rounded to integers (real and imaginary parts separately)."""
    ctx = mpmath.MPContext()
    # working precision: absolute accuracy 2**-prec even for the largest term
    log2_max = 0.0
    log2_d = 0.0
    for k in range(nmax):
        if b is not None:
            log2_d += math.log2(abs(b + k) or 1e-300)
        log2_d += math.log2(abs(z) or 1e-300) - math.log2(abs(c + k))
        log2_max = max(log2_max, log2_d)
    ctx.prec = prec + int(log2_max) + 32
    bb = ctx.mpc(b.real, b.imag) if b is not None else None
    cc = ctx.mpf(c)
    mz = -ctx.mpf(z)
    two_p = ctx.ldexp(ctx.mpf(1), prec)
    d = ctx.mpc(1) if bb is not None else ctx.mpf(1)
    re_terms, im_terms = [], []
    for k in range(nmax + 1):
        scaled = d * two_p
        if bb is None:
            re_terms.append(int(ctx.nint(scaled)))
        else:
            re_terms.append(int(ctx.nint(scaled.real)))
            im_terms.append(int(ctx.nint(scaled.imag)))
        if k < nmax:
            d = d * mz / (cc + k)
            if bb is not None:
                d = d * (bb + k)
    return re_terms, (im_terms if b is not None else None)


def _check_denominators(nmax: int, c: float) -> None:
    for k in range(nmax):
        if c + k == 0:
            raise DomainError(f"(c)_k vanishes for c={c}, k={k + 1}")


def _terminating_table(nmax, b, c, z):
    if nmax < 0:
        raise DomainError("n must be non-negative")
    _check_denominators(nmax, c)
    if z == 0 or nmax == 0:
        ones = [1.0] * (nmax + 1)
        return [complex(v) for v in ones] if b is not None else ones
    prec = nmax + 53 + _GUARD_BITS
    for attempt in range(4):
        used = prec
        re_terms, im_terms = _scaled_terms(nmax, b, c, z, prec)
        re_sums = _binomial_transform(re_terms)
        im_sums = _binomial_transform(im_terms) if im_terms is not None else None
        # rounding error of F_n is at most 2**(n-1) units; demand 60 clean bits
        deficit = 0
        for n in range(nmax + 1):
            mag = abs(re_sums[n])
            if im_sums is not None:
                mag = max(mag, abs(im_sums[n]))
            if mag == 0:
                continue
            spare = mag.bit_length() - n - 60
            deficit = max(deficit, -spare)
        if deficit == 0:
            break
        # values that are exactly zero never show clean bits; stop escalating
        # once the absolute accuracy is far beyond double precision
        prec += min(deficit + 8, 2 * prec)
    scale = 1 << used
    if im_sums is None:
        return [r / scale for r in re_sums]
    return [complex(r / scale, i / scale) for r, i in zip(re_sums, im_sums)]


def terminating_2f1_table(nmax: int, b: complex, c: float, z: float) -> list[complex]:
    """Values of ``2F1(-n, b; c; z)`` for ``n = 0, ..., nmax``.

    The finite sums are accumulated exactly: every term
    ``(b)_k (-z)^k / (c)_k`` is formed in multiprecision, rounded to a fixed
    point integer, and the binomial weights are applied in integer
    arithmetic.  Precision is raised until each result carries at least 60
    correct bits, so the returned doubles are correctly rounded up to a few
    ulps regardless of cancellation.
    """
    return _terminating_table(int(nmax), complex(b), float(c), float(z))


def terminating_1f1_table(nmax: int, c: float, z: float) -> list[float]:
    """Values of ``1F1(-n; c; z)`` for ``n = 0, ..., nmax`` (see
    :func:`terminating_2f1_table`)."""
    return _terminating_table(int(nmax), None, float(c), float(z))


def terminating_2f1(n: int, b: complex, c: float, z: float) -> complex:
    """``2F1(-n, b; c; z)`` as the exact finite sum of ``n + 1`` terms.

    Raises
    ------
    DomainError
        If a denominator Pochhammer factor ``(c)_k`` vanishes for ``k <= n``.
    """
    return terminating_2f1_table(n, b, c, z)[-1]


def terminating_1f1(n: int, c: float, z: float) -> float:
    """``1F1(-n; c; z) = sum_k (-n)_k z^k / ((c)_k k!)``."""
    return terminating_1f1_table(n, c, z)[-1]


# ---------------------------------------------------------------------------
# convergent series
# ---------------------------------------------------------------------------

_SERIES_TOL = 1e-16
_SERIES_CAP = 10000


def _mp_series(ctx, first, ratio, tol):
    s = first
    term = first
    for k in range(_SERIES_CAP):
        term = term * ratio(k)
        s += term
        if term == 0 or abs(term) <= tol * abs(s):
            return s
    raise ConvergenceError("series did not converge within the term cap")


def hyp0f1(c: float, z: float) -> float:
    """Confluent limit function ``0F1(; c; z)`` for ``c > 0``.

    Summed in double precision until ``|term| < 1e-16 |partial sum|``.  When
    the largest term exceeds the result by more than ``1e3`` (cancellation
    for large negative ``z``) the sum is redone in multiprecision.
    """
    if c <= 0:
        raise DomainError("c must be positive")
    if z == 0:
        return 1.0
    s = 1.0
    term = 1.0
    biggest = 1.0
    for k in range(_SERIES_CAP):
        term *= z / ((c + k) * (k + 1))
        s += term
        if not (math.isfinite(term) and math.isfinite(s)):
            if z > 0:
                return math.inf
            # terms peak near exp(2 sqrt|z|); let the multiprecision pass decide
            biggest, s = math.inf, 1.0
            break
        biggest = max(biggest, abs(term))
        if abs(term) <= _SERIES_TOL * abs(s):
            break
    else:
        raise ConvergenceError("0F1 series did not converge within 10000 terms")
    if biggest <= 1e3 * abs(s):
        return s
    ctx = mpmath.MPContext()
    if math.isinf(biggest):
        ctx.prec = 53 + 40 + int(2 * math.sqrt(-z) / math.log(2)) + 1
    else:
        ctx.prec = 53 + 40 + int(math.log2(biggest / abs(s)) + 1)
    zz, cc = ctx.mpf(z), ctx.mpf(c)
    return float(_mp_series(ctx, ctx.mpf(1), lambda k: zz / ((cc + k) * (k + 1)),
                            ctx.ldexp(1, -70)))


def hyp1f1(b: complex, c: float, z: float) -> complex:
    """Kummer's function ``1F1(b; c; z)`` with complex ``b`` by direct series
    in multiprecision (precision grown with ``|z|`` to absorb cancellation)."""
    if c <= 0 and float(c).is_integer():
        raise DomainError("c must not be a non-positive integer")
    ctx = mpmath.MPContext()
    ctx.prec = 53 + 40 + int(2.9 * abs(z))
    bb, cc, zz = ctx.mpc(complex(b)), ctx.mpf(c), ctx.mpf(z)
    val = _mp_series(ctx, ctx.mpc(1), lambda k: (bb + k) * zz / ((cc + k) * (k + 1)),
                     ctx.ldexp(1, -70))
    return complex(val)


# ---------------------------------------------------------------------------
# gamma function
# ---------------------------------------------------------------------------

_LANCZOS_G = 7
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def _log_gamma_lanczos(z: complex) -> complex:
    # valid for Re z >= 0.5
    z = z - 1
    x = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        x += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def _log_gamma(z: complex) -> complex:
    # shift into Re z >= 0.5 instead of reflecting; safe for any Im z
    shift = 0j
    while z.real < 0.5:
        shift += cmath.log(z)
        z += 1
    return _log_gamma_lanczos(z) - shift


def gamma_complex(z: complex) -> complex:
    """Gamma function for complex argument (Lanczos, g = 7, 9 terms).

    Uses the reflection formula for ``Re z < 0.5``.  Relative accuracy is
    better than ``1e-12`` for ``|z| < 50``.
    """
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise PoleError(f"gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        if abs(z.imag) > 100:
            # sin(pi z) would overflow; the value itself is ~exp(-pi |Im z| / 2)
            return cmath.exp(_log_gamma(z))
        return math.pi / (cmath.sin(math.pi * z) * gamma_complex(1 - z))
    return cmath.exp(_log_gamma_lanczos(z))


def log_abs_gamma(z: complex) -> float:
    """``log |Gamma(z)|`` without overflow or underflow."""
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise PoleError(f"gamma has a pole at {z.real:g}")
    return _log_gamma(z).real


def abs_gamma(z: complex) -> float:
    """``|Gamma(z)|``; underflows gracefully to 0 for large ``|Im z|``."""
    return math.exp(log_abs_gamma(z))


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class QuadratureSpec:
    """Integration interval and stopping rule for :func:`integrate`.

    ``breaks`` are extra panel boundaries (0 is always added when it lies
    inside the interval so that ``|x|**(2a-1)`` singularities sit on a
    boundary).
    """

    lo: float
    hi: float
    rel_tol: float = 1e-10
    max_refinements: int = 100
    breaks: tuple = ()
    initial_panels: int = 8

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError("quadrature limits must be finite")
        if not self.lo < self.hi:
            raise DomainError("need lo < hi")
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if self.max_refinements < 1:
            raise DomainError("max_refinements must be >= 1")


def _gl_panels(f, lo, hi):
    # 16-point rule on each [lo_i, hi_i]; f is called once on all nodes.
    # Returns (integral, integral of |f|), each of shape (panels, components).
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = np.asarray(f(x.ravel()), dtype=complex)
    vals = vals.reshape(x.shape + vals.shape[1:])
    if vals.ndim == 2:
        vals = vals[..., None]
    est = np.einsum("pnk,n->pk", vals, _GL_WEIGHTS) * half[:, None]
    mass = np.einsum("pnk,n->pk", np.abs(vals), _GL_WEIGHTS) * half[:, None]
    return est, mass


def integrate_vector(f: Callable[[np.ndarray], np.ndarray], spec: QuadratureSpec) -> np.ndarray:
    """Integrate several functions on a shared adaptive mesh.

    ``f`` maps a 1-D array of ``m`` abscissae to an ``(m, k)`` array; the
    result has shape ``(k,)``.  Each component must individually meet the
    stopping rule of :func:`integrate`.
    """
    edges = {spec.lo, spec.hi}
    edges.update(b for b in spec.breaks if spec.lo < b < spec.hi)
    if spec.lo < 0 < spec.hi:
        edges.add(0.0)
    edges = sorted(edges)
    lo, hi = [], []
    for a, b in zip(edges, edges[1:]):
        cuts = np.linspace(a, b, spec.initial_panels + 1)
        lo.extend(cuts[:-1])
        hi.extend(cuts[1:])
    lo = np.asarray(lo)
    hi = np.asarray(hi)

    def assess(lo, hi):
        mid = 0.5 * (lo + hi)
        coarse, _ = _gl_panels(f, lo, hi)
        left, labs = _gl_panels(f, lo, mid)
        right, rabs = _gl_panels(f, mid, hi)
        return left + right, labs + rabs, np.abs(left + right - coarse)

    est, mass, err = assess(lo, hi)
    for _ in range(spec.max_refinements):
        budget = spec.rel_tol * np.maximum(mass.sum(axis=0), np.finfo(float).tiny)
        if np.all(err.sum(axis=0) <= budget):
            return est.sum(axis=0)
        bad = np.any(err > budget / len(err), axis=1)
        if not bad.any():
            bad = np.any(err >= err.max(axis=0), axis=1)
        mid = 0.5 * (lo[bad] + hi[bad])
        new_lo = np.concatenate([lo[bad], mid])
        new_hi = np.concatenate([mid, hi[bad]])
        e2, m2, r2 = assess(new_lo, new_hi)
        keep = ~bad
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        est = np.concatenate([est[keep], e2])
        mass = np.concatenate([mass[keep], m2])
        err = np.concatenate([err[keep], r2])
    raise ConvergenceError(
        f"quadrature did not reach rel_tol={spec.rel_tol} in {spec.max_refinements} refinements"
    )


def integrate(f: Callable[[np.ndarray], np.ndarray], spec: QuadratureSpec) -> complex:
    """Adaptive composite Gauss-Legendre quadrature (16-point panels).

    ``f`` must be vectorised: it receives a 1-D array of abscissae and
    returns an array of (possibly complex) values.  Every panel is compared
    against the sum over its two halves; panels with a large discrepancy are
    bisected until the total discrepancy is below ``rel_tol * int |f|``.
    Using ``int |f|`` as the scale keeps the rule meaningful for integrals
    that vanish (off-diagonal Gram entries).

    Raises
    ------
    ConvergenceError
        If ``spec.max_refinements`` bisection rounds do not suffice.
    """
    return complex(integrate_vector(lambda x: np.asarray(f(x))[:, None], spec)[0])


# ---------------------------------------------------------------------------
# generating-function identities
# ---------------------------------------------------------------------------


def _check_t(t: float, a: float) -> None:
    if not abs(t) < 1:
        raise DomainError("|t| must be < 1")
    if not a > 0:
        raise DomainError("a must be positive")


def jagannathan_pair(a: float, b: complex, x: float, y: float, t: float,
                     n_terms: int) -> tuple[complex, complex]:
    """Both sides of the bilinear generating function

    ``sum_n (a)_n/n! 2F1(-n, b; a; y) 1F1(-n; a; x) t^n
    = (1-t)^(b-a) (1-t+yt)^(-b) exp(xt/(t-1)) 1F1(b; a; xyt/((1-t)(1-t+yt)))``

    The left side is truncated after ``n_terms`` terms.
    """
    _check_t(t, a)
    b = complex(b)
    m = n_terms - 1
    f21 = terminating_2f1_table(m, b, a, y)
    f11 = terminating_1f1_table(m, a, x)
    lhs = 0j
    weight = 1.0  # (a)_n t^n / n!
    for n in range(n_terms):
        lhs += weight * f21[n] * f11[n]
        weight *= (a + n) * t / (n + 1)
    s = 1 - t + y * t
    arg = x * y * t / ((1 - t) * s)
    rhs = ((1 - t) ** (b - a)) * (complex(s) ** (-b)) * math.exp(x * t / (t - 1)) * hyp1f1(b, a, arg)
    return lhs, rhs


def intseries_pair(a: float, x: float, y: float, t: float,
                   n_terms: int) -> tuple[float, float]:
    """Both sides of

    ``sum_n (a)_n/n! 1F1(-n; a; x) 1F1(-n; a; y) t^n
    = (1-t)^(-a) exp(t(x+y)/(t-1)) 0F1(; a; txy/(1-t)^2)``
    """
    _check_t(t, a)
    m = n_terms - 1
    fx = terminating_1f1_table(m, a, x)
    fy = fx if y == x else terminating_1f1_table(m, a, y)
    terms = []
    weight = 1.0
    for n in range(n_terms):
        terms.append(weight * fx[n] * fy[n])
        weight *= (a + n) * t / (n + 1)
    lhs = math.fsum(terms)
    rhs = (1 - t) ** (-a) * math.exp(t * (x + y) / (t - 1)) * hyp0f1(a, t * x * y / (1 - t) ** 2)
    return lhs, rhs


# ---------------------------------------------------------------------------
# smoothed summation and finite differences
# ---------------------------------------------------------------------------


def smooth_window(n_terms: int) -> np.ndarray:
    """Weights ``w(k/n_terms)`` of a C-infinity cutoff equal to 1 at ``k = 0``
    and vanishing with all derivatives as ``k -> n_terms``.

    ``w(u) = g(1-u) / (g(1-u) + g(u))`` with ``g(s) = exp(-1/s)`` for ``s > 0``.
    The weights tend to 1 for every fixed ``k``, so the weighted sums of a
    convergent series converge to its sum, but oscillating tails are damped
    far faster than by plain truncation.
    """
    u = np.arange(n_terms) / n_terms

    def g(s):
        return np.where(s > 0, np.exp(-1.0 / np.where(s > 0, s, 1.0)), 0.0)

    return g(1 - u) / (g(1 - u) + g(u))


def smoothed_sum(terms, axis: int = 0):
    """``sum_k w_k t_k`` with :func:`smooth_window` weights along ``axis``."""
    t = np.asarray(terms)
    w = smooth_window(t.shape[axis])
    shape = [1] * t.ndim
    shape[axis] = -1
    return np.sum(t * w.reshape(shape), axis=axis)


def central_difference(f: Callable[[float], complex], x: float, h: float = 1e-5,
                       order: int = 1) -> complex:
    """Second-order central difference of ``f`` at ``x`` (first or second derivative)."""
    if h <= 0:
        raise DomainError("step h must be positive")
    if order == 1:
        return (f(x + h) - f(x - h)) / (2 * h)
    if order == 2:
        return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)
    raise DomainError("only first and second derivatives are supported")
