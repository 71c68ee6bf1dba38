"""Meixner-Pollaczek, Laguerre and generalized Hermite polynomials.

Each family comes in a raw form and a "tilde" form that carries the square
root of the orthogonality weight and a normalisation constant:

* ``P~_n(E)``   Meixner-Pollaczek with ``lambda = a/2``, ``phi = pi/2``;
  ``int P~_m P~_n dE = delta_mn / 2`` over the real line.
* ``L~_n(x)``   Laguerre; ``int_0^inf L~_m L~_n dx = 2 delta_mn``.
* ``Q~_n(x)``   generalized Hermite; ``int Q~_m Q~_n dx = delta_mn``.

Closed forms go through the exact terminating series of
:mod:`wignerosp.numerics`; :func:`recurrence_eval` and
:func:`recurrence_table` compute the same tilde functions purely from the
three-term recurrences, seeded at degrees 0 and 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exceptions import DomainError, NumericalError
from .numerics import (
    QuadratureSpec,
    abs_gamma,
    integrate_vector,
    terminating_1f1_table,
    terminating_2f1_table,
)

__all__ = [
    "Family",
    "PolyFamily",
    "PolyValue",
    "mp_eval",
    "laguerre_eval",
    "genhermite_eval",
    "mp_table",
    "laguerre_table",
    "genhermite_table",
    "recurrence_eval",
    "recurrence_table",
    "gram_matrix",
]

_IMAG_RESIDUE = 1e-10


class Family(str, Enum):
    MEIXNER_POLLACZEK = "mp"
    LAGUERRE = "laguerre"
    GEN_HERMITE = "genhermite"


@dataclass(frozen=True)
class PolyFamily:
    """A polynomial family together with its parameter.

    ``param`` is ``a`` for Meixner-Pollaczek and generalized Hermite
    (``a > 0``) and ``alpha`` for Laguerre (``alpha > -1``).
    """

    kind: Family
    param: float

    def __post_init__(self):
        object.__setattr__(self, "kind", Family(self.kind))
        if self.kind is Family.LAGUERRE:
            if not self.param > -1:
                raise DomainError("Laguerre parameter must exceed -1")
        elif not self.param > 0:
            raise DomainError("a must be positive")

    @property
    def norm(self) -> float:
        """Diagonal value of the tilde Gram matrix."""
        return {Family.MEIXNER_POLLACZEK: 0.5, Family.LAGUERRE: 2.0, Family.GEN_HERMITE: 1.0}[self.kind]


@dataclass(frozen=True)
class PolyValue:
    degree: int
    point: float
    value: float
    normalized: bool


def _log_sqrt_ratio(n: int, p: float) -> float:
    # log sqrt(n! / Gamma(n + p))
    return 0.5 * (math.lgamma(n + 1) - math.lgamma(n + p))


def _check_a(a: float) -> None:
    if not a > 0:
        raise DomainError("a must be positive")


# ---------------------------------------------------------------------------
# Meixner-Pollaczek
# ---------------------------------------------------------------------------


def mp_table(nmax: int, a: float, E: float, normalized: bool = False) -> np.ndarray:
    """``P_n(E)`` (or ``P~_n(E)``) for ``n = 0..nmax`` from the closed form

    ``P_n(E) = i^n (a)_n / n! 2F1(-n, a/2 + iE; a; 2)``.
    """
    _check_a(a)
    f = terminating_2f1_table(nmax, complex(a / 2, E), a, 2.0)
    out = np.empty(nmax + 1)
    log_weight = abs_gamma(complex(a / 2, E))
    for n, val in enumerate(f):
        z = (1j ** n) * val
        if abs(z.imag) > _IMAG_RESIDUE * max(1.0, abs(z.real)):
            raise NumericalError(f"P_{n}({E}) has imaginary residue {z.imag:.3e}")
        if normalized:
            # (a)_n/n! * sqrt(2^a n!/(pi Gamma(n+a))) = sqrt(Gamma(n+a)/n!) * sqrt(2^a/pi) / Gamma(a)
            scale = math.exp(-_log_sqrt_ratio(n, a) - math.lgamma(a))
            out[n] = 0.5 * log_weight * math.sqrt(2 ** a / math.pi) * scale * z.real
        else:
            out[n] = math.exp(math.lgamma(n + a) - math.lgamma(a) - math.lgamma(n + 1)) * z.real
    return out


def mp_eval(n: int, a: float, E: float, normalized: bool = False) -> float:
    """Meixner-Pollaczek polynomial ``P_n^{(a/2)}(E; pi/2)`` or its tilde form.

    Raises
    ------
    NumericalError
        If the closed form leaves an imaginary part above ``1e-10 |value|``.
    """
    return float(mp_table(n, a, E, normalized)[n])


# ---------------------------------------------------------------------------
# Laguerre
# ---------------------------------------------------------------------------


def laguerre_table(nmax: int, alpha: float, x: float, normalized: bool = False) -> np.ndarray:
    if not alpha > -1:
        raise DomainError("alpha must exceed -1")
    if normalized and x < 0:
        raise DomainError("normalized Laguerre functions need x >= 0")
    f = terminating_1f1_table(nmax, alpha + 1, x)
    out = np.empty(nmax + 1)
    for n, val in enumerate(f):
        log_poch = math.lgamma(n + alpha + 1) - math.lgamma(alpha + 1) - math.lgamma(n + 1)
        if normalized:
            if x == 0:
                pre = 0.0 if alpha > 0 else (math.inf if alpha < 0 else 1.0)
                if not math.isfinite(pre):
                    out[n] = math.inf
                    continue
            else:
                pre = math.exp(-x / 2 + 0.5 * alpha * math.log(x))
            out[n] = math.sqrt(2) * pre * math.exp(log_poch + _log_sqrt_ratio(n, alpha + 1)) * val
        else:
            out[n] = math.exp(log_poch) * val
    return out


def laguerre_eval(n: int, alpha: float, x: float, normalized: bool = False) -> float:
    """``L_n^{(alpha)}(x) = (alpha+1)_n/n! 1F1(-n; alpha+1; x)``, or
    ``L~_n = sqrt(2) e^{-x/2} x^{alpha/2} sqrt(n!/Gamma(n+alpha+1)) L_n``."""
    return float(laguerre_table(n, alpha, x, normalized)[n])


# ---------------------------------------------------------------------------
# generalized Hermite
# ---------------------------------------------------------------------------


def _genhermite_envelope(a: float, x: float) -> float:
    # |x|^(a-1/2) e^(-x^2/2)
    if x == 0:
        if a < 0.5:
            return math.inf
        return 1.0 if a == 0.5 else 0.0
    return math.exp((a - 0.5) * math.log(abs(x)) - 0.5 * x * x)


def genhermite_table(nmax: int, a: float, x: float, normalized: bool = False) -> np.ndarray:
    """``Q_n^{(a)}(x)`` or ``Q~_n^{(a)}(x)`` for ``n = 0..nmax``.

    ``Q_{2m} = (-1)^m L_m^{(a-1)}(x^2)`` and ``Q_{2m+1} = (-1)^m x L_m^{(a)}(x^2)``.
    At ``x = 0`` with ``a < 1/2`` the tilde functions of even degree are
    ``+inf`` (the odd ones vanish).
    """
    _check_a(a)
    half = nmax // 2
    even = laguerre_table(half, a - 1, x * x)
    odd = laguerre_table(half, a, x * x)
    env = _genhermite_envelope(a, x) if normalized else 1.0
    out = np.empty(nmax + 1)
    for n in range(nmax + 1):
        m, r = divmod(n, 2)
        sign = -1.0 if m % 2 else 1.0
        if r == 0:
            val = sign * even[m]
            scale = math.exp(_log_sqrt_ratio(m, a))
        else:
            val = sign * x * odd[m]
            scale = math.exp(_log_sqrt_ratio(m, a + 1))
        if normalized:
            if math.isinf(env):
                out[n] = math.inf if r == 0 else 0.0
                continue
            val = env * scale * val
        out[n] = val
    return out


def genhermite_eval(n: int, a: float, x: float, normalized: bool = False) -> float:
    """Generalized Hermite polynomial ``Q_n^{(a)}(x)`` or its tilde form."""
    return float(genhermite_table(n, a, x, normalized)[n])


# ---------------------------------------------------------------------------
# recurrences
# ---------------------------------------------------------------------------


def _seeds(family: PolyFamily, x: np.ndarray):
    p = family.param
    if family.kind is Family.MEIXNER_POLLACZEK:
        w = np.array([abs_gamma(complex(p / 2, e)) for e in x.ravel()]).reshape(x.shape)
        p0 = 0.5 * w * math.sqrt(2 ** p / (math.pi * math.gamma(p)))
        return p0, 2 * x * p0 / math.sqrt(p)
    if family.kind is Family.LAGUERRE:
        with np.errstate(divide="ignore", invalid="ignore"):
            env = math.sqrt(2) * np.exp(-x / 2) * np.power(x, p / 2)
        l0 = env / math.sqrt(math.gamma(p + 1))
        return l0, l0 * (p + 1 - x) / math.sqrt(p + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        env = np.power(np.abs(x), p - 0.5) * np.exp(-0.5 * x * x)
    return env / math.sqrt(math.gamma(p)), env * x / math.sqrt(math.gamma(p + 1))


def _recur(family: PolyFamily, nmax: int, x: np.ndarray, f0, f1) -> np.ndarray:
    p = family.param
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = f0
    if nmax == 0:
        return out
    out[1] = f1
    kind = family.kind
    for n in range(1, nmax):
        if kind is Family.MEIXNER_POLLACZEK:
            # 2E P~_n = sqrt(n(n+a-1)) P~_{n-1} + sqrt((n+1)(n+a)) P~_{n+1}
            out[n + 1] = (2 * x * out[n] - math.sqrt(n * (n + p - 1)) * out[n - 1]) / math.sqrt(
                (n + 1) * (n + p))
        elif kind is Family.LAGUERRE:
            out[n + 1] = ((2 * n + p + 1 - x) * out[n] - math.sqrt(n * (n + p)) * out[n - 1]) / math.sqrt(
                (n + 1) * (n + p + 1))
        else:
            m, r = divmod(n, 2)
            if r == 0:
                # x Q~_2m = sqrt(m) Q~_{2m-1} + sqrt(m+a) Q~_{2m+1}
                out[n + 1] = (x * out[n] - math.sqrt(m) * out[n - 1]) / math.sqrt(m + p)
            else:
                # x Q~_{2m+1} = sqrt(m+a) Q~_2m + sqrt(m+1) Q~_{2m+2}
                out[n + 1] = (x * out[n] - math.sqrt(m + p) * out[n - 1]) / math.sqrt(m + 1)
    return out


def recurrence_table(family: PolyFamily, nmax: int, points) -> np.ndarray:
    """Tilde functions of degrees ``0..nmax`` at ``points`` by upward
    three-term recurrence.  Returns an array of shape ``(nmax+1, *points.shape)``.

    Upward recurrence is stable on the oscillatory region of each family;
    far in the exponentially small tail it loses relative accuracy.
    """
    x = np.asarray(points, dtype=float)
    f0, f1 = _seeds(family, x)
    return _recur(family, nmax, x, f0, f1)


_CLOSED = {
    Family.MEIXNER_POLLACZEK: mp_table,
    Family.LAGUERRE: laguerre_table,
    Family.GEN_HERMITE: genhermite_table,
}


def recurrence_eval(family: PolyFamily, n: int, point: float) -> float:
    """Tilde function of degree ``n`` at ``point``, computed only by the
    recurrence from degree-0/1 seeds taken from the closed forms."""
    seeds = _CLOSED[family.kind](min(n, 1), family.param, point, True)
    if n <= 1:
        return float(seeds[n])
    x = np.array([float(point)])
    return float(_recur(family, n, x, seeds[0], seeds[1])[n, 0])


# ---------------------------------------------------------------------------
# Gram matrices
# ---------------------------------------------------------------------------


def _natural_domain(family: PolyFamily, max_degree: int) -> tuple[float, float]:
    # cut where the top-degree tilde function squared drops below 1e-18 of its peak
    probe = np.linspace(0.0, 400.0, 40001)[1:]
    vals = recurrence_table(family, max_degree, probe) ** 2
    envelope = vals.max(axis=0)
    peak = envelope.max()
    beyond = np.nonzero(envelope > 1e-18 * peak)[0]
    cut = float(probe[beyond[-1]]) + 1.0
    if family.kind is Family.LAGUERRE:
        return 0.0, cut
    if family.kind is Family.MEIXNER_POLLACZEK:
        # weight |Gamma(a/2 + iE)|^2 is even in E
        return -cut, cut
    return -cut, cut


def gram_matrix(family: PolyFamily, max_degree: int, spec: QuadratureSpec | None = None) -> np.ndarray:
    """Matrix of integrals ``G[m, n] = int f~_m f~_n`` over the family's
    natural domain, tails truncated where the integrand is below 1e-18 of
    its peak.  Expected value: ``family.norm * I``.
    """
    if max_degree > 20:
        raise DomainError("max_degree is limited to 20")
    if spec is None:
        lo, hi = _natural_domain(family, max_degree)
        spec = QuadratureSpec(lo, hi, rel_tol=1e-12, max_refinements=200)
    size = max_degree + 1
    iu = np.triu_indices(size)

    def integrand(x):
        t = recurrence_table(family, max_degree, x)
        return (t[iu[0]] * t[iu[1]]).T

    values = integrate_vector(integrand, spec).real
    g = np.empty((size, size))
    g[iu] = values
    g[(iu[1], iu[0])] = values
    return g
