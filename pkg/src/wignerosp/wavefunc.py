"""Closed-form inner products between eigenvector families and the
generalized wave functions of ``H_b = (xp+px)/2`` and ``H_f = p^2/2``.

Conventions: ``v(x)`` (position), ``w(p)`` (momentum), ``u0(E)``/``u1(E)``
(``H_b`` on V0/V1) and ``z0(E)``/``z1(E)`` (``H_f`` on V0/V1) are the formal
eigenvectors of :mod:`wignerosp.spectral`.  All inner products are
``<v, u> = sum_n conj(v_n) u_n``.

The ``H_b`` wave functions only depend on ``a`` through the unit-modulus
phases ``C0(E)`` and ``C1(E)``.  At ``a = 1/2`` everything reduces to the
canonical Schroedinger picture: ``<v(x), w(p)> = exp(ixp)/sqrt(2 pi)`` and
the free wave functions become ``cos`` and ``sin`` standing waves.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, DomainError
from .numerics import QuadratureSpec, gamma_complex, hyp0f1, integrate_vector
from .spectral import coefficient_matrix

__all__ = [
    "WaveParams",
    "SampleTable",
    "phase_c0",
    "phase_c1",
    "inner_x_u",
    "inner_p_u",
    "inner_x_p",
    "psi_bk",
    "inner_x_z",
    "psi_free",
    "kernel_p_z",
    "smeared_kernel_p_z",
    "smeared_orthogonality",
    "sample",
]

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class WaveParams:
    """Representation label ``a`` and the mixing coefficients ``A``, ``B``."""

    a: float
    A: complex = 1.0
    B: complex = 0.0

    def __post_init__(self):
        if not (self.a > 0 and math.isfinite(self.a)):
            raise DomainError(f"a must be positive, got {self.a}")
        A, B = complex(self.A), complex(self.B)
        if abs(abs(A) ** 2 + abs(B) ** 2 - 1) > 1e-12:
            raise DomainError("|A|^2 + |B|^2 must equal 1")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)


@dataclass(frozen=True)
class SampleTable:
    """Values of a complex function on a strictly increasing grid."""

    points: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        vals = np.array(self.values, dtype=complex)
        if pts.ndim != 1 or pts.shape != vals.shape:
            raise DimensionError("points and values must be 1-d arrays of equal length")
        if np.any(np.diff(pts) <= 0):
            raise DomainError("grid must be strictly increasing")
        pts.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)

    def rows(self):
        for x, v in zip(self.points, self.values):
            yield float(x), float(v.real), float(v.imag)


def sample(fn, grid) -> SampleTable:
    """Evaluate the scalar function ``fn`` on ``grid`` and wrap the result."""
    pts = np.asarray(grid, dtype=float)
    return SampleTable(pts, np.array([fn(float(x)) for x in pts], dtype=complex))


# ---------------------------------------------------------------------------
# H_b = (xp + px)/2
# ---------------------------------------------------------------------------


def _phase(label: float, E: float) -> complex:
    g = gamma_complex(complex(label / 2, E / 2))
    return cmath.exp(-0.5j * E * math.log(2)) * abs(g) / g


def phase_c0(a: float, E: float) -> complex:
    """``C0(E) = 2^{-iE/2} |Gamma((a+iE)/2)| / Gamma((a+iE)/2)``, of modulus one."""
    if not a > 0:
        raise DomainError("a must be positive")
    return _phase(a, E)


def phase_c1(a: float, E: float) -> complex:
    """``C1(E)``: as :func:`phase_c0` with ``a`` replaced by ``a + 1``."""
    if not a > 0:
        raise DomainError("a must be positive")
    return _phase(a + 1, E)


def inner_x_u(a: float, x: float, E: float, parity: str = "even") -> complex:
    """``<v(x), u0(E)> = C0(E) |x|^{iE-1/2} / (2 sqrt(pi))`` (even) or
    ``<v(x), u1(E)> = C1(E) x |x|^{iE-3/2} / (2 sqrt(pi))`` (odd)."""
    if x == 0:
        raise DomainError("x must be non-zero")
    lx = math.log(abs(x))
    if parity == "even":
        return phase_c0(a, E) * cmath.exp((1j * E - 0.5) * lx) / (2 * _SQRT_PI)
    if parity == "odd":
        return phase_c1(a, E) * math.copysign(1.0, x) * cmath.exp((1j * E - 0.5) * lx) / (2 * _SQRT_PI)
    raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")


def inner_p_u(a: float, p: float, E: float, parity: str = "even") -> complex:
    """Momentum-space counterpart: ``<w(p), u0(E)> = <v(p), u0(-E)>`` and
    ``<w(p), u1(E)> = -i <v(p), u1(-E)>``."""
    val = inner_x_u(a, p, -E, parity)
    return val if parity == "even" else -1j * val


def inner_x_p(a: float, x: float, p: float) -> complex:
    """``<v(x), w(p)>``: the generalised Fourier kernel

    ``|xp|^{a-1/2} / (2^a Gamma(a)) [0F1(;a;-x^2p^2/4) + i xp/(2a) 0F1(;a+1;-x^2p^2/4)]``.

    At ``xp = 0`` the value is ``0`` for ``a > 1/2``, ``1/sqrt(2 pi)`` for
    ``a = 1/2`` and ``inf`` for ``a < 1/2``.
    """
    if not a > 0:
        raise DomainError("a must be positive")
    t = x * p
    if t == 0:
        if a < 0.5:
            return complex(math.inf, 0.0)
        return complex(1.0 / math.sqrt(2 * math.pi) if a == 0.5 else 0.0)
    z = -t * t / 4
    env = math.exp((a - 0.5) * math.log(abs(t)) - a * math.log(2) - math.lgamma(a))
    return env * complex(hyp0f1(a, z), t / (2 * a) * hyp0f1(a + 1, z))


def psi_bk(params: WaveParams, x: float, E: float) -> complex:
    """Generalised ``H_b`` wave function ``A psi0_E(x) + B psi1_E(x)``."""
    out = 0j
    if params.A:
        out += params.A * inner_x_u(params.a, x, E, "even")
    if params.B:
        out += params.B * inner_x_u(params.a, x, E, "odd")
    return out


def _psi_bk_grid(params: WaveParams, x: np.ndarray, E: float) -> np.ndarray:
    base = np.exp((1j * E - 0.5) * np.log(np.abs(x))) / (2 * _SQRT_PI)
    return base * (params.A * phase_c0(params.a, E) + params.B * phase_c1(params.a, E) * np.sign(x))


def smeared_orthogonality(params: WaveParams, E: float, sigma: float = 0.5,
                          L: float = 1e3) -> tuple[float, float]:
    """Smeared check of ``int psi*_{E'}(x) psi_E(x) dx = delta(E - E')``.

    The x integral runs over ``1/L < |x| < L`` on a log-spaced grid
    (``x = +-e^u``), the E' integral against
    ``phi(E') = exp(-(E'-E)^2/(2 sigma^2))``.  Returns the smeared value
    and its limit ``phi(E) = 1``.
    """
    ell = math.log(L)
    u, wu = np.polynomial.legendre.leggauss(400)
    u, wu = ell * u, ell * wu
    x = np.concatenate([-np.exp(u), np.exp(u)])
    wx = np.concatenate([wu * np.exp(u), wu * np.exp(u)])
    psi_E = _psi_bk_grid(params, x, E)

    def f(ep):
        cols = [math.exp(-0.5 * ((e - E) / sigma) ** 2)
                * np.sum(wx * np.conj(_psi_bk_grid(params, x, e)) * psi_E) for e in ep]
        return np.array(cols)[:, None]

    spec = QuadratureSpec(E - 8 * sigma, E + 8 * sigma, rel_tol=1e-8, max_refinements=200)
    return float(integrate_vector(f, spec)[0].real), 1.0


# ---------------------------------------------------------------------------
# H_f = p^2/2
# ---------------------------------------------------------------------------


def inner_x_z(a: float, x: float, E: float, parity: str = "even") -> float:
    """``<v(x), z0(E)>`` (even) or ``<v(x), z1(E)>`` (odd).

    even: ``|x|^{a-1/2} E^{(a-1)/2} 0F1(;a;-Ex^2/2) / (sqrt(2^a) Gamma(a))``;
    odd:  ``x |x|^{a-1/2} E^{a/2} 0F1(;a+1;-Ex^2/2) / (sqrt(2^{a+1}) Gamma(a+1))``.
    """
    if not a > 0:
        raise DomainError("a must be positive")
    if not E > 0:
        raise DomainError("E must be positive")
    z = -E * x * x / 2
    if parity == "even":
        if x == 0:
            env = math.inf if a < 0.5 else (1.0 if a == 0.5 else 0.0)
            if env in (0.0, math.inf):
                return env
        else:
            env = abs(x) ** (a - 0.5)
        log_pre = 0.5 * (a - 1) * math.log(E) - 0.5 * a * math.log(2) - math.lgamma(a)
        return env * math.exp(log_pre) * hyp0f1(a, z)
    if parity == "odd":
        if x == 0:
            return 0.0
        log_pre = 0.5 * a * math.log(E) - 0.5 * (a + 1) * math.log(2) - math.lgamma(a + 1)
        return x * abs(x) ** (a - 0.5) * math.exp(log_pre) * hyp0f1(a + 1, z)
    raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")


def psi_free(params: WaveParams, x: float, E: float) -> complex:
    """Generalised free-particle wave function ``A psi0 + B psi1``."""
    out = 0j
    if params.A:
        out += params.A * inner_x_z(params.a, x, E, "even")
    if params.B:
        out += params.B * inner_x_z(params.a, x, E, "odd")
    return out


def _kernel_terms(a: float, p: float, E, N: int, parity: str) -> np.ndarray:
    if parity == "even":
        g = coefficient_matrix("gamma", a, [p], 2 * N)[0::2, 0]
        eps = coefficient_matrix("epsilon_V0", a, E, N)
    elif parity == "odd":
        g = coefficient_matrix("gamma", a, [p], 2 * N)[1::2, 0]
        eps = coefficient_matrix("epsilon_V1", a, E, N)
    else:
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    return np.conj(g)[:, None] * eps


def kernel_p_z(a: float, p: float, E: float, N: int, parity: str = "even") -> complex:
    """Partial sum ``sum_{n<N} conj(gamma_k(p)) epsilon_k(E)`` over the ``N``
    lowest indices ``k`` of the given parity.

    The series has no pointwise limit; in the distributional sense it tends
    to ``sqrt(2|p|) delta(p^2 - 2E)`` (even) and
    ``-i sqrt(2) sgn(p) sqrt(|p|) delta(p^2 - 2E)`` (odd).
    """
    if not E > 0:
        raise DomainError("E must be positive")
    return complex(np.sum(_kernel_terms(a, p, [E], N, parity)))


def smeared_kernel_p_z(a: float, p: float, N: int, parity: str = "even",
                       sigma: float = 0.25) -> tuple[complex, complex]:
    """``int kernel_p_z(a, p, E, N) phi(E) dE`` for a Gaussian ``phi``
    centred at ``p^2/2``, together with its distributional limit
    ``c(p) phi(p^2/2) / 2``."""
    E0 = p * p / 2
    lo = max(E0 - 10 * sigma, 0.0)

    def f(E):
        phi = np.exp(-0.5 * ((E - E0) / sigma) ** 2)
        return (np.sum(_kernel_terms(a, p, E, N, parity), axis=0) * phi)[:, None]

    spec = QuadratureSpec(lo, E0 + 10 * sigma, rel_tol=1e-9, max_refinements=400)
    val = complex(integrate_vector(f, spec)[0])
    c = math.sqrt(2 * abs(p))
    if parity == "odd":
        c = -1j * math.copysign(c, p)
    return val, c / 2
