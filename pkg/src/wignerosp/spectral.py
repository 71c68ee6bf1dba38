"""Formal eigenvectors of x, p, H_b = (xp+px)/2 and H_f = p^2/2 in rho_a.

Each eigenvector is a coefficient sequence on the basis e_k:

* ``alpha``   H_b, eigenvalue ``E`` real, one vector per subspace V0/V1;
  ``alpha_{2n}(E) = i^n P~_n(E/2)`` with label ``a`` (V0) or ``a+1`` (V1).
* ``beta``    x, eigenvalue ``x`` real, ``beta_n(x) = Q~_n(x)``.
* ``gamma``   p, eigenvalue ``p`` real, ``gamma_n = i^n beta_n``.
* ``epsilon`` H_f, eigenvalue ``E > 0``; ``epsilon_{2n}(E) = L~_n^{(a-1)}(2E)``
  on V0 and ``epsilon_{2n+1}(E) = L~_n^{(a)}(2E)`` on V1.

Coefficients are available by the closed forms (``method="closed"``) or by
vectorised upward recurrence (``method="recurrence"``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exceptions import DimensionError, DomainError
from .numerics import QuadratureSpec, integrate_vector
from .orthopoly import (
    Family,
    PolyFamily,
    genhermite_table,
    laguerre_table,
    mp_table,
    recurrence_table,
)
from .osprep import Operator

__all__ = [
    "Subspace",
    "Generator",
    "CoefficientVector",
    "coefficient_matrix",
    "coefficient_vector",
    "alpha_coeffs",
    "beta_coeffs",
    "gamma_coeffs",
    "epsilon_coeffs",
    "eigen_residual",
    "delta_kernel",
    "smeared_delta",
    "lambda_basis",
    "lambda_check",
]


class Subspace(str, Enum):
    V0 = "V0"
    V1 = "V1"
    FULL = "full"


class Generator(str, Enum):
    ALPHA_V0 = "alpha_V0"
    ALPHA_V1 = "alpha_V1"
    BETA = "beta"
    GAMMA = "gamma"
    EPSILON_V0 = "epsilon_V0"
    EPSILON_V1 = "epsilon_V1"

    @property
    def label(self) -> str:
        return self.value.split("_")[0]

    @property
    def subspace(self) -> Subspace:
        return Subspace(self.value.split("_")[1]) if "_" in self.value else Subspace.FULL


@dataclass(frozen=True)
class CoefficientVector:
    """Length-``N`` coefficient vector embedded in the full space."""

    values: np.ndarray
    subspace: Subspace
    label: str
    eigenvalue: float
    a: float

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.ndim != 1:
            raise DimensionError("coefficient vector must be one-dimensional")
        if not np.all(np.isfinite(v)):
            raise DomainError("coefficient values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "subspace", Subspace(self.subspace))

    @property
    def N(self) -> int:
        return self.values.shape[0]

    def populated(self) -> np.ndarray:
        """Values on the indices the subspace actually occupies."""
        if self.subspace is Subspace.V0:
            return self.values[0::2]
        if self.subspace is Subspace.V1:
            return self.values[1::2]
        return self.values


# ---------------------------------------------------------------------------
# coefficient tables
# ---------------------------------------------------------------------------


def _check_a(a: float) -> None:
    if not a > 0:
        raise DomainError(f"a must be positive, got {a}")


def _family_and_point(gen: Generator, a: float):
    """Polynomial family and the map from eigenvalue to polynomial argument."""
    if gen is Generator.ALPHA_V0:
        return PolyFamily(Family.MEIXNER_POLLACZEK, a), lambda s: s / 2
    if gen is Generator.ALPHA_V1:
        return PolyFamily(Family.MEIXNER_POLLACZEK, a + 1), lambda s: s / 2
    if gen in (Generator.BETA, Generator.GAMMA):
        return PolyFamily(Family.GEN_HERMITE, a), lambda s: s
    if gen is Generator.EPSILON_V0:
        return PolyFamily(Family.LAGUERRE, a - 1), lambda s: 2 * s
    return PolyFamily(Family.LAGUERRE, a), lambda s: 2 * s


def _check_point(gen: Generator, a: float, s: np.ndarray) -> None:
    if not np.all(np.isfinite(s)):
        raise DomainError("eigenvalues must be finite")
    if gen in (Generator.BETA, Generator.GAMMA) and a < 0.5 and np.any(s == 0):
        raise DomainError("coefficients diverge at 0 when a < 1/2")
    if gen in (Generator.EPSILON_V0, Generator.EPSILON_V1):
        if np.any(s < 0):
            raise DomainError("free-particle energies must be non-negative")
        if gen is Generator.EPSILON_V0 and a < 1 and np.any(s == 0):
            raise DomainError("V0 prefactor diverges at E = 0 when a < 1")


def _phase(gen: Generator, n_terms: int) -> np.ndarray:
    n = np.arange(n_terms)
    if gen in (Generator.ALPHA_V0, Generator.ALPHA_V1, Generator.GAMMA):
        return 1j ** (n % 4)
    return np.ones(n_terms)


def coefficient_matrix(generator, a: float, points, n_terms: int,
                       method: str = "recurrence") -> np.ndarray:
    """Coefficients ``c_n(s)`` for ``n < n_terms`` and every ``s`` in ``points``.

    Index ``n`` runs over the generator's own sequence: for the V0/V1
    generators it is the index inside the subspace (``c_n`` sits on basis
    vector ``e_{2n}`` or ``e_{2n+1}``); for beta and gamma it is the full
    basis index.  Returns a complex array of shape ``(n_terms, len(points))``.
    """
    gen = Generator(generator)
    _check_a(a)
    s = np.atleast_1d(np.asarray(points, dtype=float))
    _check_point(gen, a, s)
    if n_terms < 1:
        raise DomainError("n_terms must be positive")
    family, arg = _family_and_point(gen, a)
    u = arg(s)
    if method == "recurrence":
        table = recurrence_table(family, n_terms - 1, u)
    elif method == "closed":
        fn = {Family.MEIXNER_POLLACZEK: mp_table, Family.LAGUERRE: laguerre_table,
              Family.GEN_HERMITE: genhermite_table}[family.kind]
        table = np.stack([fn(n_terms - 1, family.param, float(x), True) for x in u], axis=1)
    else:
        raise ValueError(f"unknown method {method!r}; expected 'closed' or 'recurrence'")
    return table * _phase(gen, n_terms)[:, None]


def coefficient_vector(generator, a: float, s: float, N: int, method: str = "closed") -> CoefficientVector:
    """Eigenvector coefficients of ``generator`` at eigenvalue ``s``,
    embedded in the full length-``N`` space."""
    gen = Generator(generator)
    if int(N) != N or N < 2:
        raise DomainError("N must be an integer >= 2")
    sub = gen.subspace
    full = np.zeros(N, dtype=complex)
    if sub is Subspace.FULL:
        full[:] = coefficient_matrix(gen, a, [s], N, method)[:, 0]
    else:
        start = 0 if sub is Subspace.V0 else 1
        count = len(range(start, N, 2))
        full[start::2] = coefficient_matrix(gen, a, [s], count, method)[:, 0]
    return CoefficientVector(full, sub, gen.label, float(s), float(a))


def alpha_coeffs(a: float, E: float, N: int, subspace="V0", method: str = "closed") -> CoefficientVector:
    """Eigenvector of ``H_b`` with eigenvalue ``E`` supported on V0 or V1.

    ``alpha_{2n}(E) = (-1)^n sqrt((a)_n/n!) A0(E) 2F1(-n, (a+iE)/2; a; 2)``;
    the V1 sequence is the same with ``a -> a+1``.
    """
    gen = Generator.ALPHA_V0 if Subspace(subspace) is Subspace.V0 else Generator.ALPHA_V1
    if Subspace(subspace) is Subspace.FULL:
        raise DomainError("alpha vectors live in V0 or V1")
    return coefficient_vector(gen, a, E, N, method)


def beta_coeffs(a: float, x: float, N: int, method: str = "closed") -> CoefficientVector:
    """Eigenvector of the position operator, ``beta_n(x) = Q~_n^{(a)}(x)``."""
    return coefficient_vector(Generator.BETA, a, x, N, method)


def gamma_coeffs(a: float, p: float, N: int, method: str = "closed") -> CoefficientVector:
    """Eigenvector of the momentum operator, ``gamma_n(p) = i^n beta_n(p)``."""
    return coefficient_vector(Generator.GAMMA, a, p, N, method)


def epsilon_coeffs(a: float, E: float, N: int, subspace="V0", method: str = "closed") -> CoefficientVector:
    """Eigenvector of ``H_f = p^2/2`` with eigenvalue ``E >= 0``."""
    sub = Subspace(subspace)
    if sub is Subspace.FULL:
        raise DomainError("epsilon vectors live in V0 or V1")
    gen = Generator.EPSILON_V0 if sub is Subspace.V0 else Generator.EPSILON_V1
    return coefficient_vector(gen, a, E, N, method)


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


def eigen_residual(H: Operator, v: CoefficientVector, eigenvalue: float | None = None,
                   margin: int = 4) -> float:
    """Max-abs of ``(H v - lambda v)_i`` over rows ``i < N - margin``.

    The top rows see the missing coefficients beyond the truncation and are
    excluded.
    """
    if H.dim != v.N:
        raise DimensionError(f"operator has dim {H.dim}, vector has length {v.N}")
    lam = v.eigenvalue if eigenvalue is None else eigenvalue
    r = H.entries @ v.values - lam * v.values
    keep = v.N - margin
    if keep <= 0:
        raise DomainError("margin leaves no rows")
    return float(np.max(np.abs(r[:keep])))


def delta_kernel(generator, a: float, s: float, s_prime: float, N: int) -> float:
    """Partial sum ``K_N(s, s') = sum_{n<N} conj(c_n(s)) c_n(s')``."""
    c = coefficient_matrix(generator, a, [s, s_prime], N, method="recurrence")
    return float(np.real(np.sum(np.conj(c[:, 0]) * c[:, 1])))


def _kernel_domain(gen: Generator, lo: float, hi: float) -> tuple[float, float]:
    if gen in (Generator.EPSILON_V0, Generator.EPSILON_V1):
        return max(lo, 0.0), hi
    return lo, hi


def smeared_delta(generator, a: float, s: float, N: int, sigma: float = 0.25,
                  center: float | None = None, rel_tol: float = 1e-10) -> tuple[float, float]:
    """Apply the partial-sum kernel to a Gaussian test function.

    ``phi(t) = exp(-(t - center)^2 / (2 sigma^2))`` with ``center`` defaulting
    to ``s``.  Returns ``(int K_N(s, t) phi(t) dt, phi(s))``; the two agree in
    the limit ``N -> inf``.
    """
    gen = Generator(generator)
    c0 = s if center is None else center
    lo, hi = _kernel_domain(gen, c0 - 10 * sigma, c0 + 10 * sigma)
    cs = coefficient_matrix(gen, a, [s], N)[:, 0].conj()

    def f(t):
        c = coefficient_matrix(gen, a, t, N)
        phi = np.exp(-0.5 * ((t - c0) / sigma) ** 2)
        return (np.real(cs @ c) * phi)[:, None]

    spec = QuadratureSpec(lo, hi, rel_tol=rel_tol, max_refinements=400)
    val = float(integrate_vector(f, spec)[0].real)
    return val, math.exp(-0.5 * ((s - c0) / sigma) ** 2)


def lambda_basis(a: float, n: int, E) -> np.ndarray:
    """``(Lambda e_{2n})(E) = (-i)^n sqrt(2^a n!/(pi Gamma(n+a))) P_n(E/2)`` on a grid."""
    E = np.atleast_1d(np.asarray(E, dtype=float))
    out = np.empty(E.shape, dtype=complex)
    norm = math.exp(0.5 * (a * math.log(2) + math.lgamma(n + 1) - math.log(math.pi) - math.lgamma(n + a)))
    for i, e in enumerate(E):
        out[i] = (-1j) ** n * norm * mp_table(n, a, e / 2)[n]
    return out


def lambda_check(a: float, n: int, E_grid, N: int = 128) -> float:
    """Max over the grid of ``|Lambda(H_b e_{2n}) - E Lambda(e_{2n})|``.

    ``H_b e_{2n} = i sqrt((n+1)(n+a)) e_{2n+2} - i sqrt(n(n+a-1)) e_{2n-2}``.
    """
    _check_a(a)
    if n < 0:
        raise DomainError("n must be non-negative")
    if n > N - 8:
        raise IndexError(f"n = {n} is too close to the truncation N = {N}")
    E = np.atleast_1d(np.asarray(E_grid, dtype=float))
    lhs = 1j * math.sqrt((n + 1) * (n + a)) * lambda_basis(a, n + 1, E)
    if n > 0:
        lhs = lhs - 1j * math.sqrt(n * (n + a - 1)) * lambda_basis(a, n - 1, E)
    return float(np.max(np.abs(lhs - E * lambda_basis(a, n, E))))
