"""Truncated matrix model of the osp(1|2) positive discrete series rho_a.

The basis is e_0, e_1, ..., e_{N-1}.  Matrices follow the convention
``M[i, j] = <e_i, O e_j>``, so column ``j`` is the image of ``e_j``.
Even indices span V0 and odd indices span V1.

Every operator is filled from closed-form entries.  Products of truncated
matrices are only formed inside the relation checks, and their defects sit
in the last few rows and columns, which ``interior_norm`` masks out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .exceptions import DimensionError, DomainError

__all__ = [
    "Parity",
    "RepParams",
    "Operator",
    "ladder_ops",
    "even_triple",
    "observable",
    "commutator",
    "anticommutator",
    "interior_norm",
    "RelationReport",
    "relation_report",
    "xp_commutator_values",
]


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"
    NONE = "none"


@dataclass(frozen=True)
class RepParams:
    """Representation label ``a > 0`` and truncation ``trunc = N``."""

    a: float
    trunc: int = 128
    margin: int = 4

    def __post_init__(self):
        if not (self.a > 0 and math.isfinite(self.a)):
            raise DomainError(f"a must be positive, got {self.a}")
        if int(self.trunc) != self.trunc or self.trunc < 8:
            raise DomainError(f"trunc must be an integer >= 8, got {self.trunc}")
        if int(self.margin) != self.margin or self.margin < 0:
            raise DomainError(f"margin must be a non-negative integer, got {self.margin}")


def _freeze(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=complex)
    m.setflags(write=False)
    return m


@dataclass(frozen=True)
class Operator:
    """Dense complex matrix with parity metadata.  The array is read-only."""

    entries: np.ndarray
    parity: Parity = Parity.NONE
    name: str = field(default="", compare=False)

    def __post_init__(self):
        m = _freeze(self.entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"operator must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise DomainError("operator entries must be finite")
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "parity", Parity(self.parity))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def H(self) -> "Operator":
        return Operator(self.entries.conj().T, self.parity, self.name + "^dag")

    def __matmul__(self, other: "Operator") -> "Operator":
        _check_dims(self, other)
        return Operator(self.entries @ other.entries, _compose(self.parity, other.parity))

    def __add__(self, other: "Operator") -> "Operator":
        _check_dims(self, other)
        return Operator(self.entries + other.entries, _sum_parity(self.parity, other.parity))

    def __sub__(self, other: "Operator") -> "Operator":
        _check_dims(self, other)
        return Operator(self.entries - other.entries, _sum_parity(self.parity, other.parity))

    def __mul__(self, c) -> "Operator":
        return Operator(self.entries * complex(c), self.parity)

    __rmul__ = __mul__

    def __neg__(self) -> "Operator":
        return Operator(-self.entries, self.parity)

    def parity_consistent(self) -> bool:
        """True when the sparsity pattern matches the declared parity."""
        idx = np.arange(self.dim)
        same = (idx[:, None] % 2) == (idx[None, :] % 2)
        if self.parity is Parity.EVEN:
            return not np.any(self.entries[~same])
        if self.parity is Parity.ODD:
            return not np.any(self.entries[same])
        return True


def _check_dims(A: Operator, B: Operator) -> None:
    if A.dim != B.dim:
        raise DimensionError(f"dimension mismatch: {A.dim} vs {B.dim}")


def _compose(p: Parity, q: Parity) -> Parity:
    if Parity.NONE in (p, q):
        return Parity.NONE
    return Parity.EVEN if p == q else Parity.ODD


def _sum_parity(p: Parity, q: Parity) -> Parity:
    return p if p == q else Parity.NONE


# ---------------------------------------------------------------------------
# Builders from exact entries
# ---------------------------------------------------------------------------


def ladder_ops(params: RepParams) -> tuple[Operator, Operator]:
    """Return ``(B+, B-)``.  ``B+`` raises the index by one, ``B- = (B+)^T``."""
    N, a = params.trunc, params.a
    bp = np.zeros((N, N))
    for k in range(N - 1):
        n, r = divmod(k, 2)
        # e_{2n} -> sqrt(2(n+a)) e_{2n+1},  e_{2n+1} -> sqrt(2(n+1)) e_{2n+2}
        bp[k + 1, k] = math.sqrt(2 * (n + a)) if r == 0 else math.sqrt(2 * (n + 1))
    return Operator(bp, Parity.ODD, "b+"), Operator(bp.T, Parity.ODD, "b-")


def _shifted(k: int, a: float) -> tuple[int, float]:
    # index k = 2n + r behaves like the even subspace with label a + r
    n, r = divmod(k, 2)
    return n, a + r


def even_triple(params: RepParams) -> tuple[Operator, Operator, Operator]:
    """Return ``(h, e, f)`` with h = {b+,b-}/2, e = (b+)^2/2, f = -(b-)^2/2."""
    N, a = params.trunc, params.a
    h = np.diag(np.arange(N) + a).astype(float)
    e = np.zeros((N, N))
    for k in range(N - 2):
        n, s = _shifted(k, a)
        e[k + 2, k] = math.sqrt((n + 1) * (n + s))
    # f e_k = -sqrt(n(n+s-1)) e_{k-2}, the same numbers as e transposed
    f = -e.T
    return (Operator(h, Parity.EVEN, "h"), Operator(e, Parity.EVEN, "e"),
            Operator(f, Parity.EVEN, "f"))


def observable(params: RepParams, which: str) -> Operator:
    """Position ``x``, momentum ``p``, ``hb`` = i(e+f) or ``hf`` = (h-e+f)/2."""
    which = which.lower()
    if which in ("x", "p"):
        bp, bm = ladder_ops(params)
        if which == "x":
            m = (bp.entries + bm.entries) / math.sqrt(2)
        else:
            m = 1j * (bp.entries - bm.entries) / math.sqrt(2)
        return Operator(m, Parity.ODD, which)
    if which in ("hb", "hf"):
        h, e, f = even_triple(params)
        if which == "hb":
            m = 1j * (e.entries + f.entries)
        else:
            m = 0.5 * (h.entries - e.entries + f.entries)
        return Operator(m, Parity.EVEN, which)
    raise ValueError(f"unknown observable {which!r}; expected x, p, hb or hf")


def commutator(A: Operator, B: Operator) -> Operator:
    _check_dims(A, B)
    return Operator(A.entries @ B.entries - B.entries @ A.entries, _compose(A.parity, B.parity))


def anticommutator(A: Operator, B: Operator) -> Operator:
    _check_dims(A, B)
    return Operator(A.entries @ B.entries + B.entries @ A.entries, _compose(A.parity, B.parity))


def interior_norm(M, margin: int = 4) -> float:
    """Max-abs entry over the leading ``(N - margin)`` square block."""
    m = M.entries if isinstance(M, Operator) else np.asarray(M)
    N = m.shape[0]
    if not 0 <= margin < N / 2:
        raise DomainError(f"margin must satisfy 0 <= margin < N/2, got {margin}")
    block = m[: N - margin, : N - margin]
    return float(np.max(np.abs(block))) if block.size else 0.0


# ---------------------------------------------------------------------------
# Relation checks
# ---------------------------------------------------------------------------


def xp_commutator_values(a: float) -> tuple[complex, complex]:
    """Eigenvalues of [x, p] on V0 and V1: ``2ai`` and ``2(1-a)i``."""
    return 2j * a, 2j * (1 - a)


@dataclass(frozen=True)
class RelationReport:
    params: RepParams
    margin: int
    residuals: dict

    @property
    def worst(self) -> float:
        return max(self.residuals.values())

    def passed(self, tol: float = 1e-11) -> bool:
        return self.worst < tol


def relation_report(params: RepParams, margin: int | None = None) -> RelationReport:
    """Interior residuals of the defining and derived operator relations."""
    margin = params.margin if margin is None else margin
    N, a = params.trunc, params.a
    bp, bm = ladder_ops(params)
    h, e, f = even_triple(params)
    x, p = observable(params, "x"), observable(params, "p")
    hb, hf = observable(params, "hb"), observable(params, "hf")
    anti_bb = anticommutator(bp, bm)
    anti_xp = anticommutator(x, p)
    p2 = p @ p

    even_idx = np.arange(N) % 2 == 0
    xp_diag = np.where(even_idx, 2j * a, 2j * (1 - a))

    pairs = {
        "xp_x": (commutator(anti_xp, x), -2j * x),
        "xp_p": (commutator(anti_xp, p), 2j * p),
        "hb_bplus": (commutator(hb, bp), -1j * bm),
        "hb_bminus": (commutator(hb, bm), -1j * bp),
        "osp_bplus": (commutator(anti_bb, bp), 2 * bp),
        "osp_bminus": (commutator(anti_bb, bm), -2 * bm),
        "h_from_ladders": (0.5 * anti_bb, h),
        "e_from_ladders": (0.5 * (bp @ bp), e),
        "f_from_ladders": (-0.5 * (bm @ bm), f),
        "sl2_he": (commutator(h, e), 2 * e),
        "sl2_hf": (commutator(h, f), -2 * f),
        "sl2_ef": (commutator(e, f), h),
        "e_adjoint": (e.H, -f),
        "h_adjoint": (h.H, h),
        "hb_from_xp": (0.5 * anti_xp, hb),
        "hf_from_p2": (0.5 * p2, hf),
        "hb_hermitian": (hb.H, hb),
        "hf_hermitian": (hf.H, hf),
        "free_p2_x": (commutator(p2, x), -2j * p),
        "free_sum": (commutator(anti_bb, bp + bm), 2 * (bp - bm)),
        "free_bplus_sq": (commutator(bp @ bp, bm), -2 * bp),
        "xp_diagonal": (commutator(x, p), Operator(np.diag(xp_diag), Parity.EVEN)),
    }
    residuals = {name: interior_norm(lhs - rhs, margin) for name, (lhs, rhs) in pairs.items()}
    return RelationReport(params, margin, residuals)
