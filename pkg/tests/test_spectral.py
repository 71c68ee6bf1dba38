import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wignerosp.exceptions import DimensionError, DomainError
from wignerosp.numerics import smoothed_sum
from wignerosp.orthopoly import mp_eval
from wignerosp.osprep import RepParams, observable
from wignerosp.spectral import (
    CoefficientVector,
    Generator,
    Subspace,
    alpha_coeffs,
    beta_coeffs,
    coefficient_matrix,
    coefficient_vector,
    delta_kernel,
    eigen_residual,
    epsilon_coeffs,
    gamma_coeffs,
    lambda_basis,
    lambda_check,
    smeared_delta,
)

A_GRID = (0.3, 0.5, 1.0, 1.7)


def _aligned(u, v):
    # |<u, v>| / (|u||v|), equal to 1 when the vectors are parallel
    return abs(np.vdot(u, v)) / (np.linalg.norm(u) * np.linalg.norm(v))


# -- eigenvector equations -------------------------------------------------------------

@pytest.mark.parametrize("a", A_GRID)
def test_alpha_eigen(a):
    hb = observable(RepParams(a, 256), "hb")
    for sub in ("V0", "V1"):
        for E in (-3.2, -0.4, 0.0, 1.7, 4.5):
            assert eigen_residual(hb, alpha_coeffs(a, E, 256, sub)) < 1e-10


@pytest.mark.parametrize("a", A_GRID)
def test_beta_gamma_eigen(a):
    params = RepParams(a, 256)
    x, p = observable(params, "x"), observable(params, "p")
    for s in (-1.5, 0.3, 1.0, 2.4):
        assert eigen_residual(x, beta_coeffs(a, s, 256)) < 1e-10
        assert eigen_residual(p, gamma_coeffs(a, s, 256)) < 1e-10


@pytest.mark.parametrize("a", A_GRID)
def test_epsilon_eigen(a):
    hf = observable(RepParams(a, 256), "hf")
    for sub in ("V0", "V1"):
        for E in (0.2, 0.9, 3.0, 6.5):
            assert eigen_residual(hf, epsilon_coeffs(a, E, 256, sub)) < 1e-10


def test_wrong_eigenvalue_is_detected():
    hb = observable(RepParams(1.0, 64), "hb")
    v = alpha_coeffs(1.0, 0.5, 64)
    assert eigen_residual(hb, v, eigenvalue=0.6) > 1e-3


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 4.0), st.floats(-6, 6), st.sampled_from(["hb", "x", "p"]))
def test_eigen_property(a, s, which):
    if which != "hb" and a < 0.5 and abs(s) < 1e-3:
        return
    op = observable(RepParams(a, 128), which)
    make = {"hb": lambda: alpha_coeffs(a, s, 128, "V1"), "x": lambda: beta_coeffs(a, s, 128),
            "p": lambda: gamma_coeffs(a, s, 128)}[which]
    v = make()
    r = eigen_residual(op, v)
    assert r < 1e-9 * max(1.0, float(np.max(np.abs(v.values))))


# -- independent oracle: eigenvectors of the truncated Jacobi blocks -----------------------

@pytest.mark.parametrize("a", A_GRID)
def test_beta_matches_truncated_eigenvectors(a):
    N = 20
    x = observable(RepParams(a, N), "x").entries
    lam, vecs = np.linalg.eigh(x)
    for j in range(N):
        if abs(lam[j]) < 1e-6:
            continue
        v = beta_coeffs(a, lam[j], N).values
        assert _aligned(vecs[:, j], v) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("a", A_GRID)
@pytest.mark.parametrize("sub,which,gen", [("V0", "hb", "alpha"), ("V1", "hb", "alpha"),
                                           ("V0", "hf", "epsilon"), ("V1", "hf", "epsilon")])
def test_subspace_vectors_match_truncated_eigenvectors(a, sub, which, gen):
    N = 40
    start = 0 if sub == "V0" else 1
    block = observable(RepParams(a, N), which).entries[start::2, start::2]
    lam, vecs = np.linalg.eigh(block)
    make = alpha_coeffs if gen == "alpha" else epsilon_coeffs
    for j in range(block.shape[0]):
        if gen == "epsilon" and lam[j] <= 1e-8:
            continue
        v = make(a, lam[j], N, sub).populated()
        assert _aligned(vecs[:, j], v) == pytest.approx(1.0, abs=1e-9)


def test_hf_block_is_positive():
    for a in A_GRID:
        block = observable(RepParams(a, 40), "hf").entries[0::2, 0::2]
        assert np.min(np.linalg.eigvalsh(block)) > 0


# -- structure ---------------------------------------------------------------------------

def test_gamma_is_phased_beta():
    b = beta_coeffs(0.7, 1.3, 16).values
    g = gamma_coeffs(0.7, 1.3, 16).values
    assert np.allclose(g, (1j ** np.arange(16)) * b, atol=0, rtol=1e-15)


def test_alpha_first_entries():
    a, E = 1.2, 0.8
    v = alpha_coeffs(a, E, 12)
    assert v.values[0] == pytest.approx(mp_eval(0, a, E / 2, normalized=True))
    assert v.values[2] == pytest.approx(1j * mp_eval(1, a, E / 2, normalized=True))
    assert np.all(v.values[1::2] == 0)
    w = alpha_coeffs(a, E, 12, "V1")
    assert w.values[1] == pytest.approx(mp_eval(0, a + 1, E / 2, normalized=True))
    assert np.all(w.values[0::2] == 0)


def test_beta_parity_symmetry():
    b_plus = beta_coeffs(1.3, 0.9, 30).values
    b_minus = beta_coeffs(1.3, -0.9, 30).values
    assert np.array_equal(b_minus, b_plus * (-1.0) ** np.arange(30))


def test_alpha_conjugation_symmetry():
    # the H_b vector at -E is the complex conjugate
    v = alpha_coeffs(0.8, 1.4, 30).populated()
    w = alpha_coeffs(0.8, -1.4, 30).populated()
    assert np.allclose(w, np.conj(v), rtol=0, atol=1e-15)


@pytest.mark.parametrize("gen", [g.value for g in Generator])
def test_closed_and_recurrence_agree(gen):
    pts = [0.3, 1.1, 2.5] if gen.startswith("epsilon") else [-2.1, 0.3, 1.1, 2.5]
    closed = coefficient_matrix(gen, 0.8, pts, 60, method="closed")
    rec = coefficient_matrix(gen, 0.8, pts, 60, method="recurrence")
    assert np.max(np.abs(closed - rec)) < 1e-12


def test_coefficient_vector_metadata():
    v = coefficient_vector("epsilon_V1", 1.1, 0.7, 11)
    assert v.subspace is Subspace.V1 and v.label == "epsilon"
    assert v.N == 11 and v.populated().shape == (5,)
    assert Generator("gamma").subspace is Subspace.FULL
    with pytest.raises(ValueError):
        v.values[1] = 0


def test_domain_errors():
    with pytest.raises(DomainError):
        beta_coeffs(0.3, 0.0, 10)
    beta_coeffs(0.5, 0.0, 10)
    with pytest.raises(DomainError):
        epsilon_coeffs(1.0, -0.1, 10)
    with pytest.raises(DomainError):
        epsilon_coeffs(0.6, 0.0, 10, "V0")
    epsilon_coeffs(0.6, 0.0, 10, "V1")
    with pytest.raises(DomainError):
        alpha_coeffs(-1.0, 0.0, 10)
    with pytest.raises(DomainError):
        alpha_coeffs(1.0, 0.0, 10, "full")
    with pytest.raises(DomainError):
        coefficient_vector("beta", 1.0, 0.5, 1)
    with pytest.raises(DomainError):
        coefficient_matrix("beta", 1.0, [math.nan], 4)
    with pytest.raises(ValueError):
        coefficient_matrix("beta", 1.0, [0.5], 4, method="taylor")
    with pytest.raises(ValueError):
        coefficient_matrix("delta", 1.0, [0.5], 4)
    with pytest.raises(DimensionError):
        eigen_residual(observable(RepParams(1.0, 16), "x"), beta_coeffs(1.0, 0.5, 20))
    with pytest.raises(DimensionError):
        CoefficientVector(np.zeros((2, 2)), "full", "beta", 0.0, 1.0)


# -- delta normalisation ---------------------------------------------------------------------

def test_delta_kernel_is_symmetric():
    for gen in ("alpha_V0", "beta", "gamma", "epsilon_V1"):
        k1 = delta_kernel(gen, 0.8, 0.7, 1.3, 50)
        k2 = delta_kernel(gen, 0.8, 1.3, 0.7, 50)
        assert k1 == pytest.approx(k2, rel=1e-13, abs=1e-15)


def test_delta_kernel_diagonal_grows():
    vals = [delta_kernel("beta", 1.0, 0.8, 0.8, N) for N in (64, 128, 256)]
    assert vals[0] < vals[1] < vals[2]


@pytest.mark.parametrize("gen,s,sigma,tol", [
    ("alpha_V0", 1.0, 0.75, 2e-2),
    ("alpha_V1", 1.0, 0.75, 2e-2),
    ("beta", 0.8, 0.25, 1e-3),
    ("gamma", 0.8, 0.25, 1e-3),
    ("epsilon_V0", 1.5, 0.25, 1e-3),
    ("epsilon_V1", 1.5, 0.25, 1e-3),
])
def test_smeared_delta_converges(gen, s, sigma, tol):
    errs = []
    for N in (100, 200, 400):
        val, target = smeared_delta(gen, 0.8, s, N, sigma=sigma)
        errs.append(abs(val - target))
    assert errs[-1] < tol
    if errs[0] > 1e-10:
        assert errs[-1] < errs[0]


def test_smeared_delta_off_centre():
    # phi centred away from s: the limit is phi(s), which is small but non-zero
    val, target = smeared_delta("beta", 1.0, 0.5, 400, sigma=0.3, center=0.8)
    assert target == pytest.approx(math.exp(-0.5))
    assert abs(val - target) < 1e-3


# -- orthogonality between eigenvector families ----------------------------------------------

def test_beta_kernel_concentrates_on_diagonal():
    # the smoothed kernel off the diagonal is negligible next to its diagonal value
    c = coefficient_matrix("beta", 0.8, [0.5, 1.7], 1600)
    off = abs(smoothed_sum(np.conj(c[:, 0]) * c[:, 1]))
    diag = smoothed_sum(np.abs(c[:, 0]) ** 2)
    assert diag > 10
    assert off / diag < 1e-4


# -- Lambda map ---------------------------------------------------------------------------------

@pytest.mark.parametrize("a", A_GRID)
def test_lambda_intertwines(a):
    E = np.linspace(-6, 6, 25)
    for n in (0, 1, 5, 17):
        assert lambda_check(a, n, E) < 1e-11


def test_lambda_basis_values():
    a = 1.0
    got = lambda_basis(a, 0, [0.0])[0]
    # P_0 = 1, norm sqrt(2^a / (pi Gamma(a)))
    assert got == pytest.approx(math.sqrt(2 / math.pi))


def test_lambda_check_limits():
    with pytest.raises(IndexError):
        lambda_check(1.0, 125, [0.0], N=128)
    with pytest.raises(DomainError):
        lambda_check(1.0, -1, [0.0])
