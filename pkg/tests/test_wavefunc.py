import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wignerosp.exceptions import DimensionError, DomainError
from wignerosp.numerics import central_difference, smoothed_sum
from wignerosp.spectral import coefficient_matrix
from wignerosp.wavefunc import (
    SampleTable,
    WaveParams,
    inner_p_u,
    inner_x_p,
    inner_x_u,
    inner_x_z,
    kernel_p_z,
    phase_c0,
    phase_c1,
    psi_bk,
    psi_free,
    sample,
    smeared_kernel_p_z,
    smeared_orthogonality,
)

A_GRID = (0.3, 0.5, 1.0, 1.7)


# -- partial sums of eigenvector coefficients as an independent route ---------------------

def xu_terms(a, x, E, N, parity="even"):
    gen, sl = ("alpha_V0", slice(0, None, 2)) if parity == "even" else ("alpha_V1", slice(1, None, 2))
    al = coefficient_matrix(gen, a, [E], N)[:, 0]
    be = coefficient_matrix("beta", a, [x], 2 * N)[sl, 0]
    return np.conj(be) * al


def pu_terms(a, p, E, N, parity="even"):
    gen, sl = ("alpha_V0", slice(0, None, 2)) if parity == "even" else ("alpha_V1", slice(1, None, 2))
    al = coefficient_matrix(gen, a, [E], N)[:, 0]
    ga = coefficient_matrix("gamma", a, [p], 2 * N)[sl, 0]
    return np.conj(ga) * al


def xp_terms(a, x, p, N):
    b = coefficient_matrix("beta", a, [x], N)[:, 0]
    g = coefficient_matrix("gamma", a, [p], N)[:, 0]
    return np.conj(b) * g


def xz_terms(a, x, E, N, parity="even"):
    gen, sl = ("epsilon_V0", slice(0, None, 2)) if parity == "even" else ("epsilon_V1", slice(1, None, 2))
    e = coefficient_matrix(gen, a, [E], N)[:, 0]
    b = coefficient_matrix("beta", a, [x], 2 * N)[sl, 0]
    return np.conj(b) * e


def cesaro(terms):
    return np.mean(np.cumsum(terms))


# -- phases ----------------------------------------------------------------------------

def test_phase_against_mpmath():
    for a, E in [(0.3, -2.0), (0.8, 0.9), (1.7, 5.5)]:
        g = mpmath.gamma(mpmath.mpc(a / 2, E / 2))
        ref = complex(mpmath.power(2, -0.5j * E) * abs(g) / g)
        assert abs(phase_c0(a, E) - ref) < 1e-14
        g1 = mpmath.gamma(mpmath.mpc((a + 1) / 2, E / 2))
        assert abs(phase_c1(a, E) - complex(mpmath.power(2, -0.5j * E) * abs(g1) / g1)) < 1e-14


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 5.0), st.floats(-40, 40))
def test_phase_modulus(a, E):
    assert abs(phase_c0(a, E)) == pytest.approx(1.0, abs=1e-13)
    assert abs(phase_c1(a, E)) == pytest.approx(1.0, abs=1e-13)


def test_phase_at_zero_energy():
    assert phase_c0(0.9, 0.0) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        phase_c0(0.0, 1.0)
    with pytest.raises(DomainError):
        phase_c1(-1.0, 1.0)


@settings(max_examples=40, deadline=None)
@given(st.floats(-5, 5).filter(lambda v: abs(v) > 1e-3), st.floats(-5, 5), st.sampled_from(["even", "odd"]))
def test_modulus_independent_of_a(x, E, parity):
    mags = [abs(inner_x_u(a, x, E, parity)) for a in A_GRID]
    assert max(mags) - min(mags) < 1e-13
    assert mags[0] == pytest.approx(abs(x) ** -0.5 / (2 * math.sqrt(math.pi)), rel=1e-13)


# -- H_b wave functions ----------------------------------------------------------------

@pytest.mark.parametrize("parity", ["even", "odd"])
@pytest.mark.parametrize("a", [0.8, 1.7])
def test_inner_x_u_against_smoothed_partial_sums(a, parity):
    # convergence is slow, slowest at small |x|
    for x, E in [(1.3, 0.9), (0.6, -1.1), (2.0, 0.0)]:
        ref = inner_x_u(a, x, E, parity)
        errs = [abs(smoothed_sum(xu_terms(a, x, E, N, parity)) - ref) for N in (400, 1600)]
        assert errs[1] < 1e-3
        assert errs[1] < errs[0] / 2


def test_inner_x_u_cesaro_example():
    # the raw partial sums oscillate; Cesaro means converge and improve with N
    a, x, E = 0.8, 1.3, 0.9
    ref = inner_x_u(a, x, E)
    errs = [abs(cesaro(xu_terms(a, x, E, N)) - ref) for N in (300, 600, 1200)]
    assert errs[1] < 3e-3
    assert errs[0] > errs[1] > errs[2]


@pytest.mark.xfail(strict=True, reason="plain partial sums oscillate at the 1e-2 level")
def test_inner_x_u_raw_partial_sum():
    a, x, E = 0.8, 1.3, 0.9
    assert abs(np.sum(xu_terms(a, x, E, 600)) - inner_x_u(a, x, E)) < 3e-3


@pytest.mark.parametrize("parity", ["even", "odd"])
def test_inner_p_u_against_smoothed_partial_sums(parity):
    a = 0.8
    for p, E in [(1.3, 0.9), (-0.7, 1.6)]:
        ref = inner_p_u(a, p, E, parity)
        errs = [abs(smoothed_sum(pu_terms(a, p, E, N, parity)) - ref) for N in (400, 1600)]
        assert errs[1] < 1e-3
        assert errs[1] < errs[0] / 2


def test_inner_x_u_odd_is_odd():
    assert inner_x_u(1.1, -0.7, 0.4, "odd") == pytest.approx(-inner_x_u(1.1, 0.7, 0.4, "odd"))
    assert inner_x_u(1.1, -0.7, 0.4, "even") == pytest.approx(inner_x_u(1.1, 0.7, 0.4, "even"))


def test_inner_x_u_errors():
    with pytest.raises(DomainError):
        inner_x_u(1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        inner_x_u(1.0, 1.0, 1.0, "both")


@pytest.mark.parametrize("a", A_GRID)
def test_psi_bk_finite_difference(a):
    mix = WaveParams(a, 0.6, 0.8j)
    worst = 0.0
    for E in (-1.2, 0.7, 2.0):
        for x in np.concatenate([np.linspace(-3, -0.5, 6), np.linspace(0.5, 3, 11)]):
            f = lambda y: psi_bk(mix, y, E)
            lhs = -1j * (x * central_difference(f, x, 1e-5) + 0.5 * f(x))
            worst = max(worst, abs(lhs - E * f(x)) / abs(f(x)))
    assert worst < 1e-6


def test_psi_bk_scale_covariance():
    # dilation x -> lam x multiplies psi_E by lam^(iE - 1/2)
    mix = WaveParams(0.8, 0.6, 0.8)
    E, lam = 1.3, 2.7
    for x in (-1.1, 0.4, 2.2):
        want = lam ** (1j * E - 0.5) * psi_bk(mix, x, E)
        assert abs(psi_bk(mix, lam * x, E) - want) < 1e-14


@pytest.mark.parametrize("A,B", [(1, 0), (0, 1), (0.6, 0.8j)])
def test_smeared_orthogonality(A, B):
    val, target = smeared_orthogonality(WaveParams(0.8, A, B), 0.7)
    assert target == 1.0
    assert abs(val - target) < 1e-3


def test_wave_params_validation():
    with pytest.raises(DomainError):
        WaveParams(0.8, 1, 1)
    with pytest.raises(DomainError):
        WaveParams(0.0)
    p = WaveParams(0.8, 1 / math.sqrt(2), 1j / math.sqrt(2))
    assert isinstance(p.A, complex) and isinstance(p.B, complex)


# -- Fourier kernel ----------------------------------------------------------------------

def test_inner_x_p_is_fourier_at_half():
    for x in np.linspace(-4, 4, 17):
        for p in (-2.0, 0.5, 3.0):
            ref = cmath.exp(1j * x * p) / math.sqrt(2 * math.pi)
            assert abs(inner_x_p(0.5, x, p) - ref) < 1e-12


@pytest.mark.parametrize("a", [0.7, 1.0, 1.7])
def test_inner_x_p_against_bessel(a):
    # 0F1(;a;-t^2/4) = Gamma(a) (t/2)^(1-a) J_{a-1}(t)
    x, p = 0.9, 1.2
    t = x * p
    with mpmath.workdps(30):
        env = t ** (a - 0.5) / 2 ** a
        re = env * (t / 2) ** (1 - a) * mpmath.besselj(a - 1, t)
        im = env * (t / 2) ** (1 - a) * mpmath.besselj(a, t)
    assert abs(inner_x_p(a, x, p) - complex(re, im)) < 1e-13


def test_inner_x_p_against_smoothed_partial_sums():
    a, x, p = 0.7, 0.9, 1.2
    assert abs(smoothed_sum(xp_terms(a, x, p, 400)) - inner_x_p(a, x, p)) < 1e-6


@pytest.mark.xfail(strict=True, reason="the series is only conditionally convergent; plain sums stall near 1e-2")
def test_inner_x_p_raw_partial_sum():
    a, x, p = 0.7, 0.9, 1.2
    assert abs(np.sum(xp_terms(a, x, p, 400)) - inner_x_p(a, x, p)) < 1e-6


def test_inner_x_p_at_origin():
    assert inner_x_p(0.3, 0.0, 1.0).real == math.inf
    assert inner_x_p(0.5, 2.0, 0.0) == pytest.approx(1 / math.sqrt(2 * math.pi))
    assert inner_x_p(1.2, 0.0, 0.0) == 0
    with pytest.raises(DomainError):
        inner_x_p(0.0, 1.0, 1.0)


def test_inner_x_p_symmetry():
    for a in (0.4, 1.3):
        assert inner_x_p(a, 0.7, 1.9) == pytest.approx(inner_x_p(a, 1.9, 0.7), rel=1e-14)
        assert inner_x_p(a, -0.7, 1.9) == pytest.approx(inner_x_p(a, 0.7, 1.9).conjugate(), rel=1e-14)


# -- free particle -------------------------------------------------------------------------

@pytest.mark.parametrize("E", [0.3, 1.0, 2.7])
def test_psi_free_standing_waves_at_half(E):
    k = math.sqrt(2 * E)
    pre = (2 * E) ** -0.25 / math.sqrt(math.pi)
    for x in np.linspace(-4, 4, 21):
        assert abs(psi_free(WaveParams(0.5, 1, 0), x, E) - pre * math.cos(k * x)) < 1e-12
        assert abs(psi_free(WaveParams(0.5, 0, 1), x, E) - pre * math.sin(k * x)) < 1e-12


@pytest.mark.parametrize("sign", [1, -1])
def test_plane_waves_at_half(sign):
    # (A, B) = (1, +-i)/sqrt(2) gives a pure exp(+-i k x)
    E = 1.3
    k = math.sqrt(2 * E)
    params = WaveParams(0.5, 1 / math.sqrt(2), sign * 1j / math.sqrt(2))
    pre = (2 * E) ** -0.25 / math.sqrt(2 * math.pi)
    for x in np.linspace(-3, 3, 13):
        assert abs(psi_free(params, x, E) - pre * cmath.exp(sign * 1j * k * x)) < 1e-12


@pytest.mark.parametrize("a", A_GRID)
def test_psi_free_finite_difference(a):
    # conjugated Dunkl Laplacian: -psi''/2 + mu(mu -+ 1)/(2x^2) psi on even/odd parts
    mu = a - 0.5
    worst = 0.0
    for E in (0.4, 1.3):
        for x in np.linspace(0.4, 3.0, 9):
            for parity, c in (("even", mu * (mu - 1)), ("odd", mu * (mu + 1))):
                f = lambda y: inner_x_z(a, y, E, parity)
                lhs = -0.5 * central_difference(f, x, 1e-4, order=2) + c / (2 * x * x) * f(x)
                worst = max(worst, abs(lhs - E * f(x)) / abs(f(x)))
    assert worst < 1e-5


@pytest.mark.parametrize("parity", ["even", "odd"])
@pytest.mark.parametrize("a", [0.6, 1.4])
def test_inner_x_z_against_smoothed_partial_sums(a, parity):
    for x, E in [(0.8, 0.6), (1.7, 2.1)]:
        ref = inner_x_z(a, x, E, parity)
        assert abs(smoothed_sum(xz_terms(a, x, E, 400, parity)) - ref) < 1e-8


@pytest.mark.xfail(strict=True, reason="plain partial sums converge only conditionally")
def test_inner_x_z_raw_partial_sum():
    a, x, E = 1.4, 0.8, 0.6
    assert abs(np.sum(xz_terms(a, x, E, 400)) - inner_x_z(a, x, E)) < 1e-6


def test_inner_x_z_errors_and_origin():
    with pytest.raises(DomainError):
        inner_x_z(1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        inner_x_z(1.0, 1.0, 1.0, "none")
    assert inner_x_z(0.3, 0.0, 1.0) == math.inf
    assert inner_x_z(1.3, 0.0, 1.0) == 0.0
    assert inner_x_z(1.3, 0.0, 1.0, "odd") == 0.0
    assert inner_x_z(0.5, 0.0, 1.0) == pytest.approx(math.sqrt(1 / math.pi) / 2 ** 0.25 * 1.0 ** -0.25)


# -- momentum kernel -------------------------------------------------------------------------

@pytest.mark.parametrize("parity", ["even", "odd"])
def test_smeared_kernel_p_z(parity):
    errs = []
    for N in (100, 200, 400):
        val, target = smeared_kernel_p_z(0.8, 1.1, N, parity)
        errs.append(abs(val - target) / abs(target))
    assert errs[-1] < 0.1
    assert errs[0] > errs[1] > errs[2]


def test_smeared_kernel_odd_phase():
    val, target = smeared_kernel_p_z(0.8, -1.1, 400, "odd")
    assert target == pytest.approx(0.5j * math.sqrt(2.2))
    assert abs(val - target) < 1e-2 * abs(target)


def test_kernel_p_z_is_partial_sum():
    a, p, E, N = 0.8, 1.1, 0.5, 30
    g = coefficient_matrix("gamma", a, [p], 2 * N)[0::2, 0]
    e = coefficient_matrix("epsilon_V0", a, [E], N)[:, 0]
    assert kernel_p_z(a, p, E, N) == pytest.approx(np.sum(np.conj(g) * e), rel=1e-14)
    with pytest.raises(DomainError):
        kernel_p_z(a, p, 0.0, N)
    with pytest.raises(ValueError):
        kernel_p_z(a, p, E, N, "mixed")


# -- sampling ---------------------------------------------------------------------------------

def test_sample_table():
    t = sample(lambda x: complex(x, -x), [0.0, 0.5, 1.0])
    assert list(t.rows()) == [(0.0, 0.0, -0.0), (0.5, 0.5, -0.5), (1.0, 1.0, -1.0)]
    with pytest.raises(DomainError):
        SampleTable([0.0, 0.0], [1, 2])
    with pytest.raises(DimensionError):
        SampleTable([0.0, 1.0], [1])
