import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from boxqm.core import (
    BoxConfig,
    ParameterError,
    constant_state,
    exponential_bound_state,
    linear_zero_state,
)
from boxqm.dynamics import GaussianPacketSpec, LineGaussian, wrap
from boxqm.momentum import (
    MomentumExtension,
    expval_pI,
    expval_pR,
    expval_pR_squared,
    momentum_amplitudes,
    momentum_distribution,
    momentum_eigenfunction,
    momentum_identity_residual,
    pR_squared_from_distribution,
    theta_from_lambdas,
)
from boxqm.spectrum import (
    antisymmetric_robin_spectrum,
    dirichlet_spectrum,
    neumann_spectrum,
    symmetric_robin_spectrum,
)
from boxqm.states import random_state

EXT0 = MomentumExtension.from_theta(0.0)

# <p_R> of the Dirichlet-wrapped Gaussian (a = L/20, k_c = 41 pi/L) at t = 0,
# pinned from a scipy.integrate.quad oracle on the explicit image sum.
WRAPPED_PACKET_PR = 128.80529879718154


def eigenstate(cfg, wavenumber_index):
    # Dirichlet eigenstate whose wavenumber is pi * wavenumber_index / L
    return dirichlet_spectrum(cfg, wavenumber_index - 1).levels[wavenumber_index - 1].eigenfunction


def measured_probability(cfg, index, n):
    """Closed-form measurement probabilities of the Dirichlet eigenstate."""
    if abs(n) == index:
        return 0.25
    if (n + index) % 2 == 0:
        return 0.0
    return 4.0 * index**2 / (math.pi**2 * (index**2 - n**2) ** 2)


def test_theta_examples():
    assert theta_from_lambdas(1j, 1j) == pytest.approx(0.0, abs=1e-15)
    assert theta_from_lambdas(0j, 0j) == pytest.approx(0.0, abs=1e-15)
    # (1+i)^2/(1-i)^2 = -1  =>  theta = pi/2
    assert theta_from_lambdas(1j, -1j) == pytest.approx(math.pi / 2, abs=1e-14)
    with pytest.raises(ParameterError):
        theta_from_lambdas(0.5 + 0j, 0j)


@given(b_plus=st.floats(-50.0, 50.0), b_minus=st.floats(-50.0, 50.0))
@settings(max_examples=200, deadline=None)
def test_theta_solves_its_defining_equation(b_plus, b_minus):
    ext = MomentumExtension.from_lambdas(1j * b_plus, 1j * b_minus)
    assert 0.0 <= ext.theta < math.pi
    lhs = np.exp(2j * ext.theta)
    rhs = ((1 + ext.lambda_plus) * (1 - ext.lambda_minus)
           / ((1 - ext.lambda_plus) * (1 + ext.lambda_minus)))
    assert abs(lhs - rhs) <= 1e-12
    assert abs(abs(rhs) - 1.0) <= 1e-12


@given(theta=st.floats(0.0, math.pi - 1e-9), n=st.integers(-500, 500))
@settings(max_examples=100, deadline=None)
def test_quantization_residual(theta, n):
    cfg = BoxConfig()
    ext = MomentumExtension.from_theta(theta)
    k = float(ext.wavenumbers(cfg, n))
    lhs = np.exp(2j * k * cfg.L)
    rhs = np.exp(2j * ext.theta)
    assert abs(lhs - rhs) <= 1e-12


def test_eigenfunction_sigma_and_boundary(cfg):
    ext = MomentumExtension.from_lambdas(0.4j, -0.2j)
    for n in range(-8, 9):
        k = float(ext.wavenumbers(cfg, n))
        phi = momentum_eigenfunction(cfg, ext, k)
        assert abs(abs(phi.sigma) - 1.0) <= 1e-12
        assert phi.boundary_residual(ext) <= 1e-10


def test_eigenfunction_zero_lambda_limit(cfg):
    # lambda = 0: sigma_k = exp(ikL) and the odd component vanishes at the walls
    ext = MomentumExtension.from_lambdas(0j, 0j)
    k = float(ext.wavenumbers(cfg, 3))
    phi = momentum_eigenfunction(cfg, ext, k)
    assert phi.sigma == pytest.approx(np.exp(1j * k * cfg.L), abs=1e-14)
    assert phi.boundary_residual(ext) <= 1e-12


def test_eigenfunction_n0_form(cfg):
    ext = MomentumExtension.from_lambdas(0.7j, 0.7j)  # theta = 0 by symmetry
    assert ext.theta == pytest.approx(0.0, abs=1e-15)
    phi = momentum_eigenfunction(cfg, ext, 0.0)
    sigma0 = (1.0 - ext.lambda_plus) / (1.0 + ext.lambda_plus)
    assert phi.sigma == pytest.approx(sigma0, abs=1e-14)
    e, o = phi.components(np.asarray([0.123]))
    pref = 1.0 / (2.0 * math.sqrt(cfg.L))
    assert complex(e[0]) == pytest.approx(pref * (1 + sigma0), abs=1e-14)
    assert complex(o[0]) == pytest.approx(pref * (1 - sigma0), abs=1e-14)


def test_eigenfunction_orthonormal_doubled_space(cfg, quad):
    ext = MomentumExtension.from_theta(0.9)
    states = [momentum_eigenfunction(cfg, ext, float(ext.wavenumbers(cfg, n)))
              for n in range(-8, 9)]
    for i, a in enumerate(states):
        for j, b in enumerate(states):
            ae, ao = a.components(quad.x)
            be, bo = b.components(quad.x)
            g = np.dot(quad.w, np.conj(ae) * be + np.conj(ao) * bo)
            assert abs(g - (1.0 if i == j else 0.0)) <= 1e-10


def test_eigenfunction_off_grid_rejected(cfg):
    with pytest.raises(ParameterError):
        momentum_eigenfunction(cfg, EXT0, 0.5 * math.pi / cfg.L)


@pytest.mark.parametrize("index", [4, 7])
def test_dirichlet_measurement_closed_form(cfg, index):
    psi = eigenstate(cfg, index)
    n, c = momentum_amplitudes(psi, EXT0, (-40, 40))
    p = np.abs(c) ** 2
    for i, nn in enumerate(n):
        assert p[i] == pytest.approx(measured_probability(cfg, index, int(nn)), abs=1e-13)


def test_constant_state_amplitudes(cfg):
    # c_0 = 1/sqrt(2); odd n carry 2/(pi n)^2 * 2 ... |c_n|^2 = 2/(pi^2 n^2);
    # the full ladder sums to 1 (Parseval on the doubled space).
    n, c = momentum_amplitudes(constant_state(cfg), EXT0, (-4096, 4096))
    p = np.abs(c) ** 2
    assert p[n == 0][0] == pytest.approx(0.5, abs=1e-14)
    for nn in (2, 4, 100):
        assert p[n == nn][0] <= 1e-28
    for nn in (1, 3, 11):
        assert p[n == nn][0] == pytest.approx(2.0 / (math.pi**2 * nn**2), rel=1e-12)
    dist = momentum_distribution(constant_state(cfg), EXT0, (-4096, 4096))
    assert dist.total_mass(with_tail=True) == pytest.approx(1.0, abs=1e-6)


def test_linear_zero_measurement(cfg):
    dist = momentum_distribution(linear_zero_state(cfg), EXT0, (-512, 512))
    p, n = dist.p, dist.n
    assert p[n == 0][0] == 0.0
    for nn in (1, -1):
        assert p[n == nn][0] == pytest.approx(24.0 / math.pi**4, abs=1e-10)
    for nn in (2, -2):
        assert p[n == nn][0] == pytest.approx(6.0 / (4.0 * math.pi**2), abs=1e-10)
    assert abs(dist.most_probable()) == 1
    assert dist.total_mass(with_tail=False) <= 1.0 + 1e-9
    assert dist.total_mass(with_tail=True) == pytest.approx(1.0, abs=1e-4)


def test_dirichlet_distribution_sums_to_one(cfg):
    dist = momentum_distribution(eigenstate(cfg, 4), EXT0, (-10_000, 10_000))
    assert dist.total_mass(with_tail=False) == pytest.approx(1.0, abs=1e-6)
    assert dist.tail_exponent == pytest.approx(4.0, abs=1e-2)


def test_expval_pR_real_states(cfg, quad):
    for psi in (constant_state(cfg), linear_zero_state(cfg), eigenstate(cfg, 3),
                exponential_bound_state(cfg, 1.0)):
        assert abs(expval_pR(psi, quad)) <= 1e-12


def test_expval_pR_wrapped_packet_oracle(cfg, quad):
    spec = GaussianPacketSpec(a=cfg.L / 20.0, k_c=41.0 * math.pi / cfg.L)
    psi = wrap(LineGaussian(cfg, spec.a, spec.k_c), "dirichlet", 0.0, q=quad)
    assert expval_pR(psi, quad) == pytest.approx(WRAPPED_PACKET_PR, abs=1e-6 * spec.k_c)


def test_expval_pI(cfg, quad):
    assert expval_pI(constant_state(cfg)) == pytest.approx(0.0, abs=1e-14)
    assert expval_pI(eigenstate(cfg, 2)) == pytest.approx(0.0, abs=1e-14)
    gamma = 1.0
    assert expval_pI(exponential_bound_state(cfg, gamma)) == pytest.approx(gamma, rel=1e-12)


@pytest.mark.parametrize("index", [1, 2, 3, 4, 5, 6])
def test_pR_squared_dirichlet(cfg, quad, index):
    got = expval_pR_squared(eigenstate(cfg, index), quad)
    assert got == pytest.approx((math.pi * index / cfg.L) ** 2, rel=1e-8)


def test_pR_squared_infinite_cases(cfg, quad):
    assert expval_pR_squared(linear_zero_state(cfg), quad) == math.inf
    assert expval_pR_squared(constant_state(cfg), quad) == math.inf
    assert expval_pR_squared(neumann_spectrum(cfg, 3).levels[2].eigenfunction, quad) == math.inf


def test_pR_squared_series_matches_integral(cfg, quad):
    psi = eigenstate(cfg, 4)
    dist = momentum_distribution(psi, EXT0, (-1024, 1024))
    series = pR_squared_from_distribution(dist)
    integral = expval_pR_squared(psi, quad)
    assert abs(series - integral) <= 1e-6 * integral
    lin = momentum_distribution(linear_zero_state(cfg), EXT0, (-1024, 1024))
    assert pR_squared_from_distribution(lin) == math.inf


def test_identity_residual_named_states(cfg, quad):
    for index in (1, 2, 5):
        assert momentum_identity_residual(eigenstate(cfg, index), quad) <= 1e-12
    assert momentum_identity_residual(exponential_bound_state(cfg, 1.0), quad) <= 1e-9


def test_identity_residual_random_sweep(cfg, quad):
    basis = dirichlet_spectrum(cfg, 9)
    for seed in range(100):
        psi = random_state(basis, 10, seed).wavefunction()
        assert momentum_identity_residual(psi, quad) <= 1e-9


def test_parseval_smooth_states(cfg, quad):
    basis = dirichlet_spectrum(cfg, 9)
    for seed in (0, 1, 2):
        psi = random_state(basis, 10, seed).wavefunction()
        dist = momentum_distribution(psi, EXT0, (-2048, 2048), quad)
        assert dist.total_mass(with_tail=True) == pytest.approx(1.0, abs=1e-6)
    robin = symmetric_robin_spectrum(cfg, 1.0 / cfg.L, 9)
    psi = random_state(robin, 10, 5).wavefunction()
    dist = momentum_distribution(psi, EXT0, (-4096, 4096), quad)
    assert dist.total_mass(with_tail=True) == pytest.approx(1.0, abs=1e-6)


def test_first_moment_matches_quadrature(cfg, quad):
    # valid whenever the distribution tail falls faster than 1/n^2
    basis = dirichlet_spectrum(cfg, 9)
    for seed in (3, 4):
        psi = random_state(basis, 10, seed).wavefunction()
        dist = momentum_distribution(psi, EXT0, (-2048, 2048), quad)
        direct = expval_pR(psi, quad)
        ladder = dist.moment(1, with_tail=True)
        assert abs(ladder - direct) <= 1e-5 * max(1.0 / cfg.L, abs(direct))


def test_theta_independence_of_pR(cfg, quad):
    psi = random_state(dirichlet_spectrum(cfg, 9), 10, 11).wavefunction()
    m0 = momentum_distribution(psi, EXT0, (-2048, 2048), quad).moment(1)
    m1 = momentum_distribution(psi, MomentumExtension.from_theta(math.pi / 3),
                               (-2048, 2048), quad).moment(1)
    assert abs(m0 - m1) <= 1e-6


def test_moment_flags_conditional_convergence(cfg):
    # 1/n^2 branches make the first ladder moment only conditionally
    # convergent; the tail-corrected value must say so rather than guess
    dist = momentum_distribution(linear_zero_state(cfg), EXT0, (-512, 512))
    assert math.isnan(dist.moment(1, with_tail=True))
    assert math.isfinite(dist.moment(1, with_tail=False))


def test_empty_ladder_window_rejected(cfg):
    with pytest.raises(ParameterError):
        momentum_amplitudes(constant_state(cfg), EXT0, (5, -5))


def test_quadrature_amplitude_fallback_matches_closed_form(cfg, quad):
    psi = eigenstate(cfg, 3)
    bare = psi.__class__(cfg, psi._fn)  # closure without primitives
    n_c, c_closed = momentum_amplitudes(psi, EXT0, (-64, 64))
    n_q, c_quad = momentum_amplitudes(bare, EXT0, (-64, 64), quad)
    assert np.array_equal(n_c, n_q)
    assert float(np.max(np.abs(c_closed - c_quad))) <= 1e-12


def test_antisymmetric_state_identity(cfg, quad):
    basis = antisymmetric_robin_spectrum(cfg, 1.0 / cfg.L, 9)
    psi = random_state(basis, 10, 21).wavefunction()
    assert momentum_identity_residual(psi, quad) <= 1e-9
