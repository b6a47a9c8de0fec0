import math

import numpy as np
import pytest

from boxqm.core import (
    ParameterError,
    PreconditionError,
    constant_state,
    exponential_bound_state,
    linear_zero_state,
)
from boxqm.spectrum import (
    RobinBC,
    antisymmetric_robin_spectrum,
    dirichlet_spectrum,
    neumann_spectrum,
    symmetric_robin_spectrum,
)
from boxqm.states import random_state
from boxqm.uncertainty import (
    anticommutator_x_pR,
    commutator_expectation_x_pR,
    generalized_uncertainty,
    kinetic_inequality_report,
    saturating_potential,
    saturating_state,
    schrodinger_form_rhs,
    state_moments,
    x_pI_commutator_expectation,
)


def test_commutator_named_states(cfg, quad):
    for psi in (dirichlet_spectrum(cfg, 0).levels[0].eigenfunction,
                linear_zero_state(cfg),
                exponential_bound_state(cfg, 1.0)):
        assert abs(commutator_expectation_x_pR(psi, quad) - 1j) <= 1e-8


def test_commutator_random_states(cfg, quad):
    basis = symmetric_robin_spectrum(cfg, 1.0 / cfg.L, 5)
    for seed in range(20):
        psi = random_state(basis, 6, seed).wavefunction()
        assert abs(commutator_expectation_x_pR(psi, quad) - 1j) <= 1e-7


def test_x_pI_commutes(cfg, quad):
    basis = symmetric_robin_spectrum(cfg, -1.0 / cfg.L, 5)
    for seed in range(10):
        psi = random_state(basis, 6, seed).wavefunction()
        assert abs(x_pI_commutator_expectation(psi)) <= 1e-10


def test_generalized_uncertainty_dirichlet_ground(cfg, quad):
    lhs, rhs = generalized_uncertainty(dirichlet_spectrum(cfg, 0).levels[0].eigenfunction, quad)
    assert lhs >= rhs - 1e-10
    assert lhs - rhs > 0.01  # strictly positive slack (0.5679 vs 0.5)


def test_generalized_uncertainty_constant_state(cfg, quad):
    lhs, rhs = generalized_uncertainty(constant_state(cfg), quad)
    assert abs(lhs) <= 1e-12 and abs(rhs) <= 1e-12


def test_saturating_state_equality(cfg, quad):
    gamma = 1.0
    psi = saturating_state(cfg, 0.0, 1j / gamma, quad)
    diff = psi(quad.x) - exponential_bound_state(cfg, gamma)(quad.x)
    assert math.sqrt(abs(np.dot(quad.w, np.abs(diff) ** 2))) <= 1e-12
    lhs, rhs = generalized_uncertainty(psi, quad)
    assert abs(lhs - rhs) <= 1e-9


def test_saturating_state_constant_limit(cfg, quad):
    psi = saturating_state(cfg, 0.0, 1e8j * cfg.L, quad)
    flat = constant_state(cfg)
    phase = complex(np.dot(quad.w, np.conj(flat(quad.x)) * psi(quad.x)))
    phase /= abs(phase)
    diff = psi(quad.x) / phase - flat(quad.x)
    assert math.sqrt(abs(np.dot(quad.w, np.abs(diff) ** 2))) <= 1e-7


def test_saturating_state_eigen_residual(cfg, quad):
    a, c = 1.0 / cfg.L, cfg.L
    psi = saturating_state(cfg, a, 1j * c, quad)
    V, _, energy = saturating_potential(cfg, a, c)
    h_psi = -psi.derivative(quad.x, 2) / (2.0 * cfg.m) + V(quad.x) * psi(quad.x)
    r = h_psi - energy * psi(quad.x)
    assert math.sqrt(abs(np.dot(quad.w, np.abs(r) ** 2))) <= 1e-8


def test_saturating_state_rejects_zero_b(cfg):
    with pytest.raises(ParameterError):
        saturating_state(cfg, 0.0, 0.0)


def test_schrodinger_form_matches_simple_form(cfg, quad):
    basis = symmetric_robin_spectrum(cfg, 2.0 / cfg.L, 7)
    for seed in range(50):
        psi = random_state(basis, 8, seed).wavefunction()
        _, rhs = generalized_uncertainty(psi, quad)
        assert abs(rhs - schrodinger_form_rhs(psi, quad)) <= 1e-10


def test_report_exponential_state(cfg, quad):
    gamma = 1.0
    rep = kinetic_inequality_report(exponential_bound_state(cfg, gamma),
                                    RobinBC.antisymmetric(gamma), quad)
    assert abs(rep.pR) <= 1e-9
    assert abs(rep.anticomm) <= 1e-9
    assert rep.holds
    assert abs(rep.slack) <= 1e-9  # the bound is saturated here
    assert rep.two_m_T == pytest.approx(-gamma**2, rel=1e-12)


def test_report_linear_zero_state(cfg, quad):
    rep = kinetic_inequality_report(linear_zero_state(cfg),
                                    RobinBC.symmetric(-2.0 / cfg.L), quad)
    assert abs(rep.anticomm) <= 1e-9
    assert rep.delta_x**2 == pytest.approx(3.0 * cfg.L**2 / 20.0, abs=1e-12)
    assert 16.0 / 5.0 - rep.anticomm**2 >= 0.0
    assert rep.holds
    assert abs(rep.two_m_T) <= 1e-12


def test_report_random_sweep_never_violates(cfg, quad):
    for gamma_L in (-3.0, -1.0, 0.0, 1.0, 3.0):
        basis = symmetric_robin_spectrum(cfg, gamma_L / cfg.L, 7)
        for seed in range(20):
            psi = random_state(basis, 8, seed).wavefunction()
            rep = kinetic_inequality_report(psi, RobinBC.symmetric(gamma_L / cfg.L), quad)
            assert rep.holds, (gamma_L, seed, rep.slack)
            assert rep.slack >= -1e-10


def test_report_negative_and_zero_energy_states(cfg, quad):
    basis = symmetric_robin_spectrum(cfg, -3.0 / cfg.L, 4)
    bc = RobinBC.symmetric(-3.0 / cfg.L)
    for lv in basis.levels:
        rep = kinetic_inequality_report(lv.eigenfunction, bc, quad)
        assert rep.holds, (lv.kind, rep.slack)
    flat = kinetic_inequality_report(constant_state(cfg), RobinBC.neumann(), quad)
    assert flat.holds and abs(flat.slack) <= 1e-10


def test_report_kinetic_identity_by_parts(cfg, quad):
    # int |psi'|^2 = <-d^2/dx^2> - (gamma_+ rho_+ + gamma_- rho_-)
    gamma = 1.3 / cfg.L
    basis = symmetric_robin_spectrum(cfg, gamma, 7)
    for seed in range(5):
        psi = random_state(basis, 8, seed).wavefunction()
        m = state_moments(psi, quad)
        rhs = m.two_m_T - gamma * (m.rho_plus + m.rho_minus)
        assert m.grad2 == pytest.approx(rhs, abs=1e-9)


def test_report_precondition(cfg, quad):
    with pytest.raises(PreconditionError):
        kinetic_inequality_report(dirichlet_spectrum(cfg, 0).levels[0].eigenfunction,
                                  RobinBC.neumann(), quad)


def test_anticommutator_is_real_everywhere(cfg, quad):
    basis = antisymmetric_robin_spectrum(cfg, 2.0 / cfg.L, 7)
    for seed in range(10):
        psi = random_state(basis, 8, seed).wavefunction()
        val = anticommutator_x_pR(psi, quad)
        assert isinstance(val, float)
        comm = commutator_expectation_x_pR(psi, quad)
        assert abs(comm.real) <= 1e-10


def test_neumann_eigenstates_hold(cfg, quad):
    basis = neumann_spectrum(cfg, 6)
    for lv in basis.levels:
        rep = kinetic_inequality_report(lv.eigenfunction, RobinBC.neumann(), quad)
        assert rep.holds
