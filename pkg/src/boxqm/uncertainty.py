"""Generalized Heisenberg-Robertson-Schrodinger machinery on the box.

The operator B = -i d/dx is not self-adjoint here, but the generalized
relation  Delta A Delta B >= |<A^dag B> - <A^dag><B>|  holds for any
operators, and with A = x it can be rewritten purely in observable
quantities.  Every p_R-containing expectation below is routed through
the spectral decomposition of p_R, which after Poisson resummation
collapses to the identity

    <x (-i d/dx)> = i ||psi||^2 + <p_R x> - (i/2)(L/2)(rho_+ + rho_-),

with rho_+- the endpoint densities.  From it,

    <{x, p_R}> = 2 Re <p_R x>,      <[x, p_R]> = conj(<p_R x>) - <p_R x>,

which evaluates to i on every normalized physical state.  Applying p_R
directly to a physical state is not domain-valid and is never done.

The kinetic form of the inequality reads

  2m<T> >= <p_R>^2
         + (1/Dx^2) (<{x,p_R}>/2 - <p_R><x>)^2
         + (1/4Dx^2)[1 + (<x> - L/2) rho_+ - (<x> + L/2) rho_-]^2
         + gamma_+ rho_+ + gamma_- rho_- + (rho_+ - rho_-)^2 / 4,

with 2m<T> = <-d^2/dx^2>.  It is saturated by
psi_S = exp[-(i/b)(x + a x^2 / 2)], which for real a and b = ic is an
eigenstate of H with the quadratic potential (a x + 1)^2 / (2 m c^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    BoxConfig,
    ParameterError,
    PreconditionError,
    Quadrature,
    WaveFunction,
)
from .spectrum import RobinBC

__all__ = [
    "UncertaintyReport",
    "StateMoments",
    "state_moments",
    "pR_x_expectation",
    "anticommutator_x_pR",
    "commutator_expectation_x_pR",
    "x_pI_commutator_expectation",
    "generalized_uncertainty",
    "schrodinger_form_rhs",
    "kinetic_inequality_report",
    "saturating_state",
    "saturating_potential",
]


@dataclass(frozen=True)
class StateMoments:
    """Quadrature moments every expectation formula here is built from."""

    norm2: float
    mean_x: float
    mean_x2: float
    var_x: float
    rho_minus: float
    rho_plus: float
    minus_i_ddx: complex       # <-i d/dx>
    x_minus_i_ddx: complex     # <x (-i d/dx)>
    grad2: float               # int |psi'|^2
    two_m_T: float             # <-d^2/dx^2>


def state_moments(psi: WaveFunction, q: Quadrature) -> StateMoments:
    cfg = psi.config
    cfg.require_same(q.config)
    v = psi(q.x)
    d1 = psi.derivative(q.x, 1)
    d2 = psi.derivative(q.x, 2)
    rho = np.abs(v) ** 2
    ends = psi(np.asarray([-cfg.half, cfg.half]))
    return StateMoments(
        norm2=float(np.real(np.dot(q.w, rho))),
        mean_x=float(np.real(np.dot(q.w, q.x * rho))),
        mean_x2=float(np.real(np.dot(q.w, q.x**2 * rho))),
        var_x=float(np.real(np.dot(q.w, q.x**2 * rho))
                    - np.real(np.dot(q.w, q.x * rho)) ** 2),
        rho_minus=float(abs(ends[0]) ** 2),
        rho_plus=float(abs(ends[1]) ** 2),
        minus_i_ddx=complex(np.dot(q.w, np.conj(v) * (-1j * d1))),
        x_minus_i_ddx=complex(np.dot(q.w, np.conj(v) * q.x * (-1j * d1))),
        grad2=float(np.real(np.dot(q.w, np.abs(d1) ** 2))),
        two_m_T=float(np.real(np.dot(q.w, np.conj(v) * (-d2)))),
    )


def pR_x_expectation(psi: WaveFunction, q: Quadrature,
                     moments: StateMoments | None = None) -> complex:
    """<p_R x> from the resummed spectral chain (never by applying p_R)."""
    m = moments or state_moments(psi, q)
    half = psi.config.half
    return (m.x_minus_i_ddx - 1j * m.norm2
            + 0.5j * half * (m.rho_plus + m.rho_minus))


def anticommutator_x_pR(psi: WaveFunction, q: Quadrature,
                        moments: StateMoments | None = None) -> float:
    """<{x, p_R}> = 2 Re <p_R x>; real because x p_R + p_R x is self-adjoint."""
    return 2.0 * pR_x_expectation(psi, q, moments).real


def commutator_expectation_x_pR(psi: WaveFunction, q: Quadrature) -> complex:
    """<[x, p_R]> on a physical state; equals i when the numerics are sound."""
    z = pR_x_expectation(psi, q)
    return np.conj(z) - z


def x_pI_commutator_expectation(psi: WaveFunction) -> complex:
    """<[x, p_I]>; x and p_I act at the same boundary points, so it vanishes."""
    cfg = psi.config
    v = psi(np.asarray([-cfg.half, cfg.half]))
    x_pI = 0.5 * ((-cfg.half) * abs(v[0]) ** 2 - cfg.half * abs(v[1]) ** 2)
    pI_x = 0.5 * ((-cfg.half) * abs(v[0]) ** 2 - cfg.half * abs(v[1]) ** 2)
    return complex(x_pI - pI_x)


def generalized_uncertainty(psi: WaveFunction, q: Quadrature) -> tuple[float, float]:
    """(Delta A Delta B, |<A^dag B> - <A^dag><B>|) for A = x, B = -i d/dx.

    Delta B is evaluated in the centered form int |(B - <B>) psi|^2, which
    stays accurate down to the saturating states where it vanishes.
    """
    m = state_moments(psi, q)
    dA = math.sqrt(max(m.var_x, 0.0))
    centered = -1j * psi.derivative(q.x, 1) - m.minus_i_ddx * psi(q.x)
    dB2 = float(np.real(np.dot(q.w, np.abs(centered) ** 2)))
    dB = math.sqrt(max(dB2, 0.0))
    rhs = abs(m.x_minus_i_ddx - m.mean_x * m.minus_i_ddx)
    return dA * dB, rhs


def schrodinger_form_rhs(psi: WaveFunction, q: Quadrature) -> float:
    """The anticommutator/commutator split of the same bound:
    sqrt((S/2)^2 - (D/2)^2) with S = <A^dag B + B^dag A> - <A^dag><B> - <B^dag><A>
    (real) and D the antisymmetric counterpart (anti-Hermitean, D^2 <= 0)."""
    m = state_moments(psi, q)
    z = m.x_minus_i_ddx - m.mean_x * m.minus_i_ddx
    S = z + np.conj(z)
    D = z - np.conj(z)
    return float(np.real(np.sqrt(0.25 * (S * S - D * D))))


@dataclass(frozen=True)
class UncertaintyReport:
    """Every term of the kinetic-energy inequality, plus the verdict."""

    delta_x: float
    two_m_T: float
    pR: float
    pR2_term: float
    anticomm: float
    cross_term: float
    boundary_block: float
    gamma_terms: float
    pI_sq_term: float
    lhs: float
    rhs: float
    holds: bool
    slack: float

    SLACK_TOL = 1e-10


def _gamma_density_term(gamma: float, rho: float, cfg: BoxConfig) -> float:
    if math.isinf(gamma):
        if rho > 1e-8 / cfg.L:
            raise PreconditionError(
                "nonzero endpoint density on a Dirichlet wall; the boundary "
                "algebra behind the inequality does not apply")
        return 0.0
    return gamma * rho


def kinetic_inequality_report(psi: WaveFunction, bc: RobinBC,
                              q: Quadrature | None = None) -> UncertaintyReport:
    cfg = psi.config
    q = q or Quadrature(cfg)
    res_m, res_p = bc.residuals(psi)
    if max(res_m, res_p) > 1e-6:
        raise PreconditionError(
            f"state violates the boundary conditions (residuals {res_m:.2e}, "
            f"{res_p:.2e}); <T> boundary algebra needs them satisfied")
    m = state_moments(psi, q)
    var = max(m.var_x, 1e-300)
    pR = float(m.minus_i_ddx.real)
    anticomm = anticommutator_x_pR(psi, q, m)
    cross = (0.5 * anticomm - pR * m.mean_x) ** 2 / var
    block = (1.0 + (m.mean_x - cfg.half) * m.rho_plus
             - (m.mean_x + cfg.half) * m.rho_minus)
    gamma_terms = (_gamma_density_term(bc.gamma_plus, m.rho_plus, cfg)
                   + _gamma_density_term(bc.gamma_minus, m.rho_minus, cfg))
    pI_sq = 0.25 * (m.rho_plus - m.rho_minus) ** 2
    rhs = pR**2 + cross + block**2 / (4.0 * var) + gamma_terms + pI_sq
    lhs = m.two_m_T
    slack = lhs - rhs
    return UncertaintyReport(
        delta_x=math.sqrt(max(m.var_x, 0.0)),
        two_m_T=lhs,
        pR=pR,
        pR2_term=pR**2,
        anticomm=anticomm,
        cross_term=cross,
        boundary_block=block,
        gamma_terms=gamma_terms,
        pI_sq_term=pI_sq,
        lhs=lhs,
        rhs=rhs,
        holds=slack >= -UncertaintyReport.SLACK_TOL,
        slack=slack,
    )


def saturating_state(cfg: BoxConfig, a_param: complex, b_param: complex,
                     q: Quadrature | None = None) -> WaveFunction:
    """Normalized psi_S = exp[-(i/b)(x + a x^2/2)], the equality case."""
    if b_param == 0:
        raise ParameterError("b must be nonzero for the saturating state")
    a, b = complex(a_param), complex(b_param)

    def fn(x):
        x = np.asarray(x, dtype=float)
        return np.exp(-(1j / b) * (x + 0.5 * a * x * x))

    def d1(x):
        x = np.asarray(x, dtype=float)
        return fn(x) * (-(1j / b) * (1.0 + a * x))

    def d2(x):
        x = np.asarray(x, dtype=float)
        g = -(1j / b) * (1.0 + a * x)
        return fn(x) * (g * g - 1j * a / b)

    psi = WaveFunction(cfg, fn, d1, d2, label=f"saturating(a={a}, b={b})")
    return psi.normalized(q or Quadrature(cfg))


def saturating_potential(cfg: BoxConfig, a: float, c: float):
    """For real a and b = i c the saturating state solves H psi = E psi with
    V(x) = (a x + 1)^2 / (2 m c^2); returns (V, V', E)."""
    pref = 1.0 / (2.0 * cfg.m * c * c)

    def V(x):
        x = np.asarray(x, dtype=float)
        return pref * (a * x + 1.0) ** 2

    def V_prime(x):
        x = np.asarray(x, dtype=float)
        return 2.0 * pref * a * (a * x + 1.0)

    energy = a / (2.0 * cfg.m * c)
    return V, V_prime, energy
