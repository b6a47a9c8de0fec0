"""Bouncing wave packets: wrapping free-line solutions onto the box,
eigenbasis time evolution, revival diagnostics and Ehrenfest checks.

A free-line solution Psi(x,t) maps onto the box by image sums,

  Dirichlet:  sum_n [Psi(x + 2nL) - Psi(-x + (2n+1)L)]
  Neumann:    sum_n [Psi(x + 2nL) + Psi(-x + (2n+1)L)]
  mixed:      sum_n (-1)^n [Psi(x + 2nL) + Psi(-x + (2n-1)L)]

each normalized on the box.  The mixed sum is even about the left
(Neumann) wall and odd about the right (Dirichlet) wall.

For the momentum-space Gaussian packet centered at k_c with width
parameter a the projections onto the box eigenbasis are Gaussian
evaluations on the family's k grid, so states can equivalently be built
as eigenbasis superpositions and evolved by pure phases
c_l(t) = c_l(0) exp(-i E_l t).  All eigenvalue gaps of the standard
families are multiples of pi^2/(2 m L^2), which produces an exact
revival at T = 4 m L^2 / pi (T/2 for the mixed family), a mirrored
density at T/2 and a two-packet fractional revival at T/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import (
    BoxConfig,
    ConfigurationError,
    ParameterError,
    Quadrature,
    TruncationError,
    WaveFunction,
)
from .momentum import expval_pI, expval_pR
from .spectrum import EnergyBasis

__all__ = [
    "GaussianPacketSpec",
    "LineGaussian",
    "LineSuperposition",
    "EvolvingState",
    "EhrenfestReport",
    "revival_period",
    "wrap",
    "gaussian_coefficients",
    "evolve",
    "revival_fidelity",
    "ehrenfest_report",
    "quarter_period_line_state",
]


def revival_period(cfg: BoxConfig) -> float:
    """T = 2 pi / E_0 = 4 m L^2 / pi for Dirichlet/Neumann walls."""
    return 4.0 * cfg.m * cfg.L**2 / math.pi


@dataclass(frozen=True)
class GaussianPacketSpec:
    """Momentum-space Gaussian: amplitude ~ exp(-a^2 (k - k_c)^2 / 2)."""

    a: float
    k_c: float
    n_modes: int | None = None

    def __post_init__(self):
        if not (self.a > 0):
            raise ParameterError("packet width a must be positive")

    def amplitude(self, k) -> np.ndarray:
        return np.exp(-0.5 * self.a**2 * (np.asarray(k, dtype=float) - self.k_c) ** 2)

    def mode_cutoff(self, cfg: BoxConfig) -> int:
        """Smallest mode count keeping every dropped |amplitude| below 1e-16."""
        if self.n_modes is not None:
            return self.n_modes
        reach = math.sqrt(2.0 * 16.0 * math.log(10.0)) / self.a
        return int(math.ceil((abs(self.k_c) + reach) * cfg.L / math.pi)) + 2


class LineGaussian:
    """The spreading free-particle Gaussian on the whole line.

    a(t)^2 = a^2 + i t / m;  psi(x,t) = (a / (a(t)^2 sqrt(pi)))^{1/2}
    exp(-(x - k_c t/m)^2 / (2 a(t)^2)) exp(i k_c x - i k_c^2 t / (2m)).
    """

    def __init__(self, cfg: BoxConfig, a: float, k_c: float):
        self.cfg = cfg
        self.a = a
        self.k_c = k_c

    def _width2(self, t: float) -> complex:
        return self.a**2 + 1j * t / self.cfg.m

    def value(self, x, t: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        at2 = self._width2(t)
        amp = np.sqrt(self.a / (at2 * math.sqrt(math.pi)))
        center = self.k_c * t / self.cfg.m
        phase = self.k_c * x - self.k_c**2 * t / (2.0 * self.cfg.m)
        return amp * np.exp(-((x - center) ** 2) / (2.0 * at2) + 1j * phase)

    def d1(self, x, t: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        at2 = self._width2(t)
        center = self.k_c * t / self.cfg.m
        return self.value(x, t) * (-(x - center) / at2 + 1j * self.k_c)

    def d2(self, x, t: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        at2 = self._width2(t)
        center = self.k_c * t / self.cfg.m
        g = -(x - center) / at2 + 1j * self.k_c
        return self.value(x, t) * (g * g - 1.0 / at2)

    def momentum_profile(self, k) -> np.ndarray:
        """Fourier amplitude at t = 0, up to the common real normalization."""
        return np.exp(-0.5 * self.a**2 * (np.asarray(k, dtype=float) - self.k_c) ** 2) + 0j


class LineSuperposition:
    """Weighted sum of line solutions (still a free-line solution)."""

    def __init__(self, terms):
        self.terms = list(terms)
        self.cfg = self.terms[0][1].cfg

    def value(self, x, t):
        return sum(w * s.value(x, t) for w, s in self.terms)

    def d1(self, x, t):
        return sum(w * s.d1(x, t) for w, s in self.terms)

    def d2(self, x, t):
        return sum(w * s.d2(x, t) for w, s in self.terms)

    def momentum_profile(self, k):
        return sum(w * s.momentum_profile(k) for w, s in self.terms)


def quarter_period_line_state(cfg: BoxConfig, spec: GaussianPacketSpec) -> LineSuperposition:
    """The two-Gaussian line state whose Dirichlet wrap equals the packet at
    t = T/4: weights (1 - i) at +k_c and -(1 + i) at -k_c."""
    return LineSuperposition([
        (1.0 - 1j, LineGaussian(cfg, spec.a, spec.k_c)),
        (-(1.0 + 1j), LineGaussian(cfg, spec.a, -spec.k_c)),
    ])


# ---------------------------------------------------------------------------
# image wrapping
# ---------------------------------------------------------------------------

_WRAP_FAMILIES = ("dirichlet", "neumann", "mixed")


def _image_terms(bc: str, n: int):
    """(shift, reflected, sign) contributions of image index n."""
    if bc == "dirichlet":
        return ((2 * n, False, +1.0), (2 * n + 1, True, -1.0))
    if bc == "neumann":
        return ((2 * n, False, +1.0), (2 * n + 1, True, +1.0))
    if bc == "mixed":
        s = -1.0 if n % 2 else +1.0
        return ((2 * n, False, s), (2 * n - 1, True, s))
    raise ParameterError(f"wrap supports {_WRAP_FAMILIES}, got {bc!r}")


def wrap(line_state, bc: str, t: float, truncation_images: int = 8,
         q: Quadrature | None = None, max_images: int = 4096) -> WaveFunction:
    """Normalized image-sum wavefunction on the box at time t.

    The image count starts at `truncation_images` and grows until the
    outermost shell contributes less than 1e-14 of the peak; a line state
    that spreads too far to satisfy that within `max_images` raises
    TruncationError.
    """
    cfg = line_state.cfg
    if bc not in _WRAP_FAMILIES:
        raise ParameterError(f"wrap supports {_WRAP_FAMILIES}, got {bc!r}")
    probe = np.linspace(-cfg.half, cfg.half, 193)

    n_img = max(1, truncation_images)
    while True:
        total = np.zeros(len(probe), dtype=complex)
        shell_peak = 0.0
        for n in range(-n_img, n_img + 1):
            shell = np.zeros(len(probe), dtype=complex)
            for shift, refl, sign in _image_terms(bc, n):
                arg = -probe + shift * cfg.L if refl else probe + shift * cfg.L
                shell += sign * line_state.value(arg, t)
            total += shell
            if abs(n) == n_img:
                shell_peak = max(shell_peak, float(np.max(np.abs(shell))))
        peak = float(np.max(np.abs(total)))
        if peak > 0.0 and shell_peak <= 1e-14 * peak:
            break
        if n_img >= max_images:
            raise TruncationError(
                f"image sum not converged at {n_img} images (shell/peak = "
                f"{shell_peak / max(peak, 1e-300):.2e})")
        n_img *= 2

    terms = [term for n in range(-n_img, n_img + 1) for term in _image_terms(bc, n)]

    def make(evaluator, flip_sign_on_reflection):
        def f(x):
            x = np.asarray(x, dtype=float)
            out = np.zeros(x.shape, dtype=complex)
            for shift, refl, sign in terms:
                if refl:
                    out += sign * flip_sign_on_reflection * evaluator(-x + shift * cfg.L, t)
                else:
                    out += sign * evaluator(x + shift * cfg.L, t)
            return out
        return f

    psi = WaveFunction(
        cfg,
        make(line_state.value, +1.0),
        make(line_state.d1, -1.0),
        make(line_state.d2, +1.0),
        label=f"wrapped[{bc}] t={t}",
    )
    return psi.normalized(q or Quadrature(cfg))


# ---------------------------------------------------------------------------
# eigenbasis representation and evolution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EvolvingState:
    """Coefficients of a state in an EnergyBasis at time t."""

    basis: EnergyBasis
    coefficients: np.ndarray
    t: float = 0.0

    @classmethod
    def from_coefficients(cls, basis: EnergyBasis, coefficients, t: float = 0.0,
                          normalize: bool = True) -> "EvolvingState":
        c = np.asarray(coefficients, dtype=complex)
        if len(c) != len(basis):
            raise ParameterError("coefficient count does not match the basis")
        n = math.sqrt(float(np.sum(np.abs(c) ** 2)))
        if normalize:
            if n == 0.0:
                raise ParameterError("zero coefficient vector")
            c = c / n
        elif abs(n - 1.0) > 1e-10:
            raise ParameterError(f"coefficients not normalized: |c| = {n}")
        return cls(basis, c, t)

    def wavefunction(self) -> WaveFunction:
        return self.basis.synthesize(self.coefficients)

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.coefficients) ** 2))


def evolve(state: EvolvingState, t: float) -> EvolvingState:
    """The state at absolute time t: c_l -> c_l exp(-i E_l (t - state.t))."""
    phases = np.exp(-1j * state.basis.energies * (t - state.t))
    return replace(state, coefficients=state.coefficients * phases, t=t)


def gaussian_coefficients(spec: GaussianPacketSpec, bc: str,
                          basis: EnergyBasis) -> EvolvingState:
    """Project the wrapped Gaussian onto the eigenbasis at t = 0.

    Uses the closed-form projections (Gaussian evaluations on the k grid
    with family-dependent combinations), adjusted by each level's
    canonical phase so they match the stored eigenfunctions.
    """
    if bc not in _WRAP_FAMILIES:
        raise ParameterError(f"gaussian_coefficients supports {_WRAP_FAMILIES}, got {bc!r}")
    if basis.family != bc:
        raise ConfigurationError(f"basis family {basis.family!r} does not match bc {bc!r}")
    cfg = basis.config
    G = spec.amplitude
    raw = np.zeros(len(basis), dtype=complex)
    for i, lv in enumerate(basis.levels):
        k = lv.wavenumber
        if bc == "dirichlet":
            c = (G(k) + G(-k)) if lv.index % 2 == 0 else 1j * (G(k) - G(-k))
        elif bc == "neumann":
            if lv.kind == "zero":
                c = math.sqrt(2.0) * G(0.0)
            else:
                c = (G(k) + G(-k)) if lv.index % 2 == 0 else 1j * (G(k) - G(-k))
        else:  # mixed
            ph = np.exp(0.5j * k * cfg.L)
            c = 1j * (G(k) * ph - G(-k) / ph)
        raw[i] = np.conj(lv.phase) * c
    cutoff = spec.mode_cutoff(cfg)
    if len(basis) < cutoff:
        raise TruncationError(
            f"basis holds {len(basis)} levels but the packet needs {cutoff} "
            f"for dropped amplitudes below 1e-16")
    return EvolvingState.from_coefficients(basis, raw, t=0.0)


def revival_fidelity(state: EvolvingState, t: float,
                     q: Quadrature | None = None) -> tuple[float, float]:
    """(|<Psi(t0)|Psi(t)>|, L1 distance between the densities at t and t0)."""
    q = q or Quadrature(state.basis.config)
    evolved = evolve(state, t)
    overlap = abs(complex(np.vdot(state.coefficients, evolved.coefficients)))
    rho0 = np.abs(state.wavefunction()(q.x)) ** 2
    rhot = np.abs(evolved.wavefunction()(q.x)) ** 2
    distance = float(np.dot(q.w, np.abs(rhot - rho0)))
    return overlap, distance


# ---------------------------------------------------------------------------
# Ehrenfest reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EhrenfestReport:
    """Both Ehrenfest identities evaluated at one instant.

    residual1 = |m d<x>/dt - <p_R>| with d<x>/dt from the analytic
    double sum over the position matrix.  residual2 compares the
    finite-difference d<p_R>/dt against -<V'> plus the boundary bracket
    (1/2m)[Re(psi'' psi*) - |psi'|^2] at the walls.  dpI_dt is the
    analytic bracket (1/2m) Im(psi'' psi*); continuity_residual is the
    largest pairwise gap between its three computations.
    """

    t: float
    dx_dt: float
    pR: float
    residual1: float
    dpR_dt: float
    force_boundary: float
    minus_dV: float
    residual2: float
    dpI_dt: float
    continuity_residual: float


def _bracket(values: np.ndarray) -> float:
    # values sampled at (-L/2, +L/2)
    return float(values[1] - values[0])


def ehrenfest_report(state: EvolvingState, t: float, V_prime=None,
                     q: Quadrature | None = None) -> EhrenfestReport:
    basis = state.basis
    cfg = basis.config
    q = q or Quadrature(cfg)
    m = cfg.m
    T_ref = revival_period(cfg)

    at = evolve(state, t)
    c = at.coefficients
    E = basis.energies
    X = basis.position_matrix(q)
    z1 = np.conj(E * c) @ X @ c
    z2 = np.conj(c) @ X @ (E * c)
    dx_dt = float((1j * (z1 - z2)).real)

    psi = at.wavefunction()
    pR_now = expval_pR(psi, q)
    residual1 = abs(m * dx_dt - pR_now)

    h = 1e-6 * T_ref
    pR_p = expval_pR(evolve(state, t + h).wavefunction(), q)
    pR_m = expval_pR(evolve(state, t - h).wavefunction(), q)
    dpR_dt = (pR_p - pR_m) / (2.0 * h)

    ends = np.asarray([-cfg.half, cfg.half])
    v = psi(ends)
    d1 = psi.derivative(ends, 1)
    d2 = psi.derivative(ends, 2)
    force_boundary = _bracket(np.real(d2 * np.conj(v)) - np.abs(d1) ** 2) / (2.0 * m)

    if V_prime is None:
        minus_dV = 0.0
    else:
        rho = np.abs(psi(q.x)) ** 2
        minus_dV = -float(np.real(np.dot(q.w, np.asarray(V_prime(q.x)) * rho)))

    residual2 = abs(dpR_dt - (minus_dV + force_boundary))

    dpI_analytic = _bracket(np.imag(d2 * np.conj(v))) / (2.0 * m)
    h2 = 1e-7 * T_ref
    psi_p = evolve(state, t + h2).wavefunction()
    psi_m = evolve(state, t - h2).wavefunction()
    dpI_fd = (expval_pI(psi_p) - expval_pI(psi_m)) / (2.0 * h2)
    rho_p = np.abs(psi_p(ends)) ** 2
    rho_m = np.abs(psi_m(ends)) ** 2
    drho_dt = (rho_p - rho_m) / (2.0 * h2)
    dpI_continuity = -0.5 * _bracket(drho_dt)
    continuity_residual = max(abs(dpI_analytic - dpI_fd),
                              abs(dpI_analytic - dpI_continuity),
                              abs(dpI_fd - dpI_continuity))

    return EhrenfestReport(
        t=t,
        dx_dt=dx_dt,
        pR=pR_now,
        residual1=residual1,
        dpR_dt=dpR_dt,
        force_boundary=force_boundary,
        minus_dV=minus_dV,
        residual2=residual2,
        dpI_dt=dpI_analytic,
        continuity_residual=continuity_residual,
    )
