"""The self-adjoint momentum on the doubled Hilbert space L2 x C^2.

p_R = -i sigma_1 d/dx becomes self-adjoint under the local boundary
conditions Psi_o(+-L/2) = lambda_+- Psi_e(+-L/2) with purely imaginary
lambda_+-.  Its spectrum is the shifted ladder

    k_n = (pi n + theta) / L,   exp(2 i theta) = (1+l+)(1-l-) / ((1-l+)(1+l-)),

with normalized eigenfunctions

    phi_k = (e^{ikx} + sigma_k e^{-ikx}, e^{ikx} - sigma_k e^{-ikx}) / (2 sqrt L),
    sigma_k = e^{ikL} (1 - lambda_+) / (1 + lambda_+).

A physical state psi embeds as (psi, psi)/sqrt2; its measurement
amplitudes are c_n = (1/sqrt(2L)) int e^{-i k_n x} psi(x) dx, so the
probabilities are the squared Fourier transform on the momentum ladder.
The companion boundary operator p_I has expectation
(|psi(-L/2)|^2 - |psi(L/2)|^2)/2, and <-i d/dx> = <p_R> + i <p_I>.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

from .core import (
    BoxConfig,
    ParameterError,
    Quadrature,
    WaveFunction,
)

__all__ = [
    "MomentumExtension",
    "MomentumEigenstate",
    "MomentumDistribution",
    "theta_from_lambdas",
    "momentum_eigenfunction",
    "momentum_amplitudes",
    "momentum_distribution",
    "expval_pR",
    "expval_pI",
    "expval_minus_i_ddx",
    "expval_pR_squared",
    "pR_squared_from_distribution",
    "momentum_identity_residual",
    "DEFAULT_N_RANGE",
]

DEFAULT_N_RANGE = (-512, 512)


def theta_from_lambdas(lambda_plus: complex, lambda_minus: complex) -> float:
    """Phase theta in [0, pi) solving exp(2 i theta) = (1+l+)(1-l-)/((1-l+)(1+l-))."""
    for lam in (lambda_plus, lambda_minus):
        if abs(lam.real) > 1e-14 * (1.0 + abs(lam)):
            raise ParameterError(f"extension parameter {lam} is not purely imaginary")
    num = (1.0 + lambda_plus) * (1.0 - lambda_minus)
    den = (1.0 - lambda_plus) * (1.0 + lambda_minus)
    if num == 0 or den == 0:
        raise ParameterError("degenerate extension parameters (factor vanished)")
    ratio = num / den
    theta = 0.5 * cmath.phase(ratio)
    if theta < 0.0:
        theta += math.pi
    if theta >= math.pi:
        theta -= math.pi
    return theta


@dataclass(frozen=True)
class MomentumExtension:
    """Momentum extension parameters lambda_+- = i b_+- and the phase theta."""

    b_plus: float
    b_minus: float
    theta: float

    @classmethod
    def from_lambdas(cls, lambda_plus: complex, lambda_minus: complex) -> "MomentumExtension":
        theta = theta_from_lambdas(complex(lambda_plus), complex(lambda_minus))
        return cls(float(complex(lambda_plus).imag), float(complex(lambda_minus).imag), theta)

    @classmethod
    def from_theta(cls, theta: float) -> "MomentumExtension":
        """The parity-balanced pair lambda_+- = +-i tan(theta/2) realizing theta."""
        theta = float(theta) % math.pi
        t = math.tan(0.5 * theta)
        return cls.from_lambdas(1j * t, -1j * t)

    @property
    def lambda_plus(self) -> complex:
        return 1j * self.b_plus

    @property
    def lambda_minus(self) -> complex:
        return 1j * self.b_minus

    def wavenumbers(self, cfg: BoxConfig, n) -> np.ndarray:
        return (math.pi * np.asarray(n, dtype=float) + self.theta) / cfg.L

    def sigma(self, cfg: BoxConfig, k) -> np.ndarray:
        k = np.asarray(k, dtype=float)
        return np.exp(1j * k * cfg.L) * (1.0 - self.lambda_plus) / (1.0 + self.lambda_plus)


PARITY_SYMMETRIC = MomentumExtension.from_lambdas(0j, 0j)


@dataclass(frozen=True)
class MomentumEigenstate:
    """One quantized momentum eigenstate on the doubled space."""

    n: int
    k: float
    sigma: complex
    config: BoxConfig

    def components(self, x) -> tuple[np.ndarray, np.ndarray]:
        """(even, odd) component values, unit norm in the doubled space."""
        x = np.asarray(x, dtype=float)
        a = np.exp(1j * self.k * x)
        b = self.sigma * np.exp(-1j * self.k * x)
        pref = 1.0 / (2.0 * math.sqrt(self.config.L))
        return pref * (a + b), pref * (a - b)

    def boundary_residual(self, ext: MomentumExtension) -> float:
        """Max violation of phi_o(+-L/2) = lambda_+- phi_e(+-L/2)."""
        h = self.config.half
        res = 0.0
        for xs, lam in ((h, ext.lambda_plus), (-h, ext.lambda_minus)):
            e, o = self.components(np.asarray([xs]))
            res = max(res, abs(complex(o[0]) - lam * complex(e[0])))
        return res * math.sqrt(self.config.L)


def momentum_eigenfunction(cfg: BoxConfig, ext: MomentumExtension, k: float) -> MomentumEigenstate:
    """Eigenstate at k, which must sit on the quantized ladder k_n = (pi n + theta)/L."""
    n_real = (k * cfg.L - ext.theta) / math.pi
    n = round(n_real)
    if abs(n_real - n) > 1e-9:
        raise ParameterError(f"k = {k} is not on the quantized momentum grid")
    kn = float(ext.wavenumbers(cfg, n))
    return MomentumEigenstate(n=int(n), k=kn, sigma=complex(ext.sigma(cfg, kn)), config=cfg)


# ---------------------------------------------------------------------------
# measurement amplitudes and distributions
# ---------------------------------------------------------------------------


def momentum_amplitudes(psi: WaveFunction, ext: MomentumExtension,
                        n_range: tuple[int, int] = DEFAULT_N_RANGE,
                        q: Quadrature | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Projections c_n = <phi_{k_n}|psi> for n in the inclusive range.

    States carried as primitive sums use the closed-form plane-wave
    overlaps (exact at any |n|); other closures fall back to quadrature,
    which is reliable while |k_n| stays well below the node density.
    """
    cfg = psi.config
    if n_range[0] > n_range[1]:
        raise ParameterError(f"empty ladder window {n_range}")
    n = np.arange(n_range[0], n_range[1] + 1)
    k = ext.wavenumbers(cfg, n)
    pref = 1.0 / math.sqrt(2.0 * cfg.L)
    if psi.primitives is not None:
        total = np.zeros(len(k), dtype=complex)
        for p in psi.primitives:
            total += p.plane_wave_overlap(k, cfg.L)
        return n, pref * total
    if q is None:
        q = Quadrature(cfg)
    cfg.require_same(q.config)
    weighted = q.w * psi(q.x)
    phases = np.exp(-1j * np.outer(k, q.x))
    return n, pref * (phases @ weighted)


@dataclass(frozen=True)
class _TailFit:
    sign: int       # +1 or -1 side of the ladder
    parity: int     # |n| parity, 0 or 1
    exponent: float
    amplitude: float
    n_next: int     # first |n| beyond the tabulated range on this branch

    def mass(self, power: int, theta: float, L: float) -> float:
        """sum_{|n| > range} k_n^power * C |n|^{-s} for power in {0, 1, 2}."""
        s, c = self.exponent, self.amplitude
        if power == 0:
            return c * _parity_zeta(s, self.n_next)
        base = math.pi / L
        shift = self.theta_shift(theta, L)
        if power == 1:
            m1 = c * _parity_zeta(s - 1.0, self.n_next)
            m0 = c * _parity_zeta(s, self.n_next)
            return self.sign * base * m1 + shift * m0
        m2 = c * _parity_zeta(s - 2.0, self.n_next)
        m1 = c * _parity_zeta(s - 1.0, self.n_next)
        m0 = c * _parity_zeta(s, self.n_next)
        return base * base * m2 + 2.0 * self.sign * base * shift * m1 + shift * shift * m0

    def theta_shift(self, theta: float, L: float) -> float:
        return theta / L


def _parity_zeta(s: float, n0: int) -> float:
    """sum_{j>=0} (n0 + 2j)^(-s); infinite when s <= 1."""
    if s <= 1.0:
        return math.inf
    return float(2.0 ** (-s) * zeta(s, n0 / 2.0))


@dataclass(frozen=True)
class MomentumDistribution:
    """P(n) = |c_n|^2 on a finite ladder window plus power-law tail fits."""

    n: np.ndarray
    k: np.ndarray
    p: np.ndarray
    theta: float
    L: float
    tails: tuple[_TailFit, ...]

    @property
    def tail_exponent(self) -> float:
        return min((t.exponent for t in self.tails), default=math.inf)

    @property
    def tail_mass(self) -> float:
        return sum((t.mass(0, self.theta, self.L) for t in self.tails), 0.0)

    def total_mass(self, with_tail: bool = True) -> float:
        base = float(self.p.sum())
        return base + self.tail_mass if with_tail else base

    def moment(self, power: int, with_tail: bool = True) -> float:
        """Tail-corrected sum_n k_n^power P(n); nan when some tail branch
        decays too slowly (exponent <= power + 1) for absolute convergence."""
        base = float(np.dot(self.k**power, self.p))
        if not with_tail:
            return base
        if power > 0 and any(t.exponent <= power + 1.0 for t in self.tails):
            return math.nan
        return base + sum((t.mass(power, self.theta, self.L) for t in self.tails), 0.0)

    def most_probable(self) -> int:
        return int(self.n[int(np.argmax(self.p))])


def momentum_distribution(psi: WaveFunction, ext: MomentumExtension,
                          n_range: tuple[int, int] = DEFAULT_N_RANGE,
                          q: Quadrature | None = None) -> MomentumDistribution:
    n, c = momentum_amplitudes(psi, ext, n_range, q)
    k = ext.wavenumbers(psi.config, n)
    p = np.abs(c) ** 2
    tails = _fit_tails(n, p)
    return MomentumDistribution(n=n, k=k, p=p, theta=ext.theta, L=psi.config.L,
                                tails=tuple(tails))


def _fit_tails(n: np.ndarray, p: np.ndarray) -> list[_TailFit]:
    """Fit P ~ C |n|^-s over the last decade, per ladder side and |n| parity.

    Separate parities because the measurement formulas give genuinely
    different powers on even and odd n (e.g. n^-2 vs n^-4 for the linear
    zero mode); branches with no support are dropped.
    """
    n_hi = int(np.max(np.abs(n)))
    lo = max(8, n_hi // 10)
    if n_hi <= lo + 4:
        return []
    peak = float(np.max(p)) if len(p) else 0.0
    fits = []
    for sign in (+1, -1):
        for parity in (0, 1):
            mask = (np.sign(n) == sign) & (np.abs(n) >= lo) & (np.abs(n) % 2 == parity)
            nn = np.abs(n[mask]).astype(float)
            pp = p[mask]
            # amplitudes carry ~1e-16 relative rounding, so probabilities
            # below ~1e-24 of the peak are numerically zero, not a tail
            keep = pp > max(peak, 1e-300) * 1e-24
            nn, pp = nn[keep], pp[keep]
            if len(nn) < 8:
                continue
            slope, intercept = np.polyfit(np.log(nn), np.log(pp), 1)
            s = -float(slope)
            c = float(math.exp(intercept))
            n_next = n_hi + 1 if (n_hi + 1) % 2 == parity else n_hi + 2
            fits.append(_TailFit(sign=sign, parity=parity, exponent=s,
                                 amplitude=c, n_next=n_next))
    return fits


# ---------------------------------------------------------------------------
# expectation values on physical states
# ---------------------------------------------------------------------------


def expval_minus_i_ddx(psi: WaveFunction, q: Quadrature) -> complex:
    """<-i d/dx> by a single quadrature."""
    v = psi(q.x)
    d = psi.derivative(q.x, 1)
    return complex(np.dot(q.w, np.conj(v) * (-1j * d)))


def expval_pR(psi: WaveFunction, q: Quadrature) -> float:
    """<p_R> = Re <-i d/dx>; independent of the extension parameters."""
    return float(expval_minus_i_ddx(psi, q).real)


def expval_pI(psi: WaveFunction) -> float:
    """<p_I> = (|psi(-L/2)|^2 - |psi(L/2)|^2) / 2."""
    h = psi.config.half
    v = psi(np.asarray([-h, h]))
    return 0.5 * float(abs(v[0]) ** 2 - abs(v[1]) ** 2)


def momentum_identity_residual(psi: WaveFunction, q: Quadrature) -> float:
    """| <-i d/dx> - (<p_R> + i <p_I>) | on a physical state."""
    lhs = expval_minus_i_ddx(psi, q)
    return abs(lhs - (expval_pR(psi, q) + 1j * expval_pI(psi)))


def expval_pR_squared(psi: WaveFunction, q: Quadrature) -> float:
    """<p_R^2>; infinite unless the state satisfies Dirichlet conditions.

    Any nonvanishing endpoint density puts mass ~ 1/n^2 on arbitrarily
    large momenta, so the second moment diverges; that is the analytic
    criterion used here.  In the finite case the ladder sum equals
    int |psi'|^2 dx, evaluated by quadrature.
    """
    h = psi.config.half
    v = psi(np.asarray([-h, h]))
    if float(np.max(np.abs(v) ** 2)) > 1e-10 / psi.config.L:
        return math.inf
    d = psi.derivative(q.x, 1)
    return float(np.real(np.dot(q.w, np.abs(d) ** 2)))


def pR_squared_from_distribution(dist: MomentumDistribution) -> float:
    """Tail-corrected ladder sum sum_n k_n^2 P(n); inf when a tail branch
    decays too slowly (exponent <= 3) for a finite second moment."""
    for t in dist.tails:
        if t.exponent <= 3.0:
            return math.inf
    return dist.moment(2, with_tail=True)
