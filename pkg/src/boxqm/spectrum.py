"""Energy spectra and eigenfunctions of H = -(1/2m) d^2/dx^2 on the box
under self-adjoint Robin boundary conditions

    gamma_+ psi(+L/2) + psi'(+L/2) = 0,
    gamma_- psi(-L/2) - psi'(-L/2) = 0,

with gamma = +inf encoding a Dirichlet wall.  Positive levels E = k^2/2m
come from transcendental quantization conditions; depending on the
gammas there are also zero modes and up to two negative levels
E = -kappa^2/2m with hyperbolic eigenfunctions.

Quantization conditions used here (u = k L/2, g = gamma L/2):

  parity-symmetric gamma_+ = gamma_- = gamma:
      even sector   k tan(k L/2) =  gamma    <->  u sin u - g cos u = 0
      odd  sector   k cot(k L/2) = -gamma    <->  u cos u + g sin u = 0
      negative      kappa tanh(kappa L/2) = -gamma   (cosh state, gamma < 0)
                    kappa coth(kappa L/2) = -gamma   (sinh state, gamma < -2/L)
      zero modes    1/sqrt(L) at gamma = 0, sqrt(12/L^3) x at gamma = -2/L

  antisymmetric gamma_+ = -gamma_- = gamma:
      positive levels k_l = pi l / L independent of gamma; one negative
      level E = -gamma^2/2m with eigenfunction ~ exp(-gamma x).

  general (gamma_+, gamma_-): 2x2 boundary-matching determinant,
      (k^2 - g+g-) sin kL - (g+ + g-) k cos kL = 0          (oscillatory)
      (kappa^2 + g+g-) sinh kL + (g+ + g-) kappa cosh kL = 0 (hyperbolic)

The sin/cos forms above are pole-free, so every root can be bracketed by
a guaranteed sign change and polished with a few Newton steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    BoxConfig,
    BracketError,
    NumericError,
    ParameterError,
    Primitive,
    Quadrature,
    WaveFunction,
    constant_state,
    linear_zero_state,
    exponential_bound_state,
)

__all__ = [
    "RobinBC",
    "EnergyLevel",
    "EnergyBasis",
    "dirichlet_spectrum",
    "neumann_spectrum",
    "mixed_spectrum",
    "symmetric_robin_spectrum",
    "antisymmetric_robin_spectrum",
    "general_robin_spectrum",
    "doubled_spectrum",
]

DIRICHLET = math.inf
_ZERO_TOL = 1e-12  # |gamma| below this (times 1/L) is treated as an exact zero mode


@dataclass(frozen=True)
class RobinBC:
    """Self-adjoint extension parameters of H; inf marks a Dirichlet wall."""

    gamma_plus: float
    gamma_minus: float

    def __post_init__(self):
        for g in (self.gamma_plus, self.gamma_minus):
            if math.isnan(g) or g == -math.inf:
                raise ParameterError(f"invalid extension parameter {g}")

    @classmethod
    def dirichlet(cls):
        return cls(DIRICHLET, DIRICHLET)

    @classmethod
    def neumann(cls):
        return cls(0.0, 0.0)

    @classmethod
    def mixed(cls):
        # Neumann on the left wall, Dirichlet on the right wall.
        return cls(DIRICHLET, 0.0)

    @classmethod
    def symmetric(cls, gamma: float):
        return cls(gamma, gamma)

    @classmethod
    def antisymmetric(cls, gamma: float):
        return cls(gamma, -gamma)

    def residuals(self, psi: WaveFunction) -> tuple[float, float]:
        """Scaled boundary-condition residuals of psi at (-L/2, +L/2)."""
        cfg = psi.config
        ends = np.asarray([-cfg.half, cfg.half])
        v = psi(ends)
        d = psi.derivative(ends, 1)
        grid = np.linspace(-cfg.half, cfg.half, 257)
        vmax = float(np.max(np.abs(psi(grid)))) or 1.0
        out = []
        for g, val, der, sign in ((self.gamma_minus, v[0], d[0], -1.0),
                                  (self.gamma_plus, v[1], d[1], +1.0)):
            if math.isinf(g):
                out.append(abs(val) / vmax)
            else:
                out.append(abs(g * val + sign * der) / ((abs(g) + 1.0 / cfg.L) * vmax))
        return out[0], out[1]


@dataclass(frozen=True)
class EnergyLevel:
    """One eigenlevel: ordinal index, energy, kind and eigenfunction.

    wavenumber holds k for positive levels, kappa for negative ones and
    0 for zero modes.  phase is the canonical unit factor applied to the
    textbook form so that the first nonvanishing value scanning from
    x = -L/2 is real positive.
    """

    index: int
    energy: float
    kind: str  # "positive" | "zero" | "negative"
    wavenumber: float
    eigenfunction: WaveFunction
    phase: complex = 1.0 + 0j


class EnergyBasis:
    """An ordered eigenbasis of H for one boundary-condition family."""

    def __init__(self, config: BoxConfig, family: str, bc: RobinBC,
                 levels: list[EnergyLevel]):
        self.config = config
        self.family = family
        self.bc = bc
        self.levels = levels
        self._cache: dict = {}

    def __len__(self):
        return len(self.levels)

    @property
    def energies(self) -> np.ndarray:
        return np.asarray([lv.energy for lv in self.levels])

    def matrix(self, q: Quadrature, order: int = 0) -> np.ndarray:
        """Eigenfunctions (or derivatives) sampled on the quadrature nodes."""
        self.config.require_same(q.config)
        key = ("mat", q.key, order)
        if key not in self._cache:
            rows = [lv.eigenfunction(q.x) if order == 0
                    else lv.eigenfunction.derivative(q.x, order)
                    for lv in self.levels]
            self._cache[key] = np.asarray(rows)
        return self._cache[key]

    def position_matrix(self, q: Quadrature) -> np.ndarray:
        """X[l,l'] = <psi_l| x |psi_l'>."""
        key = ("X", q.key)
        if key not in self._cache:
            phi = self.matrix(q, 0)
            self._cache[key] = (phi.conj() * (q.w * q.x)) @ phi.T
        return self._cache[key]

    def momentum_matrix(self, q: Quadrature) -> np.ndarray:
        """D[l,l'] = <psi_l| (-i d/dx) |psi_l'>."""
        key = ("D", q.key)
        if key not in self._cache:
            phi = self.matrix(q, 0)
            dphi = self.matrix(q, 1)
            self._cache[key] = (phi.conj() * q.w) @ (-1j * dphi).T
        return self._cache[key]

    def synthesize(self, coefficients) -> WaveFunction:
        """The state sum_l c_l psi_l(x) as a closed-form WaveFunction."""
        coefficients = np.asarray(coefficients, dtype=complex)
        if len(coefficients) != len(self.levels):
            raise ParameterError("coefficient count does not match the basis size")
        prims = []
        for c, lv in zip(coefficients, self.levels):
            if c == 0:
                continue
            for p in lv.eigenfunction.primitives:
                prims.append(Primitive(p.kind, c * p.coef, p.param))
        if not prims:
            prims = [Primitive("const", 0.0)]
        return WaveFunction.from_primitives(self.config, prims,
                                            label=f"{self.family} superposition")

    def project(self, psi: WaveFunction, q: Quadrature) -> np.ndarray:
        phi = self.matrix(q, 0)
        return phi.conj() @ (q.w * psi(q.x))


# ---------------------------------------------------------------------------
# scalar root finding: guaranteed-sign-change bisection plus Newton polish
# ---------------------------------------------------------------------------


def _bisect_newton(f, df, lo: float, hi: float, rel_tol: float = 1e-13,
                   newton_steps: int = 3) -> float:
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise BracketError(f"no sign change on [{lo}, {hi}]: f = ({flo}, {fhi})")
    a, b, fa = lo, hi, flo
    while (b - a) > rel_tol * max(abs(a), abs(b), 1e-300):
        mid = 0.5 * (a + b)
        if mid == a or mid == b:
            break
        fm = f(mid)
        if fm == 0.0:
            a = b = mid
            break
        if fa * fm < 0.0:
            b = mid
        else:
            a, fa = mid, fm
    x = 0.5 * (a + b)
    for _ in range(newton_steps):
        d = df(x)
        if d == 0.0:
            break
        step = f(x) / d
        if not (lo <= x - step <= hi):
            break
        x -= step
    return x


def _scan_roots(f, df, grid: np.ndarray) -> list[float]:
    """All roots bracketed by sign changes of f on the given grid."""
    vals = np.asarray([f(g) for g in grid])
    roots = []
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            roots.append(float(grid[i]))
        elif vals[i] * vals[i + 1] < 0.0:
            roots.append(_bisect_newton(f, df, float(grid[i]), float(grid[i + 1])))
    if vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    return roots


def _one_minus_sinc(y: float) -> float:
    """1 - sin(y)/y without cancellation for small y."""
    if abs(y) < 1e-3:
        y2 = y * y
        return y2 / 6.0 * (1.0 - y2 / 20.0 * (1.0 - y2 / 42.0))
    return 1.0 - math.sin(y) / y


def _sinhc_minus_one(y: float) -> float:
    """sinh(y)/y - 1 without cancellation for small y."""
    if abs(y) < 1e-3:
        y2 = y * y
        return y2 / 6.0 * (1.0 + y2 / 20.0 * (1.0 + y2 / 42.0))
    return math.sinh(y) / y - 1.0


# ---------------------------------------------------------------------------
# eigenfunction factories (textbook forms, then the canonical phase)
# ---------------------------------------------------------------------------


def _canonical_phase(cfg: BoxConfig, raw: WaveFunction) -> tuple[WaveFunction, complex]:
    """Scale so the first nonvanishing value scanning from -L/2 is real > 0."""
    grid = np.linspace(-cfg.half, cfg.half, 33)
    vmax = float(np.max(np.abs(raw(grid))))
    if vmax == 0.0:
        raise NumericError("zero eigenfunction candidate")
    delta = 1e-6 * cfg.L
    v = 0j
    while delta < 0.3 * cfg.L:
        v = complex(raw(np.asarray([-cfg.half + delta]))[0])
        if abs(v) > 1e-9 * vmax:
            break
        delta *= 2.0
    if abs(v) <= 1e-9 * vmax:
        v = complex(raw(np.asarray([0.0]))[0]) or 1.0
    s = abs(v) / v
    if abs(s - 1.0) < 1e-14:
        return raw, 1.0 + 0j
    return raw.scaled(s), s


def _trig_level(cfg, parity: str, k: float) -> tuple[WaveFunction, complex]:
    """Normalized cos(kx) (parity 'even') or sin(kx) ('odd') eigenfunction."""
    L = cfg.L
    if parity == "even":
        amp = math.sqrt(2.0 / L) / math.sqrt(1.0 + math.sin(k * L) / (k * L))
        raw = WaveFunction.from_primitives(cfg, [Primitive("cos", amp, k)])
    else:
        amp = math.sqrt(2.0 / L) / math.sqrt(_one_minus_sinc(k * L))
        raw = WaveFunction.from_primitives(cfg, [Primitive("sin", amp, k)])
    return _canonical_phase(cfg, raw)


def _hyperbolic_level(cfg, parity: str, kappa: float) -> tuple[WaveFunction, complex]:
    y = kappa * cfg.L
    if y > 600.0:
        raise NumericError(
            f"negative level kappa*L = {y:.3g} too boundary-localized for floats")
    if parity == "even":
        amp = math.sqrt(2.0 / cfg.L) / math.sqrt(math.sinh(y) / y + 1.0)
        raw = WaveFunction.from_primitives(cfg, [Primitive("cosh", amp, kappa)])
    else:
        amp = math.sqrt(2.0 / cfg.L) / math.sqrt(_sinhc_minus_one(y))
        raw = WaveFunction.from_primitives(cfg, [Primitive("sinh", amp, kappa)])
    return _canonical_phase(cfg, raw)


def _make_level(index, energy, kind, wavenumber, psi, phase) -> EnergyLevel:
    return EnergyLevel(index, energy, kind, wavenumber, psi, phase)


# ---------------------------------------------------------------------------
# the closed-form families
# ---------------------------------------------------------------------------


def dirichlet_spectrum(cfg: BoxConfig, l_max: int) -> EnergyBasis:
    """E_l = pi^2 (l+1)^2 / (2 m L^2); cos for even l, sin for odd l."""
    if l_max < 0:
        raise ParameterError("l_max must be >= 0")
    levels = []
    for l in range(l_max + 1):
        k = math.pi * (l + 1) / cfg.L
        e = k * k / (2.0 * cfg.m)
        amp = math.sqrt(2.0 / cfg.L)
        kind = "cos" if l % 2 == 0 else "sin"
        raw = WaveFunction.from_primitives(cfg, [Primitive(kind, amp, k)])
        psi, s = _canonical_phase(cfg, raw)
        levels.append(_make_level(l, e, "positive", k, psi, s))
    return EnergyBasis(cfg, "dirichlet", RobinBC.dirichlet(), levels)


def neumann_spectrum(cfg: BoxConfig, l_max: int) -> EnergyBasis:
    """E_l = pi^2 l^2 / (2 m L^2); the l = 0 level is the flat zero mode."""
    if l_max < 0:
        raise ParameterError("l_max must be >= 0")
    levels = [_make_level(0, 0.0, "zero", 0.0, constant_state(cfg), 1.0 + 0j)]
    for l in range(1, l_max + 1):
        k = math.pi * l / cfg.L
        e = k * k / (2.0 * cfg.m)
        amp = math.sqrt(2.0 / cfg.L)
        kind = "cos" if l % 2 == 0 else "sin"
        raw = WaveFunction.from_primitives(cfg, [Primitive(kind, amp, k)])
        psi, s = _canonical_phase(cfg, raw)
        levels.append(_make_level(l, e, "positive", k, psi, s))
    return EnergyBasis(cfg, "neumann", RobinBC.neumann(), levels)


def mixed_spectrum(cfg: BoxConfig, l_max: int) -> EnergyBasis:
    """Neumann left wall, Dirichlet right wall: E_l = pi^2 (l+1/2)^2 / (2 m L^2),
    psi_l ~ sin(pi (l+1/2)(x - L/2)/L)."""
    if l_max < 0:
        raise ParameterError("l_max must be >= 0")
    levels = []
    amp = math.sqrt(2.0 / cfg.L)
    for l in range(l_max + 1):
        q = math.pi * (l + 0.5) / cfg.L
        e = q * q / (2.0 * cfg.m)
        half_phase = q * cfg.half
        # sin(q(x - L/2)) = cos(qL/2) sin(qx) - sin(qL/2) cos(qx)
        raw = WaveFunction.from_primitives(cfg, [
            Primitive("sin", amp * math.cos(half_phase), q),
            Primitive("cos", -amp * math.sin(half_phase), q),
        ])
        psi, s = _canonical_phase(cfg, raw)
        levels.append(_make_level(l, e, "positive", q, psi, s))
    return EnergyBasis(cfg, "mixed", RobinBC.mixed(), levels)


# ---------------------------------------------------------------------------
# parity-symmetric family
# ---------------------------------------------------------------------------


def _symmetric_positive_roots(cfg: BoxConfig, gamma: float, count: int):
    """Lowest `count` positive (k, parity) pairs of the symmetric family."""
    g = gamma * cfg.L / 2.0

    def fe(u):
        return u * math.sin(u) - g * math.cos(u)

    def dfe(u):
        return math.sin(u) + u * math.cos(u) + g * math.sin(u)

    def fo(u):
        return u * math.cos(u) + g * math.sin(u)

    def dfo(u):
        return math.cos(u) - u * math.sin(u) + g * math.cos(u)

    per_sector = count // 2 + 2
    even_u = []
    if g > 0:
        even_u.append(_bisect_newton(fe, dfe, 1e-14, math.pi / 2))
    for i in range(1, per_sector + 1):
        even_u.append(_bisect_newton(fe, dfe, (i - 0.5) * math.pi, (i + 0.5) * math.pi))
    odd_u = []
    if g > -1.0:
        odd_u.append(_bisect_newton(fo, dfo, 1e-14, math.pi))
    for i in range(1, per_sector + 1):
        odd_u.append(_bisect_newton(fo, dfo, i * math.pi, (i + 1) * math.pi))
    pairs = [(2.0 * u / cfg.L, "even") for u in even_u]
    pairs += [(2.0 * u / cfg.L, "odd") for u in odd_u]
    pairs.sort()
    return pairs[:count]


def symmetric_robin_spectrum(cfg: BoxConfig, gamma: float, l_max: int) -> EnergyBasis:
    """gamma_+ = gamma_- = gamma: lowest l_max+1 levels, negative/zero/positive
    kinds merged in energy order.

    Negative-level count: none for gamma >= 0, one (cosh type) for
    -2/L <= gamma < 0, two for gamma < -2/L; the thresholds gamma = 0 and
    gamma = -2/L carry exact zero modes instead.
    """
    if not math.isfinite(gamma):
        raise ParameterError("symmetric family needs a finite gamma")
    if l_max < 0:
        raise ParameterError("l_max must be >= 0")
    L = cfg.L
    if abs(gamma) < _ZERO_TOL / L:
        basis = neumann_spectrum(cfg, l_max)
        return EnergyBasis(cfg, "symmetric", RobinBC.symmetric(0.0), basis.levels)

    entries = []  # (energy, kind, wavenumber, psi, phase)

    if gamma < 0.0:
        # cosh-type bound state: kappa tanh(kappa L/2) = -gamma, always present.
        def ft(k):
            return k * math.tanh(k * L / 2.0) + gamma

        def dft(k):
            t = math.tanh(k * L / 2.0)
            return t + k * (L / 2.0) * (1.0 - t * t)

        hi = abs(gamma) + 10.0 / L
        kappa = _bisect_newton(ft, dft, 1e-14 / L, hi)
        psi, s = _hyperbolic_level(cfg, "even", kappa)
        entries.append((-kappa * kappa / (2.0 * cfg.m), "negative", kappa, psi, s))

    if abs(gamma + 2.0 / L) < _ZERO_TOL / L:
        entries.append((0.0, "zero", 0.0, linear_zero_state(cfg), 1.0 + 0j))
    elif gamma < -2.0 / L:
        # sinh-type bound state: kappa coth(kappa L/2) = -gamma
        def fc(k):
            return k / math.tanh(k * L / 2.0) + gamma

        def dfc(k):
            t = math.tanh(k * L / 2.0)
            return 1.0 / t - k * (L / 2.0) * (1.0 - t * t) / (t * t)

        hi = abs(gamma) + 10.0 / L
        kappa = _bisect_newton(fc, dfc, 1e-12 / L, hi)
        psi, s = _hyperbolic_level(cfg, "odd", kappa)
        entries.append((-kappa * kappa / (2.0 * cfg.m), "negative", kappa, psi, s))

    needed = l_max + 1 - len(entries)
    for k, parity in _symmetric_positive_roots(cfg, gamma, max(needed, 0)):
        psi, s = _trig_level(cfg, parity, k)
        entries.append((k * k / (2.0 * cfg.m), "positive", k, psi, s))

    entries.sort(key=lambda e: e[0])
    levels = [_make_level(i, *e) for i, e in enumerate(entries[:l_max + 1])]
    return EnergyBasis(cfg, "symmetric", RobinBC.symmetric(gamma), levels)


# ---------------------------------------------------------------------------
# antisymmetric family gamma_+ = -gamma_- = gamma
# ---------------------------------------------------------------------------


def antisymmetric_robin_spectrum(cfg: BoxConfig, gamma: float, l_max: int) -> EnergyBasis:
    """gamma_+ = -gamma_- = gamma: positive levels k_l = pi l/L for every gamma,
    plus the unique exponential bound state with E = -gamma^2/2m (gamma != 0)."""
    if not math.isfinite(gamma):
        raise ParameterError("antisymmetric family needs a finite gamma")
    if l_max < 0:
        raise ParameterError("l_max must be >= 0")
    L = cfg.L
    if abs(gamma) < _ZERO_TOL / L:
        basis = neumann_spectrum(cfg, l_max)
        return EnergyBasis(cfg, "antisymmetric", RobinBC.antisymmetric(0.0), basis.levels)

    levels = []
    psi0 = exponential_bound_state(cfg, gamma)
    levels.append(_make_level(0, -gamma * gamma / (2.0 * cfg.m), "negative",
                              abs(gamma), psi0, 1.0 + 0j))
    for l in range(1, l_max + 1):
        k = math.pi * l / L
        norm = math.sqrt(2.0 * L * (gamma * gamma + k * k))
        # [(g - ik) e^{ikx} - (-1)^l (g + ik) e^{-ikx}] / norm expands to a
        # real multiple of (g sin - k cos) for even l, (g cos + k sin) for odd.
        if l % 2 == 0:
            prims = [Primitive("sin", 2j * gamma / norm, k),
                     Primitive("cos", -2j * k / norm, k)]
        else:
            prims = [Primitive("cos", 2.0 * gamma / norm, k),
                     Primitive("sin", 2.0 * k / norm, k)]
        raw = WaveFunction.from_primitives(cfg, prims)
        psi, s = _canonical_phase(cfg, raw)
        levels.append(_make_level(l, k * k / (2.0 * cfg.m), "positive", k, psi, s))
    return EnergyBasis(cfg, "antisymmetric", RobinBC.antisymmetric(gamma), levels)


# ---------------------------------------------------------------------------
# general (gamma_+, gamma_-) via the boundary-matching determinant
# ---------------------------------------------------------------------------


def _trig_rows(gp, gm, k, L):
    c, s = math.cos(k * L / 2.0), math.sin(k * L / 2.0)
    row_p = (c, s) if math.isinf(gp) else (gp * c - k * s, gp * s + k * c)
    row_m = (c, -s) if math.isinf(gm) else (gm * c - k * s, -(gm * s + k * c))
    return row_p, row_m


def _hyp_rows(gp, gm, kappa, L):
    # rows divided by cosh(kappa L / 2) to stay bounded
    t = math.tanh(kappa * L / 2.0)
    row_p = (1.0, t) if math.isinf(gp) else (gp + kappa * t, gp * t + kappa)
    row_m = (1.0, -t) if math.isinf(gm) else (gm + kappa * t, -(gm * t + kappa))
    return row_p, row_m


def _det(rows):
    (a, b), (c, d) = rows
    return a * d - b * c


def _nullvector(rows):
    r = max(rows, key=lambda row: abs(row[0]) + abs(row[1]))
    return (r[1], -r[0])


def _zero_mode_discriminant(gp, gm, L):
    if math.isinf(gp) and math.isinf(gm):
        return math.inf
    if math.isinf(gp):
        return gm + 1.0 / L
    if math.isinf(gm):
        return gp + 1.0 / L
    return gp * gm * L + gp + gm


def general_robin_spectrum(cfg: BoxConfig, gamma_plus: float, gamma_minus: float,
                           l_max: int) -> EnergyBasis:
    """Arbitrary Robin pair; reduces to the closed-form families when the
    parameters match one, otherwise runs the determinant root search."""
    if l_max < 0:
        raise ParameterError("l_max must be >= 0")
    gp, gm, L = gamma_plus, gamma_minus, cfg.L
    for g in (gp, gm):
        if math.isnan(g) or g == -math.inf:
            raise ParameterError(f"invalid extension parameter {g}")

    if math.isinf(gp) and math.isinf(gm):
        basis = dirichlet_spectrum(cfg, l_max)
    elif math.isinf(gp) and gm == 0.0:
        basis = mixed_spectrum(cfg, l_max)
    elif math.isfinite(gp) and gp == gm:
        basis = symmetric_robin_spectrum(cfg, gp, l_max)
    elif math.isfinite(gp) and math.isfinite(gm) and gp == -gm:
        basis = antisymmetric_robin_spectrum(cfg, gp, l_max)
    else:
        return _general_robin_search(cfg, gp, gm, l_max)
    return EnergyBasis(cfg, "general", RobinBC(gp, gm), basis.levels)


def _general_robin_search(cfg, gp, gm, l_max):
    L = cfg.L
    entries = []

    disc = _zero_mode_discriminant(gp, gm, L)
    if math.isinf(gp) or math.isinf(gm):
        finite = gm if math.isinf(gp) else gp
        scale = abs(finite) + 1.0 / L
    else:
        scale = (abs(gp) + 1.0 / L) * (abs(gm) + 1.0 / L) * L
    has_zero = math.isfinite(disc) and abs(disc) < _ZERO_TOL * scale
    if has_zero:
        rows = ((1.0, L / 2.0) if math.isinf(gp) else (gp, gp * L / 2.0 + 1.0),
                (1.0, -L / 2.0) if math.isinf(gm) else (gm, -(gm * L / 2.0 + 1.0)))
        a, b = _nullvector(rows)
        raw = WaveFunction.from_primitives(cfg, [Primitive("const", a),
                                                 Primitive("poly1", b)])
        q_int = Quadrature(cfg)
        psi, s = _canonical_phase(cfg, raw.normalized(q_int))
        entries.append((0.0, "zero", 0.0, psi, s))

    for kappa in _general_negative_roots(cfg, gp, gm, has_zero):
        psi, s = _general_eigenfunction(cfg, gp, gm, kappa, hyperbolic=True)
        entries.append((-kappa * kappa / (2.0 * cfg.m), "negative", kappa, psi, s))

    needed = l_max + 1 - len(entries)

    def fpos(k):
        return _det(_trig_rows(gp, gm, k, L))

    def dfpos(k):
        h = 1e-7 * max(k, 1.0 / L)
        return (fpos(k + h) - fpos(k - h)) / (2.0 * h)

    n_units = max(needed, 1) + 4
    grid = np.linspace(1e-9 / L, n_units * math.pi / L, 16 * n_units + 1)
    roots = [k for k in _scan_roots(fpos, dfpos, grid) if k > 1e-6 / L]
    if len(roots) < needed:
        raise BracketError(
            f"found {len(roots)} positive levels, needed {needed} "
            f"(gamma_+={gp}, gamma_-={gm}); widen the search window")
    for k in roots[:max(needed, 0)]:
        psi, s = _general_eigenfunction(cfg, gp, gm, k, hyperbolic=False)
        entries.append((k * k / (2.0 * cfg.m), "positive", k, psi, s))

    entries.sort(key=lambda e: e[0])
    levels = [_make_level(i, *e) for i, e in enumerate(entries[:l_max + 1])]
    return EnergyBasis(cfg, "general", RobinBC(gp, gm), levels)


def _negative_phi(gp, gm, L):
    """The hyperbolic determinant times the positive factor 2 e^{-kappa L}:

        phi(kappa) = (kappa+g+)(kappa+g-) - e^{-2 kappa L} (kappa-g+)(kappa-g-),

    (one factor per finite wall).  Bounded for every kappa, exactly a
    quadratic beyond kappa L ~ 35, and phi(0) = 0 is the trivial root.
    """
    if math.isinf(gp) and math.isinf(gm):
        return None
    if math.isinf(gp) or math.isinf(gm):
        g = gm if math.isinf(gp) else gp
        return lambda k: (k + g) + math.exp(-2.0 * k * L) * (k - g)
    return lambda k: ((k + gp) * (k + gm)
                      - math.exp(-2.0 * k * L) * (k - gp) * (k - gm))


def _expected_negative_count(gp, gm, L, has_zero):
    """Bound-state count from the sign analysis of phi; at most 2 because
    the Robin terms perturb the Dirichlet form by rank two."""
    if math.isinf(gp) and math.isinf(gm):
        return 0
    if math.isinf(gp) or math.isinf(gm):
        g = gm if math.isinf(gp) else gp
        if has_zero:
            return 0
        return 1 if g < -1.0 / L else 0
    total = gp + gm
    if has_zero:
        # at the threshold the marginal state is the zero mode itself
        return 1 if total < 0.0 else 0
    disc = gp * gm * L + gp + gm
    if disc < 0.0:
        return 1
    return 2 if total < 0.0 else 0


def _general_negative_roots(cfg, gp, gm, has_zero):
    """All kappa > 0 with E = -kappa^2/2m in the spectrum, found from
    guaranteed sign-change brackets; raises rather than dropping a level.

    Two nearly equal strongly negative gammas give a root pair split only
    by ~kappa e^{-kappa L}, far below any fixed grid, so the brackets are
    built around the dip at kappa_mid = -(g+ + g-)/2 where phi < 0
    whenever two roots exist.
    """
    L = cfg.L
    phi = _negative_phi(gp, gm, L)
    expected = _expected_negative_count(gp, gm, L, has_zero)
    if phi is None or (expected == 0 and has_zero):
        return []
    kmax = max((abs(g) for g in (gp, gm) if math.isfinite(g)), default=0.0) + 10.0 / L
    lo = 1e-9 / L

    def dphi(k):
        h = 1e-7 * max(k, 1.0 / L)
        return (phi(k + h) - phi(k - h)) / (2.0 * h)

    grid = np.concatenate([np.linspace(lo, kmax, 1025),
                           np.geomspace(lo, kmax, 257)])
    grid = np.unique(grid)
    roots = _scan_roots(phi, dphi, grid)

    if len(roots) < expected and math.isfinite(gp) and math.isfinite(gm):
        k_mid = -(gp + gm) / 2.0
        if k_mid > 0.0 and phi(k_mid) < 0.0:
            for a, b in ((lo, k_mid), (k_mid, kmax)):
                try:
                    roots.append(_bisect_newton(phi, dphi, a, b))
                except BracketError:
                    pass

    deduped: list[float] = []
    for k in sorted(roots):
        if k < 1e-8 / L:
            continue
        if deduped and abs(k - deduped[-1]) <= 1e-9 * max(abs(k), 1.0 / L):
            continue
        deduped.append(k)

    if len(deduped) < expected:
        raise NumericError(
            f"found {len(deduped)} of {expected} negative levels for "
            f"gamma_+={gp}, gamma_-={gm}: the bound-state pair is degenerate "
            f"beyond float resolution (splitting ~ kappa e^(-kappa L)); "
            f"use the symmetric family solver for deep symmetric wells")
    # refined sign changes of a smooth function are genuine roots; never drop
    return deduped


def _general_eigenfunction(cfg, gp, gm, kq, hyperbolic):
    if hyperbolic:
        if kq * cfg.L > 600.0:
            raise NumericError("negative level too boundary-localized for floats")
        rows = _hyp_rows(gp, gm, kq, cfg.L)
        a, b = _nullvector(rows)
        prims = [Primitive("cosh", a, kq), Primitive("sinh", b, kq)]
    else:
        rows = _trig_rows(gp, gm, kq, cfg.L)
        a, b = _nullvector(rows)
        prims = [Primitive("cos", a, kq), Primitive("sin", b, kq)]
    raw = WaveFunction.from_primitives(cfg, prims)
    q_int = Quadrature(cfg)
    return _canonical_phase(cfg, raw.normalized(q_int))


# ---------------------------------------------------------------------------
# spectrum doubling check for H(mu) on the doubled Hilbert space
# ---------------------------------------------------------------------------


def doubled_spectrum(basis: EnergyBasis, mu: float) -> list[tuple[float, str]]:
    """Levels of H(mu): each E_l in the plus sector and E_l + mu in the
    minus sector, merged in energy order (plus first on ties)."""
    if mu < 0:
        raise ParameterError("mu must be >= 0")
    out = [(lv.energy, "plus") for lv in basis.levels]
    out += [(lv.energy + mu, "minus") for lv in basis.levels]
    out.sort(key=lambda t: (t[0], 0 if t[1] == "plus" else 1))
    return out
