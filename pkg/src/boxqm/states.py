"""Named states and the random-superposition generator used by sweeps
and by the CLI state mini-language:

    dirichlet:<l>   Dirichlet eigenstate with wavenumber pi l / L (l >= 1)
    neumann:<l>     Neumann eigenstate with wavenumber pi l / L (l = 0 flat)
    mixed:<l>       mixed-wall eigenstate with wavenumber pi (l + 1/2) / L
    linear-zero     sqrt(12/L^3) x, the zero mode at symmetric gamma = -2/L
    constant        1/sqrt(L)
    exp:<gamma>     the exponential bound state of the antisymmetric family
    gaussian:<a>,<k_c>      wrapped Gaussian packet (Dirichlet walls)
    random:<modes>,<seed>   random superposition in the active family
"""

from __future__ import annotations

import math

import numpy as np

from .core import (
    BoxConfig,
    ParameterError,
    Quadrature,
    WaveFunction,
    constant_state,
    exponential_bound_state,
    linear_zero_state,
)
from .dynamics import EvolvingState, GaussianPacketSpec, gaussian_coefficients
from .spectrum import (
    EnergyBasis,
    antisymmetric_robin_spectrum,
    dirichlet_spectrum,
    general_robin_spectrum,
    mixed_spectrum,
    neumann_spectrum,
    symmetric_robin_spectrum,
)

__all__ = [
    "basis_for_family",
    "random_coefficients",
    "random_state",
    "parse_state",
    "state_bc_hint",
]


def basis_for_family(cfg: BoxConfig, family: str, l_max: int,
                     gamma: float | None = None,
                     gamma_plus: float | None = None,
                     gamma_minus: float | None = None) -> EnergyBasis:
    if family == "dirichlet":
        return dirichlet_spectrum(cfg, l_max)
    if family == "neumann":
        return neumann_spectrum(cfg, l_max)
    if family == "mixed":
        return mixed_spectrum(cfg, l_max)
    if family == "symmetric":
        if gamma is None:
            raise ParameterError("symmetric family needs --gamma")
        return symmetric_robin_spectrum(cfg, gamma, l_max)
    if family == "antisymmetric":
        if gamma is None:
            raise ParameterError("antisymmetric family needs --gamma")
        return antisymmetric_robin_spectrum(cfg, gamma, l_max)
    if family == "general":
        if gamma_plus is None or gamma_minus is None:
            raise ParameterError("general family needs --gamma-plus and --gamma-minus")
        return general_robin_spectrum(cfg, gamma_plus, gamma_minus, l_max)
    raise ParameterError(f"unknown boundary family {family!r}")


def random_coefficients(modes: int, seed: int) -> np.ndarray:
    """|c_l| proportional to 0.6^l with uniform random phases, normalized.

    The geometric decay keeps the state smooth enough to satisfy its
    family's boundary conditions to ~1e-6 residual while still mixing
    every mode.
    """
    if modes < 1:
        raise ParameterError("need at least one mode")
    rng = np.random.default_rng(seed)
    mags = 0.6 ** np.arange(modes)
    phases = np.exp(2j * math.pi * rng.random(modes))
    c = mags * phases
    return c / np.linalg.norm(c)


def random_state(basis: EnergyBasis, modes: int, seed: int) -> EvolvingState:
    if modes > len(basis):
        raise ParameterError(f"basis holds {len(basis)} levels, requested {modes} modes")
    c = np.zeros(len(basis), dtype=complex)
    c[:modes] = random_coefficients(modes, seed)
    return EvolvingState.from_coefficients(basis, c)


def state_bc_hint(token: str) -> str | None:
    """The boundary family a named state naturally belongs to, if any."""
    head = token.split(":", 1)[0]
    return {
        "dirichlet": "dirichlet",
        "neumann": "neumann",
        "mixed": "mixed",
        "constant": "neumann",
        "gaussian": "dirichlet",
    }.get(head)


def parse_state(token: str, cfg: BoxConfig, q: Quadrature,
                basis: EnergyBasis | None = None) -> WaveFunction:
    """Build the wavefunction a mini-language token names.

    `random:` draws coefficients in the supplied basis (required);
    eigenstate tokens index levels by wavenumber as listed above.
    """
    head, _, arg = token.partition(":")
    if head == "linear-zero":
        return linear_zero_state(cfg)
    if head == "constant":
        return constant_state(cfg)
    if head == "exp":
        return exponential_bound_state(cfg, _parse_float(arg, "exp:<gamma>"))
    if head == "dirichlet":
        l = _parse_int(arg, "dirichlet:<l>")
        if l < 1:
            raise ParameterError("dirichlet:<l> needs l >= 1 (wavenumber pi l / L)")
        return dirichlet_spectrum(cfg, l - 1).levels[l - 1].eigenfunction
    if head == "neumann":
        l = _parse_int(arg, "neumann:<l>")
        if l < 0:
            raise ParameterError("neumann:<l> needs l >= 0")
        return neumann_spectrum(cfg, l).levels[l].eigenfunction
    if head == "mixed":
        l = _parse_int(arg, "mixed:<l>")
        if l < 0:
            raise ParameterError("mixed:<l> needs l >= 0")
        return mixed_spectrum(cfg, l).levels[l].eigenfunction
    if head == "gaussian":
        parts = arg.split(",")
        if len(parts) != 2:
            raise ParameterError("gaussian:<a>,<k_c>")
        spec = GaussianPacketSpec(a=_parse_float(parts[0], "a"),
                                  k_c=_parse_float(parts[1], "k_c"))
        pbasis = dirichlet_spectrum(cfg, spec.mode_cutoff(cfg) + 2)
        return gaussian_coefficients(spec, "dirichlet", pbasis).wavefunction()
    if head == "random":
        parts = arg.split(",")
        if len(parts) != 2:
            raise ParameterError("random:<modes>,<seed>")
        if basis is None:
            raise ParameterError("random:<modes>,<seed> needs a boundary family")
        st = random_state(basis, _parse_int(parts[0], "modes"), _parse_int(parts[1], "seed"))
        return st.wavefunction()
    raise ParameterError(f"unknown state token {token!r}")


def _parse_int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ParameterError(f"bad integer in {what}: {text!r}") from exc


def _parse_float(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ParameterError(f"bad number in {what}: {text!r}") from exc
