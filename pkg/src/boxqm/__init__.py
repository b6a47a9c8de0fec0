"""Particle in a box with Robin walls and a self-adjoint momentum.

Spectra for every self-adjoint boundary family, quantized momentum
measurements on the doubled Hilbert space, bouncing wave packets with
revivals, Ehrenfest checks with the boundary force, and the kinetic
form of the generalized uncertainty relation.
"""

from .core import (
    BoxConfig,
    Observables,
    Quadrature,
    WaveFunction,
    constant_state,
    derivative,
    exponential_bound_state,
    inner_product,
    linear_zero_state,
    observables_of,
)
from .dynamics import (
    EhrenfestReport,
    EvolvingState,
    GaussianPacketSpec,
    LineGaussian,
    ehrenfest_report,
    evolve,
    gaussian_coefficients,
    revival_fidelity,
    revival_period,
    wrap,
)
from .momentum import (
    MomentumDistribution,
    MomentumEigenstate,
    MomentumExtension,
    expval_pI,
    expval_pR,
    expval_pR_squared,
    momentum_amplitudes,
    momentum_distribution,
    momentum_eigenfunction,
    momentum_identity_residual,
    theta_from_lambdas,
)
from .spectrum import (
    EnergyBasis,
    EnergyLevel,
    RobinBC,
    antisymmetric_robin_spectrum,
    dirichlet_spectrum,
    doubled_spectrum,
    general_robin_spectrum,
    mixed_spectrum,
    neumann_spectrum,
    symmetric_robin_spectrum,
)
from .uncertainty import (
    UncertaintyReport,
    commutator_expectation_x_pR,
    generalized_uncertainty,
    kinetic_inequality_report,
    saturating_state,
)

__version__ = "0.1.0"
