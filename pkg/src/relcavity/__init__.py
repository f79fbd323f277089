"""Quantum fields in a rigid cavity: inertial and accelerated mode sets,
Bogoliubov transformations between them, trajectories built from constant
acceleration segments, and Hilbert-Schmidt unitarity diagnostics."""

__version__ = "0.1.0"

from .bogoliubov import (
    BogoliubovSet,
    apply_maxwell_sign,
    check_identities,
    coefficients_perturbative,
    coefficients_quadrature,
)
from .modes import (
    CavityConfig,
    FieldPoint,
    ModeSpectrum,
    evaluate_mode,
    maxwell_reduction,
    minkowski_spectrum,
    rindler_spectrum,
)
from .specfun import AccuracyLossError, bessel_i, bessel_i_deriv, loggamma
from .trajectory import AccelerationProfile, EvolutionResult, evolve_fourier, evolve_segments
from .unitarity import appendix_constants, f_sum, g_sum, smooth_profile_hs, transverse_verdict

__all__ = [
    "AccelerationProfile",
    "AccuracyLossError",
    "BogoliubovSet",
    "CavityConfig",
    "EvolutionResult",
    "FieldPoint",
    "ModeSpectrum",
    "appendix_constants",
    "apply_maxwell_sign",
    "bessel_i",
    "bessel_i_deriv",
    "check_identities",
    "coefficients_perturbative",
    "coefficients_quadrature",
    "evaluate_mode",
    "evolve_fourier",
    "evolve_segments",
    "f_sum",
    "g_sum",
    "loggamma",
    "maxwell_reduction",
    "minkowski_spectrum",
    "rindler_spectrum",
    "smooth_profile_hs",
    "transverse_verdict",
]
