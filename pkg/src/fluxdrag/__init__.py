"""Relativistic electromagnetic drag on a small polarizable particle moving
parallel to a planar half-space: literal transcriptions of three published
force formulations, deterministic adaptive quadrature over each printed
domain, and a harness that certifies the conversion factors (-4 pi gamma,
-1/gamma, 4 pi) and integrand symmetries relating them.

Natural units throughout: hbar = c = k_B = 1, vacuum permittivity 1.
"""

from .core import (
    Kinematics,
    ModePoint,
    ReflectionPair,
    Sector,
    ThermalPair,
    WeightPair,
    doppler,
    kinematics_new,
    medium_kappa1,
    mode_point,
    occupation,
    polarization_weights,
    reflection_coeffs,
    transverse_constant,
)
from .errors import (
    ConvergenceError,
    DomainError,
    IndeterminateRatioError,
    PoleError,
    SingularityError,
)
from .integrands import (
    FormulationId,
    ScenarioParams,
    dk_ev_quadrant_integrand,
    ev_integrand,
    freespace_integrand,
    positive_frequency_ev_density,
    prop_surface_integrand,
    symmetry_residual,
    vp_stress_integrand,
)
from .quadrature import (
    ForceResult,
    QuadratureSpec,
    SectorId,
    integrate_evanescent,
    integrate_freespace,
    integrate_prop_surface,
    integrate_sector,
    integrate_vp_stress,
    riemann_oracle,
)
from .response import (
    DiluteParams,
    DiluteReport,
    DrudeModel,
    LorentzOscillator,
    dilute_check,
    drude_eps,
    lorentz_alpha,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DiluteParams",
    "DiluteReport",
    "DomainError",
    "DrudeModel",
    "ForceResult",
    "FormulationId",
    "IndeterminateRatioError",
    "Kinematics",
    "LorentzOscillator",
    "ModePoint",
    "PoleError",
    "QuadratureSpec",
    "ReflectionPair",
    "ScenarioParams",
    "Sector",
    "SectorId",
    "SingularityError",
    "ThermalPair",
    "WeightPair",
    "dilute_check",
    "dk_ev_quadrant_integrand",
    "doppler",
    "drude_eps",
    "ev_integrand",
    "freespace_integrand",
    "integrate_evanescent",
    "integrate_freespace",
    "integrate_prop_surface",
    "integrate_sector",
    "integrate_vp_stress",
    "kinematics_new",
    "lorentz_alpha",
    "medium_kappa1",
    "mode_point",
    "occupation",
    "polarization_weights",
    "positive_frequency_ev_density",
    "reflection_coeffs",
    "riemann_oracle",
    "symmetry_residual",
    "transverse_constant",
    "vp_stress_integrand",
]
