"""Energy-minimal deformations between planar annuli and rectangles.

Thin re-export of the compiled core: radial Nitsche maps and their
certificates, the weighted Grotzsch problem with its phenomenon
classification, free-Lagrangian invariants, and the exp/log dictionary
between the annulus and rectangle pictures.
"""

from ._core import (
    Annulus,
    DegenerateFamily,
    DistortionGauge,
    GrotzschProblem,
    GrotzschSolution,
    InverseProfile,
    PolarGridMap,
    RadialProfile,
    Rectangle,
    RectGridMap,
    WeightFunction,
    beyond_nitsche_profile,
    characteristic_constant,
    check_admissible,
    classify_phenomenon,
    classify_regime,
    coarsen,
    critical_length,
    dirichlet_energy,
    distortion_at,
    elasticity,
    free_lagrangian,
    harmonic_radial,
    inverse_profile,
    jacobian_at,
    lift_map,
    minimality_certificate,
    nitsche_bound_holds,
    perturb_map,
    phi_distortion_energy,
    power_stretch_extremal,
    project_map,
    radial_dirichlet_energy,
    sample_radial,
    sample_shear,
    solve_boundary,
)

__all__ = [
    "Annulus",
    "DegenerateFamily",
    "DistortionGauge",
    "GrotzschProblem",
    "GrotzschSolution",
    "InverseProfile",
    "PolarGridMap",
    "RadialProfile",
    "Rectangle",
    "RectGridMap",
    "WeightFunction",
    "beyond_nitsche_profile",
    "characteristic_constant",
    "check_admissible",
    "classify_phenomenon",
    "classify_regime",
    "coarsen",
    "critical_length",
    "dirichlet_energy",
    "distortion_at",
    "elasticity",
    "free_lagrangian",
    "harmonic_radial",
    "inverse_profile",
    "jacobian_at",
    "lift_map",
    "minimality_certificate",
    "nitsche_bound_holds",
    "perturb_map",
    "phi_distortion_energy",
    "power_stretch_extremal",
    "project_map",
    "radial_dirichlet_energy",
    "sample_radial",
    "sample_shear",
    "solve_boundary",
]
