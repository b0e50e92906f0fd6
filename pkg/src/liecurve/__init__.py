"""Frenet apparatus, Mannheim partners and helix classification for curves in
three-dimensional Lie groups with a bi-invariant metric."""

from .errors import (
    DegenerateFrame, HVanishes, LieCurveError, NotMannheim, StepTooLarge, ValidationError,
    VanishingCurvature,
)
from .frenet import CurveSamples, FrenetData, frenet_apparatus, reparametrize_arclength
from .helix import classify, duality_check, geodesic_mate_check, ode_form_audit
from .lie_algebra import PRESETS, LieAlgebra3, bracket, check_bi_invariance, get_algebra
from .mannheim import (
    beta_side_check, build_partner, construct_inverse_partner, construct_partner_positions,
    mannheim_check, partner_curvatures, partner_frame,
)
from .synthesis import (
    CurvatureSpec, circular_helix, generate_mannheim_family, generate_slant_mannheim,
    integrate_frame, random_mannheim, torsion_power,
)

__version__ = "0.1.0"

__all__ = [
    "CurvatureSpec", "CurveSamples", "DegenerateFrame", "FrenetData", "HVanishes", "LieAlgebra3",
    "LieCurveError", "NotMannheim", "PRESETS", "StepTooLarge", "ValidationError",
    "VanishingCurvature", "beta_side_check", "bracket", "build_partner", "check_bi_invariance",
    "circular_helix", "classify", "construct_inverse_partner", "construct_partner_positions",
    "duality_check", "frenet_apparatus", "generate_mannheim_family", "generate_slant_mannheim",
    "geodesic_mate_check", "get_algebra", "integrate_frame", "mannheim_check", "ode_form_audit",
    "partner_curvatures", "partner_frame", "random_mannheim", "reparametrize_arclength",
    "torsion_power",
]
