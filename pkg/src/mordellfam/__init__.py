"""Mordell curves y^2 = x^3 + k^2 with three constructed rational points.

Exact construction of curve and points from an integer triple (a, b, c),
symbolic verification of every identity behind the construction, and
numerical rank witnesses via canonical heights and the regulator.
"""

__version__ = "0.1.0"

from .curves import (
    INFINITY,
    MordellCurve,
    Point,
    TorsionGroup,
    format_point,
    parse_point,
)
from .family import (
    DerivationReport,
    FamilyInstance,
    FamilyParams,
    InstanceInvalidError,
    PlaneCubic,
    SingularPointError,
    TangentContainedError,
    build_instance,
    compute_k,
    compute_points,
    cubic_condition,
    cubic_condition_symbolic,
    family_polynomials,
    normalize_projective,
    solve_t_pair,
    tangent_third_point,
    verify_derivation,
)
from .heights import (
    DegenerateInputError,
    HeightReport,
    HeightValue,
    PrecisionUnreachableError,
    canonical_height,
    doubling_limit_height,
    height_pairing,
    height_report,
    independence_verdict,
    naive_height,
    regulator,
)
from .polynomials import MultiPoly, format_poly, parse_poly

__all__ = [
    "INFINITY",
    "MordellCurve",
    "Point",
    "TorsionGroup",
    "format_point",
    "parse_point",
    "DerivationReport",
    "FamilyInstance",
    "FamilyParams",
    "InstanceInvalidError",
    "PlaneCubic",
    "SingularPointError",
    "TangentContainedError",
    "build_instance",
    "compute_k",
    "compute_points",
    "cubic_condition",
    "cubic_condition_symbolic",
    "family_polynomials",
    "normalize_projective",
    "solve_t_pair",
    "tangent_third_point",
    "verify_derivation",
    "DegenerateInputError",
    "HeightReport",
    "HeightValue",
    "PrecisionUnreachableError",
    "canonical_height",
    "doubling_limit_height",
    "height_pairing",
    "height_report",
    "independence_verdict",
    "naive_height",
    "regulator",
    "MultiPoly",
    "format_poly",
    "parse_poly",
]
