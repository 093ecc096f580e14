"""Planar motion in the field of two fixed Kepler centers.

The package separates the problem in elliptic coordinates, classifies the
values of the two constants of motion ``(E, K)`` by the topology of their
Hill region, and integrates trajectories in a regularizing time ``s``.
"""

from twocenters.bifurcation import (
    ChargeCase,
    CurveId,
    RegionClassification,
    bifurcation_curve_set,
    charge_case,
    classify,
    curve_k,
    discriminant,
    in_bifurcation_set,
    k_minus,
    k_plus,
    movable_roots,
    sample_diagram,
)
from twocenters.coords import (
    CartesianState,
    ChargeConfig,
    EllipticState,
    SeparatedState,
    Sheet,
    cartesian_state_to_elliptic,
    elliptic_state_to_cartesian,
    elliptic_to_separated,
    involution,
    separated_to_elliptic,
)
from twocenters.dynamics import (
    Boundedness,
    EventKind,
    SectionKind,
    SectionSpec,
    Trajectory,
    choose_section,
    detect_boundedness,
    initial_state,
    integrate,
    inter_focal_orbit,
    outer_axis_orbit,
    physical_time,
    poincare_hits,
)
from twocenters.separation import Branch, EnergyMomentum, energy_momentum_map, motion_polynomial

__all__ = [
    "Boundedness", "Branch", "CartesianState", "ChargeCase", "ChargeConfig", "CurveId",
    "EllipticState", "EnergyMomentum", "EventKind", "RegionClassification", "SectionKind",
    "SectionSpec", "SeparatedState", "Sheet", "Trajectory", "bifurcation_curve_set",
    "cartesian_state_to_elliptic", "charge_case", "choose_section", "classify", "curve_k",
    "detect_boundedness", "discriminant", "elliptic_state_to_cartesian", "elliptic_to_separated",
    "energy_momentum_map", "in_bifurcation_set", "initial_state", "integrate", "inter_focal_orbit",
    "involution", "k_minus", "k_plus", "motion_polynomial", "movable_roots", "outer_axis_orbit",
    "physical_time", "poincare_hits", "sample_diagram", "separated_to_elliptic",
]
