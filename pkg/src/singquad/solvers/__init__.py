"""Scattering solvers built on the corrected quadratures."""

from .bie import (
    KITE_DIRECTION, Curve, angles_to_directions, assemble, circle, exterior_field, far_field, kite,
    solve_bie, two_kites,
)
from .gmres import GmresConfig, GmresError, gmres
from .lippmann import (
    Medium, plane_wave, single_bump_medium, solve_lippmann_schwinger, three_bump_index, three_bump_medium,
    window_axes,
)

__all__ = [
    "Curve", "GmresConfig", "GmresError", "KITE_DIRECTION", "Medium", "angles_to_directions", "assemble",
    "circle", "exterior_field", "far_field", "gmres", "kite", "plane_wave", "single_bump_medium",
    "solve_bie", "solve_lippmann_schwinger", "three_bump_index", "three_bump_medium", "two_kites",
    "window_axes",
]
