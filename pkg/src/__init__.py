"""Half-space temperature jump and weak evaporation for a speed-proportional collision frequency."""

from .common.config import PACKAGE_VERSION
from .kinetics import (
    GAMMA0,
    AnalyticSolution,
    BoundaryDrive,
    HalfRangeQuadrature,
    JumpCoefficients,
    MacroState,
    NumericField,
    build_half_range,
    compare_to_analytic,
    extract_asymptotics,
    gamma0,
    h_eval,
    jump_coefficients,
    macro_profiles,
    solve,
)

__version__ = PACKAGE_VERSION

__all__ = [
    "GAMMA0",
    "AnalyticSolution",
    "BoundaryDrive",
    "HalfRangeQuadrature",
    "JumpCoefficients",
    "MacroState",
    "NumericField",
    "__version__",
    "build_half_range",
    "compare_to_analytic",
    "extract_asymptotics",
    "gamma0",
    "h_eval",
    "jump_coefficients",
    "macro_profiles",
    "solve",
]
