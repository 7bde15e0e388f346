"""Kernel models, quadrature, the closed-form solution and the discrete-velocity solver."""

from .analytic_solution import (
    GAMMA0,
    AnalyticSolution,
    BoundaryDrive,
    JumpCoefficients,
    JumpSensitivities,
    MacroProfiles,
    chapman_enskog,
    gamma0,
    h_eval,
    h_minus,
    h_plus,
    jump_coefficients,
    jump_sensitivities,
    layer_coefficients,
    macro_profiles,
    problem_split,
)
from .kernel_models import (
    KernelCoefficients,
    UnitsContext,
    kernel_affine,
    kernel_coefficients,
    kernel_limit_deviation,
    kernel_q1,
)
from .quadrature import (
    HalfRangeQuadrature,
    MacroState,
    build_half_range,
    collision_moments,
    flux_moments,
    full_moment,
    macros_from_distribution,
)
from .transport_solver import (
    ComparisonReport,
    ExtractedAsymptotics,
    NumericField,
    compare_to_analytic,
    extract_asymptotics,
    residual,
    solve,
)

__all__ = [
    "GAMMA0",
    "AnalyticSolution",
    "BoundaryDrive",
    "ComparisonReport",
    "ExtractedAsymptotics",
    "HalfRangeQuadrature",
    "JumpCoefficients",
    "JumpSensitivities",
    "KernelCoefficients",
    "MacroProfiles",
    "MacroState",
    "NumericField",
    "UnitsContext",
    "build_half_range",
    "chapman_enskog",
    "collision_moments",
    "compare_to_analytic",
    "extract_asymptotics",
    "flux_moments",
    "full_moment",
    "gamma0",
    "h_eval",
    "h_minus",
    "h_plus",
    "jump_coefficients",
    "jump_sensitivities",
    "kernel_affine",
    "kernel_coefficients",
    "kernel_limit_deviation",
    "kernel_q1",
    "layer_coefficients",
    "macro_profiles",
    "macros_from_distribution",
    "problem_split",
    "residual",
    "solve",
]
