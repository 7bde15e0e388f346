"""Command-line entrypoint: jumps, profiles, distributions, numerical solves and verification."""

from __future__ import annotations

import argparse
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

import numpy as np
from loguru import logger

from ..common.config import PACKAGE_NAME, PACKAGE_VERSION, RunSpec, build_run_spec, configure_logging
from ..common.errors import ConvergenceError, KnudsenError
from ..common.paths import summary_path_for
from ..common.types import Acceleration, OutputFormat, Problem, Side, SolutionVariant
from ..kinetics.analytic_solution import (
    BoundaryDrive,
    MacroProfiles,
    gamma0,
    jump_coefficients,
    jump_sensitivities,
    macro_profiles,
    problem_distribution,
)
from ..kinetics.transport_solver import (
    analytic_on_grid,
    compare_to_analytic,
    extract_asymptotics,
    field_residual,
    solve,
)
from .emitters import emit, render_csv, render_json
from .reports import DistributionReport, DistributionRow, JumpsReport, ProfileReport, SolveSummary
from .verify import render_table, run_verification

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_CONVERGED = 2
EXIT_VERIFY_FAILED = 3

DEFAULT_PROFILE_POINTS = 200
DEFAULT_DISTRIBUTION_X = (0.0, 1.0, 2.0)
FIGURE_PRESETS: dict[int, tuple[Problem, tuple[float, ...]]] = {
    1: (Problem.TEMP_JUMP, (0.0, 1.0, 2.0)),
    2: (Problem.EVAPORATION, (0.0, 1.0, 2.0)),
    3: (Problem.EVAPORATION, (0.0, 0.05, 0.1, 0.2)),
}


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with status 1."""

    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _drive(spec: RunSpec) -> BoundaryDrive:
    return BoundaryDrive(g_T=spec.gT, U=spec.U)


def cmd_jumps(spec: RunSpec) -> int:
    drive = _drive(spec)
    report = JumpsReport(
        variant=spec.variant,
        drive=drive,
        gamma0=gamma0(),
        jumps=jump_coefficients(drive, spec.variant),
        sensitivities=jump_sensitivities(spec.variant),
    )
    if spec.format is OutputFormat.JSON:
        emit(render_json(report), spec.out)
        return EXIT_OK
    s = report.sensitivities
    columns = ("gT", "U", "variant", "eps_T", "eps_n", "eps_T_per_gT", "eps_T_per_2U", "eps_n_per_gT", "eps_n_per_2U")
    row = (
        drive.g_T, drive.U, str(spec.variant), report.jumps.eps_T, report.jumps.eps_n,
        s.eps_T_per_gT, s.eps_T_per_2U, s.eps_n_per_gT, s.eps_n_per_2U,
    )  # fmt: skip
    emit(render_csv(columns, [row]), spec.out)
    return EXIT_OK


def cmd_profile(spec: RunSpec) -> int:
    drive = _drive(spec)
    x = np.linspace(0.0, spec.xmax, (spec.nx or DEFAULT_PROFILE_POINTS) + 1)
    profiles = macro_profiles(x, drive, spec.variant)
    if spec.format is OutputFormat.JSON:
        columns = {name: getattr(profiles, name).tolist() for name in MacroProfiles.COLUMNS}
        emit(render_json(ProfileReport(variant=spec.variant, drive=drive, columns=columns)), spec.out)
        return EXIT_OK
    emit(render_csv(MacroProfiles.COLUMNS, profiles.rows()), spec.out)
    return EXIT_OK


def distribution_rows(spec: RunSpec) -> tuple[Problem, list[DistributionRow]]:
    problem, xs = spec.problem, tuple(spec.x) if spec.x else DEFAULT_DISTRIBUTION_X
    if spec.figure is not None:
        problem, preset = FIGURE_PRESETS[spec.figure]
        xs = tuple(spec.x) if spec.x else preset

    positive = np.linspace(0.0, spec.mu_max, spec.mu_points // 2 + 1)[1:]
    grid = [(-mu, Side.MINUS) for mu in positive[::-1]] + [(0.0, Side.MINUS), (0.0, Side.PLUS)]
    grid += [(mu, Side.PLUS) for mu in positive]

    drive = _drive(spec)
    rows = []
    for x in xs:
        for mu, side in grid:
            value = problem_distribution(problem, x, mu, side, drive, spec.variant)
            rows.append(DistributionRow(x=x, mu=float(mu), side=side, h=float(value)))
    return problem, rows


def cmd_distribution(spec: RunSpec) -> int:
    problem, rows = distribution_rows(spec)
    if spec.format is OutputFormat.JSON:
        drive = _drive(spec) if problem is Problem.COMBINED else None
        report = DistributionReport(problem=problem, variant=spec.variant, drive=drive, rows=rows)
        emit(render_json(report), spec.out)
        return EXIT_OK
    emit(render_csv(("x", "mu", "side", "h"), [(r.x, r.mu, str(r.side), r.h) for r in rows]), spec.out)
    return EXIT_OK


def cmd_solve(spec: RunSpec) -> int:
    drive = _drive(spec)
    config = spec.solver_config()
    try:
        field = solve(drive, config)
    except ConvergenceError as exc:
        logger.error("{}", exc)
        tail = ", ".join(f"{value:.3e}" for value in exc.history[-5:])
        sys.stderr.write(f"not converged after {exc.iterations} iterations; last changes: {tail}\n")
        return EXIT_NOT_CONVERGED

    asymptotics = extract_asymptotics(field)
    comparison = compare_to_analytic(field, drive, spec.variant)
    summary = SolveSummary(
        drive=drive,
        variant=spec.variant,
        config=config,
        converged=field.converged,
        iterations=field.iterations,
        residual_norm=field.residual_norm,
        field_residual=field_residual(field),
        analytic_jumps=jump_coefficients(drive, spec.variant),
        asymptotics=asymptotics,
        comparison=comparison,
        history_tail=field.history[-10:],
    )

    if spec.format is OutputFormat.JSON or spec.out is None:
        emit(render_json(summary), spec.out)
    else:
        exact_plus, exact_minus = analytic_on_grid(field, drive, spec.variant)
        rows = []
        for i in field.sample_indices(spec.samples):
            for k in range(field.mu.size - 1, -1, -1):
                rows.append((field.x[i], -field.mu[k], field.minus[i, k], exact_minus[i, k]))
            for k in range(field.mu.size):
                rows.append((field.x[i], field.mu[k], field.plus[i, k], exact_plus[i, k]))
        emit(render_csv(("x", "mu", "h", "h_analytic"), rows), spec.out)
        emit(render_json(summary), summary_path_for(spec.out))

    if spec.track:
        from .tracking import log_solve_run

        log_solve_run(summary)
    return EXIT_OK


def cmd_verify(spec: RunSpec) -> int:
    report = run_verification(spec.gamma_perturbation)
    text = render_json(report) if spec.format is OutputFormat.JSON else render_table(report)
    emit(text, spec.out)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


COMMANDS: dict[str, Callable[[RunSpec], int]] = {
    "jumps": cmd_jumps,
    "profile": cmd_profile,
    "distribution": cmd_distribution,
    "solve": cmd_solve,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--out", type=Path, default=None, help="Output path (default: stdout)")
    output.add_argument("--format", choices=[f.value for f in OutputFormat], default=None)
    output.add_argument("--config", type=Path, default=None, help="Flat JSON file with flag values")

    drive = argparse.ArgumentParser(add_help=False)
    drive.add_argument("--gT", type=float, default=None, help="Far-field temperature gradient g_T")
    drive.add_argument("--U", type=float, default=None, help="Evaporation drive U")
    drive.add_argument("--variant", choices=[v.value for v in SolutionVariant], default=None)

    parser = _Parser(prog=PACKAGE_NAME, description="Half-space temperature jump and weak evaporation")
    parser.add_argument("--version", action="version", version=f"{PACKAGE_NAME} {PACKAGE_VERSION}")
    parser.add_argument("--log-level", default=None, help="Log level for stderr (default: KNUDSEN_LOG_LEVEL or INFO)")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("jumps", parents=[drive, output], help="Temperature and density jump coefficients")

    profile = sub.add_parser("profile", parents=[drive, output], help="Macroscopic profiles and kinetic coefficients")
    profile.add_argument("--xmax", type=float, default=None)
    profile.add_argument("--nx", type=int, default=None, help=f"Number of x intervals (default {DEFAULT_PROFILE_POINTS})")

    distribution = sub.add_parser("distribution", parents=[drive, output], help="Distribution function samples")
    distribution.add_argument("--problem", choices=[p.value for p in Problem], default=None)
    distribution.add_argument("--x", type=_float_list, default=None, help="Comma-separated x values")
    distribution.add_argument("--mu-max", type=float, default=None)
    distribution.add_argument("--mu-points", type=int, default=None)
    distribution.add_argument("--figure", type=int, choices=sorted(FIGURE_PRESETS), default=None)

    solve_parser = sub.add_parser("solve", parents=[drive, output], help="Run the discrete-velocity solver")
    solve_parser.add_argument("--L", type=float, default=None)
    solve_parser.add_argument("--nx", type=int, default=None)
    solve_parser.add_argument("--nmu", type=int, default=None)
    solve_parser.add_argument("--tol", type=float, default=None)
    solve_parser.add_argument("--max-iter", type=int, default=None)
    solve_parser.add_argument("--acceleration", choices=[a.value for a in Acceleration], default=None)
    solve_parser.add_argument("--samples", type=int, default=None, help="Number of x rows in the field CSV")
    solve_parser.add_argument("--track", action="store_true", default=None, help="Log the run to MLflow")

    verify = sub.add_parser("verify", parents=[output], help="Run the verification suite")
    verify.add_argument("--gamma-perturbation", type=float, default=None, help=argparse.SUPPRESS)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)

    flags = {key: value for key, value in vars(args).items() if key not in {"command", "config", "log_level"}}
    try:
        spec = build_run_spec(args.command, flags, args.config)
    except KnudsenError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"{PACKAGE_NAME}: error: {exc}\n")
        return EXIT_USAGE

    try:
        return COMMANDS[spec.command](spec)
    except (KnudsenError, OSError) as exc:
        logger.error("{} failed: {}", spec.command, exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
