"""Tests for the discrete-velocity source-iteration solver."""

from __future__ import annotations

import dataclasses
import math

import numpy as np
import pytest

from src.common.config import SolverConfig
from src.common.errors import ConvergenceError, DomainError, FitError, NonFiniteValueError
from src.common.types import Acceleration, SolutionVariant
from src.kinetics.analytic_solution import GAMMA0, AnalyticSolution, BoundaryDrive, h_eval, jump_coefficients
from src.kinetics.quadrature import build_half_range
from src.kinetics.transport_solver import (
    analytic_on_grid,
    compare_to_analytic,
    extract_asymptotics,
    field_residual,
    residual,
    solve,
)

FAST = SolverConfig(L=15.0, nx=600, n_mu=16, tol=1e-9, max_iter=30_000)
JUMP_TOLERANCE = 3e-3
TIGHT = FAST.model_copy(update={"tol": 1e-12})


@pytest.fixture(scope="module")
def temperature_field():
    return solve(BoundaryDrive.temperature_jump(), FAST)


@pytest.fixture(scope="module")
def evaporation_field():
    return solve(BoundaryDrive.evaporation(), FAST)


def test_wall_condition_is_exact(temperature_field):
    assert np.all(temperature_field.plus[0] == 0.0)
    assert temperature_field.converged
    assert temperature_field.residual_norm < FAST.tol


@pytest.mark.parametrize("field_name", ["temperature_field", "evaporation_field"])
def test_recovers_exact_jumps(field_name, request):
    field = request.getfixturevalue(field_name)
    fitted = extract_asymptotics(field)
    target = jump_coefficients(field.drive)
    assert fitted.eps_T_hat == pytest.approx(target.eps_T, abs=JUMP_TOLERANCE)
    assert fitted.eps_n_hat == pytest.approx(target.eps_n, abs=JUMP_TOLERANCE)
    assert fitted.slope_T_hat == pytest.approx(field.drive.g_T, abs=1e-3)
    assert fitted.slope_n_hat == pytest.approx(-field.drive.g_T, abs=1e-3)


def test_layer_decay_rate(temperature_field):
    fitted = extract_asymptotics(temperature_field)
    assert fitted.gamma_hat is not None
    assert fitted.gamma_hat == pytest.approx(GAMMA0, abs=5e-2)


def test_mass_velocity_is_conserved(evaporation_field):
    _, u, _ = evaporation_field.macros()
    assert np.max(np.abs(u - evaporation_field.drive.mass_velocity)) < 5e-4


def test_field_matches_exact_closed_form(temperature_field):
    exact = compare_to_analytic(temperature_field)
    published = compare_to_analytic(temperature_field, variant=SolutionVariant.PUBLISHED)
    assert exact.sup_norm < 0.1
    assert exact.eps_T_delta == pytest.approx(0.0, abs=JUMP_TOLERANCE)
    assert published.sup_norm > exact.sup_norm
    assert abs(published.eps_T_delta) > 0.2


def test_discrete_residual_is_small(temperature_field):
    assert field_residual(temperature_field) < 1e-2


def test_zero_drive_converges_immediately():
    field = solve(BoundaryDrive(), FAST)
    assert field.iterations == 1
    assert np.all(field.plus == 0.0) and np.all(field.minus == 0.0)


def test_degenerate_drive_reproduces_chapman_enskog():
    field = solve(BoundaryDrive(g_T=1.0, U=0.5), TIGHT)
    assert compare_to_analytic(field).sup_norm < 1e-3
    fitted = extract_asymptotics(field)
    assert fitted.gamma_hat is None
    assert fitted.layer_amplitude <= fitted.noise_floor


def test_aitken_acceleration_reaches_same_jumps(temperature_field):
    config = FAST.model_copy(update={"acceleration": Acceleration.AITKEN})
    field = solve(BoundaryDrive.temperature_jump(), config)
    assert extract_asymptotics(field).eps_T_hat == pytest.approx(
        extract_asymptotics(temperature_field).eps_T_hat, abs=1e-3
    )


def test_iteration_budget_exhausted():
    config = FAST.model_copy(update={"max_iter": 3})
    with pytest.raises(ConvergenceError) as info:
        solve(BoundaryDrive.temperature_jump(), config)
    assert info.value.iterations == 3
    assert len(info.value.history) == 3


def test_non_finite_seed_rejected():
    with pytest.raises(NonFiniteValueError) as info:
        solve(BoundaryDrive.temperature_jump(), FAST, initial=lambda x, mu: np.where(mu < 0, np.nan, 0.0) + 0 * x)
    assert info.value.location["mu"] < 0


def test_fit_needs_a_converged_field(temperature_field):
    with pytest.raises(FitError):
        extract_asymptotics(dataclasses.replace(temperature_field, converged=False))


def test_fit_window_too_narrow(temperature_field):
    with pytest.raises(FitError):
        extract_asymptotics(temperature_field, FAST.model_copy(update={"fit_window": (0.6, 0.61)}))


def test_residual_undefined_at_zero_velocity():
    with pytest.raises(DomainError):
        residual(lambda x, mu: mu, 1.0, np.array([0.0, 1.0]), build_half_range(4))


def test_short_domain_still_solves():
    config = SolverConfig(L=4.0, nx=160, n_mu=8, tol=1e-9, max_iter=20_000)
    field = solve(BoundaryDrive.temperature_jump(), config)
    assert field.converged
    assert math.isfinite(field.residual_norm)


@pytest.mark.slow
@pytest.mark.parametrize("drive", [BoundaryDrive.temperature_jump(), BoundaryDrive.evaporation()])
def test_reference_configuration(drive):
    field = solve(drive)
    fitted = extract_asymptotics(field)
    target = jump_coefficients(drive)
    assert fitted.eps_T_hat == pytest.approx(target.eps_T, abs=1e-3)
    assert fitted.eps_n_hat == pytest.approx(target.eps_n, abs=1e-3)


def test_sample_returns_nearest_rows(temperature_field):
    x, plus, minus = temperature_field.sample(1.01)
    i = temperature_field.nearest_index(1.01)
    assert x == pytest.approx(1.0)
    np.testing.assert_array_equal(plus, temperature_field.plus[i])
    np.testing.assert_array_equal(minus, temperature_field.minus[i])


def test_comparison_reports_slope_deltas(temperature_field):
    report = compare_to_analytic(temperature_field)
    assert report.slope_T_delta == pytest.approx(0.0, abs=1e-3)
    assert report.slope_n_delta == pytest.approx(0.0, abs=1e-3)


@pytest.mark.slow
def test_reference_decay_rate():
    fitted = extract_asymptotics(solve(BoundaryDrive.temperature_jump()))
    assert fitted.gamma_hat == pytest.approx(GAMMA0, abs=5e-3)


@pytest.fixture(scope="module")
def fields_by_nodes(temperature_field):
    fields = {16: temperature_field}
    for n_mu in (8, 32):
        fields[n_mu] = solve(BoundaryDrive.temperature_jump(), FAST.model_copy(update={"n_mu": n_mu}))
    return fields


def test_jumps_are_grid_independent(temperature_field, fields_by_nodes):
    base = extract_asymptotics(temperature_field)
    finer_x = extract_asymptotics(solve(BoundaryDrive.temperature_jump(), FAST.model_copy(update={"nx": 1200})))
    finer_mu = extract_asymptotics(fields_by_nodes[32])
    for refined in (finer_x, finer_mu):
        assert abs(refined.eps_T_hat - base.eps_T_hat) < 1e-4
        assert abs(refined.eps_n_hat - base.eps_n_hat) < 1e-4


def test_closed_form_is_a_fixed_point_of_the_sweep(temperature_field):
    drive = BoundaryDrive.temperature_jump()
    one_sweep = FAST.model_copy(update={"tol": 1.0, "max_iter": 1})
    field = solve(drive, one_sweep, initial=lambda x, mu: h_eval(x, mu, drive))
    exact_plus, exact_minus = analytic_on_grid(field)
    moved = max(float(np.max(np.abs(field.plus - exact_plus))), float(np.max(np.abs(field.minus - exact_minus))))
    assert field.iterations == 1
    assert moved < compare_to_analytic(temperature_field).sup_norm


def test_change_history_decreases_after_start_up(temperature_field):
    tail = np.asarray(temperature_field.history[100:])
    assert tail.size > 100
    assert np.all(tail[1:] <= tail[:-1] * (1.0 + 1e-9))
    assert tail[-1] < FAST.tol


def test_zero_velocity_jump_approaches_closed_form(fields_by_nodes):
    exact = AnalyticSolution(BoundaryDrive.temperature_jump())
    errors = []
    for n_mu in (8, 16, 32):
        x, plus, minus = fields_by_nodes[n_mu].sample(2.0)
        errors.append(abs((plus[0] - minus[0]) - exact.discontinuity(x)))
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < 0.02


def test_spatial_refinement_reduces_error():
    drive = BoundaryDrive.temperature_jump()
    errors = [compare_to_analytic(solve(drive, TIGHT.model_copy(update={"nx": nx}))).sup_norm for nx in (150, 300, 600)]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < 0.5 * errors[0]
