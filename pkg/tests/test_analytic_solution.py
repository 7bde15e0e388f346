"""Tests for the closed-form half-space solution."""

from __future__ import annotations

import math

import numpy as np
import pytest

from src.common.errors import DomainError
from src.common.types import Problem, Side, SolutionVariant
from src.kinetics.analytic_solution import (
    ANALYTIC_NODES,
    GAMMA0,
    AnalyticSolution,
    BoundaryDrive,
    gamma0,
    general_solution,
    h_eval,
    h_minus,
    h_plus,
    jump_coefficients,
    layer_coefficients,
    macro_profiles,
    mass_velocity_of,
    partial_solutions,
    printed_density_layer_coefficient,
    problem_distribution,
    problem_split,
)
from src.kinetics.quadrature import build_half_range
from src.kinetics.transport_solver import residual

DRIVES = [BoundaryDrive(g_T=1.0), BoundaryDrive(U=0.5), BoundaryDrive(g_T=0.3, U=-0.2), BoundaryDrive(g_T=1.0, U=0.5)]
MU = np.concatenate([-np.linspace(3.0, 0.1, 30), np.linspace(0.1, 3.0, 30)])
KAPPA = 1.0 / (16.0 * GAMMA0 * (1.0 + GAMMA0))


def test_decay_rate():
    assert gamma0() == pytest.approx(0.9908318, abs=1e-7)


@pytest.mark.parametrize(
    ("variant", "temperature", "evaporation"),
    [
        (SolutionVariant.EXACT, (1.2523, -0.6215), (-0.2523, -0.3785)),
        (SolutionVariant.PUBLISHED, (1.5046, -0.7477), (-0.5046, -0.2523)),
    ],
)
def test_jump_values(variant, temperature, evaporation):
    temp = jump_coefficients(BoundaryDrive.temperature_jump(), variant)
    evap = jump_coefficients(BoundaryDrive.evaporation(), variant)
    assert (temp.eps_T, temp.eps_n) == pytest.approx(temperature, abs=1e-4)
    assert (evap.eps_T, evap.eps_n) == pytest.approx(evaporation, abs=1e-4)


def test_jumps_accept_variant_strings():
    assert jump_coefficients(BoundaryDrive(g_T=1.0), "published") == jump_coefficients(
        BoundaryDrive(g_T=1.0), SolutionVariant.PUBLISHED
    )


def test_jumps_are_linear_in_the_drive():
    first, second = BoundaryDrive(g_T=0.7, U=0.1), BoundaryDrive(g_T=-0.2, U=0.4)
    total = jump_coefficients(first + second)
    assert total.eps_T == pytest.approx(jump_coefficients(first).eps_T + jump_coefficients(second).eps_T)
    assert total.eps_n == pytest.approx(jump_coefficients(first).eps_n + jump_coefficients(second).eps_n)


@pytest.mark.parametrize("variant", list(SolutionVariant))
@pytest.mark.parametrize("drive", DRIVES)
def test_diffuse_wall_condition(variant, drive):
    solution = AnalyticSolution(drive, variant)
    mu = np.linspace(0.0, 5.0, 101)
    assert np.max(np.abs(solution.h(0.0, mu, Side.PLUS))) < 1e-12
    assert solution.boundary_equations() == pytest.approx((0.0, 0.0, 0.0), abs=1e-12)


@pytest.mark.parametrize("drive", DRIVES)
def test_exact_variant_solves_the_kinetic_equation(drive):
    solution = AnalyticSolution(drive)
    quad = build_half_range(ANALYTIC_NODES)
    for x in (0.0, 0.5, 1.0, 2.0, 5.0):
        values = residual(solution.h, x, MU, quad, dh_dx=solution.dh_dx)
        assert np.max(np.abs(values)) < 1e-10


def test_published_variant_leaves_a_residual():
    solution = AnalyticSolution(BoundaryDrive.temperature_jump(), SolutionVariant.PUBLISHED)
    values = residual(solution.h, 0.5, MU, build_half_range(ANALYTIC_NODES), dh_dx=solution.dh_dx)
    assert np.max(np.abs(values)) > 1e-4


def test_degenerate_drive_has_no_layer():
    solution = AnalyticSolution(BoundaryDrive(g_T=1.0, U=0.5))
    np.testing.assert_allclose(solution.layer(np.linspace(0.0, 3.0, 7), 0.7), 0.0)


def test_elementary_solutions_have_zero_residual():
    quad = build_half_range(ANALYTIC_NODES)
    h0, h1, h2, h3 = partial_solutions()
    for h in (h0, h1, h2):
        values = residual(h, 1.5, MU, quad, dh_dx=lambda x, mu: np.zeros_like(mu))
        assert np.max(np.abs(values)) < 1e-12
    values = residual(h3, 1.5, MU, quad, dh_dx=lambda x, mu: mu * mu - 1.5)
    assert np.max(np.abs(values)) < 1e-12


def test_cubic_is_not_a_solution():
    values = residual(lambda x, mu: np.asarray(mu) ** 3, 1.0, MU, build_half_range(ANALYTIC_NODES))
    assert np.max(np.abs(values)) > 0.1


def test_general_solution_reproduces_closed_form():
    solution = AnalyticSolution(BoundaryDrive(g_T=0.3, U=-0.2))
    x = np.linspace(0.0, 4.0, 9)[:, np.newaxis]
    np.testing.assert_allclose(general_solution(x, MU, solution.constants), solution.h(x, MU), atol=1e-14)


def test_mu_zero_needs_a_side():
    solution = AnalyticSolution(BoundaryDrive.temperature_jump())
    with pytest.raises(DomainError):
        solution.h(1.0, 0.0)
    assert solution.h(1.0, 0.0, Side.PLUS) != solution.h(1.0, 0.0, Side.MINUS)


def test_negative_x_rejected():
    with pytest.raises(DomainError):
        AnalyticSolution(BoundaryDrive.temperature_jump()).h(-0.1, 0.5)


def test_half_evaluators_check_sign():
    solution = AnalyticSolution(BoundaryDrive.temperature_jump())
    with pytest.raises(DomainError):
        solution.h_plus(0.0, -0.5)
    with pytest.raises(DomainError):
        solution.h_minus(0.0, 0.5)
    assert solution.incoming_wall_distribution(-0.5) == solution.h(0.0, -0.5)


def test_discontinuity_at_zero_velocity():
    exact = AnalyticSolution(BoundaryDrive.temperature_jump())
    published = AnalyticSolution(BoundaryDrive.temperature_jump(), SolutionVariant.PUBLISHED)
    for x in (0.0, 1.0, 5.0):
        expected = 3.0 - math.exp(-GAMMA0 * x) / (2.0 * (1.0 + GAMMA0))
        assert exact.discontinuity(x) == pytest.approx(expected, abs=1e-12)
        assert published.discontinuity(x) == pytest.approx(3.0, abs=1e-12)


def test_layer_coefficients():
    exact = layer_coefficients(SolutionVariant.EXACT)
    published = layer_coefficients(SolutionVariant.PUBLISHED)
    assert exact.density == pytest.approx(KAPPA, abs=1e-12)
    assert exact.temperature == pytest.approx(-KAPPA, abs=1e-12)
    assert exact.velocity == pytest.approx(0.0, abs=1e-14)
    assert published.density == pytest.approx(-printed_density_layer_coefficient(), abs=1e-12)
    assert published.density == pytest.approx(-0.031684, abs=1e-6)
    assert published.temperature == pytest.approx(0.095053, abs=1e-6)


def test_published_evaporation_wall_values():
    profiles = macro_profiles(0.0, BoundaryDrive.evaporation(), SolutionVariant.PUBLISHED)
    assert profiles.dT[0] == pytest.approx(-0.409573, abs=1e-6)
    assert profiles.dn[0] == pytest.approx(-0.283997, abs=1e-6)


@pytest.mark.parametrize("variant", list(SolutionVariant))
def test_mass_velocity_is_constant(variant):
    drive = BoundaryDrive(g_T=0.2, U=0.5)
    solution = AnalyticSolution(drive, variant)
    for x in (0.0, 0.3, 2.0, 10.0):
        assert solution.macros(x).u == pytest.approx(drive.mass_velocity, abs=1e-12)
        assert mass_velocity_of(lambda mu, x=x: solution.h(x, mu)) == pytest.approx(drive.U / math.sqrt(math.pi))


def test_profiles_match_moments_of_the_distribution():
    drive = BoundaryDrive(g_T=0.3, U=-0.2)
    x = np.array([0.0, 0.5, 2.0, 8.0])
    profiles = macro_profiles(x, drive)
    solution = AnalyticSolution(drive)
    for i, point in enumerate(x):
        state = solution.macros(float(point))
        assert state.dn == pytest.approx(profiles.dn[i], abs=1e-12)
        assert state.dT == pytest.approx(profiles.dT[i], abs=1e-12)


def test_kinetic_coefficients_rebuild_profiles():
    drive = BoundaryDrive(g_T=0.3, U=-0.2)
    p = macro_profiles(np.linspace(0.0, 6.0, 25), drive)
    np.testing.assert_allclose(p.dn, -drive.g_T * p.N_T - drive.two_u * p.N_U, atol=1e-14)
    np.testing.assert_allclose(p.dT, drive.g_T * p.T_T - drive.two_u * p.T_U, atol=1e-14)
    np.testing.assert_allclose(p.dn + p.dT, p.dn[0] + p.dT[0], atol=1e-12)


def test_profiles_approach_chapman_enskog_far_away():
    p = macro_profiles(np.array([30.0]), BoundaryDrive.temperature_jump())
    assert p.T_T[0] == pytest.approx(p.T_T_as[0], abs=1e-12)
    assert p.N_T[0] == pytest.approx(p.N_T_as[0], abs=1e-12)
    assert p.T_T_printed[0] == pytest.approx(1.5046 + 30.0, abs=1e-4)


def test_problem_split_superposes():
    drive = BoundaryDrive(g_T=0.3, U=-0.2)
    x = np.linspace(0.0, 3.0, 4)[:, np.newaxis]
    h_t, h_u = problem_split(x, MU)
    np.testing.assert_allclose(drive.g_T * h_t + drive.two_u * h_u, AnalyticSolution(drive).h(x, MU), atol=1e-14)
    np.testing.assert_allclose(problem_split(0.0, MU[MU > 0])[1], 0.0, atol=1e-14)


def test_combined_problem_needs_a_drive():
    with pytest.raises(DomainError):
        problem_distribution(Problem.COMBINED, 0.0, 1.0)
    value = problem_distribution("temp-jump", 1.0, 0.5)
    assert value == AnalyticSolution(BoundaryDrive.temperature_jump()).h(1.0, 0.5)


def test_published_asymptotes():
    x = np.array([0.0, 2.0])
    temp = macro_profiles(x, BoundaryDrive.temperature_jump(), SolutionVariant.PUBLISHED)
    np.testing.assert_allclose(temp.N_T_as, 0.7477 + x, atol=1e-4)
    np.testing.assert_allclose(temp.N_U_as, 0.2523, atol=1e-4)
    np.testing.assert_allclose(temp.T_T_as, 1.5046 + x, atol=1e-4)
    np.testing.assert_allclose(temp.T_U_as, 0.5046, atol=1e-4)


@pytest.mark.parametrize("variant", list(SolutionVariant))
@pytest.mark.parametrize("drive", DRIVES)
def test_half_evaluators_agree_with_h_at_random_points(drive, variant):
    rng = np.random.default_rng(20240611)
    x = rng.uniform(0.0, 12.0, size=200)
    speed = rng.exponential(1.0, size=200)
    speed[:5] = 0.0
    assert np.array_equal(h_plus(x, speed, drive, variant), h_eval(x, speed, drive, Side.PLUS, variant))
    assert np.array_equal(h_minus(x, -speed, drive, variant), h_eval(x, -speed, drive, Side.MINUS, variant))
    moving = speed > 0
    np.testing.assert_array_equal(
        h_plus(x[moving], speed[moving], drive, variant), AnalyticSolution(drive, variant).h(x[moving], speed[moving])
    )
    np.testing.assert_array_equal(
        h_minus(x[moving], -speed[moving], drive, variant),
        AnalyticSolution(drive, variant).h(x[moving], -speed[moving]),
    )
