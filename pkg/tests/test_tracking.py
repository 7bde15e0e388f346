"""Tests for MLflow run logging, with the MLflow client stubbed out."""

from __future__ import annotations

from types import SimpleNamespace

import pytest

from src.common.config import EnvironmentSettings, SolverConfig
from src.common.types import SolutionVariant
from src.kinetics.analytic_solution import BoundaryDrive, jump_coefficients
from src.kinetics.transport_solver import ExtractedAsymptotics
from src.pipeline import tracking
from src.pipeline.reports import SolveSummary


class _FakeRun:
    def __init__(self, calls: dict):
        self.calls = calls
        self.info = SimpleNamespace(run_id="run-123")

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


@pytest.fixture
def fake_mlflow(monkeypatch):
    calls: dict = {}
    monkeypatch.setattr(tracking.mlflow, "set_tracking_uri", lambda uri: calls.setdefault("uri", uri))
    monkeypatch.setattr(tracking.mlflow, "set_experiment", lambda name: calls.setdefault("experiment", name))
    monkeypatch.setattr(tracking.mlflow, "start_run", lambda run_name=None: _FakeRun(calls))
    monkeypatch.setattr(tracking.mlflow, "log_params", lambda params: calls.setdefault("params", params))
    monkeypatch.setattr(tracking.mlflow, "log_metrics", lambda metrics: calls.setdefault("metrics", metrics))
    monkeypatch.setattr(tracking.mlflow, "log_dict", lambda data, name: calls.setdefault("artifact", (data, name)))
    monkeypatch.setenv("MLFLOW_ARTIFACT_ROOT", "unset")
    return calls


def _summary() -> SolveSummary:
    drive = BoundaryDrive.temperature_jump()
    return SolveSummary(
        drive=drive,
        variant=SolutionVariant.EXACT,
        config=SolverConfig(L=15.0, nx=300, n_mu=12),
        converged=True,
        iterations=1234,
        residual_norm=5e-10,
        analytic_jumps=jump_coefficients(drive),
        asymptotics=ExtractedAsymptotics(
            eps_T_hat=1.252,
            eps_n_hat=-0.621,
            slope_T_hat=1.0,
            slope_n_hat=-1.0,
            gamma_hat=None,
            layer_amplitude=0.03,
            noise_floor=1e-5,
            fit_points=91,
        ),
    )


def test_solve_metrics_skip_missing_values():
    metrics = tracking.solve_metrics(_summary())
    assert metrics["iterations"] == 1234.0
    assert metrics["eps_T_hat"] == 1.252
    assert "gamma_hat" not in metrics
    assert "sup_norm" not in metrics


def test_log_solve_run(fake_mlflow, tmp_path):
    settings = EnvironmentSettings(KNUDSEN_TRACKING_DB=tmp_path / "mlflow" / "mlflow.db")  # pyright: ignore[reportCallIssue]

    run_id = tracking.log_solve_run(_summary(), settings)

    assert run_id == "run-123"
    assert fake_mlflow["uri"] == f"sqlite:///{tmp_path / 'mlflow' / 'mlflow.db'}"
    assert fake_mlflow["experiment"] == tracking.EXPERIMENT_NAME
    assert fake_mlflow["params"]["nx"] == 300
    assert fake_mlflow["artifact"][1] == "solve_summary.json"
    assert fake_mlflow["artifact"][0]["converged"] is True
    assert (tmp_path / "mlflow" / "artifacts").is_dir()
