"""MLflow experiment tracking for solver runs."""

from __future__ import annotations

import os

import mlflow

from ..common.config import EnvironmentSettings
from .reports import SolveSummary

EXPERIMENT_NAME = "knudsen-halfspace-solve"


def setup_mlflow(settings: EnvironmentSettings | None = None) -> str:
    """Configure MLflow with a SQLite backend and return the tracking URI."""
    settings = settings or EnvironmentSettings()  # pyright: ignore[reportCallIssue]
    db_path = settings.tracking_db
    artifacts_path = db_path.parent / "artifacts"
    db_path.parent.mkdir(parents=True, exist_ok=True)
    artifacts_path.mkdir(parents=True, exist_ok=True)

    uri = f"sqlite:///{db_path}"
    mlflow.set_tracking_uri(uri)
    os.environ["MLFLOW_ARTIFACT_ROOT"] = str(artifacts_path.absolute())
    return uri


def solve_metrics(summary: SolveSummary) -> dict[str, float]:
    metrics = {"iterations": float(summary.iterations), "residual_norm": summary.residual_norm}
    if summary.field_residual is not None:
        metrics["field_residual"] = summary.field_residual
    if summary.asymptotics is not None:
        metrics["eps_T_hat"] = summary.asymptotics.eps_T_hat
        metrics["eps_n_hat"] = summary.asymptotics.eps_n_hat
        metrics["slope_T_hat"] = summary.asymptotics.slope_T_hat
        if summary.asymptotics.gamma_hat is not None:
            metrics["gamma_hat"] = summary.asymptotics.gamma_hat
    if summary.comparison is not None:
        metrics["sup_norm"] = summary.comparison.sup_norm
        metrics["l2_norm"] = summary.comparison.l2_norm
    return metrics


def log_solve_run(summary: SolveSummary, settings: EnvironmentSettings | None = None) -> str | None:
    """Record one solve; returns the MLflow run id."""
    setup_mlflow(settings)
    mlflow.set_experiment(EXPERIMENT_NAME)
    run_name = f"gT{summary.drive.g_T:g}-U{summary.drive.U:g}-nx{summary.config.nx}"
    with mlflow.start_run(run_name=run_name) as run:
        mlflow.log_params(
            {
                "g_T": summary.drive.g_T,
                "U": summary.drive.U,
                "variant": summary.variant,
                "L": summary.config.L,
                "nx": summary.config.nx,
                "n_mu": summary.config.n_mu,
                "tol": summary.config.tol,
                "acceleration": summary.config.acceleration,
            }
        )
        mlflow.log_metrics(solve_metrics(summary))
        mlflow.log_dict(summary.model_dump(mode="json"), "solve_summary.json")
        return run.info.run_id if run is not None else None


__all__ = ["EXPERIMENT_NAME", "log_solve_run", "setup_mlflow", "solve_metrics"]
