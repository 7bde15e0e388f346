"""Common filesystem paths used across the project."""

from __future__ import annotations

import os
from pathlib import Path

ROOT_DIR = Path(__file__).resolve().parents[2]
MLFLOW_DIR = ROOT_DIR / "mlflow"


def atomic_write_text(path: Path, text: str) -> Path:
    """Write ``text`` next to ``path`` and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_name(f".{path.name}.{os.getpid()}.tmp")
    try:
        tmp_path.write_text(text, encoding="utf-8")
        tmp_path.replace(path)
    finally:
        if tmp_path.exists():
            tmp_path.unlink()
    return path


def summary_path_for(output_path: Path) -> Path:
    """Companion JSON summary path for a solver CSV output."""
    return Path(output_path).with_suffix(".summary.json")


__all__ = ["MLFLOW_DIR", "ROOT_DIR", "atomic_write_text", "summary_path_for"]
