"""CSV and JSON rendering plus atomic output."""

from __future__ import annotations

import csv
import io
import sys
from collections.abc import Iterable, Sequence
from pathlib import Path

from loguru import logger
from pydantic import BaseModel

from ..common.config import PACKAGE_NAME, PACKAGE_VERSION
from ..common.paths import atomic_write_text

CSV_BANNER = f"# {PACKAGE_NAME} v{PACKAGE_VERSION}"
SIGNIFICANT_DIGITS = 12


def format_value(value: object) -> str:
    if isinstance(value, bool) or isinstance(value, str):
        return str(value)
    if isinstance(value, int):
        return str(value)
    number = float(value)  # type: ignore[arg-type]
    text = f"{number:.{SIGNIFICANT_DIGITS}g}"
    return "0" if text == "-0" else text


def render_csv(columns: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buffer = io.StringIO()
    buffer.write(CSV_BANNER + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(value) for value in row])
    return buffer.getvalue()


def render_json(payload: BaseModel) -> str:
    return payload.model_dump_json(indent=2) + "\n"


def emit(text: str, out: Path | None) -> None:
    """Write to ``out`` atomically, or to stdout when no path is given."""
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = atomic_write_text(Path(out), text)
    logger.info("Wrote {}", path)


__all__ = ["CSV_BANNER", "emit", "format_value", "render_csv", "render_json"]
