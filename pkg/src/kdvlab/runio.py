"""Snapshot CSV and run-metadata emission.

Output is fully deterministic: values are printed with 17 significant
digits (lossless for doubles), there are no timestamps, and field order
is fixed, so identical configurations produce byte-identical files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Tuple

import numpy as np

from .errors import ConfigError
from .evolution import RunResult
from .model import Grid1D, WaveField

__all__ = [
    "time_label",
    "snapshot_filename",
    "write_field_csv",
    "read_field_csv",
    "write_run_outputs",
]


def time_label(t: float) -> str:
    """Snapshot-time label: 15 significant digits, trailing zeros dropped.

    15 digits absorbs the couple-of-ulp wobble of times computed as
    n*dt (so step 201 of dt=0.01 labels as ``2.01``) while still
    distinguishing any two distinct time levels.
    """
    return format(float(t), ".15g")


def snapshot_filename(t: float) -> str:
    return f"snapshot_t{time_label(t)}.csv"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_field_csv(path: Path, field: WaveField) -> None:
    """Write one snapshot as ``x,u`` rows with lossless decimal values."""
    x = field.grid.points()
    lines = ["x,u"]
    lines.extend(f"{_fmt(xi)},{_fmt(ui)}" for xi, ui in zip(x, field.values))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_field_csv(path: Path, grid: Grid1D, time: float = 0.0) -> WaveField:
    """Read a snapshot CSV back onto ``grid``; the x column must match it."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read field file {path}: {exc}") from exc
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].split(",")[:2] != ["x", "u"]:
        raise ConfigError(f"field file {path} must start with an 'x,u' header")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 2:
            raise ConfigError(f"{path}:{lineno}: expected 'x,u', got {line!r}")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: malformed number in {line!r}") from None
    if len(rows) != grid.nx:
        raise ConfigError(
            f"field file {path} has {len(rows)} rows but the grid has {grid.nx} points"
        )
    xs = np.array([r[0] for r in rows])
    us = np.array([r[1] for r in rows])
    expected = grid.points()
    tol = 1e-9 * (1.0 + np.max(np.abs(expected)))
    if np.max(np.abs(xs - expected)) > tol:
        raise ConfigError(f"field file {path} x column does not match the grid")
    return WaveField(grid, time, us)


def write_run_outputs(out_dir: Path, echo_lines, result: RunResult) -> Tuple[list, Path]:
    """Write per-snapshot CSVs and ``run.meta``; returns (csv paths, meta path)."""
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for snap in result.snapshots:
        path = out_dir / snapshot_filename(snap.time)
        write_field_csv(path, snap)
        paths.append(path)

    meta = ["# kdvlab run metadata"]
    meta.append(f"outcome = {result.outcome}")
    meta.append(
        "blow_up_step = " + ("" if result.blow_up_step is None else str(result.blow_up_step))
    )
    meta.extend(echo_lines)
    meta.append(f"snapshot_count = {len(result.snapshots)}")
    for snap, diag in zip(result.snapshots, result.diagnostics):
        meta.append(
            f"snapshot t = {time_label(snap.time)} file = {snapshot_filename(snap.time)} "
            f"mass = {_fmt(diag.mass)} max_abs = {_fmt(diag.max_abs)} "
            f"peak_x = {_fmt(diag.peak_x)}"
        )
    meta_path = out_dir / "run.meta"
    meta_path.write_text("\n".join(meta) + "\n", encoding="utf-8")
    return paths, meta_path
