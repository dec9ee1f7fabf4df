"""Key=value run configuration: parsing, validation, defaults.

The accepted format is one ``key = value`` per line, ``#`` starting a
comment, blank lines ignored.  Unknown keys are rejected, and every
constraint violation names the offending line or key.  The defaults
reproduce the reference demo pipeline: the [-20, 20] grid with 4001
points, dt = 0.01, frozen-midpoint Crank-Nicolson, and snapshots at
t = 1.01 ... 8.01.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

from .crank_nicolson import CnConfig, GammaMode, LinearizationKind
from .errors import ConfigError
from .explicit import ExplicitConfig
from .model import (
    Grid1D,
    SchemeParams,
    TimeGrid,
    WaveField,
    appendix_profile,
    initial_condition,
    traveling_wave,
)

__all__ = [
    "RunConfig",
    "ScanConfig",
    "ConvergeConfig",
    "parse_config",
    "parse_eigen_config",
    "parse_scan_config",
    "parse_converge_config",
]

SCHEMES = ("explicit", "cn-lagged", "cn-implicit")
GAMMA_MODES = ("row-varying", "frozen-midpoint")
IC_KINDS = ("appendix", "paper-eq2", "traveling", "file")
REFINE_MODES = ("time", "space", "both")

DEFAULT_SNAPSHOTS = tuple(k + 0.01 for k in range(1, 9))


@dataclass
class RunConfig:
    """Fully validated configuration for one time-stepped run."""

    scheme: str = "cn-lagged"
    gamma_mode: str = "frozen-midpoint"
    x_min: float = -20.0
    x_max: float = 20.0
    nx: int = 4001
    dt: float = 0.01
    t_end: float = 10.0
    ic_kind: str = "appendix"
    ic_value: Optional[object] = None
    snapshot_times: Tuple[float, ...] = DEFAULT_SNAPSHOTS
    paper_normalization: bool = False
    output_dir: Path = Path("out")
    # eigen-probe extras (ignored by the run command)
    power_tol: float = 1e-10
    power_max_iters: int = 10_000

    def validate(self) -> None:
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.gamma_mode not in GAMMA_MODES:
            raise ConfigError(
                f"gamma_mode must be one of {GAMMA_MODES}, got {self.gamma_mode!r}"
            )
        if not self.x_max > self.x_min:
            raise ConfigError(
                f"x_max ({self.x_max}) must exceed x_min ({self.x_min})"
            )
        if self.nx < 7:
            raise ConfigError(f"nx must be an integer >= 7, got {self.nx}")
        if self.dt <= 0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.t_end <= 0:
            raise ConfigError(f"t_end must be positive, got {self.t_end}")
        if self.ic_kind not in IC_KINDS:
            raise ConfigError(f"ic must be one of {IC_KINDS}, got {self.ic_kind!r}")
        if self.ic_kind in ("paper-eq2", "traveling"):
            if not isinstance(self.ic_value, float) or self.ic_value <= 0:
                raise ConfigError(
                    f"ic {self.ic_kind} needs a positive speed parameter, got {self.ic_value!r}"
                )
        if self.ic_kind == "file" and not self.ic_value:
            raise ConfigError("ic file needs a path")
        times = self.snapshot_times
        for a, b in zip(times, times[1:]):
            if b < a:
                raise ConfigError(
                    f"snapshot_times must be ascending, got {a} before {b}"
                )
        if times and (times[0] < 0.0 or times[-1] > self.t_end):
            raise ConfigError(
                f"snapshot_times must lie in [0, t_end={self.t_end}], got {times}"
            )
        if self.power_tol <= 0:
            raise ConfigError(f"power_tol must be positive, got {self.power_tol}")
        if self.power_max_iters < 1:
            raise ConfigError(
                f"power_max_iters must be >= 1, got {self.power_max_iters}"
            )

    def grid(self) -> Grid1D:
        return Grid1D(self.x_min, self.x_max, self.nx)

    def time_grid(self) -> TimeGrid:
        return TimeGrid(self.t_end, self.dt)

    def scheme_params(self) -> SchemeParams:
        return SchemeParams.from_grid(self.grid(), self.dt)

    def initial_field(self) -> WaveField:
        grid = self.grid()
        if self.ic_kind == "appendix":
            return appendix_profile(grid)
        if self.ic_kind == "paper-eq2":
            return initial_condition(grid, float(self.ic_value))
        if self.ic_kind == "traveling":
            return traveling_wave(grid, float(self.ic_value), 0.0)
        from .runio import read_field_csv  # local import: runio imports this module's types

        return read_field_csv(Path(str(self.ic_value)), grid)

    def cn_config(self) -> CnConfig:
        linearization = (
            LinearizationKind.IMPLICIT_COEFFICIENT
            if self.scheme == "cn-implicit"
            else LinearizationKind.LAGGED_COEFFICIENT
        )
        gamma = (
            GammaMode.FROZEN_MIDPOINT
            if self.gamma_mode == "frozen-midpoint"
            else GammaMode.ROW_VARYING
        )
        return CnConfig(
            params=self.scheme_params(),
            linearization=linearization,
            gamma_mode=gamma,
            paper_normalization=self.paper_normalization,
        )

    def explicit_config(self) -> ExplicitConfig:
        return ExplicitConfig(params=self.scheme_params())

    def echo_lines(self) -> list:
        """Config echo as deterministic key=value lines."""
        ic = self.ic_kind
        if self.ic_value is not None:
            ic = f"{self.ic_kind} {self.ic_value}"
        return [
            f"scheme = {self.scheme}",
            f"gamma_mode = {self.gamma_mode}",
            f"x_min = {self.x_min!r}",
            f"x_max = {self.x_max!r}",
            f"nx = {self.nx}",
            f"dt = {self.dt!r}",
            f"t_end = {self.t_end!r}",
            f"ic = {ic}",
            "snapshot_times = " + ",".join(repr(t) for t in self.snapshot_times),
            f"paper_normalization = {'on' if self.paper_normalization else 'off'}",
            f"output_dir = {self.output_dir}",
        ]


@dataclass
class ScanConfig:
    """Parameter grids for a stability scan."""

    scheme: str = "cn"
    alpha_list: Tuple[float, ...] = (1000.0,)
    beta_list: Tuple[float, ...] = (1.0,)
    u0_list: Tuple[float, ...] = (0.0,)
    n_theta: int = 257
    output_dir: Path = Path("out")

    def validate(self) -> None:
        if self.scheme not in ("cn", "explicit"):
            raise ConfigError(
                f"scan scheme must be 'cn' or 'explicit', got {self.scheme!r}"
            )
        for name, values in (("alpha_list", self.alpha_list), ("beta_list", self.beta_list)):
            for v in values:
                if v <= 0:
                    raise ConfigError(f"{name} entries must be positive, got {v}")
        if self.n_theta < 2:
            raise ConfigError(f"n_theta must be >= 2, got {self.n_theta}")


@dataclass
class ConvergeConfig(RunConfig):
    """Run configuration plus refinement controls for a convergence study."""

    levels: int = 3
    refine: str = "both"
    snapshot_times: Tuple[float, ...] = ()
    ic_kind: str = "traveling"
    ic_value: Optional[object] = 0.5
    gamma_mode: str = "row-varying"
    x_min: float = -16.0
    x_max: float = 20.0
    nx: int = 451
    dt: float = 0.02
    t_end: float = 1.0

    def validate(self) -> None:
        super().validate()
        if self.levels < 1:
            raise ConfigError(f"levels must be >= 1, got {self.levels}")
        if self.refine not in REFINE_MODES:
            raise ConfigError(
                f"refine must be one of {REFINE_MODES}, got {self.refine!r}"
            )
        steps = self.t_end / self.dt
        if abs(steps - round(steps)) > 1e-9 * max(1.0, steps):
            raise ConfigError(
                f"t_end ({self.t_end}) must be an integer multiple of dt ({self.dt}) "
                "so refined runs end at a common time"
            )


def _strip_comment(line: str) -> str:
    idx = line.find("#")
    return line if idx < 0 else line[:idx]


def _parse_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        yield lineno, key.strip(), value.strip()


def _ctx(lineno: Optional[int], key: str) -> str:
    return f"line {lineno}: key {key!r}" if lineno is not None else f"key {key!r}"


def _as_float(value: str, lineno, key) -> float:
    try:
        out = float(value)
    except ValueError:
        raise ConfigError(f"{_ctx(lineno, key)}: not a number: {value!r}") from None
    if not math.isfinite(out):
        raise ConfigError(f"{_ctx(lineno, key)}: value must be finite, got {value!r}")
    return out


def _as_int(value: str, lineno, key) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{_ctx(lineno, key)}: not an integer: {value!r}") from None


def _as_bool(value: str, lineno, key) -> bool:
    lowered = value.lower()
    if lowered in ("on", "true", "yes", "1"):
        return True
    if lowered in ("off", "false", "no", "0"):
        return False
    raise ConfigError(f"{_ctx(lineno, key)}: expected on/off, got {value!r}")


def _as_float_list(value: str, lineno, key) -> Tuple[float, ...]:
    parts = [p for chunk in value.split(",") for p in chunk.split()]
    return tuple(_as_float(p, lineno, key) for p in parts)


def _apply_run_key(cfg: RunConfig, key: str, value: str, lineno) -> bool:
    """Set one RunConfig field from text; returns False for unknown keys."""
    if key == "scheme":
        cfg.scheme = value
    elif key == "gamma_mode":
        cfg.gamma_mode = value
    elif key == "x_min":
        cfg.x_min = _as_float(value, lineno, key)
    elif key == "x_max":
        cfg.x_max = _as_float(value, lineno, key)
    elif key == "nx":
        cfg.nx = _as_int(value, lineno, key)
    elif key == "dt":
        cfg.dt = _as_float(value, lineno, key)
    elif key == "t_end":
        cfg.t_end = _as_float(value, lineno, key)
    elif key == "ic":
        parts = value.split(None, 1)
        cfg.ic_kind = parts[0] if parts else ""
        cfg.ic_value = None
        if len(parts) == 2:
            if cfg.ic_kind == "file":
                cfg.ic_value = parts[1]
            else:
                cfg.ic_value = _as_float(parts[1], lineno, key)
        elif cfg.ic_kind in ("paper-eq2", "traveling"):
            raise ConfigError(
                f"{_ctx(lineno, key)}: ic {cfg.ic_kind} needs a parameter, "
                f"e.g. 'ic = {cfg.ic_kind} 0.5'"
            )
        elif cfg.ic_kind == "file":
            raise ConfigError(f"{_ctx(lineno, key)}: ic file needs a path")
    elif key == "snapshot_times":
        cfg.snapshot_times = _as_float_list(value, lineno, key)
    elif key == "paper_normalization":
        cfg.paper_normalization = _as_bool(value, lineno, key)
    elif key == "output_dir":
        cfg.output_dir = Path(value)
    elif key == "power_tol":
        cfg.power_tol = _as_float(value, lineno, key)
    elif key == "power_max_iters":
        cfg.power_max_iters = _as_int(value, lineno, key)
    else:
        return False
    return True


_EIGEN_ONLY_KEYS = ("power_tol", "power_max_iters")


def parse_config(text: str) -> RunConfig:
    """Parse and validate a run configuration; empty text gives the demo preset."""
    cfg = RunConfig()
    for lineno, key, value in _parse_lines(text):
        if key in _EIGEN_ONLY_KEYS:
            raise ConfigError(f"{_ctx(lineno, key)}: unknown key for the run command")
        if not _apply_run_key(cfg, key, value, lineno):
            raise ConfigError(f"{_ctx(lineno, key)}: unknown key")
    cfg.validate()
    return cfg


def parse_eigen_config(text: str) -> RunConfig:
    """Like :func:`parse_config` but also accepts the power-probe keys."""
    cfg = RunConfig()
    for lineno, key, value in _parse_lines(text):
        if not _apply_run_key(cfg, key, value, lineno):
            raise ConfigError(f"{_ctx(lineno, key)}: unknown key")
    cfg.validate()
    return cfg


def parse_scan_config(text: str) -> ScanConfig:
    """Parse a stability-scan configuration."""
    cfg = ScanConfig()
    for lineno, key, value in _parse_lines(text):
        if key == "scheme":
            cfg.scheme = value
        elif key == "alpha_list":
            cfg.alpha_list = _as_float_list(value, lineno, key)
        elif key == "beta_list":
            cfg.beta_list = _as_float_list(value, lineno, key)
        elif key == "u0_list":
            cfg.u0_list = _as_float_list(value, lineno, key)
        elif key == "n_theta":
            cfg.n_theta = _as_int(value, lineno, key)
        elif key == "output_dir":
            cfg.output_dir = Path(value)
        else:
            raise ConfigError(f"{_ctx(lineno, key)}: unknown key")
    cfg.validate()
    return cfg


def parse_converge_config(text: str) -> ConvergeConfig:
    """Parse a convergence-study configuration."""
    cfg = ConvergeConfig()
    for lineno, key, value in _parse_lines(text):
        if key == "levels":
            cfg.levels = _as_int(value, lineno, key)
        elif key == "refine":
            cfg.refine = value
        elif key in _EIGEN_ONLY_KEYS or key == "snapshot_times":
            raise ConfigError(
                f"{_ctx(lineno, key)}: unknown key for the converge command"
            )
        elif not _apply_run_key(cfg, key, value, lineno):
            raise ConfigError(f"{_ctx(lineno, key)}: unknown key")
    cfg.validate()
    return cfg
