"""Command-line interface: run, scan, eigen, converge.

Each subcommand reads an optional ``--config`` file of ``key = value``
lines and accepts ``--<key> <value>`` overrides for the same keys.
Exit codes: 0 completed, 1 usage or I/O error, 2 blow-up (outputs are
still written).
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .analysis import observed_order, stability_scan
from .banded import (
    Pentadiagonal,
    gram_power_iteration,
    invertibility_certificate,
    power_iteration,
)
from .config import (
    ConvergeConfig,
    RunConfig,
    ScanConfig,
    parse_config,
    parse_converge_config,
    parse_eigen_config,
    parse_scan_config,
)
from .crank_nicolson import assemble_lagged, run_cn
from .errors import ConfigError, KdvLabError
from .evolution import RunResult
from .explicit import run_explicit
from .model import Grid1D, SchemeParams
from .runio import write_run_outputs

__all__ = [
    "cmd_run",
    "cmd_scan",
    "cmd_eigen",
    "cmd_converge",
    "eigen_report_text",
    "main",
]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BLOW_UP = 2


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def execute_run(cfg: RunConfig) -> RunResult:
    """Run the configured scheme and return the result (no file output)."""
    ic = cfg.initial_field()
    time = cfg.time_grid()
    if cfg.scheme == "explicit":
        return run_explicit(ic, cfg.explicit_config(), time, cfg.snapshot_times)
    return run_cn(ic, cfg.cn_config(), time, cfg.snapshot_times)


def cmd_run(cfg: RunConfig) -> int:
    """Execute a run and write snapshot CSVs plus ``run.meta``."""
    result = execute_run(cfg)
    write_run_outputs(cfg.output_dir, cfg.echo_lines(), result)
    return EXIT_OK if result.completed else EXIT_BLOW_UP


def cmd_scan(cfg: ScanConfig) -> int:
    """Write ``scan.csv``: max |lambda| over theta per (alpha, beta, u0)."""
    thetas = np.linspace(0.0, math.pi, cfg.n_theta)
    params_list = [
        SchemeParams.from_alpha_beta(a, b) for a in cfg.alpha_list for b in cfg.beta_list
    ]
    u0_list = cfg.u0_list if cfg.u0_list else (0.0,)
    rows = stability_scan(cfg.scheme, params_list, u0_list, thetas)
    lines = ["alpha,beta,u0,max_abs_lambda"]
    for row in rows:
        lines.append(
            f"{_fmt(row.params.alpha)},{_fmt(row.params.beta)},"
            f"{_fmt(row.u0)},{_fmt(row.max_magnitude)}"
        )
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    (cfg.output_dir / "scan.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return EXIT_OK


def eigen_report_text(
    A: Pentadiagonal, tol: float = 1e-10, max_iters: int = 10_000
) -> str:
    """Spectral probe report for one matrix: both probes plus the certificate."""
    b0 = np.ones(A.n) / math.sqrt(A.n)
    plain = power_iteration(A, b0, tol=tol, max_iters=max_iters)
    gram = gram_power_iteration(A, tol=tol, max_iters=max_iters)
    cert = invertibility_certificate(A)
    lines = [
        f"n = {A.n}",
        "power_iteration: "
        f"estimate = {_fmt(plain.estimate)} iterations = {plain.iterations} "
        f"converged = {str(plain.converged).lower()} residual = {_fmt(plain.residual)}",
        "gram_power_iteration: "
        f"sigma_max = {_fmt(gram.estimate)} iterations = {gram.iterations} "
        f"converged = {str(gram.converged).lower()} residual = {_fmt(gram.residual)}",
        f"certificate: method = {cert.method} certified = {str(cert.certified).lower()}",
        f"certificate_detail: {cert.detail}",
    ]
    return "\n".join(lines) + "\n"


def cmd_eigen(cfg: RunConfig, out=sys.stdout) -> int:
    """Probe the lagged-coefficient matrix A assembled from the initial state."""
    ic = cfg.initial_field()
    A, _ = assemble_lagged(ic, cfg.cn_config())
    header = (
        "kdvlab eigen probe\n"
        f"matrix: lagged-coefficient interior A at t = 0 ({cfg.gamma_mode})\n"
        f"alpha = {_fmt(cfg.scheme_params().alpha)} beta = {_fmt(cfg.scheme_params().beta)}\n"
    )
    out.write(header + eigen_report_text(A, cfg.power_tol, cfg.power_max_iters))
    return EXIT_OK


def _level_setup(cfg: ConvergeConfig, level: int):
    """Grid, dt, and refinement scale h for one refinement level."""
    factor = 2**level
    if cfg.refine == "time":
        grid = cfg.grid()
        dt = cfg.dt / factor
        h = dt
    elif cfg.refine == "space":
        grid = Grid1D(cfg.x_min, cfg.x_max, (cfg.nx - 1) * factor + 1)
        dt = cfg.dt
        h = grid.dx
    else:
        grid = Grid1D(cfg.x_min, cfg.x_max, (cfg.nx - 1) * factor + 1)
        dt = cfg.dt / factor
        h = grid.dx
    return grid, dt, h


def converge_study(cfg: ConvergeConfig):
    """Run all refinement levels; returns (h per level, final fields, errors).

    Errors compare each level's final state against the finest level on
    the coarse level's grid points (sup norm).  The finest level itself
    has no error entry.
    """
    finals = []
    hs = []
    for level in range(cfg.levels):
        grid, dt, h = _level_setup(cfg, level)
        level_cfg = RunConfig(**{
            **{f: getattr(cfg, f) for f in (
                "scheme", "gamma_mode", "x_min", "x_max", "ic_kind", "ic_value",
                "paper_normalization", "output_dir",
            )},
            "nx": grid.nx,
            "dt": dt,
            "t_end": cfg.t_end,
            "snapshot_times": (cfg.t_end,),
        })
        level_cfg.validate()
        result = execute_run(level_cfg)
        if not result.completed:
            raise KdvLabError(
                f"refinement level {level} blew up at step {result.blow_up_step}"
            )
        finals.append(result.snapshots[-1])
        hs.append(h)

    errors = []
    finest = finals[-1]
    for level in range(cfg.levels - 1):
        if cfg.refine == "time":
            diff = finals[level].values - finest.values
        else:
            stride = 2 ** (cfg.levels - 1 - level)
            diff = finals[level].values - finest.values[::stride]
        errors.append(float(np.max(np.abs(diff))))
    return hs, finals, errors


def cmd_converge(cfg: ConvergeConfig) -> int:
    """Run the refinement study and write ``converge.csv`` plus ``converge.meta``."""
    hs, _, errors = converge_study(cfg)

    lines = ["level,h,error_vs_finest,pairwise_order"]
    for level, h in enumerate(hs):
        err = _fmt(errors[level]) if level < len(errors) else ""
        order = ""
        if 1 <= level < len(errors) and errors[level - 1] > 0 and errors[level] > 0:
            order = _fmt(
                math.log2(errors[level - 1] / errors[level])
                / math.log2(hs[level - 1] / hs[level])
            )
        lines.append(f"{level},{_fmt(h)},{err},{order}")

    positive = [(h, e) for h, e in zip(hs, errors) if e > 0]
    if len(positive) >= 2:
        order_line = f"observed_order = {_fmt(observed_order(positive))}"
    elif any(e == 0.0 for e in errors):
        order_line = "observed_order = undefined (zero errors)"
    else:
        order_line = "observed_order = undefined (needs at least two error points)"

    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    (cfg.output_dir / "converge.csv").write_text(
        "\n".join(lines) + "\n", encoding="utf-8"
    )
    meta = ["# kdvlab converge metadata"]
    meta.extend(cfg.echo_lines())
    meta.append(f"levels = {cfg.levels}")
    meta.append(f"refine = {cfg.refine}")
    meta.append(order_line)
    (cfg.output_dir / "converge.meta").write_text(
        "\n".join(meta) + "\n", encoding="utf-8"
    )
    return EXIT_OK


_RUN_KEYS = (
    "scheme", "gamma_mode", "x_min", "x_max", "nx", "dt", "t_end", "ic",
    "snapshot_times", "paper_normalization", "output_dir",
)
_EIGEN_KEYS = _RUN_KEYS + ("power_tol", "power_max_iters")
_SCAN_KEYS = ("scheme", "alpha_list", "beta_list", "u0_list", "n_theta", "output_dir")
_CONVERGE_KEYS = (
    "scheme", "gamma_mode", "x_min", "x_max", "nx", "dt", "t_end", "ic",
    "paper_normalization", "output_dir", "levels", "refine",
)


def _add_subcommand(sub, name: str, help_text: str, keys: Sequence[str]):
    p = sub.add_parser(name, help=help_text)
    p.add_argument("--config", type=Path, default=None, help="key=value config file")
    for key in keys:
        p.add_argument(f"--{key}", dest=f"key_{key}", default=None, metavar="VALUE")
    return p


def _gather_text(args, keys: Sequence[str]) -> str:
    chunks: List[str] = []
    if args.config is not None:
        chunks.append(Path(args.config).read_text(encoding="utf-8"))
    for key in keys:
        value = getattr(args, f"key_{key}")
        if value is not None:
            chunks.append(f"{key} = {value}")
    return "\n".join(chunks)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="kdvlab",
        description="Finite-difference laboratory for the KdV equation",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_subcommand(sub, "run", "time-step a scheme and write snapshot CSVs", _RUN_KEYS)
    _add_subcommand(sub, "scan", "amplification-factor stability scan", _SCAN_KEYS)
    _add_subcommand(sub, "eigen", "spectral probes of the implicit matrix", _EIGEN_KEYS)
    _add_subcommand(sub, "converge", "grid-refinement convergence study", _CONVERGE_KEYS)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage problems; fold into the documented code 1
        return EXIT_USAGE if exc.code else EXIT_OK

    try:
        if args.command == "run":
            return cmd_run(parse_config(_gather_text(args, _RUN_KEYS)))
        if args.command == "scan":
            return cmd_scan(parse_scan_config(_gather_text(args, _SCAN_KEYS)))
        if args.command == "eigen":
            return cmd_eigen(parse_eigen_config(_gather_text(args, _EIGEN_KEYS)))
        return cmd_converge(parse_converge_config(_gather_text(args, _CONVERGE_KEYS)))
    except (ConfigError, KdvLabError, OSError, ValueError) as exc:
        print(f"kdvlab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
