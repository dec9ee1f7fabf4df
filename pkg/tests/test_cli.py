"""Tests for config parsing, the CLI subcommands, and file formats."""

import io
import math

import numpy as np
import pytest

from kdvlab.banded import Pentadiagonal
from kdvlab.cli import cmd_eigen, eigen_report_text, main
from kdvlab.config import (
    parse_config,
    parse_converge_config,
    parse_eigen_config,
    parse_scan_config,
)
from kdvlab.errors import ConfigError
from kdvlab.model import Grid1D, WaveField
from kdvlab.runio import read_field_csv, snapshot_filename, time_label, write_field_csv


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def test_empty_config_is_demo_preset():
    cfg = parse_config("")
    assert cfg.scheme == "cn-lagged"
    assert cfg.gamma_mode == "frozen-midpoint"
    assert (cfg.x_min, cfg.x_max, cfg.nx) == (-20.0, 20.0, 4001)
    assert cfg.dt == 0.01
    assert cfg.t_end == 10.0
    assert cfg.ic_kind == "appendix"
    assert cfg.snapshot_times == tuple(k + 0.01 for k in range(1, 9))
    assert cfg.paper_normalization is False


def test_config_rejects_negative_dt_by_name():
    with pytest.raises(ConfigError, match="dt"):
        parse_config("dt = -1")


def test_config_rejects_unknown_key_with_line():
    with pytest.raises(ConfigError, match="line 2"):
        parse_config("dt = 0.5\nwavelength = 3")


def test_config_implicit_traveling():
    cfg = parse_config("scheme = cn-implicit\nic = traveling 0.5")
    assert cfg.scheme == "cn-implicit"
    assert cfg.ic_kind == "traveling"
    assert cfg.ic_value == 0.5


def test_config_wave_speed_ic():
    cfg = parse_config("ic = paper-eq2 4.0\nnx = 201\nx_min = -10\nx_max = 10")
    field = cfg.initial_field()
    assert field.values[100] == pytest.approx(0.5, abs=1e-15)  # c/8 at x = 0


def test_config_comments_and_blank_lines():
    cfg = parse_config("# a comment\n\n nx = 101  # trailing note\n")
    assert cfg.nx == 101


def test_config_value_diagnostics_name_the_line():
    with pytest.raises(ConfigError, match="line 1"):
        parse_config("nx = many")
    with pytest.raises(ConfigError, match="snapshot_times"):
        parse_config("t_end = 1\nsnapshot_times = 0.5, 0.2")
    with pytest.raises(ConfigError, match="ic"):
        parse_config("ic = traveling")
    with pytest.raises(ConfigError, match="paper_normalization"):
        parse_config("paper_normalization = maybe")


def test_run_config_rejects_eigen_keys():
    with pytest.raises(ConfigError):
        parse_config("power_tol = 1e-8")
    assert parse_eigen_config("power_tol = 1e-8").power_tol == 1e-8


def test_scan_and_converge_parsing():
    scan = parse_scan_config("scheme = explicit\nalpha_list = 0.1, 1\nu0_list = -1 0 1")
    assert scan.scheme == "explicit"
    assert scan.alpha_list == (0.1, 1.0)
    assert scan.u0_list == (-1.0, 0.0, 1.0)
    conv = parse_converge_config("levels = 2\nrefine = time")
    assert conv.levels == 2
    assert conv.refine == "time"
    with pytest.raises(ConfigError):
        parse_converge_config("refine = sideways")
    with pytest.raises(ConfigError):
        parse_converge_config("dt = 0.3\nt_end = 1.0")  # not an integer step count


# ---------------------------------------------------------------------------
# CSV round trip
# ---------------------------------------------------------------------------

def test_field_csv_round_trips_exactly(tmp_path):
    rng = np.random.default_rng(61)
    g = Grid1D(-3.0, 3.0, 41)
    f = WaveField(g, 0.0, rng.standard_normal(41))
    path = tmp_path / "field.csv"
    write_field_csv(path, f)
    back = read_field_csv(path, g)
    assert np.array_equal(back.values, f.values)


def test_field_csv_validates_grid(tmp_path):
    g = Grid1D(-3.0, 3.0, 41)
    write_field_csv(tmp_path / "f.csv", WaveField(g, 0.0, np.zeros(41)))
    with pytest.raises(ConfigError):
        read_field_csv(tmp_path / "f.csv", Grid1D(-3.0, 3.0, 21))
    with pytest.raises(ConfigError):
        read_field_csv(tmp_path / "missing.csv", g)


def test_time_labels_snap_to_step_decimals():
    assert time_label(101 * 0.01) == "1.01"
    assert time_label(201 * 0.01) == "2.01"
    assert time_label(801 * 0.01) == "8.01"
    assert snapshot_filename(101 * 0.01) == "snapshot_t1.01.csv"


# ---------------------------------------------------------------------------
# run command
# ---------------------------------------------------------------------------

def small_run_args(tmp_path, **extra):
    base = {
        "x_min": "-10",
        "x_max": "10",
        "nx": "201",
        "dt": "0.01",
        "t_end": "0.5",
        "snapshot_times": "0.1,0.5",
        "ic": "traveling 0.5",
        "scheme": "cn-lagged",
        "gamma_mode": "row-varying",
        "output_dir": str(tmp_path / "out"),
    }
    base.update(extra)
    args = ["run"]
    for key, value in base.items():
        args.extend([f"--{key}", value])
    return args


def test_run_command_completes_and_writes(tmp_path):
    assert main(small_run_args(tmp_path)) == 0
    out = tmp_path / "out"
    assert (out / "snapshot_t0.1.csv").exists()
    assert (out / "snapshot_t0.5.csv").exists()
    meta = (out / "run.meta").read_text()
    assert "outcome = completed" in meta
    assert "snapshot_count = 2" in meta
    assert "scheme = cn-lagged" in meta


def test_run_command_zero_ic_file(tmp_path):
    g = Grid1D(-10.0, 10.0, 201)
    ic_path = tmp_path / "zeros.csv"
    write_field_csv(ic_path, WaveField(g, 0.0, np.zeros(201)))
    assert main(small_run_args(tmp_path, ic=f"file {ic_path}")) == 0
    back = read_field_csv(tmp_path / "out" / "snapshot_t0.5.csv", g)
    assert np.array_equal(back.values, np.zeros(201))


def test_run_command_blow_up_exit_code(tmp_path):
    # explicit scheme with dt = dx amplifies immediately
    code = main(small_run_args(tmp_path, scheme="explicit", dt="0.1", t_end="2",
                               snapshot_times="2"))
    assert code == 2
    meta = (tmp_path / "out" / "run.meta").read_text()
    assert "outcome = blow-up" in meta
    assert "blow_up_step = " in meta


def test_run_command_usage_errors(tmp_path):
    assert main(["run", "--dt", "-1"]) == 1
    assert main(["run", "--nonsense", "3"]) == 1
    cfg_file = tmp_path / "cfg.txt"
    cfg_file.write_text("dt = 0.02\nnx = 101\nx_min = -5\nx_max = 5\n"
                        "t_end = 0.1\nsnapshot_times = 0.1\n"
                        f"output_dir = {tmp_path/'o'}\n")
    # override beats the file value
    assert main(["run", "--config", str(cfg_file), "--t_end", "0.2",
                 "--snapshot_times", "0.2"]) == 0


def test_run_outputs_byte_identical(tmp_path):
    a1 = small_run_args(tmp_path, output_dir=str(tmp_path / "a"))
    a2 = small_run_args(tmp_path, output_dir=str(tmp_path / "b"))
    assert main(a1) == 0 and main(a2) == 0
    for name in ("snapshot_t0.5.csv", "run.meta"):
        left = (tmp_path / "a" / name).read_bytes()
        right = (tmp_path / "b" / name).read_bytes().replace(
            str(tmp_path / "b").encode(), str(tmp_path / "a").encode()
        )
        assert left == right


# ---------------------------------------------------------------------------
# scan command
# ---------------------------------------------------------------------------

def test_scan_command_cn_grid(tmp_path):
    assert main(["scan", "--scheme", "cn", "--alpha_list", "0.5,40",
                 "--beta_list", "0.2,2", "--u0_list=-1,1",
                 "--n_theta", "65", "--output_dir", str(tmp_path)]) == 0
    lines = (tmp_path / "scan.csv").read_text().splitlines()
    assert lines[0] == "alpha,beta,u0,max_abs_lambda"
    assert len(lines) == 9
    for line in lines[1:]:
        assert abs(float(line.split(",")[3]) - 1.0) < 1e-12


def test_scan_command_empty_grid(tmp_path):
    assert main(["scan", "--alpha_list", "", "--output_dir", str(tmp_path)]) == 0
    assert (tmp_path / "scan.csv").read_text() == "alpha,beta,u0,max_abs_lambda\n"


def test_scan_command_explicit_reference_row(tmp_path):
    assert main(["scan", "--scheme", "explicit", "--alpha_list", "0.1",
                 "--beta_list", "1", "--u0_list", "0",
                 "--n_theta", "721", "--output_dir", str(tmp_path)]) == 0
    row = (tmp_path / "scan.csv").read_text().splitlines()[1]
    got = float(row.split(",")[3])
    # max_theta |1 + i alpha (2 sin t - sin 2t)| at alpha = 0.1
    expected = math.sqrt(1.0 + (0.1 * 1.5 * math.sqrt(3.0)) ** 2)
    assert got == pytest.approx(expected, abs=1e-4)


# ---------------------------------------------------------------------------
# eigen command
# ---------------------------------------------------------------------------

def test_eigen_command_frozen_midpoint(tmp_path):
    buf = io.StringIO()
    cfg = parse_eigen_config("nx = 54\npower_max_iters = 500")
    assert cmd_eigen(cfg, out=buf) == 0
    report = buf.getvalue()
    assert "method = identity-plus-skew" in report
    assert "certified = true" in report


def test_eigen_report_identity_sigma():
    report = eigen_report_text(Pentadiagonal.identity(12))
    assert "sigma_max = 1" in report
    assert "certified = true" in report


def test_eigen_report_singular_fixture():
    P = Pentadiagonal(
        sub2=np.zeros(4),
        sub1=np.zeros(5),
        diag=np.array([1.0, 1.0, 0.0, 1.0, 1.0, 1.0]),
        sup1=np.zeros(5),
        sup2=np.zeros(4),
    )
    report = eigen_report_text(P)
    assert "certified = false" in report


# ---------------------------------------------------------------------------
# converge command
# ---------------------------------------------------------------------------

def converge_args(tmp_path, **extra):
    base = {
        "x_min": "-16",
        "x_max": "20",
        "nx": "226",
        "dt": "0.02",
        "t_end": "0.2",
        "ic": "traveling 0.5",
        "levels": "3",
        "refine": "both",
        "output_dir": str(tmp_path),
    }
    base.update(extra)
    args = ["converge"]
    for key, value in base.items():
        args.extend([f"--{key}", value])
    return args


def test_converge_command_three_levels(tmp_path):
    assert main(converge_args(tmp_path)) == 0
    lines = (tmp_path / "converge.csv").read_text().splitlines()
    assert lines[0] == "level,h,error_vs_finest,pairwise_order"
    assert len(lines) == 4
    meta = (tmp_path / "converge.meta").read_text()
    assert "observed_order = " in meta
    order = float(meta.split("observed_order = ")[1].split()[0])
    assert order >= 0.8


def test_converge_command_single_level(tmp_path):
    assert main(converge_args(tmp_path, levels="1")) == 0
    lines = (tmp_path / "converge.csv").read_text().splitlines()
    assert len(lines) == 2
    assert lines[1].endswith(",,")  # error and order columns empty
    meta = (tmp_path / "converge.meta").read_text()
    assert "undefined" in meta


def test_converge_command_zero_ic_flags_undefined(tmp_path):
    g = Grid1D(-16.0, 20.0, 226)
    ic_path = tmp_path / "zeros.csv"
    write_field_csv(ic_path, WaveField(g, 0.0, np.zeros(226)))
    assert main(converge_args(tmp_path, ic=f"file {ic_path}", refine="time")) == 0
    lines = (tmp_path / "converge.csv").read_text().splitlines()
    errs = [line.split(",")[2] for line in lines[1:3]]
    assert all(float(e) == 0.0 for e in errs)
    assert "undefined" in (tmp_path / "converge.meta").read_text()
