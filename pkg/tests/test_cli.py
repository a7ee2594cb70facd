"""Tests for the command-line front-end."""

import os

import numpy as np
import pytest

from anisonorm.cli import main as cli_main
from anisonorm.cli import transfer as cli_transfer
from anisonorm.config import get_settings
from anisonorm.models.grid import GridFunction
from anisonorm.repositories import GridContainerRepository
from anisonorm.schemas.estimates import TransferReport


def _config(config_dir: str, name: str) -> str:
    return os.path.join(config_dir, f"{name}.conf")


def test_exponents_writes_tables(config_dir, tmp_path, capsys):
    code = cli_main.main(
        ["exponents", "--config", _config(config_dir, "riesz_gamma_half"), "--out", str(tmp_path)]
    )

    assert code == 0
    assert "RieszFull with 1 block(s)" in capsys.readouterr().out
    exponents = (tmp_path / "exponents.csv").read_text().splitlines()
    assert exponents[1] == "# kind=endpoints"
    assert (tmp_path / "envelope.csv").exists()


def test_fourier_exponents_report_equal_q_condition(config_dir, tmp_path, capsys):
    code = cli_main.main(
        ["exponents", "--config", _config(config_dir, "transfer_fourier"), "--out", str(tmp_path)]
    )

    assert code == 0
    assert "equal p gives equal q: true" in capsys.readouterr().out


def test_missing_config_is_exit_1(tmp_path, capsys):
    code = cli_main.main(["exponents", "--config", str(tmp_path / "nope.conf")])

    assert code == cli_main.EXIT_CONFIG
    assert "error: ConfigurationError" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["scan", "--threads", "many"],
    ],
)
def test_usage_errors_are_exit_1(argv):
    with pytest.raises(SystemExit) as excinfo:
        cli_main.main(argv)
    assert excinfo.value.code == 1


def test_zero_threads_rejected(config_dir):
    argv = ["exponents", "--config", _config(config_dir, "riesz_gamma_half"), "--threads", "0"]
    assert cli_main.main(argv) == cli_main.EXIT_CONFIG


def test_mixture_scan_has_no_numeric_route(config_dir, tmp_path, capsys):
    argv = ["scan", "--config", _config(config_dir, "mixture_exponents"), "--out", str(tmp_path)]

    assert cli_main.main(argv) == cli_main.EXIT_CONFIG
    assert "UnsupportedFamily" in capsys.readouterr().err


def test_inadmissible_grid_is_exit_2(tmp_path, capsys):
    config = tmp_path / "outside.conf"
    config.write_text(
        "family.kind = RieszFull\n"
        "blocks.1.gamma = 0.5\n"
        "pgrid.lower = 2.5,\n"
        "pgrid.upper = 3.0,\n"
        "pgrid.points = 2\n"
    )

    code = cli_main.main(["scan", "--config", str(config), "--out", str(tmp_path)])

    assert code == cli_main.EXIT_ADMISSIBILITY
    assert "InadmissibleP" in capsys.readouterr().err


def test_tolerance_flag_is_scoped_to_the_run(config_dir, tmp_path, monkeypatch):
    monkeypatch.delenv("ANISONORM_TOLERANCE", raising=False)
    seen = []

    def record(ctx):
        seen.append(get_settings().tolerance)
        return 0

    monkeypatch.setitem(cli_main.COMMANDS, "exponents", ("record", record))
    argv = ["exponents", "--config", _config(config_dir, "riesz_gamma_half"), "--tolerance", "1e-6"]

    assert cli_main.main(argv) == 0
    assert seen == [1e-6]
    assert "ANISONORM_TOLERANCE" not in os.environ


def test_out_of_range_tolerance_is_exit_1(config_dir):
    argv = ["exponents", "--config", _config(config_dir, "riesz_gamma_half"), "--tolerance", "0.5"]
    assert cli_main.main(argv) == cli_main.EXIT_CONFIG


def _report(margin: float) -> TransferReport:
    return TransferReport(
        constant=1.0,
        margins=(margin,),
        holdout=({"1.dilation": 2.0},),
        calibration_size=1,
        grid_size=1,
    )


def test_transfer_margin_decides_exit_code(config_dir, tmp_path, monkeypatch, capsys):
    calls = []

    def fake_verify(family, psi, calibration, holdout, grid, tolerance):
        calls.append(tolerance)
        return _report(1.2).model_copy(update={"tolerance": tolerance})

    monkeypatch.setattr(cli_transfer, "verify_transfer", fake_verify)
    argv = ["transfer", "--config", _config(config_dir, "transfer_demo"), "--out", str(tmp_path)]

    assert cli_main.main(argv) == cli_transfer.EXIT_MARGIN
    assert "FAIL" in capsys.readouterr().out
    assert cli_main.main([*argv, "--tolerance", "0.5"]) == 0
    assert calls == [0.05, 0.5]
    assert (tmp_path / "transfer.csv").exists()


def test_verify_only_selected_checks(tmp_path, capsys):
    code = cli_main.main(["verify", "--only", "oracles,spike", "--out", str(tmp_path)])

    assert code == 0
    output = capsys.readouterr().out
    assert "oracles" in output
    assert "spike" in output
    rows = (tmp_path / "checks.csv").read_text().splitlines()
    assert len(rows) == 2 + 1 + 2


def test_verify_unknown_check(tmp_path):
    assert cli_main.main(["verify", "--only", "nope", "--out", str(tmp_path)]) == 1


def test_unexpected_errors_reach_sentry(config_dir, monkeypatch):
    captured = []

    def boom(ctx):
        raise RuntimeError("unexpected")

    monkeypatch.setitem(cli_main.COMMANDS, "exponents", ("boom", boom))
    monkeypatch.setattr(cli_main.sentry_sdk, "capture_exception", captured.append)

    with pytest.raises(RuntimeError):
        cli_main.main(["exponents", "--config", _config(config_dir, "riesz_gamma_half")])
    assert len(captured) == 1


@pytest.mark.integration
def test_apply_default_gaussian(config_dir, tmp_path, capsys):
    argv = ["apply", "--config", _config(config_dir, "riesz_gamma_half"), "--out", str(tmp_path)]

    assert cli_main.main(argv) == 0
    assert "Tf(2.0,) = " in capsys.readouterr().out
    assert (tmp_path / "apply_output.angf").exists()
    assert (tmp_path / "apply_output.angf.json").exists()


@pytest.mark.integration
def test_apply_indicator_value_at_two(tmp_path, capsys):
    axis = np.concatenate(([-1.0, -1e-9], np.linspace(0.0, 1.0, 11), [1.0 + 1e-9, 3.0]))
    values = ((axis >= 0.0) & (axis <= 1.0)).astype(float)
    source = GridContainerRepository(tmp_path).save(
        "indicator", GridFunction.from_samples([axis], values)
    )
    config = tmp_path / "indicator.conf"
    config.write_text("family.kind = RieszFull\nblocks.1.gamma = 0.5\napply.point = 2.0,\n")
    out = tmp_path / "out"
    argv = ["apply", "--config", str(config), "--input", str(source), "--out", str(out)]

    assert cli_main.main(argv) == 0
    lines = capsys.readouterr().out.splitlines()
    value = next(line for line in lines if line.startswith("Tf(2.0,) = "))
    # int_0^1 |2 - y|^-1/2 dy = 2 (sqrt 2 - 1)
    assert float(value.split("=")[1]) == pytest.approx(0.828427, rel=1e-5)


@pytest.mark.integration
def test_scan_tables_do_not_depend_on_threads(tmp_path):
    config = tmp_path / "small.conf"
    config.write_text(
        "family.kind = RieszFull\n"
        "blocks.1.gamma = 0.5\n"
        "pgrid.points = 3\n"
        "test_family.kind = DilatedGaussian\n"
        "test_family.sweeps = 1\n"
        "test_family.evaluations = 4\n"
        "scan.blowup = false\n"
    )
    tables = []
    for threads in ("1", "3"):
        out = tmp_path / f"threads_{threads}"
        argv = ["scan", "--config", str(config), "--threads", threads, "--out", str(out)]
        assert cli_main.main(argv) == 0
        tables.append((out / "k_curve.csv").read_bytes())

    assert tables[0] == tables[1]
    assert len(tables[0].splitlines()) == 2 + 1 + 3
