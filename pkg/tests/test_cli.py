"""
test_cli.py: Tests for the command-line interface (click's CliRunner, tiny grids).
Run with: python -m pytest tests/
"""

from click.testing import CliRunner

from staggered_chns.cli import cli


def _invoke(*args):
    return CliRunner().invoke(cli, list(args))


def test_run_writes_outputs(tmp_path):
    result = _invoke("run", "--scenario", "test1", "--M", "8", "--T", "1e-3",
                     "--snapshots", "0,1e-3", "--out", str(tmp_path))
    assert result.exit_code == 0, result.output
    assert (tmp_path / "diagnostics.csv").exists()
    assert (tmp_path / "run.json").exists()
    assert "Done." in result.output


def test_run_rejects_too_small_grid(tmp_path):
    result = _invoke("run", "--M", "2", "--out", str(tmp_path))
    assert result.exit_code == 4


def test_bad_config_exits_with_config_code(tmp_path):
    config = tmp_path / "bad.env"
    config.write_text("unknown_key=1\n", encoding="utf-8")
    result = _invoke("show-scenario", "--config", str(config))
    assert result.exit_code == 4
    assert "Error" in result.output


def test_show_scenario_prints_overridden_parameters():
    result = _invoke("show-scenario", "--scenario", "test4")
    assert result.exit_code == 0, result.output
    assert "10000" in result.output
    assert "0.005" in result.output


def test_eoc_writes_tables(tmp_path):
    result = _invoke("eoc", "--levels", "8,16", "--T", "1e-3", "--out", str(tmp_path))
    assert result.exit_code == 0, result.output
    assert (tmp_path / "eoc.csv").read_text(encoding="utf-8").startswith("M,e_M,EOC_M")
    assert (tmp_path / "eoc.md").exists()


def test_eoc_rejects_bad_levels(tmp_path):
    result = _invoke("eoc", "--levels", "8,x", "--out", str(tmp_path))
    assert result.exit_code == 4


def test_smoke_test_passes():
    result = _invoke("smoke-test")
    assert result.exit_code == 0, result.output
