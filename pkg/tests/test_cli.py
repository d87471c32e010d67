"""Commandes click et codes de sortie."""

import numpy as np
import pytest
from click.testing import CliRunner

from cli import cli
from src.errors import NumericalError


@pytest.fixture
def runner():
    return CliRunner()


def _write_sample(path, values):
    path.write_text("\n".join(f"{v:.17g}" for v in values) + "\n", encoding="utf-8")
    return str(path)


def test_law_command(runner):
    result = runner.invoke(cli, ["law", "--beta", "1/10"])
    assert result.exit_code == 0, result.output
    assert "25" in result.output


def test_law_outside_regime_exits_with_config_code(runner):
    result = runner.invoke(cli, ["law", "--beta", "2"])
    assert result.exit_code == 2


def test_law_requires_target(runner):
    assert runner.invoke(cli, ["law"]).exit_code == 2


def test_numerical_failure_exit_code(runner, monkeypatch):
    def broken(*args, **kwargs):
        raise NumericalError("quadrature")

    monkeypatch.setattr("src.matching.four_point_law", broken)
    result = runner.invoke(cli, ["law", "--beta", "1/10"])
    assert result.exit_code == 3


def test_wp_small_sample(runner, tmp_path):
    path = _write_sample(tmp_path / "w.txt", np.linspace(-1.0, 1.0, 20))
    assert runner.invoke(cli, ["wp", path]).exit_code == 2


def test_wp_against_normal_and_pair(runner, tmp_path):
    values = np.random.default_rng(0).normal(size=500)
    first = _write_sample(tmp_path / "a.txt", values)
    second = _write_sample(tmp_path / "b.txt", values + 1.0)
    result = runner.invoke(cli, ["wp", first])
    assert result.exit_code == 0, result.output
    assert "Kolmogorov" in result.output
    result = runner.invoke(cli, ["wp", first, second, "--p", "1"])
    assert result.exit_code == 0, result.output
    assert "= 1" in result.output


def test_bound_command(runner):
    result = runner.invoke(cli, ["bound", "iid", "--n", "4"])
    assert result.exit_code == 0, result.output
    assert "gamma1" in result.output


def test_bound_bad_param(runner):
    assert runner.invoke(cli, ["bound", "mdep", "--n", "4", "-P", "m"]).exit_code == 2


def test_rate_command_writes_table(runner, tmp_path):
    output = tmp_path / "iid.csv"
    result = runner.invoke(cli, [
        "rate", "--model", "iid", "--grid", "4,8", "-R", "2", "-s", "200",
        "--seed", "5", "-o", str(output),
    ])
    assert result.exit_code == 0, result.output
    header = output.read_text(encoding="utf-8").splitlines()[0]
    assert header == "model,n,param,replicate,distance,bound,baseline,seed"


def test_rate_requires_model_and_grid(runner):
    assert runner.invoke(cli, ["rate", "--model", "iid"]).exit_code == 2


def test_stein_check_command(runner):
    result = runner.invoke(cli, ["stein-check", "-h", "square_half", "--points", "5"])
    assert result.exit_code == 0, result.output
    assert "Solveur de Stein" in result.output
