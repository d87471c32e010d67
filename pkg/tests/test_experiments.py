"""Etudes de vitesse: configuration, cibles, execution, ajustement et export."""

import json
import math

import pytest

from src.errors import ConfigError
from src.experiments import (
    CORE_COLUMNS,
    ExperimentConfig,
    RateFitError,
    build_target,
    fit_rate,
    inversions,
    ratio_band,
    run_experiment,
)
from src.export import ExportError, emit


# --- Configuration ---------------------------------------------------------


@pytest.mark.parametrize("overrides", [
    {"model": "percolation"},
    {"grid": ()},
    {"grid": (16, 8)},
    {"replicates": 0},
    {"samples": 50},
    {"distance": "hellinger"},
    {"output_format": "parquet"},
    {"model": "law", "grid": (1, 2)},
])
def test_experiment_config_validation(overrides):
    values = {"model": "iid", "grid": (8, 16, 32), **overrides}
    with pytest.raises(ConfigError):
        ExperimentConfig(**values)


def test_experiment_config_from_file(tmp_yaml):
    path = tmp_yaml("model: mdep\ngrid: [8, 16, 32]\nm: 1\nreplicates: 3\nformat: json\n")
    config = ExperimentConfig.from_file(path)
    assert config.model == "mdep"
    assert config.grid == (8, 16, 32)
    assert config.replicates == 3
    assert config.output_format == "json"
    assert config.params == {"m": 1}
    assert config.as_dict()["m"] == 1


@pytest.mark.parametrize("text", [
    "model: iid\n",
    "model: iid\ngrid: [8, 16]\nmontecarlo:\n  workers: 2\n",
    "- iid\n",
])
def test_experiment_config_file_errors(tmp_yaml, text):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_file(tmp_yaml(text))


def test_experiment_config_overrides():
    base = ExperimentConfig("mdep", (8, 16), params={"m": 1, "law": "rademacher"})
    updated = base.with_overrides(replicates=None, samples=500, params={"m": 2})
    assert updated.replicates == base.replicates
    assert updated.samples == 500
    assert updated.params == {"m": 2, "law": "rademacher"}
    assert base.params["m"] == 1


# --- Ajustement ------------------------------------------------------------


def _table(values):
    return [{"n": n, "distance": d, "baseline": 0.0} for n, d in values]


def test_fit_rate_square_root():
    grid = (16, 64, 256, 1024)
    fit = fit_rate(_table((n, n ** -0.5) for n in grid))
    assert fit.slope == pytest.approx(-0.5)
    assert fit.r_squared == pytest.approx(1.0)
    assert fit.used == grid


def test_fit_rate_linear():
    fit = fit_rate(_table((n, 3.0 / n) for n in (10, 20, 40, 80)))
    assert fit.slope == pytest.approx(-1.0)
    assert fit.intercept == pytest.approx(math.log(3.0))


def test_fit_rate_excludes_points_below_floor():
    rows = _table((n, n ** -0.5) for n in (16, 64, 256, 1024))
    for row in rows:
        row["baseline"] = 0.02
    # 1024^-1/2 = 0.03125 < 3 * 0.02
    fit = fit_rate(rows)
    assert fit.excluded == (1024,)
    assert fit.used == (16, 64, 256)

    for row in rows:
        row["baseline"] = 0.05
    with pytest.raises(RateFitError, match="signal below sampling floor"):
        fit_rate(rows)


def test_inversions_and_ratio_band():
    rows = [{"n": n, "distance": d} for n, d in ((8, 0.5), (16, 0.3), (32, 0.35), (64, 0.2))]
    assert inversions(rows) == 1
    assert ratio_band([1.0, 2.0, 4.0]) == 4.0
    assert ratio_band([0.0, 1.0]) == math.inf


# --- Cibles et execution ---------------------------------------------------


def test_iid_study(app_config):
    config = ExperimentConfig("iid", (4, 8, 16), replicates=2, samples=200, seed=7)
    table, stats = run_experiment(config, app_config, show_progress=False)
    assert list(table.columns) == CORE_COLUMNS
    assert len(table) == stats.rows == 6
    assert stats.failed_rows == stats.failed_builds == 0
    assert list(table["n"]) == [4, 4, 8, 8, 16, 16]
    assert list(table["replicate"]) == [0, 1, 0, 1, 0, 1]
    # sum E|X_i/sqrt(n)|^4 = 1/n pour Rademacher
    assert table["bound"].tolist() == pytest.approx([0.5, 0.5] + [8 ** -0.5] * 2 + [0.25] * 2)


def test_study_is_reproducible(app_config):
    config = ExperimentConfig("mdep", (8, 16), replicates=2, samples=200, seed=3, params={"m": 1})
    first, _ = run_experiment(config, app_config, show_progress=False)
    second, _ = run_experiment(config, app_config, show_progress=False)
    assert first.equals(second)


def test_failed_build_is_reported(app_config):
    config = ExperimentConfig("mdep", (2, 8), replicates=2, samples=200, params={"m": 3})
    table, stats = run_experiment(config, app_config, show_progress=False)
    assert stats.failed_builds == 1
    assert table.loc[table["n"] == 2, "error"].notna().all()
    assert table.loc[table["n"] == 8, "error"].isna().all()


def test_graph_and_law_targets(app_config):
    erg = build_target("erg", 8, {"motif": "triangle", "p": "0.3"}, config=app_config)
    assert erg.extras["psi"] > 0
    assert erg.bound == pytest.approx(erg.extras["psi"] ** -0.5)

    law = build_target("law", 1, {"beta": "1/10"}, config=app_config)
    assert law.n == 25
    assert law.bound == pytest.approx(math.sqrt(31) / 20)
    with pytest.raises(ConfigError):
        build_target("percolation", 4, config=app_config)


# --- Export ----------------------------------------------------------------


def _rows():
    return [
        {"model": "iid", "n": 8, "param": "law=rademacher", "replicate": 0,
         "distance": 0.1, "bound": 1 / 3, "baseline": 0.01, "seed": 12, "psi": 2.0},
        {"model": "iid", "n": 16, "param": "law=rademacher", "replicate": 0,
         "distance": 0.05, "bound": 0.25, "baseline": 0.01, "seed": 13, "psi": 4.0},
    ]


def test_emit_csv_is_byte_stable(tmp_path):
    first = emit(_rows(), tmp_path / "a.csv").read_bytes()
    second = emit(_rows(), tmp_path / "b.csv").read_bytes()
    assert first == second
    lines = first.decode("utf-8").split("\n")
    assert lines[0] == "model,n,param,replicate,distance,bound,baseline,seed,psi"
    assert lines[1].split(",")[5] == "0.33333333333333331"
    assert b"\r" not in first


def test_emit_json(tmp_path):
    rows = _rows()
    rows[1]["distance"] = math.nan
    path = emit(rows, tmp_path / "out" / "table.json", "json")
    records = json.loads(path.read_text(encoding="utf-8"))
    assert records[0]["n"] == 8
    assert records[1]["distance"] is None
    assert list(records[0]) == CORE_COLUMNS + ["psi"]


def test_emit_json_writes_seventeen_digits(tmp_path):
    path = emit(_rows(), tmp_path / "table.json", "json")
    text = path.read_text(encoding="utf-8")
    assert '"bound": 0.33333333333333331' in text
    assert '"psi": 2.0' in text
    records = json.loads(text)
    assert records[0]["bound"] == 1 / 3
    assert isinstance(records[1]["psi"], float)
    assert emit(_rows(), tmp_path / "again.json", "json").read_bytes() == path.read_bytes()


def test_emit_errors(tmp_path):
    with pytest.raises(ExportError):
        emit([], tmp_path / "empty.csv")
    with pytest.raises(ExportError):
        emit(_rows(), tmp_path / "table.xml", "xml")
