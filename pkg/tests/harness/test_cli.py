import json

import pandas as pd
import pytest

from recipgamma.harness import cli
from recipgamma.harness.report import read_report

small_doc = {
    "model": "gamma",
    "method": "da",
    "data": {"n": 10},
    "chain": {"burn_in": 10, "draws": 60},
    "replications": 2,
    "seed": 9,
}


def write_config(tmp_path, doc) -> str:
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps(doc))
    return str(path)


def test_identity_grid():
    grid = cli.identity_grid(ms=(1, 3), xis=(0.5,), ks=(0, 2))
    assert len(grid) == 2 * (2 + 2)
    assert set(grid["identity"]) == {"multiplication", "gamma_power", "k_level"}
    assert grid["ok"].all()


def test_verify_identities(capsys):
    assert cli.main(["verify-identities"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "residuals within" in out


def test_verify_identities_reports_failures():
    assert cli.main(["verify-identities", "--tolerance", "0"]) == cli.EXIT_FAILED


def test_run_and_report(tmp_path, capsys):
    config = write_config(tmp_path, small_doc)
    out = tmp_path / "report.csv"
    assert cli.main(["run", "--config", config, "--out", str(out), "--replications-dir", str(tmp_path)]) == 0
    rows = read_report(out)
    assert [r.param for r in rows] == ["alpha", "beta"]
    assert (tmp_path / "gamma_da_default_n10_replications.parquet").exists()

    assert cli.main(["report", str(out), "--wide"]) == 0
    assert "alpha_ess" in capsys.readouterr().out

    converted = tmp_path / "report.json"
    assert cli.main(["report", str(out), "--out", str(converted)]) == 0
    assert len(json.loads(converted.read_text())) == 2

    compared = tmp_path / "compare.csv"
    assert cli.main(["report", str(out), "--compare", "da", "--out", str(compared)]) == 0
    assert list(pd.read_csv(compared)["mse_ratio"]) == [1.0, 1.0]


def test_run_overrides(tmp_path):
    config = write_config(tmp_path, small_doc)
    out = tmp_path / "report.json"
    assert cli.main(["run", "--config", config, "--out", str(out), "--reps", "1", "--seed", "4"]) == 0
    assert len(read_report(out)) == 2


def test_gen_data(tmp_path):
    config = write_config(tmp_path, small_doc)
    assert cli.main(["gen-data", "--config", config, "--out", str(tmp_path / "data")]) == 0
    files = sorted(p.name for p in (tmp_path / "data").iterdir())
    assert files == ["gamma_default_seed9_rep0000.csv", "gamma_default_seed9_rep0001.csv"]


def test_invalid_config_exits_with_validation_status(tmp_path):
    config = write_config(tmp_path, {**small_doc, "method": "da_n", "seed": -3})
    assert cli.main(["run", "--config", config]) == cli.EXIT_INVALID


@pytest.mark.parametrize("extra", [["--reps", "0"], ["--seed", "-1"]])
def test_bad_overrides(tmp_path, extra):
    config = write_config(tmp_path, small_doc)
    assert cli.main(["run", "--config", config, *extra]) == cli.EXIT_FAILED


def test_missing_config_file(tmp_path):
    assert cli.main(["run", "--config", str(tmp_path / "nope.json")]) == cli.EXIT_FAILED


def test_config_and_preset_are_exclusive(tmp_path):
    with pytest.raises(SystemExit):
        cli.main(["run", "--config", write_config(tmp_path, small_doc), "--preset", "gamma"])


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__]))
