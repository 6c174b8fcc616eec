import math

import pandas as pd
import pytest

from recipgamma.harness import runner
from recipgamma.harness.spec import ChainSpec, ExperimentSpec
from recipgamma.utils.errors import DomainError, ExperimentFailedError, NumericalProprietyError
from recipgamma.utils.types import Method, ModelFamily


def get_spec(**changes) -> ExperimentSpec:
    kwargs = {
        "model": ModelFamily.GAMMA,
        "method": Method.DA,
        "data": {"n": 10},
        "chain": ChainSpec(burn_in=20, draws=100),
        "replications": 4,
        "seed": 3,
    }
    kwargs.update(changes)
    return ExperimentSpec(**kwargs)


def get_failing_replication(failures):
    original = runner.run_replication

    def run(spec, rep_index):
        if rep_index in failures:
            return runner.ReplicationResult(rep_index=rep_index, error="NumericalProprietyError: forced")
        return original(spec, rep_index)

    return run


def test_run_replication():
    result = runner.run_replication(get_spec(), 0)
    assert not result.failed
    assert set(result.estimates) == {"alpha", "beta"}
    assert math.isnan(result.accept_rate["beta"])
    assert 0.0 <= result.accept_rate["alpha"] <= 1.0
    assert result.wall_seconds > 0.0
    assert len(result.records()) == 2


def test_run_replication_reports_sampler_errors(monkeypatch):
    def broken(*args, **kwargs):
        raise NumericalProprietyError("alpha", -1.0)

    monkeypatch.setattr(runner, "run_chain", broken)
    result = runner.run_replication(get_spec(), 2)
    assert result.failed
    assert result.error.startswith("NumericalProprietyError")
    records = result.records()
    assert len(records) == 1
    assert records[0]["failed"]


def test_serial_and_parallel_runs_agree():
    spec = get_spec()
    serial = runner.run_experiment(spec, parallel=1)
    parallel = runner.run_experiment(spec, parallel=3)
    assert [r.param for r in serial] == ["alpha", "beta"]
    for a, b in zip(serial, parallel):
        assert (a.param, a.mse, a.ess, a.accept_rate) == (b.param, b.mse, b.ess, b.accept_rate)


def test_failures_within_budget_are_dropped(monkeypatch):
    spec = get_spec(replications=20)
    monkeypatch.setattr(runner, "run_replication", get_failing_replication({7}))
    rows = runner.run_experiment(spec)
    assert len(rows) == 2


def test_too_many_failures_fail_the_experiment(monkeypatch):
    spec = get_spec(replications=20)
    monkeypatch.setattr(runner, "run_replication", get_failing_replication({3, 7}))
    with pytest.raises(ExperimentFailedError):
        runner.run_experiment(spec)


def test_replications_parquet(tmp_path):
    spec = get_spec(replications=2)
    runner.run_experiment(spec, out_dir=tmp_path)
    path = tmp_path / "gamma_da_default_n10_replications.parquet"
    df = pd.read_parquet(path)
    assert list(df.columns) == runner.REPLICATION_COLUMNS
    assert list(df["rep_index"]) == [0, 0, 1, 1]
    assert not df["failed"].any()


def test_dir_mult_report_has_alpha_mean_row():
    spec = get_spec(
        model=ModelFamily.DIR_MULT,
        method=Method.DA_PT,
        data={"n": 5, "trials": 20, "categories": 2, "alpha": [1.0, 2.0]},
        replications=2,
    )
    rows = runner.run_experiment(spec)
    assert [r.param for r in rows] == ["alpha_0", "alpha_1", runner.ALPHA_MEAN]
    assert rows[2].mse == pytest.approx((rows[0].mse + rows[1].mse) / 2)
    assert all(r.scenario == "custom" for r in rows)


def test_aggregate_uses_squared_error_for_a_single_replication():
    spec = get_spec(replications=1)
    result = runner.ReplicationResult(
        rep_index=0,
        estimates={"alpha": 2.5, "beta": 1.0},
        ess={"alpha": 50.0, "beta": math.nan},
        accept_rate={"alpha": 0.9, "beta": math.nan},
        wall_seconds=0.5,
    )
    alpha, beta = runner.aggregate(spec, [result])
    assert alpha.mse == pytest.approx(0.25)
    assert alpha.sess == pytest.approx(100.0)
    assert math.isnan(beta.ess)
    assert beta.mse == 0.0
    assert runner.aggregate(spec, []) == []


def test_resolve_workers(monkeypatch):
    monkeypatch.setattr(runner, "RECIPGAMMA_THREADS", None)
    assert runner.resolve_workers(2) == 2
    with pytest.raises(DomainError):
        runner.resolve_workers(0)
    monkeypatch.setattr(runner, "RECIPGAMMA_THREADS", "3")
    assert runner.resolve_workers(1) == 3
    monkeypatch.setattr(runner, "RECIPGAMMA_THREADS", "many")
    with pytest.raises(DomainError):
        runner.resolve_workers(1)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__]))
