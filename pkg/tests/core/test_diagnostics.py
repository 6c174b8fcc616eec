import math

import numpy as np
import pytest

from recipgamma.core import diagnostics as diag
from recipgamma.utils.errors import DegenerateSeriesError, DomainError

N = 20_000


def get_ar1(phi: float, n: int = N, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(n)
    x = np.empty(n)
    x[0] = noise[0] / math.sqrt(1.0 - phi**2)
    for i in range(1, n):
        x[i] = phi * x[i - 1] + noise[i]
    return x


def get_chain_result(**changes) -> diag.ChainResult:
    kwargs = {
        "draws": np.column_stack([get_ar1(0.0, 500, 1), get_ar1(0.5, 500, 2)]),
        "param_names": ["alpha", "beta"],
        "accept_rate": np.array([0.8]),
        "accept_names": ["alpha"],
        "wall_seconds": 0.5,
        "seed_info": (1, 0),
    }
    kwargs.update(changes)
    return diag.ChainResult(**kwargs)


def test_ess_of_independent_draws_is_close_to_n():
    assert diag.ess(get_ar1(0.0)) == pytest.approx(N, rel=0.1)


@pytest.mark.parametrize("phi", [0.5, 0.9])
def test_ess_of_ar1_matches_theory(phi):
    expected = N * (1.0 - phi) / (1.0 + phi)
    assert diag.ess(get_ar1(phi)) == pytest.approx(expected, rel=0.2)


def test_ess_is_capped_for_antithetic_chains():
    assert diag.ess(get_ar1(-0.7)) == 2.0 * N


def test_ess_rejects_bad_series():
    with pytest.raises(DegenerateSeriesError):
        diag.ess(np.full(100, 3.0))
    with pytest.raises(DomainError):
        diag.ess(np.arange(5.0))
    with pytest.raises(DomainError):
        diag.ess(np.append(np.arange(20.0), math.nan))
    with pytest.raises(DomainError):
        diag.ess(np.ones((20, 2)))


def test_sess():
    assert diag.sess(100.0, 4.0) == 25.0
    with pytest.raises(DomainError):
        diag.sess(0.0, 1.0)
    with pytest.raises(DomainError):
        diag.sess(10.0, 0.0)


def test_mse_report_ratio_semantics():
    report = diag.mse_report([1.0, 3.0], truth=2.0, comparator=[0.0, 4.0])
    assert report.mse == 1.0
    # comparator MSE over own MSE: above 1 means this method is better
    assert report.ratio_vs == 4.0
    assert diag.mse_report([2.0, 2.0], 2.0).ratio_vs is None
    assert diag.mse_report([2.0, 2.0], 2.0, comparator=[2.0, 2.0]).ratio_vs == 1.0
    assert math.isnan(diag.mse_report([2.0, 2.0], 2.0, comparator=[1.0, 2.0]).ratio_vs)
    with pytest.raises(DomainError):
        diag.mse_report([1.0], 1.0)


def test_posterior_summary():
    draws = np.column_stack([np.arange(1001.0), np.full(1001, 2.0)])
    summary = diag.posterior_summary(draws, ["a", "b"])
    assert list(summary.index) == ["a", "b"]
    assert summary.loc["a", "mean"] == 500.0
    assert summary.loc["a", "q025"] == pytest.approx(25.0)
    assert summary.loc["a", "q975"] == pytest.approx(975.0)
    assert summary.loc["b", "sd"] == 0.0
    single = diag.posterior_summary(np.arange(10.0), ["x"])
    assert single.loc["x", "mean"] == 4.5
    with pytest.raises(DomainError):
        diag.posterior_summary(draws, ["a"])


def test_chain_result_accessors():
    result = get_chain_result()
    assert result.iterations == 500
    np.testing.assert_array_equal(result.column("beta"), result.draws[:, 1])
    assert result.accept_rate_of("alpha") == 0.8
    assert math.isnan(result.accept_rate_of("beta"))


@pytest.mark.parametrize(
    "changes",
    [
        {"param_names": ["alpha"]},
        {"accept_names": []},
        {"accept_rate": np.array([1.2])},
        {"draws": np.zeros(10)},
    ],
)
def test_chain_result_validation(changes):
    with pytest.raises(DomainError):
        get_chain_result(**changes)


def test_chain_ess_marks_constant_columns():
    draws = np.column_stack([get_ar1(0.0, 500, 3), np.ones(500)])
    result = get_chain_result(draws=draws)
    values = diag.chain_ess(result)
    assert values["alpha"] > 0.0
    assert math.isnan(values["beta"])


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__]))
