import math

import numpy as np
import pytest

from recipgamma.core.diagnostics import ess
from recipgamma.core.rng_dists import RngStream
from recipgamma.models import build_config, get_sampler, run_chain, student_t
from recipgamma.utils.errors import DomainError
from recipgamma.utils.types import Method, ModelFamily

default_prior = {"a": 0.1, "b": 0.0, "c": 0.1, "d": 0.1, "a0": 1.0, "b0": 0.5}


def get_data(n: int = 100, seed: int = 9) -> student_t.TData:
    return student_t.simulate(3.0, 1.0, 2.0, n, RngStream(seed))


@pytest.mark.parametrize(
    "changes", [{"a": 0.0}, {"b": math.inf}, {"a0": -1.0}, {"alpha_lower": -0.5}, {"alpha_lower": math.nan}]
)
def test_config_validation(changes):
    with pytest.raises(DomainError):
        student_t.TModelConfig(**{**default_prior, **changes})


def test_data_validation():
    assert student_t.TData.from_values([[1.0, 2.0]]).n == 2
    with pytest.raises(DomainError):
        student_t.TData.from_values([])
    with pytest.raises(DomainError):
        student_t.TData.from_values([1.0, math.nan])


def test_scale_posterior_with_unit_weights_is_conjugate():
    x = np.array([1.0, 2.5, 4.0, 0.5])
    data = student_t.TData.from_values(x)
    cfg = student_t.TModelConfig(a=2.0, b=1.0, c=3.0, d=0.5)
    c_post, d_post, a_post, b_post = student_t.scale_posterior(data, np.ones(4), cfg)
    n, xbar = 4, x.mean()
    assert c_post == pytest.approx(3.0 + n / 2)
    assert a_post == pytest.approx(2.0 + n)
    assert b_post == pytest.approx((2.0 * 1.0 + n * xbar) / (2.0 + n))
    expected_d = 0.5 + 0.5 * (np.sum((x - xbar) ** 2) + 2.0 * n / (2.0 + n) * (xbar - 1.0) ** 2)
    assert d_post == pytest.approx(expected_d)


def test_simulated_data_has_t_tails():
    data = student_t.simulate(0.0, 1.0, 0.5, 100_000, RngStream(1))
    # 2 alpha = 1 is Cauchy: the quartiles sit at -1 and 1
    q1, q3 = np.quantile(data.x, [0.25, 0.75])
    assert q1 == pytest.approx(-1.0, abs=0.05)
    assert q3 == pytest.approx(1.0, abs=0.05)


@pytest.mark.parametrize("method", [Method.DA, Method.AMH])
def test_truncated_prior_keeps_alpha_above_bound(method):
    data = get_data(n=30)
    cfg = build_config(ModelFamily.STUDENT_T, method, {**default_prior, "alpha_lower": 2.5})
    result = run_chain(get_sampler(ModelFamily.STUDENT_T, method), data, cfg, RngStream(4), burn_in=50, draws=500)
    assert np.all(result.column("alpha") > 2.5)
    assert np.all(result.column("tau") > 0.0)


def test_augmented_and_approximate_samplers_agree():
    data = get_data()
    means, errors = [], []
    for method in (Method.DA, Method.AMH):
        cfg = build_config(ModelFamily.STUDENT_T, method, default_prior)
        result = run_chain(get_sampler(ModelFamily.STUDENT_T, method), data, cfg, RngStream(7), burn_in=500, draws=6000)
        for name in ("theta", "alpha"):
            col = result.column(name)
            means.append(col.mean())
            errors.append(col.std() / math.sqrt(ess(col)))
        assert result.accept_rate_of("alpha") > 0.9
    theta_gap = abs(means[0] - means[2])
    alpha_gap = abs(means[1] - means[3])
    assert theta_gap < 5.0 * math.hypot(errors[0], errors[2])
    assert alpha_gap < 5.0 * math.hypot(errors[1], errors[3])


def test_step_is_deterministic_per_stream():
    data = get_data(n=10)
    cfg = student_t.TModelConfig(**default_prior)
    states = []
    for _ in range(2):
        rng = RngStream(12)
        state = student_t.init_state(data, cfg, rng)
        for _ in range(5):
            state = student_t.t_step(state, data, cfg, rng)
        states.append(state)
    np.testing.assert_array_equal(student_t.extract(states[0]), student_t.extract(states[1]))
    assert states[0].step_count == 5
    assert states[0].rho.rho.shape == (9,)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__]))
