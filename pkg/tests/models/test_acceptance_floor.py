"""
Every Stirling-corrected MH step must accept with log probability at least
-power / (12 m_eff xi*), xi* being the proposed shape.
"""
import numpy as np
import pytest

from recipgamma.core.rng_dists import RngStream
from recipgamma.models import build_config, dir_mult, gamma, get_sampler, neg_bin, student_t, wishart
from recipgamma.utils.types import Method, ModelFamily

STEPS = 5_000


def get_cases():
    rng = RngStream(404)
    return [
        (ModelFamily.GAMMA, Method.DA, gamma.simulate(0.3, 1.0, 4, rng), 0, lambda d, c: d.n, 1),
        (ModelFamily.GAMMA, Method.DA_K, gamma.simulate(0.3, 1.0, 4, rng), 2, lambda d, c: 2**c.K * d.n, 1),
        (ModelFamily.STUDENT_T, Method.DA, student_t.simulate(0.0, 1.0, 0.5, 4, rng), 0, lambda d, c: d.n, 1),
        (ModelFamily.DIR_MULT, Method.DA_N, dir_mult.simulate([0.2, 0.5, 1.0], [15] * 3, rng), 0, lambda d, c: d.n, 2),
        (ModelFamily.DIR_MULT, Method.DA_P, dir_mult.simulate([0.2, 0.5, 1.0], [15] * 3, rng), 0, lambda d, c: d.n, 2),
        (ModelFamily.DIR_MULT, Method.DA_PT, dir_mult.simulate([0.2, 0.5, 1.0], [15] * 3, rng), 0, lambda d, c: d.n, 2),
        (ModelFamily.NEG_BIN, Method.DA_PT, neg_bin.simulate(0.4, 0.5, 4, rng), 0, lambda d, c: d.n, 2),
        (ModelFamily.WISHART, Method.DA, wishart.simulate(np.eye(2), 4, rng), 0, lambda d, c: d.dim, 1),
    ]


def get_updates(state):
    updates = getattr(state, "last_updates", None)
    return list(updates) if updates is not None else [state.last_update]


def run_fuzz(steps: int):
    violations = []
    for family, method, data, k_levels, m_eff_of, power in get_cases():
        sampler = get_sampler(family, method)
        cfg = build_config(family, method, {"a": 1.0, "b": 1.0}, k_levels=k_levels)
        rng = RngStream(405)
        state = sampler.init_state(data, cfg, rng)
        m_eff = m_eff_of(data, cfg)
        for _ in range(steps):
            state = sampler.step(state, data, cfg, rng)
            for upd in get_updates(state):
                floor = -power / (12.0 * m_eff * upd.proposal)
                assert upd.log_accept_floor == pytest.approx(floor, rel=1e-12), (family, method)
                if upd.log_accept < floor - 1e-12:
                    violations.append((family.value, method.value, upd))
    return violations


def test_acceptance_never_drops_below_floor():
    assert run_fuzz(STEPS) == []


@pytest.mark.slow
def test_acceptance_floor_long_fuzz():
    assert run_fuzz(100_000) == []


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__]))
