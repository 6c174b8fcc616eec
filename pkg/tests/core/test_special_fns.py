import math

import numpy as np
import pytest
from scipy import special

from recipgamma.core import special_fns as sf
from recipgamma.utils.errors import DomainError

GRID_M = (1, 2, 3, 5, 10, 50, 100)
GRID_XI = (0.01, 0.1, 1.0, 10.0, 100.0)
GRID_K = (0, 1, 3, 5)


def get_log_spaced(count: int) -> np.ndarray:
    return np.logspace(-3, 3, count)


def test_log_gamma_matches_known_values():
    assert sf.log_gamma(1.0) == 0.0
    assert sf.log_gamma(2.0) == pytest.approx(0.0, abs=1e-15)
    assert sf.log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)
    assert sf.log_gamma(10.0) == pytest.approx(math.log(362880.0), rel=1e-14)
    assert math.isfinite(sf.log_gamma(1e300))


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
def test_log_gamma_rejects_non_positive(bad):
    with pytest.raises(DomainError) as e:
        sf.log_gamma(bad)
    assert e.value.parameter == "x"


def test_polygamma_helpers():
    assert sf.digamma(1.0) == pytest.approx(-np.euler_gamma, rel=1e-14)
    assert sf.trigamma(1.0) == pytest.approx(math.pi**2 / 6.0, rel=1e-14)
    with pytest.raises(ValueError):
        sf.trigamma(-2.0)


def test_stirling_remainder_sandwich():
    for x in get_log_spaced(100_000):
        mu = sf.stirling_remainder(x)
        assert 0.0 < mu < 1.0 / (12.0 * x), x


@pytest.mark.slow
def test_stirling_remainder_sandwich_dense():
    xs = get_log_spaced(1_000_000)
    mus = np.fromiter((sf.stirling_remainder(x) for x in xs), dtype=float, count=xs.size)
    assert np.all(mus > 0.0)
    assert np.all(mus < 1.0 / (12.0 * xs))


def test_stirling_remainder_is_continuous_at_series_switch():
    below = sf.stirling_remainder(np.nextafter(10.0, 0.0))
    direct = float(special.gammaln(10.0)) - 9.5 * math.log(10.0) + 10.0 - sf.HALF_LOG_2PI
    assert below == pytest.approx(sf.stirling_remainder(10.0), rel=1e-10)
    assert sf.stirling_remainder(10.0) == pytest.approx(direct, rel=1e-11)


def test_log_stirling_factor_bounds_at_extremes():
    for xi in (1e-3, 1.0, 1e3):
        v = float(sf.log_stirling_factor(xi))
        assert v < -sf.HALF_LOG_2PI
        assert v > -1.0 / (12.0 * xi) - sf.HALF_LOG_2PI
    assert math.isfinite(float(sf.log_stirling_factor(1e-300)))


def test_log_stirling_factor_upper_gap_within_float_resolution():
    # visible while 1/(12 xi) exceeds half an ulp of ln(2 pi)/2
    for xi in np.logspace(-3, 14, 500):
        assert float(sf.log_stirling_factor(xi)) < -sf.HALF_LOG_2PI, xi
    # past that the value rounds onto the bound, while the remainder stays positive
    assert float(sf.log_stirling_factor(1e300)) == -sf.HALF_LOG_2PI
    for xi in (1e15, 1e100, 1e300):
        assert 0.0 < sf.stirling_remainder(xi) <= 1.0 / (12.0 * xi)


def test_mh_log_accept_examples():
    assert sf.mh_log_accept(5, 2.0, 2.0) == 0.0
    for xi_old in (0.01, 1.0, 50.0, 1e4):
        assert sf.mh_log_accept(10, 10.0, xi_old) >= -1.0 / 1200.0
    one = sf.mh_log_accept(3, 0.4, 2.0, power=1)
    two = sf.mh_log_accept(3, 0.4, 2.0, power=2)
    assert one < 0.0
    assert two == pytest.approx(2.0 * one, rel=1e-14)


def test_mh_log_accept_zero_when_moving_away_from_origin():
    # mu decreases in xi, so a larger proposal is always accepted
    assert sf.mh_log_accept(4, 3.0, 1.0) == 0.0


def test_mh_log_accept_rejects_bad_power():
    with pytest.raises(DomainError):
        sf.mh_log_accept(1, 1.0, 1.0, power=3)


def test_multiplication_identity_examples():
    assert abs(sf.verify_multiplication_identity(1.0, 1).residual) < 1e-12
    assert abs(sf.verify_multiplication_identity(2.5, 3).residual) < 1e-10
    assert abs(sf.verify_multiplication_identity(0.01, 100).residual) < 1e-8


def test_gamma_power_identity_examples():
    assert abs(sf.verify_gamma_power_identity(1.0, 1).residual) < 1e-12
    assert abs(sf.verify_gamma_power_identity(3.7, 4).residual) < 1e-10
    assert abs(sf.verify_gamma_power_identity(0.05, 50).residual) < 1e-9


def test_k_level_identity_examples():
    base = sf.verify_multiplication_identity(2.0, 3).residual
    assert sf.verify_k_level_identity(2.0, 3, 0).residual == pytest.approx(base, abs=1e-12)
    assert abs(sf.verify_k_level_identity(2.0, 3, 3).residual) < 1e-8
    assert abs(sf.verify_k_level_identity(0.1, 10, 5).residual) < 1e-8


def test_identity_grid_within_tolerance():
    for m in GRID_M:
        for xi in GRID_XI:
            assert sf.verify_multiplication_identity(xi, m).within(1e-8), (xi, m)
            assert sf.verify_gamma_power_identity(xi, m).within(1e-8), (xi, m)
            for k in GRID_K:
                assert sf.verify_k_level_identity(xi, m, k).within(1e-8), (xi, m, k)


def test_identity_detects_wrong_constant():
    # dropping C_m must show up as a residual of exactly ln C_m
    terms = sf._identity_terms(1.5, 4, 0)[1:]
    lhs = -4 * float(special.gammaln(1.5))
    assert math.fsum(terms) - lhs == pytest.approx(-sf.log_multiplication_constant(4), rel=1e-10)


@pytest.mark.parametrize("m,k", [(0, 0), (2.5, 0), (3, -1), (3, 11)])
def test_identity_verifiers_reject_bad_orders(m, k):
    with pytest.raises(DomainError):
        sf.verify_k_level_identity(1.0, m, k)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__]))
