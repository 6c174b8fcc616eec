import math

import numpy as np
import pytest
from scipy import integrate, special, stats

from recipgamma.core import augmentation as aug
from recipgamma.core.rng_dists import PtnParams, RngStream
from recipgamma.core.special_fns import HALF_LOG_2PI, log_multiplication_constant, log_stirling_factor
from recipgamma.utils.errors import DomainError
from recipgamma.utils.types import TiltVariant

XI_GRID = np.linspace(0.05, 6.0, 300)
PRIOR_SHAPE, PRIOR_RATE = 2.0, 1.0


def get_rng(seed: int = 99) -> RngStream:
    return RngStream(seed)


def get_log_beta_integral(p: float, q: float) -> float:
    value, _ = integrate.quad(lambda _: 1.0, 0.0, 1.0, weight="alg", wvar=(p - 1.0, q - 1.0), epsrel=1e-12)
    return math.log(value)


def get_log_gamma_integral(s: float, r: float) -> float:
    """log of int_0^inf t^(s-1) e^(-r t) dt by quadrature."""

    def kernel(y: float) -> float:
        return math.exp((s - 1.0) * math.log(y) - y) if y > 0.0 else 0.0

    if s < 1.0:
        split = 1.0
        head, _ = integrate.quad(lambda y: math.exp(-y), 0.0, split, weight="alg", wvar=(s - 1.0, 0.0), epsrel=1e-12)
    else:
        split = s
        head, _ = integrate.quad(kernel, 0.0, split, epsrel=1e-12)
    tail, _ = integrate.quad(kernel, split, np.inf, epsrel=1e-12)
    return math.log(head + tail) - s * math.log(r)


def get_augmented_log_marginal(xi: float, m: int, k_levels: int) -> float:
    """Augmented joint of (xi, rho, t) integrated numerically over the latents, times the Ga prior."""
    two_k = 2.0**k_levels
    mx = m * xi
    terms = [
        (PRIOR_SHAPE - 1.0) * math.log(xi) - PRIOR_RATE * xi,
        log_multiplication_constant(m),
        -mx * math.log(xi),
        (m + 0.5 * k_levels - 0.5) * math.log(xi),
        two_k * mx,
        float(log_stirling_factor(two_k * mx)),
    ]
    terms.extend(get_log_beta_integral(xi + (j - 1) / m, (m - j + 1) / m) for j in range(2, m + 1))
    if k_levels:
        terms.append(0.5 * k_levels * (math.log(two_k * m) - 2.0 * HALF_LOG_2PI))
        terms.append((2.0 * (two_k - 1.0) - k_levels) * mx * math.log(2.0))
        terms.extend(get_log_gamma_integral(2.0 ** (k - 1) * mx + 0.5, two_k * mx) for k in range(1, k_levels + 1))
    return math.fsum(terms)


def get_normalized(log_density: np.ndarray) -> np.ndarray:
    dens = np.exp(log_density - log_density.max())
    return dens / integrate.trapezoid(dens, XI_GRID)


def get_ptn_moments(ptn: PtnParams):
    grid = np.linspace(1e-9, ptn.mode() + 30.0 / math.sqrt(ptn.a), 200_001)
    dens = np.exp(ptn.log_kernel(grid) - ptn.log_kernel(ptn.mode()))
    mass = integrate.trapezoid(dens, grid)
    mean = integrate.trapezoid(grid * dens, grid) / mass
    var = integrate.trapezoid((grid - mean) ** 2 * dens, grid) / mass
    return mean, var


@pytest.mark.parametrize("m,k_levels", [(1, 0), (3, 0), (5, 0), (2, 1), (2, 2), (3, 2)])
def test_augmented_joint_marginalizes_to_target(m, k_levels):
    direct = np.array(
        [(PRIOR_SHAPE - 1.0) * math.log(x) - PRIOR_RATE * x - m * special.gammaln(x) for x in XI_GRID]
    )
    augmented = np.array([get_augmented_log_marginal(x, m, k_levels) for x in XI_GRID])
    tv = 0.5 * integrate.trapezoid(np.abs(get_normalized(direct) - get_normalized(augmented)), XI_GRID)
    assert tv < 1e-6


def test_power_latent_marginalizes_xi_power():
    # (m xi)^(1/2) e^(m xi) g(m xi) int w^(m xi - 1) e^(-w m xi^2) dw = xi^(-m xi)
    for xi, m in [(0.3, 2), (1.7, 4), (4.0, 1)]:
        mx = m * xi
        lhs = 0.5 * math.log(mx) + mx + float(log_stirling_factor(mx)) + get_log_gamma_integral(mx, m * xi * xi)
        assert lhs == pytest.approx(-mx * math.log(xi), abs=1e-9)


def test_poisson_tilt_marginalizes_exponential_factor():
    ptn = PtnParams(c=2.0, a=1.0, b=-0.7)
    M, b_prime = 1.0, 1.7
    for xi in (0.2, 1.0, 3.0):
        poisson_mass = math.fsum((M * xi) ** z / math.factorial(z) for z in range(120))
        gig_mass, _ = integrate.quad(
            lambda eta: eta**-0.5 * math.exp(-0.5 * (eta + (b_prime * xi) ** 2 / eta)), 0.0, np.inf, epsrel=1e-12
        )
        total = poisson_mass * gig_mass / math.sqrt(2.0 * math.pi)
        assert total == pytest.approx(math.exp(ptn.b * xi), rel=1e-8)


def test_beta_latents_distribution_and_layout():
    m = 4
    xi = np.full(50_000, 0.7)
    latents = aug.sample_beta_latents(xi, m, get_rng())
    assert latents.rho.shape == (m - 1, xi.size)
    assert latents.m == m
    for row, j in zip(latents.rho, range(2, m + 1)):
        cdf = stats.beta(0.7 + (j - 1) / m, (m - j + 1) / m).cdf
        assert stats.kstest(row, cdf).statistic < 0.01
    inner = latents.rho < 0.999
    np.testing.assert_allclose(latents.log_inv[inner], -np.log(latents.rho[inner]), rtol=1e-10)
    np.testing.assert_allclose(latents.log_sum, latents.log_inv.sum(axis=0))


def test_beta_latents_edge_cases():
    single = aug.sample_beta_latents(2.0, 1, get_rng())
    assert single.rho.size == 0
    assert single.log_sum == 0.0
    scalar = aug.sample_beta_latents(2.0, 3, get_rng())
    assert scalar.rho.shape == (2,)
    assert isinstance(scalar.log_sum, float)
    with pytest.raises(DomainError):
        aug.sample_beta_latents(1.0, 0, get_rng())
    with pytest.raises(DomainError):
        aug.sample_beta_latents(-1.0, 3, get_rng())


def test_beta_latents_stay_finite_for_tiny_shapes():
    latents = aug.sample_beta_latents(np.full(10_000, 1e-4), 50, get_rng())
    assert np.all(np.isfinite(latents.log_inv))
    assert np.all((latents.rho > 0.0) & (latents.rho < 1.0))


def test_wishart_latents_distribution():
    rng = get_rng()
    alpha, m = 1.2, 3
    draws = np.stack([aug.sample_wishart_latents(alpha, m, rng).rho for _ in range(20_000)])
    assert draws.shape == (20_000, m - 1)
    for col, j in enumerate(range(2, m + 1)):
        cdf = stats.beta(2 * alpha + (j - 1) / m, (2 - 1 / m) * (j - 1)).cdf
        assert stats.kstest(draws[:, col], cdf).statistic < 0.02
    assert aug.sample_wishart_latents(alpha, 1, rng).log_sum == 0.0


def test_power_latent_moments():
    w = aug.sample_power_latent(np.full(100_000, 2.0), 3, get_rng())
    assert stats.kstest(w, stats.gamma(6.0, scale=1.0 / 12.0).cdf).statistic < 0.01
    assert isinstance(aug.sample_power_latent(2.0, 3, get_rng()), float)


def test_k_latents_moments():
    rng = get_rng()
    xi, m, K = 1.3, 2, 3
    assert aug.sample_k_latents(xi, m, 0, rng).t.size == 0
    t = np.stack([aug.sample_k_latents(xi, m, K, rng).t for _ in range(20_000)])
    shapes = 2.0 ** np.arange(K) * m * xi + 0.5
    rate = 2.0**K * m * xi
    se = np.sqrt(shapes / rate**2 / t.shape[0])
    assert np.all(np.abs(t.mean(axis=0) - shapes / rate) < 5.0 * se)


def test_conditional_coefficients():
    cond = aug.conditional_after_beta_latents(a1=2.0, b1=5.0, m=3, log_sum=0.4)
    assert cond.A == pytest.approx(4.5)
    assert cond.B == pytest.approx(2.4)
    ptn = aug.ptn_params_from_conditional(a3=2.0, b3=1.0, m=4, w=0.5)
    assert (ptn.c, ptn.a) == (2.5, 2.0)
    assert ptn.b == pytest.approx(4 * math.log(0.5) + 3.0)
    with pytest.raises(DomainError):
        aug.ptn_params_from_conditional(2.0, 1.0, 4, 0.0)


def test_tilt_update_forms():
    ptn = PtnParams(c=3.0, a=2.0, b=-1.0)
    poisson = aug.TiltLatents(TiltVariant.POISSON, eta=0.5, M=1.0, b_prime=2.0, zeta=4)
    shape, rate = aug.tilt_shape_update(poisson, ptn)
    assert shape == pytest.approx(3.5)
    assert rate == pytest.approx(2.0 + 4.0 / 1.0)
    normal = aug.TiltLatents(TiltVariant.NORMAL, eta=0.5, M=1.0, b_prime=2.0, theta=2.0)
    gig = aug.tilt_shape_update(normal, ptn)
    assert (gig.p, gig.a, gig.b) == pytest.approx((1.25, 12.0, 2.0))


@pytest.mark.parametrize("variant", [TiltVariant.PTN_DIRECT, TiltVariant.POISSON, TiltVariant.NORMAL])
def test_shape_routes_target_the_ptn(variant):
    ptn = PtnParams(c=3.0, a=2.0, b=1.5)
    mean, var = get_ptn_moments(ptn)
    rng = get_rng()
    xi, draws = 1.0, []
    for _ in range(30_000):
        xi = aug.propose_shape(variant, xi, ptn, rng)
        draws.append(xi)
    draws = np.asarray(draws[1000:])
    assert draws.mean() == pytest.approx(mean, abs=0.04)
    assert draws.var() == pytest.approx(var, rel=0.1)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__]))
