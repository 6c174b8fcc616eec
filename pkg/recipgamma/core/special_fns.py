"""
Log-domain special functions and closed-form checks of the reciprocal-gamma
augmentation identities.

Every sampler in the package goes through ``log_stirling_factor`` for its
acceptance probabilities, so the factor g(x) = x^(x-1/2) / (Gamma(x) e^x) is
evaluated through the Stirling remainder

    mu(x) = ln Gamma(x) - (x - 1/2) ln x + x - ln(2 pi) / 2,

which satisfies 0 < mu(x) < 1/(12x) and gives ln g(x) = -ln(2 pi)/2 - mu(x).
For x >= STIRLING_SERIES_THRESHOLD the remainder comes from its asymptotic
(Bernoulli) series, which avoids the cancellation between terms of size
x ln x that a direct evaluation suffers for large x.
"""
import math
from dataclasses import dataclass
from typing import List

import numpy as np
from scipy import special

from recipgamma.utils.constants import STIRLING_SERIES_THRESHOLD
from recipgamma.utils.errors import DomainError

HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# B_{2k} / (2k (2k-1)) for k = 1..6
_STIRLING_SERIES = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
)


@dataclass(frozen=True)
class StirlingFactorLog:
    value: float

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class IdentityResidual:
    residual: float
    m: int
    xi: float
    k_levels: int = 0

    def within(self, tolerance: float) -> bool:
        return math.isfinite(self.residual) and abs(self.residual) < tolerance


def _check_positive(name: str, x: float) -> float:
    x = float(x)
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(name, x, "a finite positive real")
    return x


def log_gamma(x: float) -> float:
    """
    Natural log of the gamma function for positive real arguments.

    Arguments:
    ----------
        x (float): positive, finite argument.

    Returns:
    --------
        float: ln Gamma(x), from the Cephes implementation in scipy.special.gammaln.
    """
    x = _check_positive("x", x)
    return float(special.gammaln(x))


def digamma(x: float) -> float:
    x = _check_positive("x", x)
    return float(special.digamma(x))


def trigamma(x: float) -> float:
    x = _check_positive("x", x)
    return float(special.polygamma(1, x))


def stirling_remainder(x: float) -> float:
    """Returns mu(x) = ln Gamma(x) - (x - 1/2) ln x + x - ln(2 pi)/2, which lies in (0, 1/(12x))."""
    x = _check_positive("xi", x)
    if x >= STIRLING_SERIES_THRESHOLD:
        inv = 1.0 / x
        inv2 = inv * inv
        acc = 0.0
        for coef in reversed(_STIRLING_SERIES):
            acc = acc * inv2 + coef
        return acc * inv
    return float(special.gammaln(x)) - (x - 0.5) * math.log(x) + x - HALF_LOG_2PI


def log_stirling_factor(xi: float) -> StirlingFactorLog:
    """
    Log of g(xi) = xi^(xi - 1/2) / (Gamma(xi) e^xi).

    The bounds on the returned value are strict in exact arithmetic. In float64 the gap to the upper bound
    is mu(xi) ~ 1/(12 xi), which falls below half an ulp of ln(2 pi)/2 once xi
    exceeds about 1e15: from there on the value equals -ln(2 pi)/2 exactly. The gap
    to the lower bound, about 1/(360 xi^3), is lost already near xi = 1e5. Use
    ``stirling_remainder`` where the margin itself is needed; it stays positive on
    the whole range.

    Arguments:
    ----------
        xi (float): positive argument, finite anywhere in [1e-300, 1e300].

    Returns:
    --------
        StirlingFactorLog: value strictly inside (-1/(12 xi) - ln(2 pi)/2, -ln(2 pi)/2).
    """
    return StirlingFactorLog(-HALF_LOG_2PI - stirling_remainder(xi))


def mh_log_accept(m_eff: float, xi_new: float, xi_old: float, power: int = 1) -> float:
    """
    Log acceptance probability of an independent MH step whose target differs
    from the proposal by the factor g(m_eff * xi)^power.

    Arguments:
    ----------
        m_eff (float): effective multiplicity of the Stirling factor.
        xi_new (float): proposed shape.
        xi_old (float): current shape.
        power (int): 1 for the beta-only augmentation, 2 for the PTN route.

    Returns:
    --------
        float: min(0, power * (ln g(m_eff xi_new) - ln g(m_eff xi_old))), which is never
        below -power / (12 m_eff xi_new).
    """
    m_eff = _check_positive("m_eff", m_eff)
    if power not in (1, 2):
        raise DomainError("power", power, "1 or 2")
    mu_new = stirling_remainder(m_eff * _check_positive("xi_new", xi_new))
    mu_old = stirling_remainder(m_eff * _check_positive("xi_old", xi_old))
    return min(0.0, power * (mu_old - mu_new))


def log_multiplication_constant(m: int) -> float:
    """ln C_m with C_m = 1 / ((2 pi)^((m-1)/2) prod_{j=2}^m Gamma((m-j+1)/m))."""
    if m < 1:
        raise DomainError("m", m, "a positive integer")
    js = np.arange(2, m + 1)
    return -(m - 1) * HALF_LOG_2PI - math.fsum(special.gammaln((m - js + 1) / m))


def _log_beta_integrals(xi: float, m: int) -> List[float]:
    js = np.arange(2, m + 1)
    return list(special.betaln(xi + (js - 1) / m, (m - js + 1) / m))


def _identity_terms(xi: float, m: int, k_levels: int) -> List[float]:
    """Log-scale terms of the right-hand side of the K-level identity (K = 0 is the plain one)."""
    two_k = 2.0**k_levels
    mx = m * xi
    r = two_k * mx
    log_xi = math.log(xi)
    terms = [
        log_multiplication_constant(m),
        -mx * log_xi,
        (m + 0.5 * k_levels - 0.5) * log_xi,
        mx,
        -HALF_LOG_2PI - stirling_remainder(r),
    ]
    terms.extend(_log_beta_integrals(xi, m))
    if k_levels == 0:
        return terms
    # constant, e^{(2^K - 1) m xi} and 2^{(2(2^K-1)-K) m xi} factors
    terms.append(0.5 * k_levels * (math.log(two_k * m) - 2.0 * HALF_LOG_2PI))
    terms.append((two_k - 1.0) * mx)
    terms.append((2.0 * (two_k - 1.0) - k_levels) * mx * math.log(2.0))
    # int t^{u + 1/2 - 1} e^{-t r} dt = Gamma(u + 1/2) / r^(u + 1/2), u = 2^{k-1} m xi.
    # Gamma(s) is expanded through the Stirling remainder and ln(s/r) split as
    # (k-1-K) ln 2 + log1p(1/(2u)) so no term carries the full size of s ln s.
    for k in range(1, k_levels + 1):
        u = 2.0 ** (k - 1) * mx
        s = u + 0.5
        terms.extend(
            [
                HALF_LOG_2PI,
                u * (k - 1 - k_levels) * math.log(2.0),
                u * math.log1p(0.5 / u),
                -0.5 * math.log(r),
                -s,
                stirling_remainder(s),
            ]
        )
    return terms


def verify_multiplication_identity(xi: float, m: int) -> IdentityResidual:
    """
    Residual of the reciprocal-gamma-power identity

        1/Gamma(xi)^m = C_m xi^(-m xi) xi^(m - 1/2) e^(m xi)
                        * prod_{j=2}^m B(xi + (j-1)/m, (m-j+1)/m) * g(m xi),

    with every beta integral in closed form. The residual is log RHS - log LHS.
    """
    xi = _check_positive("xi", xi)
    if int(m) != m or m < 1:
        raise DomainError("m", m, "a positive integer")
    m = int(m)
    rhs = math.fsum(_identity_terms(xi, m, 0))
    lhs = -m * float(special.gammaln(xi))
    return IdentityResidual(residual=rhs - lhs, m=m, xi=xi, k_levels=0)


def verify_gamma_power_identity(xi: float, m: int) -> IdentityResidual:
    """
    Residual of 1/xi^(m xi) = (m xi)^(1/2) e^(m xi) g(m xi) int w^(m xi - 1) e^(-w m xi^2) dw,
    with the integral written as Gamma(m xi) / (m xi^2)^(m xi).
    """
    xi = _check_positive("xi", xi)
    if int(m) != m or m < 1:
        raise DomainError("m", m, "a positive integer")
    m = int(m)
    mx = m * xi
    log_g = -HALF_LOG_2PI - stirling_remainder(mx)
    log_integral = float(special.gammaln(mx)) - mx * (math.log(m) + 2.0 * math.log(xi))
    rhs = math.fsum([0.5 * math.log(mx), mx, log_g, log_integral])
    lhs = -mx * math.log(xi)
    return IdentityResidual(residual=rhs - lhs, m=m, xi=xi, k_levels=0)


def verify_k_level_identity(xi: float, m: int, k_levels: int) -> IdentityResidual:
    """
    Residual of the K-level identity

        1/Gamma(xi)^m = C_{m,K} xi^(-m xi) xi^(m + K/2 - 1/2) e^(2^K m xi)
                        * 2^((2(2^K - 1) - K) m xi) * prod_j B(...)
                        * prod_{k=1}^K Gamma(2^(k-1) m xi + 1/2) / (2^K m xi)^(2^(k-1) m xi + 1/2)
                        * g(2^K m xi),

    where C_{m,K} = (2^K m / (2 pi))^(K/2) C_m. K = 0 reproduces
    verify_multiplication_identity term for term.
    """
    xi = _check_positive("xi", xi)
    if int(m) != m or m < 1:
        raise DomainError("m", m, "a positive integer")
    if int(k_levels) != k_levels or not 0 <= k_levels <= 10:
        raise DomainError("k_levels", k_levels, "an integer in [0, 10]")
    m, k_levels = int(m), int(k_levels)
    rhs = math.fsum(_identity_terms(xi, m, k_levels))
    lhs = -m * float(special.gammaln(xi))
    return IdentityResidual(residual=rhs - lhs, m=m, xi=xi, k_levels=k_levels)
