"""
Approximate-MH baseline for shape parameters: an osculating gamma Ga(A, B) is
fitted to the shape full conditional and used as an independence proposal.

The fit is a fixed point at the (possibly truncated) mean mu of the current
gamma: the log-density of Ga(A, B) has first and second derivatives
(A - 1)/mu - B and -(A - 1)/mu^2, so matching them with the target gives

    A <- 1 - mu^2 l''(mu),      B <- (A - 1)/mu - l'(mu).
"""
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import optimize, special

from recipgamma.core.metropolis import ShapeUpdate, accept_or_keep
from recipgamma.core.rng_dists import RngStream, sample_truncated_gamma, truncated_gamma_log_tail
from recipgamma.utils.constants import AMH_EPS, AMH_MAX_ITER, TAIL_MASS_FLOOR
from recipgamma.utils.errors import DomainError
from recipgamma.utils.logging import logger
from recipgamma.utils.types import ShapeTargetKind


@dataclass(frozen=True)
class ShapeTarget:
    """
    Unnormalized shape full conditional Ga(alpha | a0, b0) 1{alpha > lower} times

    * SCALE_MIXTURE: prod_i Ga(w_i | alpha, alpha), with s_w = sum(w_i - log w_i);
    * GAMMA_LIKELIHOOD: prod_i Ga(x_i | alpha, beta) at fixed beta, with
      s_w = -(n log beta + sum log x_i).
    """

    a0: float
    b0: float
    n: int
    s_w: float
    lower: float = 0.0
    kind: ShapeTargetKind = ShapeTargetKind.SCALE_MIXTURE

    def __post_init__(self):
        if not self.a0 > 0.0:
            raise DomainError("a0", self.a0, "positive")
        if not self.b0 > 0.0:
            raise DomainError("b0", self.b0, "positive")
        if self.n < 0:
            raise DomainError("n", self.n, "non-negative")
        if not (math.isfinite(self.lower) and self.lower >= 0.0):
            raise DomainError("lower", self.lower, "finite and non-negative")
        if not math.isfinite(self.s_w):
            raise DomainError("s_w", self.s_w, "finite")
        # w - log w >= 1, up to rounding of the sum
        if self.kind is ShapeTargetKind.SCALE_MIXTURE and self.s_w < self.n * (1.0 - 1e-12):
            raise DomainError("s_w", self.s_w, f"at least n = {self.n}")


@dataclass(frozen=True)
class GammaApprox:
    A: float
    B: float
    iterations_used: int
    converged: bool

    def __post_init__(self):
        if not (self.A > 0.0 and self.B > 0.0):
            raise DomainError("(A, B)", (self.A, self.B), "both positive")


def log_target(alpha: float, t: ShapeTarget) -> float:
    """
    Log of the unnormalized shape conditional, constants dropped.

    Arguments:
    ----------
        alpha (float): shape value, positive.
        t (ShapeTarget): prior and likelihood statistics.

    Returns:
    --------
        float: (a0-1) ln alpha - b0 alpha - n ln Gamma(alpha) - alpha s_w,
        plus n alpha ln alpha for the scale-mixture kind; -inf below ``t.lower``.
    """
    if not alpha > 0.0:
        raise DomainError("alpha", alpha, "positive")
    if alpha <= t.lower:
        return -math.inf
    log_alpha = math.log(alpha)
    value = (t.a0 - 1.0) * log_alpha - t.b0 * alpha - t.n * float(special.gammaln(alpha)) - alpha * t.s_w
    if t.kind is ShapeTargetKind.SCALE_MIXTURE:
        value += t.n * alpha * log_alpha
    return value


def log_target_derivatives(alpha: float, t: ShapeTarget) -> Tuple[float, float]:
    """First and second derivatives of ``log_target`` in alpha."""
    if not alpha > 0.0:
        raise DomainError("alpha", alpha, "positive")
    d1 = (t.a0 - 1.0) / alpha - t.b0 - t.n * float(special.digamma(alpha)) - t.s_w
    d2 = -(t.a0 - 1.0) / alpha**2 - t.n * float(special.polygamma(1, alpha))
    if t.kind is ShapeTargetKind.SCALE_MIXTURE:
        d1 += t.n * (math.log(alpha) + 1.0)
        d2 += t.n / alpha
    return d1, d2


def truncated_gamma_mean(shape: float, rate: float, lower: float) -> float:
    """Mean of Ga(shape, rate) restricted to (lower, inf)."""
    if lower == 0.0:
        return shape / rate
    tail = float(special.gammaincc(shape, rate * lower))
    if tail < TAIL_MASS_FLOOR:
        # deep tail: the excess over ``lower`` is close to exponential
        return lower + 1.0 / rate
    return shape / rate * float(special.gammaincc(shape + 1.0, rate * lower)) / tail


def log_gamma_proposal_density(x: float, shape: float, rate: float, lower: float = 0.0) -> float:
    """Log density of Ga(shape, rate) truncated to (lower, inf), normalizer included."""
    if x <= lower:
        return -math.inf
    return (
        shape * math.log(rate)
        - float(special.gammaln(shape))
        + (shape - 1.0) * math.log(x)
        - rate * x
        - truncated_gamma_log_tail(shape, rate, lower)
    )


def _initial_mean(t: ShapeTarget) -> float:
    if t.kind is ShapeTargetKind.SCALE_MIXTURE:
        # Stirling: n(alpha ln alpha - ln Gamma(alpha)) ~ n alpha + (n/2) ln alpha
        shape = t.a0 + 0.5 * t.n
        rate = t.b0 + t.s_w - t.n
        return max(truncated_gamma_mean(shape, rate, t.lower), t.lower * (1.0 + 1e-8))

    # GAMMA_LIKELIHOOD: mode of alpha * target on the log scale
    def negative(u: float) -> float:
        return -(log_target(math.exp(u), t) + u)

    lo = math.log(t.lower) if t.lower > 0.0 else -30.0
    res = optimize.minimize_scalar(negative, bounds=(lo, 30.0), method="bounded")
    return max(math.exp(res.x), t.lower * (1.0 + 1e-8))


def fit_gamma_approx(t: ShapeTarget, eps: float = AMH_EPS, max_iter: int = AMH_MAX_ITER) -> GammaApprox:
    """
    Fits Ga(A, B) to the shape conditional by derivative matching at the mean.

    Arguments:
    ----------
        t (ShapeTarget): the target.
        eps (float): relative tolerance on the change of the mean.
        max_iter (int): maximum number of matching sweeps.

    Returns:
    --------
        GammaApprox: the last valid (A, B). ``converged`` is False when the sweep
        budget ran out or an update left the positive quadrant.
    """
    if not eps > 0.0:
        raise DomainError("eps", eps, "positive")
    if max_iter < 1:
        raise DomainError("max_iter", max_iter, "a positive integer")
    mu = _initial_mean(t)
    A = B = math.nan
    for it in range(1, max_iter + 1):
        d1, d2 = log_target_derivatives(mu, t)
        A_new = 1.0 - mu * mu * d2
        B_new = (A_new - 1.0) / mu - d1
        if not (math.isfinite(A_new) and math.isfinite(B_new) and A_new > 0.0 and B_new > 0.0):
            logger.debug(f"gamma approximation left the domain at sweep {it}: A={A_new}, B={B_new}")
            if math.isnan(A):
                # first sweep failed: fall back to a gamma with mean mu
                A = 1.0 + max(-mu * mu * d2, 1.0)
                B = A / mu
            return GammaApprox(A=A, B=B, iterations_used=it - 1, converged=False)
        A, B = A_new, B_new
        mu_new = truncated_gamma_mean(A, B, t.lower)
        if abs(mu_new / mu - 1.0) < eps:
            return GammaApprox(A=A, B=B, iterations_used=it, converged=True)
        mu = mu_new
    logger.debug(f"gamma approximation not converged after {max_iter} sweeps")
    return GammaApprox(A=A, B=B, iterations_used=max_iter, converged=False)


def amh_shape_step(alpha_old: float, t: ShapeTarget, approx: GammaApprox, rng: RngStream) -> ShapeUpdate:
    """
    Independence MH step with proposal Ga(A, B) truncated to (t.lower, inf).

    Arguments:
    ----------
        alpha_old (float): current shape.
        t (ShapeTarget): the target.
        approx (GammaApprox): fitted proposal.
        rng (RngStream): random stream.

    Returns:
    --------
        ShapeUpdate: ``value`` is the new shape. The acceptance floor is -inf since
        the approximation carries no guaranteed bound.
    """
    proposal = float(sample_truncated_gamma(approx.A, approx.B, t.lower, rng))
    log_ratio = (log_target(proposal, t) - log_target(alpha_old, t)) - (
        log_gamma_proposal_density(proposal, approx.A, approx.B, t.lower)
        - log_gamma_proposal_density(alpha_old, approx.A, approx.B, t.lower)
    )
    log_accept = min(0.0, log_ratio) if not np.isnan(log_ratio) else -math.inf
    accepted = accept_or_keep(log_accept, rng)
    return ShapeUpdate(
        value=proposal if accepted else alpha_old,
        accepted=accepted,
        proposal=proposal,
        log_accept=log_accept,
        log_accept_floor=-math.inf,
    )
