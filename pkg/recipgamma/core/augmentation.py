"""
Augmentation steps shared by the model samplers.

* beta latents: 1/Gamma(xi)^m written through m - 1 beta integrals,
* the gamma-power latent w absorbing xi^(m xi),
* exponential-tilt latents turning the exp(b xi) factor of a PTN conditional
  into a gamma (Poisson route) or GIG (normal route) update of xi^2,
* K-level gamma latents t_k of the repeated-duplication extension.

Beta variates are built from gamma pairs, rho = G1 / (G1 + G2), so that
log(1/rho) = log1p(G2 / G1) keeps full precision even when rho rounds to 1,
which happens routinely for the last index when (m - j + 1)/m is tiny.
"""
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from recipgamma.core.rng_dists import (
    GigParams,
    PtnParams,
    RngStream,
    sample_gamma,
    sample_gig,
    sample_normal,
    sample_poisson,
    sample_ptn,
)
from recipgamma.utils.errors import DomainError
from recipgamma.utils.logging import logger
from recipgamma.utils.types import TiltVariant

ArrayOrFloat = Union[float, np.ndarray]

_TINY = np.finfo(float).tiny
_ONE_MINUS = np.nextafter(1.0, 0.0)


@dataclass(frozen=True)
class BetaLatents:
    """
    Beta latents rho_j, j = 2..m along axis 0 (one column per coordinate when the
    shape is a vector). ``log_inv`` holds log(1/rho_j) computed from the gamma pair.
    """

    rho: np.ndarray
    log_inv: np.ndarray
    m: int
    clamped: int = 0

    @property
    def log_sum(self) -> ArrayOrFloat:
        total = self.log_inv.sum(axis=0)
        return float(total) if np.ndim(total) == 0 else total

    @classmethod
    def empty(cls, m: int = 1) -> "BetaLatents":
        return cls(rho=np.empty(0), log_inv=np.empty(0), m=m)


@dataclass(frozen=True)
class KLevelLatents:
    t: np.ndarray
    K: int

    @classmethod
    def empty(cls) -> "KLevelLatents":
        return cls(t=np.empty(0), K=0)


@dataclass(frozen=True)
class TiltLatents:
    variant: TiltVariant
    eta: float
    M: float
    b_prime: float
    zeta: Optional[int] = None
    theta: Optional[float] = None


@dataclass(frozen=True)
class ShapeConditionalParams:
    """
    Coefficients of a shape full conditional: (A, B) when it is used as a gamma
    proposal, (c, a, b) when it is PTN shaped.
    """

    A: float
    B: float
    c: Optional[float] = None
    a: Optional[float] = None
    b: Optional[float] = None

    def ptn(self) -> PtnParams:
        return PtnParams(c=self.c, a=self.a, b=self.b)


def _beta_from_gamma_pair(shape_a: np.ndarray, shape_b: np.ndarray, m: int, rng: RngStream) -> BetaLatents:
    g1 = rng.generator.standard_gamma(shape_a)
    g2 = rng.generator.standard_gamma(shape_b)
    underflow = g1 == 0.0
    clamped = int(underflow.sum())
    if clamped:
        g1 = np.where(underflow, _TINY, g1)
    ratio = g2 / g1
    log_inv = np.log1p(ratio)
    rho = 1.0 / (1.0 + ratio)
    at_edge = (rho <= 0.0) | (rho >= 1.0)
    clamped += int(at_edge.sum())
    if clamped:
        rho = np.clip(rho, _TINY, _ONE_MINUS)
        logger.debug(f"{clamped} beta latent(s) rounded to the boundary and were clamped")
    return BetaLatents(rho=rho, log_inv=log_inv, m=m, clamped=clamped)


def sample_beta_latents(xi: ArrayOrFloat, m: int, rng: RngStream) -> BetaLatents:
    """
    Draws rho_j ~ Beta(xi + (j-1)/m, (m-j+1)/m) independently for j = 2..m.

    Arguments:
    ----------
        xi (float or np.ndarray): shape value, or a vector of shapes (one column each).
        m (int): multiplicity of the reciprocal gamma factor.
        rng (RngStream): random stream.

    Returns:
    --------
        BetaLatents: rho of shape (m-1,) or (m-1, len(xi)).
    """
    if int(m) != m or m < 1:
        raise DomainError("m", m, "a positive integer")
    xi_arr = np.asarray(xi, dtype=float)
    if np.any(xi_arr <= 0.0):
        raise DomainError("xi", xi, "positive")
    m = int(m)
    if m == 1:
        shape = (0,) + xi_arr.shape
        return BetaLatents(rho=np.empty(shape), log_inv=np.empty(shape), m=1)
    offsets = (np.arange(2, m + 1) - 1.0) / m
    offsets = offsets.reshape((-1,) + (1,) * xi_arr.ndim)
    shape_a = xi_arr + offsets
    shape_b = np.broadcast_to(1.0 - offsets, shape_a.shape)
    return _beta_from_gamma_pair(shape_a, shape_b, m, rng)


def sample_wishart_latents(alpha: float, m: int, rng: RngStream) -> BetaLatents:
    """Draws rho_j ~ Beta(2 alpha + (j-1)/m, (2 - 1/m)(j-1)) for j = 2..m (p = 2m)."""
    if int(m) != m or m < 1:
        raise DomainError("m", m, "a positive integer")
    m = int(m)
    if m == 1:
        return BetaLatents.empty(1)
    steps = np.arange(2, m + 1) - 1.0
    return _beta_from_gamma_pair(2.0 * alpha + steps / m, (2.0 - 1.0 / m) * steps, m, rng)


def sample_power_latent(xi: ArrayOrFloat, m: int, rng: RngStream) -> ArrayOrFloat:
    """w ~ Ga(m xi, m xi^2), so that E[w] = 1/xi and Var[w] = 1/(m xi^3)."""
    xi_arr = np.asarray(xi, dtype=float)
    w = sample_gamma(m * xi_arr, m * xi_arr * xi_arr, rng)
    return float(w) if xi_arr.ndim == 0 else w


def sample_k_latents(xi: float, m: int, K: int, rng: RngStream) -> KLevelLatents:
    """t_k ~ Ga(2^(k-1) m xi + 1/2, 2^K m xi) for k = 1..K."""
    if K == 0:
        return KLevelLatents.empty()
    levels = 2.0 ** np.arange(K)
    shapes = levels * m * xi + 0.5
    rate = 2.0**K * m * xi
    return KLevelLatents(t=np.atleast_1d(sample_gamma(shapes, rate, rng)), K=K)


def conditional_after_beta_latents(a1: float, b1: float, m: int, log_sum: float) -> ShapeConditionalParams:
    """
    Gamma part of the shape conditional Ga(xi | a1, b1) / Gamma(xi)^m once the beta latents
    are introduced: A = a1 + m - 1/2, B = b1 - m + sum log(1/rho_j). The leftover
    xi^(-m xi) factor is what the power latent w absorbs.
    """
    return ShapeConditionalParams(A=a1 + m - 0.5, B=b1 - m + log_sum)


def ptn_params_from_conditional(a3: float, b3: float, m: int, w: float) -> PtnParams:
    """PTN coefficients once the power latent w is added: c = a3 + 1/2, a = m w, b = m log w + m - b3."""
    if not w > 0.0:
        raise DomainError("w", w, "positive")
    return PtnParams(c=a3 + 0.5, a=m * w, b=m * math.log(w) + m - b3)


def _tilt_constants(b: float):
    M = 1.0 + max(0.0, b)
    return M, M - b


def sample_tilt_poisson(xi: float, ptn: PtnParams, rng: RngStream) -> TiltLatents:
    M, b_prime = _tilt_constants(ptn.b)
    zeta = int(sample_poisson(M * xi, rng))
    eta = float(sample_gig(GigParams(0.5, 1.0, (b_prime * xi) ** 2), rng))
    return TiltLatents(TiltVariant.POISSON, eta=eta, M=M, b_prime=b_prime, zeta=zeta)


def sample_tilt_normal(xi: float, ptn: PtnParams, rng: RngStream) -> TiltLatents:
    M, b_prime = _tilt_constants(ptn.b)
    theta = float(sample_normal(2.0 * M * xi, 2.0 * M * xi, rng))
    chi = b_prime * xi + theta * theta / (4.0 * M * xi)
    eta = float(sample_gig(GigParams(0.5, 1.0, chi * chi), rng))
    return TiltLatents(TiltVariant.NORMAL, eta=eta, M=M, b_prime=b_prime, theta=theta)


def tilt_shape_update(tilt: TiltLatents, ptn: PtnParams):
    """Distribution of u = xi^2 given the tilt latents: gamma (shape, rate) or GigParams."""
    if tilt.variant is TiltVariant.POISSON:
        return (tilt.zeta + ptn.c) / 2.0, ptn.a + tilt.b_prime**2 / (2.0 * tilt.eta)
    return GigParams(
        p=ptn.c / 2.0 - 0.25,
        a=2.0 * ptn.a + tilt.b_prime**2 / tilt.eta,
        b=tilt.theta**4 / (16.0 * tilt.M**2 * tilt.eta),
    )


def sample_tilted_shape(tilt: TiltLatents, ptn: PtnParams, rng: RngStream) -> float:
    update = tilt_shape_update(tilt, ptn)
    if isinstance(update, GigParams):
        u = sample_gig(update, rng)
    else:
        u = sample_gamma(update[0], update[1], rng)
    return math.sqrt(float(u))


def propose_shape(variant: TiltVariant, xi: float, ptn: PtnParams, rng: RngStream) -> float:
    """
    Draws a shape proposal from the PTN-shaped conditional ``ptn`` along one of the
    three routes; the tilt routes refresh their latents at the current shape ``xi``.
    """
    if variant is TiltVariant.PTN_DIRECT:
        return float(sample_ptn(ptn, rng))
    if variant is TiltVariant.POISSON:
        tilt = sample_tilt_poisson(xi, ptn, rng)
    else:
        tilt = sample_tilt_normal(xi, ptn, rng)
    return sample_tilted_shape(tilt, ptn, rng)
