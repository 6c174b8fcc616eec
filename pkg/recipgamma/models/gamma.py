"""
Gamma model x_i ~ Ga(alpha, beta) with priors alpha ~ Ga(a, b), beta ~ Ga(c, d).

The augmented sampler works with gamma = beta/alpha, under which the alpha full
conditional given the beta latents (and, for K >= 1, the duplication latents
t_k) is exactly a gamma density times g(2^K n alpha).
"""
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

import numpy as np

from recipgamma.core.augmentation import (
    BetaLatents,
    KLevelLatents,
    ShapeConditionalParams,
    sample_beta_latents,
    sample_k_latents,
)
from recipgamma.core.baseline_amh import ShapeTarget, amh_shape_step, fit_gamma_approx
from recipgamma.core.metropolis import ShapeUpdate, stirling_mh
from recipgamma.core.rng_dists import RngStream, sample_gamma
from recipgamma.models.base import require_positive
from recipgamma.utils.constants import MAX_K_LEVELS
from recipgamma.utils.errors import DomainError, NumericalProprietyError
from recipgamma.utils.types import ShapeTargetKind

_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class GammaData:
    x: np.ndarray
    n: int
    sum_x: float
    sum_log_x: float

    @classmethod
    def from_values(cls, x) -> "GammaData":
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.size < 1:
            raise DomainError("x", x.size, "at least one observation")
        if not np.all(np.isfinite(x) & (x > 0.0)):
            raise DomainError("x", "non-positive or non-finite values", "strictly positive")
        return cls(x=x, n=int(x.size), sum_x=float(x.sum()), sum_log_x=float(np.log(x).sum()))


@dataclass(frozen=True)
class GammaModelConfig:
    a: float = 1.0
    b: float = 1.0
    c: float = 1.0
    d: float = 1.0
    K: int = 0

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            require_positive(name, getattr(self, name))
        if int(self.K) != self.K or not 0 <= self.K <= MAX_K_LEVELS:
            raise DomainError("K", self.K, f"an integer in [0, {MAX_K_LEVELS}]")


@dataclass(frozen=True)
class GammaModelState:
    alpha: float
    gamma_ratio: float
    rho: BetaLatents
    t_latents: KLevelLatents
    accept_count: int = 0
    step_count: int = 0
    last_update: Optional[ShapeUpdate] = None

    @property
    def beta(self) -> float:
        return self.alpha * self.gamma_ratio


def shape_conditional(
    data: GammaData, cfg: GammaModelConfig, gamma_ratio: float, log_rho_sum: float, t: KLevelLatents
) -> ShapeConditionalParams:
    """
    Gamma proposal Ga(A_K, B_K) for alpha given gamma, the beta latents and t.

    Arguments:
    ----------
        data (GammaData): observations with their sufficient statistics.
        cfg (GammaModelConfig): priors and the duplication level K.
        gamma_ratio (float): current beta / alpha.
        log_rho_sum (float): sum of log(1/rho_i).
        t (KLevelLatents): duplication latents (empty for K = 0).

    Returns:
    --------
        ShapeConditionalParams: A_K = n + K/2 - 1/2 + c + a and
        B_K = -sum log x + sum log(1/rho) - 2^K n - (2(2^K - 1) - K) n ln 2
              - n log gamma + gamma (sum x + d) + b + sum_k (2^K n t_k - 2^(k-1) n ln t_k).
    """
    n, K = data.n, t.K
    two_k = 2.0**K
    A = n + 0.5 * K - 0.5 + cfg.c + cfg.a
    terms = [
        -data.sum_log_x,
        log_rho_sum,
        -two_k * n,
        -(2.0 * (two_k - 1.0) - K) * n * _LOG2,
        -n * math.log(gamma_ratio),
        gamma_ratio * (data.sum_x + cfg.d),
        cfg.b,
    ]
    if K:
        levels = 2.0 ** np.arange(K)
        terms.extend(two_k * n * t.t - levels * n * np.log(t.t))
    B = math.fsum(terms)
    if not B > 0.0:
        raise NumericalProprietyError("alpha", B, f"gamma model, K={K}")
    return ShapeConditionalParams(A=A, B=B)


def _draw_gamma_ratio(alpha: float, data: GammaData, cfg: GammaModelConfig, rng: RngStream) -> float:
    return float(sample_gamma(data.n * alpha + cfg.c, alpha * (data.sum_x + cfg.d), rng))


def init_state(data: GammaData, cfg: GammaModelConfig, rng: RngStream) -> GammaModelState:
    alpha = 1.0
    return GammaModelState(
        alpha=alpha,
        gamma_ratio=1.0,
        rho=sample_beta_latents(alpha, data.n, rng),
        t_latents=sample_k_latents(alpha, data.n, cfg.K, rng),
    )


def gamma_step(state: GammaModelState, data: GammaData, cfg: GammaModelConfig, rng: RngStream) -> GammaModelState:
    """One sweep: gamma, rho, t (K >= 1), then alpha by MH with m_eff = 2^K n."""
    alpha = state.alpha
    gamma_ratio = _draw_gamma_ratio(alpha, data, cfg, rng)
    rho = sample_beta_latents(alpha, data.n, rng)
    t = sample_k_latents(alpha, data.n, cfg.K, rng)
    cond = shape_conditional(data, cfg, gamma_ratio, rho.log_sum, t)
    proposal = float(sample_gamma(cond.A, cond.B, rng))
    update = stirling_mh(2**cfg.K * data.n, proposal, alpha, 1, rng)
    return replace(
        state,
        alpha=update.value,
        gamma_ratio=gamma_ratio,
        rho=rho,
        t_latents=t,
        accept_count=state.accept_count + int(update.accepted),
        step_count=state.step_count + 1,
        last_update=update,
    )


def amh_target(data: GammaData, cfg: GammaModelConfig, beta: float) -> ShapeTarget:
    return ShapeTarget(
        a0=cfg.a,
        b0=cfg.b,
        n=data.n,
        s_w=-(data.n * math.log(beta) + data.sum_log_x),
        kind=ShapeTargetKind.GAMMA_LIKELIHOOD,
    )


def gamma_amh_step(state: GammaModelState, data: GammaData, cfg: GammaModelConfig, rng: RngStream) -> GammaModelState:
    """One sweep of the (alpha, beta) sampler with the approximate-MH alpha block."""
    alpha = state.alpha
    beta = float(sample_gamma(data.n * alpha + cfg.c, data.sum_x + cfg.d, rng))
    target = amh_target(data, cfg, beta)
    update = amh_shape_step(alpha, target, fit_gamma_approx(target), rng)
    return replace(
        state,
        alpha=update.value,
        gamma_ratio=beta / update.value,
        accept_count=state.accept_count + int(update.accepted),
        step_count=state.step_count + 1,
        last_update=update,
    )


def init_amh_state(data: GammaData, cfg: GammaModelConfig, rng: RngStream) -> GammaModelState:
    return GammaModelState(alpha=1.0, gamma_ratio=1.0, rho=BetaLatents.empty(), t_latents=KLevelLatents.empty())


def extract(state: GammaModelState) -> np.ndarray:
    return np.array([state.alpha, state.beta])


def param_names(data: GammaData) -> List[str]:
    return ["alpha", "beta"]


def accept_names(data: GammaData) -> List[str]:
    return ["alpha"]


def simulate(alpha: float, beta: float, n: int, rng: RngStream) -> GammaData:
    return GammaData.from_values(np.atleast_1d(sample_gamma(alpha, beta, rng, size=n)))


def prior_draw(cfg: GammaModelConfig, rng: RngStream) -> Tuple[float, float]:
    return float(sample_gamma(cfg.a, cfg.b, rng)), float(sample_gamma(cfg.c, cfg.d, rng))
