"""
Location-scale Student-t model x_i ~ t(theta, tau, 2 alpha) in its normal
scale-mixture form x_i | w_i ~ N(theta, tau / w_i), w_i ~ Ga(alpha, alpha).

Priors: theta | tau ~ N(b, tau/a), tau ~ IG(c, d), alpha ~ Ga(a0, b0) restricted
to (alpha_lower, inf).
"""
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

import numpy as np

from recipgamma.core.augmentation import BetaLatents, conditional_after_beta_latents, sample_beta_latents
from recipgamma.core.baseline_amh import ShapeTarget, amh_shape_step, fit_gamma_approx
from recipgamma.core.metropolis import ShapeUpdate, stirling_mh
from recipgamma.core.rng_dists import (
    RngStream,
    sample_gamma,
    sample_inverse_gamma,
    sample_normal,
    sample_truncated_gamma,
)
from recipgamma.models.base import require_positive
from recipgamma.utils.errors import DomainError, NumericalProprietyError


@dataclass(frozen=True)
class TData:
    x: np.ndarray
    n: int

    @classmethod
    def from_values(cls, x) -> "TData":
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.size < 1:
            raise DomainError("x", x.size, "at least one observation")
        if not np.all(np.isfinite(x)):
            raise DomainError("x", "non-finite values", "finite")
        return cls(x=x, n=int(x.size))


@dataclass(frozen=True)
class TModelConfig:
    a: float = 0.1
    b: float = 0.0
    c: float = 0.1
    d: float = 0.1
    a0: float = 0.1
    b0: float = 0.1
    alpha_lower: float = 0.0

    def __post_init__(self):
        for name in ("a", "c", "d", "a0", "b0"):
            require_positive(name, getattr(self, name))
        if not math.isfinite(self.b):
            raise DomainError("b", self.b, "finite")
        if not (math.isfinite(self.alpha_lower) and self.alpha_lower >= 0.0):
            raise DomainError("alpha_lower", self.alpha_lower, "finite and non-negative")


@dataclass(frozen=True)
class TModelState:
    theta: float
    tau: float
    alpha: float
    w: np.ndarray
    rho: BetaLatents
    accept_count: int = 0
    step_count: int = 0
    last_update: Optional[ShapeUpdate] = None


def scale_posterior(data: TData, w: np.ndarray, cfg: TModelConfig) -> Tuple[float, float, float, float]:
    """
    Returns (c', d', a', b') of tau ~ IG(c', d') and theta | tau ~ N(b', tau/a').
    d' uses the weighted within-sample sum of squares so it stays accurate for
    data far from the prior location.
    """
    sw = float(w.sum())
    xbar = float(np.dot(w, data.x)) / sw
    ss = float(np.dot(w, (data.x - xbar) ** 2))
    a_post = cfg.a + sw
    b_post = (cfg.a * cfg.b + sw * xbar) / a_post
    d_post = 0.5 * (ss + cfg.a * sw / a_post * (xbar - cfg.b) ** 2) + cfg.d
    return 0.5 * data.n + cfg.c, d_post, a_post, b_post


def _draw_location_scale(data: TData, w: np.ndarray, cfg: TModelConfig, rng: RngStream) -> Tuple[float, float]:
    c_post, d_post, a_post, b_post = scale_posterior(data, w, cfg)
    tau = float(sample_inverse_gamma(c_post, d_post, rng))
    theta = float(sample_normal(b_post, tau / a_post, rng))
    return theta, tau


def _draw_weights(theta: float, tau: float, alpha: float, data: TData, rng: RngStream) -> np.ndarray:
    rate = alpha + (data.x - theta) ** 2 / (2.0 * tau)
    return np.atleast_1d(sample_gamma(alpha + 0.5, rate, rng))


def _weight_statistic(w: np.ndarray) -> float:
    return float(np.sum(w - np.log(w)))


def _initial_location_scale(data: TData) -> Tuple[float, float]:
    theta = float(np.median(data.x))
    q1, q3 = np.quantile(data.x, [0.25, 0.75])
    # IQR of a standard normal is 1.349
    scale = (q3 - q1) / 1.349
    tau = scale * scale if scale > 0.0 else 1.0
    return theta, tau


def _initial_alpha(cfg: TModelConfig) -> float:
    return 1.0 if cfg.alpha_lower < 1.0 else cfg.alpha_lower + 1.0


def init_state(data: TData, cfg: TModelConfig, rng: RngStream) -> TModelState:
    theta, tau = _initial_location_scale(data)
    alpha = _initial_alpha(cfg)
    return TModelState(
        theta=theta,
        tau=tau,
        alpha=alpha,
        w=_draw_weights(theta, tau, alpha, data, rng),
        rho=sample_beta_latents(alpha, data.n, rng),
    )


def t_step(state: TModelState, data: TData, cfg: TModelConfig, rng: RngStream) -> TModelState:
    """
    One sweep: tau (theta integrated out), theta, w, rho, then alpha from
    Ga(a0 + n - 1/2, b0 - n + sum(w - log w) + sum log(1/rho)) on (alpha_lower, inf),
    accepted with the g(n alpha) ratio.
    """
    theta, tau = _draw_location_scale(data, state.w, cfg, rng)
    w = _draw_weights(theta, tau, state.alpha, data, rng)
    rho = sample_beta_latents(state.alpha, data.n, rng)
    cond = conditional_after_beta_latents(cfg.a0, cfg.b0 + _weight_statistic(w), data.n, rho.log_sum)
    if not cond.B > 0.0:
        raise NumericalProprietyError("alpha", cond.B, "student-t model")
    proposal = float(sample_truncated_gamma(cond.A, cond.B, cfg.alpha_lower, rng))
    update = stirling_mh(data.n, proposal, state.alpha, 1, rng)
    return replace(
        state,
        theta=theta,
        tau=tau,
        alpha=update.value,
        w=w,
        rho=rho,
        accept_count=state.accept_count + int(update.accepted),
        step_count=state.step_count + 1,
        last_update=update,
    )


def amh_target(data: TData, cfg: TModelConfig, w: np.ndarray) -> ShapeTarget:
    return ShapeTarget(a0=cfg.a0, b0=cfg.b0, n=data.n, s_w=_weight_statistic(w), lower=cfg.alpha_lower)


def t_amh_step(state: TModelState, data: TData, cfg: TModelConfig, rng: RngStream) -> TModelState:
    """The same sweep with the alpha block replaced by the approximate-MH update."""
    theta, tau = _draw_location_scale(data, state.w, cfg, rng)
    w = _draw_weights(theta, tau, state.alpha, data, rng)
    target = amh_target(data, cfg, w)
    update = amh_shape_step(state.alpha, target, fit_gamma_approx(target), rng)
    return replace(
        state,
        theta=theta,
        tau=tau,
        alpha=update.value,
        w=w,
        accept_count=state.accept_count + int(update.accepted),
        step_count=state.step_count + 1,
        last_update=update,
    )


def init_amh_state(data: TData, cfg: TModelConfig, rng: RngStream) -> TModelState:
    theta, tau = _initial_location_scale(data)
    alpha = _initial_alpha(cfg)
    return TModelState(
        theta=theta,
        tau=tau,
        alpha=alpha,
        w=_draw_weights(theta, tau, alpha, data, rng),
        rho=BetaLatents.empty(),
    )


def extract(state: TModelState) -> np.ndarray:
    return np.array([state.theta, state.tau, state.alpha])


def param_names(data: TData) -> List[str]:
    return ["theta", "tau", "alpha"]


def accept_names(data: TData) -> List[str]:
    return ["alpha"]


def simulate(theta: float, tau: float, alpha: float, n: int, rng: RngStream) -> TData:
    """x_i = theta + sqrt(tau / w_i) z_i with w_i ~ Ga(alpha, alpha), i.e. t(theta, tau, 2 alpha)."""
    w = np.atleast_1d(sample_gamma(alpha, alpha, rng, size=n))
    z = rng.generator.standard_normal(n)
    return TData.from_values(theta + np.sqrt(tau / w) * z)


def prior_draw(cfg: TModelConfig, rng: RngStream) -> Tuple[float, float, float]:
    tau = float(sample_inverse_gamma(cfg.c, cfg.d, rng))
    theta = float(sample_normal(cfg.b, tau / cfg.a, rng))
    alpha = float(sample_truncated_gamma(cfg.a0, cfg.b0, cfg.alpha_lower, rng))
    return theta, tau, alpha
