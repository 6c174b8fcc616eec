"""
Negative binomial model y_i ~ NB(alpha, p_i) with known success probabilities,
P(y) = Gamma(alpha + y) / (Gamma(alpha) y!) p^alpha (1 - p)^y, and alpha ~ Ga(a, b).
"""
import math
from dataclasses import dataclass, replace
from typing import List, Optional

import numpy as np

from recipgamma.core.augmentation import BetaLatents, propose_shape, sample_beta_latents, sample_power_latent
from recipgamma.core.metropolis import ShapeUpdate, stirling_mh
from recipgamma.core.rng_dists import PtnParams, RngStream, sample_gamma, sample_log_gamma
from recipgamma.models.base import require_beta_latent_size, require_positive
from recipgamma.utils.errors import DomainError
from recipgamma.utils.types import ModelFamily, TiltVariant


@dataclass(frozen=True)
class NegBinData:
    y: np.ndarray
    p: np.ndarray
    sum_log_p: float

    @property
    def n(self) -> int:
        return self.y.size

    @classmethod
    def from_values(cls, y, p) -> "NegBinData":
        y = np.asarray(y).reshape(-1)
        if np.any(y < 0) or np.any(y != np.round(y)):
            raise DomainError("y", "negative or fractional counts", "non-negative integers")
        p = np.broadcast_to(np.asarray(p, dtype=float), y.shape).copy()
        if np.any((p <= 0.0) | (p >= 1.0)):
            raise DomainError("p", "values outside (0, 1)", "strictly inside (0, 1)")
        return cls(y=y.astype(np.int64), p=p, sum_log_p=float(np.log(p).sum()))


@dataclass(frozen=True)
class NegBinConfig:
    a: float = 1.0
    b: float = 1.0
    variant: TiltVariant = TiltVariant.PTN_DIRECT

    def __post_init__(self):
        require_positive("a", self.a)
        require_positive("b", self.b)


@dataclass(frozen=True)
class NegBinState:
    alpha: float
    z: np.ndarray
    w: float
    rho: BetaLatents
    accept_count: int = 0
    step_count: int = 0
    last_update: Optional[ShapeUpdate] = None


def shape_ptn(data: NegBinData, cfg: NegBinConfig, sum_log_z: float, w: float, log_rho_sum: float) -> PtnParams:
    """c = n + a, a = n w, b = 2n - sum log(1/p_i) + sum log z_i + n log w - sum log(1/rho_i) - b."""
    n = data.n
    return PtnParams(
        c=n + cfg.a,
        a=n * w,
        b=math.fsum([2.0 * n, data.sum_log_p, sum_log_z, n * math.log(w), -log_rho_sum, -cfg.b]),
    )


def _draw_latents(alpha: float, data: NegBinData, rng: RngStream):
    log_z = np.atleast_1d(sample_log_gamma(alpha + data.y, rng))
    w = sample_power_latent(alpha, data.n, rng)
    rho = sample_beta_latents(alpha, data.n, rng)
    return log_z, w, rho


def init_state(data: NegBinData, cfg: NegBinConfig, rng: RngStream) -> NegBinState:
    require_beta_latent_size(data.n, ModelFamily.NEG_BIN)
    alpha = 1.0
    log_z, w, rho = _draw_latents(alpha, data, rng)
    return NegBinState(alpha=alpha, z=np.exp(log_z), w=w, rho=rho)


def negbin_step(state: NegBinState, data: NegBinData, cfg: NegBinConfig, rng: RngStream) -> NegBinState:
    """One sweep: z_i ~ Ga(alpha + y_i, 1), w, rho, then alpha through the PTN route (power 2)."""
    require_beta_latent_size(data.n, ModelFamily.NEG_BIN)
    log_z, w, rho = _draw_latents(state.alpha, data, rng)
    ptn = shape_ptn(data, cfg, float(log_z.sum()), w, rho.log_sum)
    proposal = propose_shape(cfg.variant, state.alpha, ptn, rng)
    update = stirling_mh(data.n, proposal, state.alpha, 2, rng)
    return replace(
        state,
        alpha=update.value,
        z=np.exp(log_z),
        w=w,
        rho=rho,
        accept_count=state.accept_count + int(update.accepted),
        step_count=state.step_count + 1,
        last_update=update,
    )


def extract(state: NegBinState) -> np.ndarray:
    return np.array([state.alpha])


def param_names(data: NegBinData) -> List[str]:
    return ["alpha"]


def accept_names(data: NegBinData) -> List[str]:
    return ["alpha"]


def simulate(alpha: float, p, n: int, rng: RngStream) -> NegBinData:
    p = np.broadcast_to(np.asarray(p, dtype=float), (n,))
    return NegBinData.from_values(rng.generator.negative_binomial(alpha, p), p)


def prior_draw(cfg: NegBinConfig, rng: RngStream) -> float:
    return float(sample_gamma(cfg.a, cfg.b, rng))
