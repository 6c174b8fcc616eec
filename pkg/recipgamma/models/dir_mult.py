"""
Dirichlet-multinomial model x_i | p_i ~ Mult(N_i, p_i), p_i ~ Dir(alpha_0..alpha_L),
alpha_l ~ Ga(a, b) independently.

Each alpha_l has a PTN-shaped full conditional after the z, w and beta latents
are introduced; the proposal is drawn by one of three routes (TiltVariant) and
accepted with the squared ratio g(n alpha*)^2 / g(n alpha)^2.
"""
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

import numpy as np

from recipgamma.core.augmentation import BetaLatents, propose_shape, sample_beta_latents, sample_power_latent
from recipgamma.core.metropolis import ShapeUpdate, stirling_mh
from recipgamma.core.rng_dists import (
    PtnParams,
    RngStream,
    sample_dirichlet,
    sample_gamma,
    sample_log_dirichlet,
    sample_log_gamma,
    sample_multinomial,
)
from recipgamma.models.base import as_count_matrix, require_beta_latent_size, require_positive
from recipgamma.utils.types import ModelFamily, TiltVariant


@dataclass(frozen=True)
class DirMultData:
    counts: np.ndarray
    totals: np.ndarray

    @property
    def n(self) -> int:
        return self.counts.shape[0]

    @property
    def categories(self) -> int:
        return self.counts.shape[1]

    @classmethod
    def from_counts(cls, counts) -> "DirMultData":
        x = as_count_matrix(counts)
        return cls(counts=x, totals=x.sum(axis=1))


@dataclass(frozen=True)
class DirMultConfig:
    a: float = 0.1
    b: float = 1.0
    variant: TiltVariant = TiltVariant.PTN_DIRECT

    def __post_init__(self):
        require_positive("a", self.a)
        require_positive("b", self.b)


@dataclass(frozen=True)
class DirMultState:
    p: np.ndarray
    alpha: np.ndarray
    z: np.ndarray
    w: np.ndarray
    rho: BetaLatents
    accept_count: np.ndarray
    step_count: int = 0
    last_updates: Optional[Tuple[ShapeUpdate, ...]] = None


def initial_probabilities(data: DirMultData) -> np.ndarray:
    return (data.counts + 1.0) / (data.totals[:, None] + data.categories)


def coordinate_ptn(
    n: int, log_p_sum: float, sum_log_z: float, w: float, log_rho_sum: float, cfg: DirMultConfig
) -> PtnParams:
    """
    PTN(c, a, b) full conditional of one alpha_l with c = n + a, a = n w_l and
    b = sum_i log p_il + sum_i log z_i + 2n + n log w_l - sum_i log(1/rho_il) - b.
    """
    return PtnParams(
        c=n + cfg.a,
        a=n * w,
        b=math.fsum([log_p_sum, sum_log_z, 2.0 * n, n * math.log(w), -log_rho_sum, -cfg.b]),
    )


def _draw_latents(alpha: np.ndarray, n: int, rng: RngStream):
    log_z = np.atleast_1d(sample_log_gamma(alpha.sum(), rng, size=n))
    w = sample_power_latent(alpha, n, rng)
    rho = sample_beta_latents(alpha, n, rng)
    return log_z, w, rho


def init_state(data: DirMultData, cfg: DirMultConfig, rng: RngStream) -> DirMultState:
    require_beta_latent_size(data.n, ModelFamily.DIR_MULT)
    alpha = np.ones(data.categories)
    log_z, w, rho = _draw_latents(alpha, data.n, rng)
    return DirMultState(
        p=initial_probabilities(data),
        alpha=alpha,
        z=np.exp(log_z),
        w=w,
        rho=rho,
        accept_count=np.zeros(data.categories, dtype=np.int64),
    )


def dirmult_step(state: DirMultState, data: DirMultData, cfg: DirMultConfig, rng: RngStream) -> DirMultState:
    """One sweep: p, z, w, rho, then every alpha_l in turn."""
    n = data.n
    require_beta_latent_size(n, ModelFamily.DIR_MULT)
    log_p = sample_log_dirichlet(data.counts + state.alpha, rng)
    log_z, w, rho = _draw_latents(state.alpha, n, rng)
    log_p_sum = log_p.sum(axis=0)
    sum_log_z = float(log_z.sum())
    log_rho_sum = np.atleast_1d(rho.log_sum)

    alpha = state.alpha.copy()
    updates = []
    for l in range(data.categories):
        ptn = coordinate_ptn(n, float(log_p_sum[l]), sum_log_z, float(w[l]), float(log_rho_sum[l]), cfg)
        proposal = propose_shape(cfg.variant, float(alpha[l]), ptn, rng)
        update = stirling_mh(n, proposal, float(alpha[l]), 2, rng)
        alpha[l] = update.value
        updates.append(update)
    accepted = np.fromiter((u.accepted for u in updates), dtype=np.int64, count=len(updates))
    return replace(
        state,
        p=np.exp(log_p),
        alpha=alpha,
        z=np.exp(log_z),
        w=w,
        rho=rho,
        accept_count=state.accept_count + accepted,
        step_count=state.step_count + 1,
        last_updates=tuple(updates),
    )


def extract(state: DirMultState) -> np.ndarray:
    return state.alpha.copy()


def param_names(data: DirMultData) -> List[str]:
    return [f"alpha_{l}" for l in range(data.categories)]


def accept_names(data: DirMultData) -> List[str]:
    return param_names(data)


def simulate(alpha, totals, rng: RngStream) -> DirMultData:
    """p_i ~ Dir(alpha), then x_i ~ Mult(N_i, p_i) for every entry N_i of ``totals``."""
    alpha = np.asarray(alpha, dtype=float)
    totals = np.asarray(totals, dtype=np.int64)
    p = sample_dirichlet(np.broadcast_to(alpha, (totals.size, alpha.size)), rng)
    counts = np.stack([sample_multinomial(int(N), row, rng) for N, row in zip(totals, p)])
    return DirMultData.from_counts(counts)


def prior_draw(cfg: DirMultConfig, categories: int, rng: RngStream) -> np.ndarray:
    return np.atleast_1d(sample_gamma(cfg.a, cfg.b, rng, size=categories))
