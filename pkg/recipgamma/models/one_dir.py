"""
One-parameter Dirichlet model: x_i | p_i ~ Mult(N_i, p_i), p_i ~ Dir(alpha, ..., alpha)
over L + 1 categories, alpha ~ Ga(a, b).

The multiplication formula writes Gamma((L+1) alpha) / Gamma(alpha)^(L+1) through
L beta integrals with no leftover Stirling factor, so the sampler is pure Gibbs.
"""
import math
from dataclasses import dataclass, field, replace
from typing import List

import numpy as np

from recipgamma.core.augmentation import BetaLatents, sample_beta_latents
from recipgamma.core.rng_dists import RngStream, sample_gamma, sample_log_dirichlet
from recipgamma.models.base import require_positive
from recipgamma.models.dir_mult import DirMultData, initial_probabilities, simulate as simulate_dir_mult
from recipgamma.utils.errors import NumericalProprietyError


@dataclass(frozen=True)
class OneDirConfig:
    a: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        require_positive("a", self.a)
        require_positive("b", self.b)


@dataclass(frozen=True)
class OneDirState:
    p: np.ndarray
    alpha: float
    # beta latents rho_il, l = 1..L, stored (L, n)
    rho: BetaLatents
    accept_count: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    step_count: int = 0


def jensen_gap(log_p: np.ndarray) -> np.ndarray:
    """sum_l (log(1/p_il) - log(L+1)) per row, which is >= 0 with equality at the uniform row."""
    categories = log_p.shape[-1]
    return -log_p.sum(axis=-1) - categories * math.log(categories)


def _draw_rho(alpha: float, data: DirMultData, rng: RngStream) -> BetaLatents:
    # rho_il ~ Beta(alpha + l/(L+1), (L-l+1)/(L+1)): the j = l+1 rows for m = L + 1
    return sample_beta_latents(np.full(data.n, alpha), data.categories, rng)


def init_state(data: DirMultData, cfg: OneDirConfig, rng: RngStream) -> OneDirState:
    alpha = 1.0
    return OneDirState(p=initial_probabilities(data), alpha=alpha, rho=_draw_rho(alpha, data, rng))


def onedir_step(state: OneDirState, data: DirMultData, cfg: OneDirConfig, rng: RngStream) -> OneDirState:
    """
    One Gibbs sweep: p_i ~ Dir(x_i + alpha), rho, then
    alpha ~ Ga(n L + a, sum_i [sum_l log(1/rho_il) + sum_l (log(1/p_il) - log(L+1))] + b).
    """
    log_p = sample_log_dirichlet(data.counts + state.alpha, rng)
    rho = _draw_rho(state.alpha, data, rng)
    gap = np.maximum(jensen_gap(log_p), 0.0)
    rate = math.fsum([float(rho.log_inv.sum()), float(gap.sum()), cfg.b])
    if not rate > 0.0:
        raise NumericalProprietyError("alpha", rate, "one-parameter Dirichlet model")
    shape = data.n * (data.categories - 1) + cfg.a
    alpha = float(sample_gamma(shape, rate, rng))
    return replace(state, p=np.exp(log_p), alpha=alpha, rho=rho, step_count=state.step_count + 1)


def extract(state: OneDirState) -> np.ndarray:
    return np.array([state.alpha])


def param_names(data: DirMultData) -> List[str]:
    return ["alpha"]


def accept_names(data: DirMultData) -> List[str]:
    return []


def simulate(alpha: float, categories: int, totals, rng: RngStream) -> DirMultData:
    return simulate_dir_mult(np.full(categories, float(alpha)), totals, rng)


def prior_draw(cfg: OneDirConfig, rng: RngStream) -> float:
    return float(sample_gamma(cfg.a, cfg.b, rng))
