"""
Wishart model: x_i ~ N_p(0, Psi^-1), Psi ~ W_p(2 alpha + p - 1, (beta I)^-1),
alpha ~ Ga(a, b), beta ~ Ga(c, d); p even.

With gamma = beta/alpha, the multivariate gamma function of the Wishart
normalizer reduces through the duplication and multiplication formulas to
p/2 - 1 beta integrals and a single factor g(p alpha).
"""
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

import numpy as np

from recipgamma.core.augmentation import BetaLatents, ShapeConditionalParams, sample_wishart_latents
from recipgamma.core.metropolis import ShapeUpdate, stirling_mh
from recipgamma.core.rng_dists import RngStream, sample_gamma, sample_wishart
from recipgamma.models.base import require_positive
from recipgamma.utils.errors import DomainError, NumericalProprietyError, UnsupportedRegimeError


@dataclass(frozen=True)
class WishartData:
    x: np.ndarray
    scatter: np.ndarray

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def dim(self) -> int:
        return self.x.shape[1]

    @classmethod
    def from_values(cls, x) -> "WishartData":
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[0] < 1:
            raise DomainError("x", x.shape, "an (n, p) matrix with n >= 1")
        if not np.all(np.isfinite(x)):
            raise DomainError("x", "non-finite values", "finite")
        if x.shape[1] % 2:
            raise UnsupportedRegimeError(f"Wishart sampler needs an even dimension, got p={x.shape[1]}")
        return cls(x=x, scatter=x.T @ x)


@dataclass(frozen=True)
class WishartConfig:
    a: float = 1.0
    b: float = 1.0
    c: float = 1.0
    d: float = 1.0

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            require_positive(name, getattr(self, name))


@dataclass(frozen=True)
class WishartState:
    Psi: np.ndarray
    alpha: float
    gamma_ratio: float
    rho: BetaLatents
    accept_count: int = 0
    step_count: int = 0
    last_update: Optional[ShapeUpdate] = None

    @property
    def beta(self) -> float:
        return self.alpha * self.gamma_ratio


def _draw_psi(alpha: float, gamma_ratio: float, data: WishartData, rng: RngStream) -> np.ndarray:
    p = data.dim
    precision = alpha * gamma_ratio * np.eye(p) + data.scatter
    scale = np.linalg.inv(precision)
    return sample_wishart(data.n + 2.0 * alpha + p - 1.0, 0.5 * (scale + scale.T), rng)


def shape_conditional(
    Psi: np.ndarray, gamma_ratio: float, log_rho_sum: float, cfg: WishartConfig
) -> ShapeConditionalParams:
    """
    A = 1/2 + p(p-1)/2 + c + a,
    B = b + d gamma + gamma tr(Psi)/2 - p - (p log(gamma/2) + log|Psi|) + 2 sum log(1/rho_j).
    """
    p = Psi.shape[0]
    sign, logdet = np.linalg.slogdet(Psi)
    if sign <= 0:
        raise DomainError("Psi", "not positive definite", "symmetric positive definite")
    A = 0.5 + 0.5 * p * (p - 1) + cfg.c + cfg.a
    B = math.fsum(
        [
            cfg.b,
            cfg.d * gamma_ratio,
            0.5 * gamma_ratio * float(np.trace(Psi)),
            -p,
            -p * math.log(0.5 * gamma_ratio),
            -float(logdet),
            2.0 * log_rho_sum,
        ]
    )
    if not B > 0.0:
        raise NumericalProprietyError("alpha", B, "Wishart model")
    return ShapeConditionalParams(A=A, B=B)


def init_state(data: WishartData, cfg: WishartConfig, rng: RngStream) -> WishartState:
    alpha, gamma_ratio = 1.0, 1.0
    return WishartState(
        Psi=_draw_psi(alpha, gamma_ratio, data, rng),
        alpha=alpha,
        gamma_ratio=gamma_ratio,
        rho=sample_wishart_latents(alpha, data.dim // 2, rng),
    )


def wishart_step(state: WishartState, data: WishartData, cfg: WishartConfig, rng: RngStream) -> WishartState:
    """One sweep: Psi, rho, gamma, then alpha by MH with m_eff = p."""
    p = data.dim
    alpha = state.alpha
    Psi = _draw_psi(alpha, state.gamma_ratio, data, rng)
    rho = sample_wishart_latents(alpha, p // 2, rng)
    gamma_shape = p * (alpha + 0.5 * (p - 1)) + cfg.c
    gamma_ratio = float(sample_gamma(gamma_shape, (0.5 * float(np.trace(Psi)) + cfg.d) * alpha, rng))
    cond = shape_conditional(Psi, gamma_ratio, rho.log_sum, cfg)
    proposal = float(sample_gamma(cond.A, cond.B, rng))
    update = stirling_mh(p, proposal, alpha, 1, rng)
    return replace(
        state,
        Psi=Psi,
        alpha=update.value,
        gamma_ratio=gamma_ratio,
        rho=rho,
        accept_count=state.accept_count + int(update.accepted),
        step_count=state.step_count + 1,
        last_update=update,
    )


def extract(state: WishartState) -> np.ndarray:
    return np.array([state.alpha, state.beta])


def param_names(data: WishartData) -> List[str]:
    return ["alpha", "beta"]


def accept_names(data: WishartData) -> List[str]:
    return ["alpha"]


def simulate_precision(alpha: float, beta: float, p: int, rng: RngStream) -> np.ndarray:
    return sample_wishart(2.0 * alpha + p - 1.0, np.eye(p) / beta, rng)


def simulate(Psi: np.ndarray, n: int, rng: RngStream) -> WishartData:
    """x_i ~ N(0, Psi^-1) through the Cholesky factor of Psi."""
    chol = np.linalg.cholesky(Psi)
    z = rng.generator.standard_normal((n, Psi.shape[0]))
    # solves L^T x = z, so cov(x) = (L L^T)^-1
    x = np.linalg.solve(chol.T, z.T).T
    return WishartData.from_values(x)


def prior_draw(cfg: WishartConfig, rng: RngStream) -> Tuple[float, float]:
    return float(sample_gamma(cfg.a, cfg.b, rng)), float(sample_gamma(cfg.c, cfg.d, rng))
