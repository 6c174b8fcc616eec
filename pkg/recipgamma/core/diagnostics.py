import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import fft

from recipgamma.utils.constants import MIN_ESS_LENGTH
from recipgamma.utils.errors import DegenerateSeriesError, DomainError


@dataclass(frozen=True)
class ChainResult:
    """
    Post-burn-in output of one chain.

    ``accept_rate`` has one entry per MH block, labelled by ``accept_names``
    (empty for pure Gibbs samplers). ``wall_seconds`` covers burn-in and draws.
    """

    draws: np.ndarray
    param_names: List[str]
    accept_rate: np.ndarray
    accept_names: List[str]
    wall_seconds: float
    seed_info: Tuple[int, int]
    clamped_latents: int = 0

    def __post_init__(self):
        if self.draws.ndim != 2 or self.draws.shape[1] != len(self.param_names):
            raise DomainError("draws", self.draws.shape, f"(iterations, {len(self.param_names)})")
        if len(self.accept_rate) != len(self.accept_names):
            raise DomainError("accept_rate", len(self.accept_rate), "one entry per accept name")
        if np.any((self.accept_rate < 0.0) | (self.accept_rate > 1.0)):
            raise DomainError("accept_rate", self.accept_rate, "within [0, 1]")

    @property
    def iterations(self) -> int:
        return self.draws.shape[0]

    def column(self, name: str) -> np.ndarray:
        return self.draws[:, self.param_names.index(name)]

    def accept_rate_of(self, name: str) -> float:
        if name in self.accept_names:
            return float(self.accept_rate[self.accept_names.index(name)])
        return math.nan


@dataclass(frozen=True)
class MseReport:
    mse: float
    ratio_vs: Optional[float] = None


def _autocov(x: np.ndarray) -> np.ndarray:
    """Biased autocovariance at every lag, through a zero-padded FFT."""
    n = x.size
    centered = x - x.mean()
    size = fft.next_fast_len(2 * n)
    spectrum = fft.rfft(centered, size)
    acov = fft.irfft(spectrum * np.conjugate(spectrum), size)[:n]
    return acov / n


def ess(series: Sequence[float]) -> float:
    """
    Effective sample size of a single chain, N / tau with tau = -1 + 2 sum rho_t
    truncated by Geyer's initial positive sequence and made monotone.

    Arguments:
    ----------
        series (Sequence[float]): at least MIN_ESS_LENGTH finite values.

    Returns:
    --------
        float: in (0, 2N]; antithetic chains are capped at 2N.
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or x.size < MIN_ESS_LENGTH:
        raise DomainError("series", x.shape, f"one-dimensional with at least {MIN_ESS_LENGTH} values")
    if not np.all(np.isfinite(x)):
        raise DomainError("series", "non-finite values", "finite")
    n = x.size
    acov = _autocov(x)
    if not acov[0] > 0.0 or np.ptp(x) == 0.0:
        raise DegenerateSeriesError(n)
    rho = acov / acov[0]

    rho_hat = np.zeros(n)
    rho_hat[0] = 1.0
    rho_hat[1] = rho[1]
    t = 1
    while t < n - 2:
        even, odd = rho[t + 1], rho[t + 2]
        if even + odd < 0.0:
            break
        rho_hat[t + 1] = even
        rho_hat[t + 2] = odd
        t += 2
    max_t = t

    t = 1
    while t <= max_t - 2:
        if rho_hat[t + 1] + rho_hat[t + 2] > rho_hat[t - 1] + rho_hat[t]:
            rho_hat[t + 1] = rho_hat[t + 2] = (rho_hat[t - 1] + rho_hat[t]) / 2.0
        t += 2

    tau = -1.0 + 2.0 * float(np.sum(rho_hat[: max_t + 1]))
    if tau <= 0.0:
        return 2.0 * n
    return min(n / tau, 2.0 * n)


def sess(ess_value: float, wall_seconds: float) -> float:
    if not ess_value > 0.0:
        raise DomainError("ess_value", ess_value, "positive")
    if not wall_seconds > 0.0:
        raise DomainError("wall_seconds", wall_seconds, "positive")
    return ess_value / wall_seconds


def chain_ess(result: ChainResult) -> Dict[str, float]:
    """ESS of every parameter column; constant columns get NaN."""
    out = {}
    for i, name in enumerate(result.param_names):
        try:
            out[name] = ess(result.draws[:, i])
        except DegenerateSeriesError:
            out[name] = math.nan
    return out


def mse_report(
    estimates: Sequence[float], truth: float, comparator: Optional[Sequence[float]] = None
) -> MseReport:
    """
    Mean squared error of per-replication posterior means.

    Arguments:
    ----------
        estimates (Sequence[float]): one posterior mean per replication (at least 2).
        truth (float): true parameter value.
        comparator (Sequence[float], optional): another method's estimates of the same truth.

    Returns:
    --------
        MseReport: ``mse``, and ``ratio_vs`` = comparator MSE / this MSE when a
        comparator is supplied (NaN when this MSE is 0).
    """
    est = np.asarray(estimates, dtype=float)
    if est.size < 2:
        raise DomainError("estimates", est.size, "at least 2 replications")
    mse = float(np.mean((est - truth) ** 2))
    if comparator is None:
        return MseReport(mse=mse)
    other = float(np.mean((np.asarray(comparator, dtype=float) - truth) ** 2))
    ratio = other / mse if mse > 0.0 else (1.0 if other == 0.0 else math.nan)
    return MseReport(mse=mse, ratio_vs=ratio)


def posterior_summary(draws: np.ndarray, param_names: List[str]) -> pd.DataFrame:
    """Posterior mean, sd and central 95% interval per parameter, indexed by name."""
    draws = np.asarray(draws, dtype=float)
    if draws.ndim == 1:
        draws = draws[:, None]
    if draws.shape[1] != len(param_names):
        raise DomainError("draws", draws.shape, f"(iterations, {len(param_names)})")
    q = np.quantile(draws, [0.025, 0.975], axis=0)
    return pd.DataFrame(
        {
            "mean": draws.mean(axis=0),
            "sd": draws.std(axis=0, ddof=1),
            "q025": q[0],
            "q975": q[1],
        },
        index=pd.Index(param_names, name="param"),
    )

