"""
Random-variate generation for every distribution the samplers draw from.

All draws go through an ``RngStream``: a numpy ``Generator`` over the
counter-based Philox bit generator, keyed by ``SeedSequence(seed,
spawn_key=(stream_id, *path))``. Distinct (seed, stream_id, path) triples give
independent streams, and a given triple replays the same variates regardless
of which thread consumes it.
"""
import math
from dataclasses import dataclass
from typing import Callable, Dict, NamedTuple, Optional, Tuple, Union

import numpy as np
from scipy import optimize, special, stats

from recipgamma.utils.constants import TAIL_MASS_FLOOR
from recipgamma.utils.errors import DomainError, InfeasibleTruncationError, UnsupportedRegimeError

Size = Optional[Union[int, Tuple[int, ...]]]

_UINT64_MAX = 2**64 - 1


class RngStream:
    """
    Seedable, splittable random stream.

    Arguments:
    ----------
        seed (int): 64-bit unsigned experiment seed.
        stream_id (int): 64-bit unsigned stream index, one per replication.
        path (Tuple[int, ...]): optional sub-stream path below the stream, e.g. (0,) for
            data generation and (1,) for the chain of the same replication.
    """

    def __init__(self, seed: int, stream_id: int = 0, path: Tuple[int, ...] = ()) -> None:
        for name, value in (("seed", seed), ("stream_id", stream_id)):
            if int(value) != value or not 0 <= value <= _UINT64_MAX:
                raise DomainError(name, value, "a 64-bit unsigned integer")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self.path = tuple(int(k) for k in path)
        seed_seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id, *self.path))
        self.generator = np.random.Generator(np.random.Philox(seed_seq))

    def spawn(self, key: int) -> "RngStream":
        return RngStream(self.seed, self.stream_id, self.path + (key,))

    @property
    def provenance(self) -> Tuple[int, int]:
        return self.seed, self.stream_id

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id}, path={self.path})"


def _positive(name: str, value) -> None:
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError(name, value, "finite and positive")


def _nonnegative(name: str, value) -> None:
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise DomainError(name, value, "finite and non-negative")


# ----------------------
# Standard distributions
# ----------------------


def sample_gamma(shape, rate, rng: RngStream, size: Size = None):
    _positive("shape", shape)
    _positive("rate", rate)
    return rng.generator.gamma(shape, 1.0 / np.asarray(rate, dtype=float), size)


def sample_beta(alpha, beta, rng: RngStream, size: Size = None):
    _positive("alpha", alpha)
    _positive("beta", beta)
    return rng.generator.beta(alpha, beta, size)


def sample_normal(mean, var, rng: RngStream, size: Size = None):
    _positive("var", var)
    return rng.generator.normal(mean, np.sqrt(var), size)


def sample_inverse_gamma(shape, scale, rng: RngStream, size: Size = None):
    """Draws X with 1/X ~ Ga(shape, rate=scale)."""
    _positive("shape", shape)
    _positive("scale", scale)
    return 1.0 / rng.generator.gamma(shape, 1.0 / np.asarray(scale, dtype=float), size)


def sample_poisson(lam, rng: RngStream, size: Size = None):
    _nonnegative("lam", lam)
    return rng.generator.poisson(lam, size)


def sample_dirichlet(alpha, rng: RngStream) -> np.ndarray:
    """
    Dirichlet draws for every row of ``alpha`` (shape (..., k)) by normalizing
    independent gamma variates; rows whose gammas all underflow fall back to
    numpy's small-parameter Dirichlet algorithm.
    """
    alpha = np.asarray(alpha, dtype=float)
    _positive("alpha", alpha)
    g = rng.generator.standard_gamma(alpha)
    totals = g.sum(axis=-1, keepdims=True)
    if np.any(totals == 0.0):
        flat_alpha = alpha.reshape(-1, alpha.shape[-1])
        flat_g = g.reshape(-1, alpha.shape[-1])
        flat_t = totals.reshape(-1)
        for i in np.flatnonzero(flat_t == 0.0):
            flat_g[i] = rng.generator.dirichlet(flat_alpha[i])
            flat_t[i] = 1.0
        g = flat_g.reshape(alpha.shape)
        totals = flat_t.reshape(totals.shape)
    return g / totals


def sample_log_gamma(shape, rng: RngStream, size: Size = None):
    """
    log G for G ~ Ga(shape, 1). Shapes below 1 use G = G' U^(1/shape) with
    G' ~ Ga(shape + 1), so the log stays finite where G itself underflows.
    """
    _positive("shape", shape)
    shape = np.asarray(shape, dtype=float)
    if size is not None:
        shape = np.broadcast_to(shape, size)
    small = shape < 1.0
    boosted = np.where(small, shape + 1.0, shape)
    log_g = np.log(rng.generator.standard_gamma(boosted))
    log_u = np.log1p(-rng.generator.random(boosted.shape))
    log_g = np.where(small, log_g + log_u / shape, log_g)
    return float(log_g) if log_g.ndim == 0 else log_g


def sample_log_dirichlet(alpha, rng: RngStream) -> np.ndarray:
    """log p for p ~ Dir(alpha) along the last axis, normalized with logsumexp."""
    alpha = np.asarray(alpha, dtype=float)
    log_g = np.asarray(sample_log_gamma(alpha, rng))
    return log_g - special.logsumexp(log_g, axis=-1, keepdims=True)


def sample_multinomial(n_trials, probs, rng: RngStream, size: Size = None):
    probs = np.asarray(probs, dtype=float)
    _nonnegative("probs", probs)
    if np.any(np.asarray(n_trials) < 0):
        raise DomainError("n_trials", n_trials, "non-negative")
    return rng.generator.multinomial(n_trials, probs, size)


def sample_student_t(loc, scale, df, rng: RngStream, size: Size = None):
    _positive("scale", scale)
    _positive("df", df)
    return loc + np.asarray(scale) * rng.generator.standard_t(df, size)


def sample_inverse_gaussian(mean, shape, rng: RngStream, size: Size = None):
    _positive("mean", mean)
    _positive("shape", shape)
    return rng.generator.wald(mean, shape, size)


_STANDARD: Dict[str, Callable] = {
    "gamma": sample_gamma,
    "beta": sample_beta,
    "normal": sample_normal,
    "inverse_gamma": sample_inverse_gamma,
    "poisson": sample_poisson,
    "dirichlet": sample_dirichlet,
    "multinomial": sample_multinomial,
    "student_t": sample_student_t,
    "inverse_gaussian": sample_inverse_gaussian,
}


def sample_standard(kind: str, rng: RngStream, **params):
    """
    Dispatches to one of the standard samplers by name, e.g.
    ``sample_standard("gamma", rng, shape=2.0, rate=1.0)``.
    """
    try:
        fn = _STANDARD[kind]
    except KeyError:
        raise DomainError("kind", kind, f"one of {sorted(_STANDARD)}") from None
    return fn(rng=rng, **params)


# ---------------
# Truncated gamma
# ---------------


def truncated_gamma_log_tail(shape: float, rate: float, lower: float) -> float:
    """log P(X > lower) for X ~ Ga(shape, rate), from the regularized upper incomplete gamma."""
    if lower == 0.0:
        return 0.0
    return float(np.log(special.gammaincc(shape, rate * lower)))


def sample_truncated_gamma(shape: float, rate: float, lower: float, rng: RngStream, size: Size = None):
    """
    Exact draw from Ga(shape, rate) conditioned on (lower, inf) by inversion of the
    upper incomplete gamma. ``lower == 0`` uses the untruncated sampler and
    consumes the stream exactly like ``sample_gamma``.
    """
    _positive("shape", shape)
    _positive("rate", rate)
    _nonnegative("lower", lower)
    if lower == 0.0:
        return sample_gamma(shape, rate, rng, size)
    tail = float(special.gammaincc(shape, rate * lower))
    if tail < TAIL_MASS_FLOOR:
        raise InfeasibleTruncationError(shape, rate, lower, tail)
    u = 1.0 - rng.generator.random(size)
    x = special.gammainccinv(shape, u * tail) / rate
    x = np.maximum(x, np.nextafter(lower, np.inf))
    return float(x) if size is None else x


# ------------------------------
# Generalized inverse Gaussian
# ------------------------------


@dataclass(frozen=True)
class GigParams:
    """Density proportional to x^(p-1) exp(-(a x + b / x) / 2) on (0, inf)."""

    p: float
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0.0):
            raise DomainError("a", self.a, "finite and positive")
        if not (math.isfinite(self.b) and self.b >= 0.0):
            raise DomainError("b", self.b, "finite and non-negative")
        if not math.isfinite(self.p):
            raise DomainError("p", self.p, "finite")
        if self.b == 0.0 and self.p <= 0.0:
            raise DomainError("p", self.p, "positive when b = 0 (improper GIG otherwise)")

    def mean(self) -> float:
        if self.b == 0.0:
            return 2.0 * self.p / self.a
        omega = math.sqrt(self.a * self.b)
        ratio = special.kve(self.p + 1.0, omega) / special.kve(self.p, omega)
        return math.sqrt(self.b / self.a) * float(ratio)


def sample_gig(params: GigParams, rng: RngStream, size: Size = None):
    """
    GIG draws. p = +-1/2 go through the inverse-Gaussian closed forms, b = 0
    through the gamma limit, any other index through scipy's ratio-of-uniforms
    ``geninvgauss`` on the standardized scale sqrt(b/a).
    """
    p, a, b = params.p, params.a, params.b
    if b == 0.0:
        return rng.generator.gamma(p, 2.0 / a, size)
    if p == -0.5:
        return rng.generator.wald(math.sqrt(b / a), b, size)
    if p == 0.5:
        return 1.0 / rng.generator.wald(math.sqrt(a / b), a, size)
    omega = math.sqrt(a * b)
    y = stats.geninvgauss.rvs(p, omega, size=size, random_state=rng.generator)
    return math.sqrt(b / a) * y


# --------------------------
# Power truncated normal
# --------------------------


@dataclass(frozen=True)
class PtnParams:
    """Density proportional to x^(c-1) exp(-a x^2 + b x) on (0, inf)."""

    c: float
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0.0):
            raise DomainError("c", self.c, "finite and positive")
        if not (math.isfinite(self.a) and self.a > 0.0):
            raise DomainError("a", self.a, "finite and positive")
        if not math.isfinite(self.b):
            raise DomainError("b", self.b, "finite")

    def log_kernel(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_x = np.log(x)
            power = np.where(self.c == 1.0, 0.0, (self.c - 1.0) * log_x)
        return power - self.a * x * x + self.b * x

    def mode(self) -> float:
        """Positive root of 2a x^2 - b x - (c-1) = 0 (0 when c = 1 and b <= 0)."""
        disc = math.sqrt(self.b * self.b + 8.0 * self.a * (self.c - 1.0))
        if self.b >= 0.0:
            return (self.b + disc) / (4.0 * self.a)
        if self.c == 1.0:
            return 0.0
        return 2.0 * (self.c - 1.0) / (disc - self.b)


class _PtnEnvelope(NamedTuple):
    mode: float
    log_height: float
    x_left: float
    x_right: float
    scale_left: float
    scale_right: float
    weights: np.ndarray


def _ptn_envelope(params: PtnParams) -> _PtnEnvelope:
    """
    Three-piece envelope of a log-concave PTN kernel: flat at the mode height on
    [x_left, x_right], where the log kernel has dropped by one at both ends, with
    exponential tails along the chords beyond. Concavity keeps the kernel under
    each tail, and the envelope mass is at most (1 + 1/e) / (1 - 1/e) times the
    kernel mass.
    """
    m = params.mode()
    h_m = float(params.log_kernel(m)) if m > 0.0 else 0.0

    def drop(x: float) -> float:
        return h_m - float(params.log_kernel(x)) - 1.0

    # log k(x) <= log k(m) - a (x - m)^2, so one unit of drop is reached within 1/sqrt(a)
    step = 1.0 / math.sqrt(params.a)
    hi = m + step
    x_right = hi if drop(hi) <= 0.0 else optimize.brentq(drop, m, hi, xtol=1e-12 * hi, rtol=1e-12)
    x_left = 0.0
    if m > 0.0:
        lo = m - step
        if lo > 0.0 and drop(lo) <= 0.0:
            # c = 1 is exactly Gaussian: the drop at lo is 0 up to rounding
            x_left = lo
        else:
            lo = max(lo, m * 1e-12)
            if drop(lo) > 0.0:
                x_left = optimize.brentq(drop, lo, m, xtol=1e-12 * m, rtol=1e-12)
    scale_right = x_right - m
    scale_left = m - x_left
    w_center = x_right - x_left
    w_right = scale_right / math.e
    w_left = 0.0
    if x_left > 0.0:
        w_left = scale_left / math.e * -math.expm1(-x_left / scale_left)
    weights = np.array([w_left, w_center, w_right])
    return _PtnEnvelope(m, h_m, x_left, x_right, scale_left, scale_right, weights / weights.sum())


def _ptn_propose(env: _PtnEnvelope, rng: RngStream, count: int) -> Tuple[np.ndarray, np.ndarray]:
    gen = rng.generator
    piece = np.searchsorted(np.cumsum(env.weights), gen.random(count) * (1.0 - 1e-15), side="right")
    u = gen.random(count)
    x = np.empty(count)
    log_env = np.zeros(count)

    center = piece == 1
    x[center] = env.x_left + (env.x_right - env.x_left) * u[center]

    right = piece == 2
    e = gen.standard_exponential(int(right.sum()))
    x[right] = env.x_right + env.scale_right * e
    log_env[right] = -1.0 - e

    left = piece == 0
    if np.any(left):
        span = -math.expm1(-env.x_left / env.scale_left)
        e_left = -np.log1p(-u[left] * span)
        x[left] = env.x_left - env.scale_left * e_left
        log_env[left] = -1.0 - e_left
    return x, log_env


def sample_ptn(params: PtnParams, rng: RngStream, size: Size = None):
    """
    Exact PTN draw by rejection from the log-concave envelope of ``_ptn_envelope``.

    Arguments:
    ----------
        params (PtnParams): (c, a, b) with c >= 1.
        rng (RngStream): stream consumed by the sampler.
        size (int, optional): number of draws; a float is returned when omitted.

    Returns:
    --------
        float or np.ndarray: positive draws.
    """
    if params.c < 1.0:
        raise UnsupportedRegimeError(
            f"PTN sampling needs c >= 1 (log-concave kernel); got c={params.c}"
        )
    env = _ptn_envelope(params)
    wanted = 1 if size is None else int(np.prod(size))
    accepted = []
    have = 0
    while have < wanted:
        batch = max(4, int(1.3 * (wanted - have)) + 4)
        x, log_env = _ptn_propose(env, rng, batch)
        log_u = np.log(rng.generator.random(batch))
        keep = (x > 0.0) & (log_u <= params.log_kernel(x) - env.log_height - log_env)
        accepted.append(x[keep])
        have += int(keep.sum())
    draws = np.concatenate(accepted)[:wanted]
    if size is None:
        return float(draws[0])
    return draws.reshape(size)


# -------
# Wishart
# -------


def sample_wishart(df: float, scale: np.ndarray, rng: RngStream) -> np.ndarray:
    """
    Wishart W_p(df, scale) draw through the Bartlett decomposition: scale = L L^T,
    A lower triangular with A_ii^2 ~ chi^2(df - i) drawn as 2 Ga((df - i)/2, 1)
    (fractional df allowed) and standard normal entries below the diagonal;
    the draw is (L A)(L A)^T.
    """
    scale = np.atleast_2d(np.asarray(scale, dtype=float))
    p = scale.shape[0]
    if scale.shape != (p, p) or not np.allclose(scale, scale.T, rtol=1e-10, atol=0.0):
        raise DomainError("scale", scale.shape, "a symmetric square matrix")
    if not (math.isfinite(df) and df > p - 1):
        raise DomainError("df", df, f"greater than p - 1 = {p - 1}")
    try:
        chol = np.linalg.cholesky(scale)
    except np.linalg.LinAlgError:
        raise DomainError("scale", "not positive definite", "symmetric positive definite") from None
    gen = rng.generator
    bartlett = np.zeros((p, p))
    bartlett[np.diag_indices(p)] = np.sqrt(2.0 * gen.standard_gamma((df - np.arange(p)) / 2.0))
    rows, cols = np.tril_indices(p, -1)
    bartlett[rows, cols] = gen.standard_normal(rows.size)
    la = chol @ bartlett
    draw = la @ la.T
    return 0.5 * (draw + draw.T)
