from typing import Any, Callable, List, NamedTuple

import numpy as np

from recipgamma.utils.errors import DomainError, UnsupportedRegimeError
from recipgamma.utils.types import Method, ModelFamily


class Sampler(NamedTuple):
    """
    One registered sampler. ``init_state(data, cfg, rng)`` builds the starting
    state, ``step(state, data, cfg, rng)`` runs one sweep, ``extract(state)``
    returns the reported parameters in the order of ``param_names(data)``, and
    ``accept_names(data)`` labels the entries of ``state.accept_count``.
    """

    family: ModelFamily
    method: Method
    init_state: Callable[..., Any]
    step: Callable[..., Any]
    extract: Callable[[Any], np.ndarray]
    param_names: Callable[[Any], List[str]]
    accept_names: Callable[[Any], List[str]]


def require_positive(name: str, value: float) -> float:
    value = float(value)
    if not (np.isfinite(value) and value > 0.0):
        raise DomainError(name, value, "finite and positive")
    return value


def require_beta_latent_size(n: int, family: ModelFamily) -> None:
    if n < 2:
        raise UnsupportedRegimeError(
            f"{family.value} sampler needs at least 2 observations for its beta latents, got {n}"
        )


def as_count_matrix(counts) -> np.ndarray:
    x = np.asarray(counts)
    if x.ndim != 2 or x.shape[1] < 2:
        raise DomainError("counts", x.shape, "an (n, L+1) matrix with L >= 1")
    if np.any(x < 0) or np.any(x != np.round(x)):
        raise DomainError("counts", "negative or fractional entries", "non-negative integers")
    return x.astype(np.int64)
