import time
from typing import Any, Callable, Optional

import numpy as np

from recipgamma.core.diagnostics import ChainResult
from recipgamma.core.rng_dists import RngStream
from recipgamma.models.base import Sampler
from recipgamma.utils.errors import DomainError


def _clamped(state: Any) -> int:
    rho = getattr(state, "rho", None)
    return int(getattr(rho, "clamped", 0))


def run_chain(
    sampler: Sampler,
    data: Any,
    cfg: Any,
    rng: RngStream,
    burn_in: int,
    draws: int,
    on_step: Optional[Callable[[Any], None]] = None,
) -> ChainResult:
    """
    Runs burn_in + draws sweeps of ``sampler`` and keeps the post-burn-in draws.

    Arguments:
    ----------
        sampler (Sampler): registered sampler.
        data: dataset object of the sampler's model family.
        cfg: configuration object of the sampler's model family.
        rng (RngStream): chain stream.
        burn_in (int): discarded sweeps.
        draws (int): kept sweeps, positive.
        on_step (Callable, optional): called with the state after every sweep.

    Returns:
    --------
        ChainResult: draws, acceptance rates over the kept sweeps, and wall time of
        the burn-in and kept sweeps.
    """
    if burn_in < 0:
        raise DomainError("burn_in", burn_in, "non-negative")
    if draws < 1:
        raise DomainError("draws", draws, "positive")
    names = sampler.param_names(data)
    out = np.empty((draws, len(names)))
    clamped = 0

    state = sampler.init_state(data, cfg, rng)
    # burn-in counts towards the computation time, initialization does not
    start = time.perf_counter()
    for _ in range(burn_in):
        state = sampler.step(state, data, cfg, rng)
        clamped += _clamped(state)
        if on_step is not None:
            on_step(state)
    accepted_before = np.asarray(state.accept_count, dtype=float).reshape(-1)
    steps_before = state.step_count
    for i in range(draws):
        state = sampler.step(state, data, cfg, rng)
        clamped += _clamped(state)
        out[i] = sampler.extract(state)
        if on_step is not None:
            on_step(state)
    wall = time.perf_counter() - start

    accept_names = sampler.accept_names(data)
    accepted = np.asarray(state.accept_count, dtype=float).reshape(-1) - accepted_before
    steps = state.step_count - steps_before
    rates = accepted / steps if accept_names else np.zeros(0)
    return ChainResult(
        draws=out,
        param_names=names,
        accept_rate=rates,
        accept_names=accept_names,
        wall_seconds=wall,
        seed_info=rng.provenance,
        clamped_latents=clamped,
    )
