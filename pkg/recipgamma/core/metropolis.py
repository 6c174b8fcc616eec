import math
from typing import NamedTuple

from recipgamma.core.rng_dists import RngStream
from recipgamma.core.special_fns import mh_log_accept


class ShapeUpdate(NamedTuple):
    value: float
    accepted: bool
    proposal: float
    log_accept: float
    # guaranteed lower bound on log_accept; -inf when none applies
    log_accept_floor: float


def accept_or_keep(log_accept: float, rng: RngStream) -> bool:
    # one uniform per step, accepted or not, so trajectories stay aligned across methods
    u = rng.generator.random()
    return u == 0.0 or math.log(u) < log_accept


def stirling_mh(m_eff: float, proposal: float, current: float, power: int, rng: RngStream) -> ShapeUpdate:
    """
    Independent MH step whose proposal is the augmented conditional and whose
    target carries the extra factor g(m_eff * xi)^power.
    """
    log_accept = mh_log_accept(m_eff, proposal, current, power)
    accepted = accept_or_keep(log_accept, rng)
    return ShapeUpdate(
        value=proposal if accepted else current,
        accepted=accepted,
        proposal=proposal,
        log_accept=log_accept,
        log_accept_floor=-power / (12.0 * m_eff * proposal),
    )
