"""
Sampler registry. Each (ModelFamily, Method) pair maps to a Sampler record
built from the functions of one model module.
"""
from typing import Any, Dict, Mapping, Tuple

from recipgamma.models import dir_mult, gamma, neg_bin, one_dir, student_t, wishart
from recipgamma.models.base import Sampler
from recipgamma.models.chain import run_chain
from recipgamma.utils.errors import DomainError
from recipgamma.utils.types import METHOD_VARIANTS, MODEL_METHODS, Method, ModelFamily

__all__ = ["Sampler", "build_config", "get_sampler", "run_chain"]


def _sampler(family: ModelFamily, method: Method, module, init, step) -> Sampler:
    return Sampler(
        family=family,
        method=method,
        init_state=init,
        step=step,
        extract=module.extract,
        param_names=module.param_names,
        accept_names=module.accept_names,
    )


def _registry() -> Dict[Tuple[ModelFamily, Method], Sampler]:
    reg = {
        (ModelFamily.GAMMA, Method.DA): _sampler(
            ModelFamily.GAMMA, Method.DA, gamma, gamma.init_state, gamma.gamma_step
        ),
        (ModelFamily.GAMMA, Method.DA_K): _sampler(
            ModelFamily.GAMMA, Method.DA_K, gamma, gamma.init_state, gamma.gamma_step
        ),
        (ModelFamily.GAMMA, Method.AMH): _sampler(
            ModelFamily.GAMMA, Method.AMH, gamma, gamma.init_amh_state, gamma.gamma_amh_step
        ),
        (ModelFamily.STUDENT_T, Method.DA): _sampler(
            ModelFamily.STUDENT_T, Method.DA, student_t, student_t.init_state, student_t.t_step
        ),
        (ModelFamily.STUDENT_T, Method.AMH): _sampler(
            ModelFamily.STUDENT_T, Method.AMH, student_t, student_t.init_amh_state, student_t.t_amh_step
        ),
        (ModelFamily.ONE_DIR, Method.DA): _sampler(
            ModelFamily.ONE_DIR, Method.DA, one_dir, one_dir.init_state, one_dir.onedir_step
        ),
        (ModelFamily.WISHART, Method.DA): _sampler(
            ModelFamily.WISHART, Method.DA, wishart, wishart.init_state, wishart.wishart_step
        ),
    }
    for method in METHOD_VARIANTS:
        reg[(ModelFamily.DIR_MULT, method)] = _sampler(
            ModelFamily.DIR_MULT, method, dir_mult, dir_mult.init_state, dir_mult.dirmult_step
        )
        reg[(ModelFamily.NEG_BIN, method)] = _sampler(
            ModelFamily.NEG_BIN, method, neg_bin, neg_bin.init_state, neg_bin.negbin_step
        )
    return reg


SAMPLERS = _registry()


def get_sampler(family: ModelFamily, method: Method) -> Sampler:
    try:
        return SAMPLERS[(family, method)]
    except KeyError:
        valid = [m.value for m in MODEL_METHODS[family]]
        raise DomainError("method", method.value, f"one of {valid} for model {family.value}") from None


def build_config(family: ModelFamily, method: Method, prior: Mapping[str, Any], k_levels: int = 0) -> Any:
    """
    Model configuration from prior hyperparameters and the method choice.

    Arguments:
    ----------
        family (ModelFamily): model family.
        method (Method): sampling method; selects the tilt route of dir_mult / neg_bin.
        prior (Mapping[str, Any]): hyperparameters by name, e.g. {"a": 0.1, "b": 1.0};
            ``alpha_lower`` sets the truncation point of the Student-t shape prior.
        k_levels (int): duplication level of the gamma-model sampler (method da_k only).

    Returns:
    --------
        the family's config dataclass.
    """
    get_sampler(family, method)
    prior = dict(prior)
    if family is ModelFamily.GAMMA:
        return gamma.GammaModelConfig(K=k_levels if method is Method.DA_K else 0, **prior)
    if family is ModelFamily.STUDENT_T:
        return student_t.TModelConfig(**prior)
    if family is ModelFamily.DIR_MULT:
        return dir_mult.DirMultConfig(variant=METHOD_VARIANTS[method], **prior)
    if family is ModelFamily.ONE_DIR:
        return one_dir.OneDirConfig(**prior)
    if family is ModelFamily.NEG_BIN:
        return neg_bin.NegBinConfig(variant=METHOD_VARIANTS[method], **prior)
    return wishart.WishartConfig(**prior)
