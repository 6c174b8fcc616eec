"""
Named experiment batches of the simulation studies. Each preset expands into
ExperimentSpec objects with the study defaults (1000 burn-in + 4000 draws,
100 replications) that the CLI overrides with --seed / --reps.
"""
from itertools import product
from typing import Callable, Dict, List

from recipgamma.harness.spec import ChainSpec, ExperimentSpec
from recipgamma.utils.constants import DEFAULT_REPLICATIONS, DEFAULT_SEED
from recipgamma.utils.types import Method, ModelFamily

STUDENT_T_PRIOR = {"a": 0.1, "b": 0.0, "c": 0.1, "d": 0.1, "a0": 0.1, "b0": 0.1}
DIR_MULT_PRIOR = {"a": 0.1, "b": 1.0}

STUDENT_T_SIZES = (10, 30, 100)
STUDENT_T_DFS = (0.1, 1.0, 10.0)
# (theta, tau) truths; the first is the main study, the others supplementary
STUDENT_T_TRUTHS = ((3.0, 1.0), (3.0, 4.0), (6.0, 1.0))
TRUNCATED_DF = 10.0
TRUNCATION_POINTS = (1.0, 3.0)
DIR_MULT_SIZES = (100, 1000)
DIR_MULT_SCENARIO_NAMES = ("I", "II", "III", "IV")
DIR_MULT_METHODS = (Method.DA_N, Method.DA_P, Method.DA_PT)


def _spec(model: ModelFamily, method: Method, data: Dict, **kwargs) -> ExperimentSpec:
    return ExperimentSpec(
        model=model,
        method=method,
        data=data,
        chain=ChainSpec(),
        replications=DEFAULT_REPLICATIONS,
        seed=DEFAULT_SEED,
        **kwargs,
    )


def student_t_study() -> List[ExperimentSpec]:
    specs = []
    for (theta, tau), n, df, method in product(
        STUDENT_T_TRUTHS, STUDENT_T_SIZES, STUDENT_T_DFS, (Method.DA, Method.AMH)
    ):
        specs.append(
            _spec(
                ModelFamily.STUDENT_T,
                method,
                {"n": n, "df": df, "theta": theta, "tau": tau},
                prior=dict(STUDENT_T_PRIOR),
                scenario=f"theta={theta:g},tau={tau:g},df={df:g}",
            )
        )
    return specs


def student_t_truncated_study() -> List[ExperimentSpec]:
    """Shape prior truncated below at half the prior df bound, i.e. 2 alpha > 2 alpha_bar."""
    specs = []
    for df_bar, n, method in product(TRUNCATION_POINTS, STUDENT_T_SIZES, (Method.DA, Method.AMH)):
        specs.append(
            _spec(
                ModelFamily.STUDENT_T,
                method,
                {"n": n, "df": TRUNCATED_DF, "theta": 3.0, "tau": 1.0},
                prior={**STUDENT_T_PRIOR, "alpha_lower": 0.5 * df_bar},
                scenario=f"df_bar={df_bar:g}",
            )
        )
    return specs


def dir_mult_study() -> List[ExperimentSpec]:
    specs = []
    for scenario, n, method in product(DIR_MULT_SCENARIO_NAMES, DIR_MULT_SIZES, DIR_MULT_METHODS):
        specs.append(
            _spec(
                ModelFamily.DIR_MULT,
                method,
                {"n": n, "trials": 500, "scenario": scenario},
                prior=dict(DIR_MULT_PRIOR),
                scenario=scenario,
            )
        )
    return specs


def gamma_study() -> List[ExperimentSpec]:
    data = {"n": 30, "alpha": 2.0, "beta": 1.0}
    specs = [_spec(ModelFamily.GAMMA, m, dict(data)) for m in (Method.DA, Method.AMH)]
    specs.extend(_spec(ModelFamily.GAMMA, Method.DA_K, dict(data), k_levels=k) for k in (1, 3))
    return specs


def neg_bin_study() -> List[ExperimentSpec]:
    return [_spec(ModelFamily.NEG_BIN, m, {"n": 200, "alpha": 3.0, "p": 0.5}) for m in DIR_MULT_METHODS]


def one_dir_study() -> List[ExperimentSpec]:
    return [_spec(ModelFamily.ONE_DIR, Method.DA, {"n": 50, "categories": 5, "trials": 20, "alpha": 1.0})]


def wishart_study() -> List[ExperimentSpec]:
    return [_spec(ModelFamily.WISHART, Method.DA, {"n": 200, "dim": 4, "alpha": 2.0, "beta": 2.0})]


PRESETS: Dict[str, Callable[[], List[ExperimentSpec]]] = {
    "student_t": student_t_study,
    "student_t_truncated": student_t_truncated_study,
    "dir_mult": dir_mult_study,
    "gamma": gamma_study,
    "neg_bin": neg_bin_study,
    "one_dir": one_dir_study,
    "wishart": wishart_study,
}


def get_preset(name: str) -> List[ExperimentSpec]:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValueError(f"Unknown preset {name!r}; expected one of {sorted(PRESETS)}") from None
