from enum import Enum, unique
from typing import Dict, List


class _StrEnum(Enum):
    @classmethod
    def list_types(cls) -> List[str]:
        return [t.value for t in cls]

    @classmethod
    def from_str(cls, value: str):
        try:
            return cls(value.lower())
        except (ValueError, AttributeError):
            raise ValueError(
                f"{value!r} is not a valid {cls.__name__}; expected one of {cls.list_types()}"
            ) from None


@unique
class ModelFamily(_StrEnum):
    GAMMA = "gamma"
    STUDENT_T = "student_t"
    DIR_MULT = "dir_mult"
    ONE_DIR = "one_dir"
    NEG_BIN = "neg_bin"
    WISHART = "wishart"


@unique
class Method(_StrEnum):
    DA = "da"
    DA_K = "da_k"
    DA_N = "da_n"
    DA_P = "da_p"
    DA_PT = "da_pt"
    AMH = "amh"


@unique
class TiltVariant(_StrEnum):
    """Route used to draw the shape proposal from a PTN-shaped conditional."""

    PTN_DIRECT = "ptn_direct"
    POISSON = "poisson"
    NORMAL = "normal"


@unique
class ReportFormat(_StrEnum):
    CSV = "csv"
    JSON = "json"
    PARQUET = "parquet"


@unique
class ShapeTargetKind(_StrEnum):
    # Ga(a0,b0) prior times prod Ga(w_i | alpha, alpha)
    SCALE_MIXTURE = "scale_mixture"
    # Ga(a0,b0) prior times prod Ga(x_i | alpha, beta) with beta fixed
    GAMMA_LIKELIHOOD = "gamma_likelihood"


MODEL_METHODS: Dict[ModelFamily, List[Method]] = {
    ModelFamily.GAMMA: [Method.DA, Method.DA_K, Method.AMH],
    ModelFamily.STUDENT_T: [Method.DA, Method.AMH],
    ModelFamily.DIR_MULT: [Method.DA_N, Method.DA_P, Method.DA_PT],
    ModelFamily.ONE_DIR: [Method.DA],
    ModelFamily.NEG_BIN: [Method.DA_N, Method.DA_P, Method.DA_PT],
    ModelFamily.WISHART: [Method.DA],
}

METHOD_VARIANTS: Dict[Method, TiltVariant] = {
    Method.DA_N: TiltVariant.NORMAL,
    Method.DA_P: TiltVariant.POISSON,
    Method.DA_PT: TiltVariant.PTN_DIRECT,
}
