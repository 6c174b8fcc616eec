import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

from recipgamma.harness.validation.errors import ValidationFailure
from recipgamma.harness.validation.validator import Validator
from recipgamma.utils.constants import DEFAULT_BURN_IN, DEFAULT_DRAWS, DEFAULT_REPLICATIONS, DEFAULT_SEED
from recipgamma.utils.types import Method, ModelFamily

# Long report schema, one row per parameter per method
REPORT_COLUMNS = [
    "model",
    "method",
    "scenario",
    "n",
    "param",
    "ess",
    "sess",
    "ct_seconds",
    "mse",
    "accept_rate",
]

# Dirichlet-multinomial truth vectors of the study scenarios, 10 categories
DIR_MULT_SCENARIOS: Dict[str, List[float]] = {
    "I": [0.1] * 10,
    "II": [0.1 * (l + 1) for l in range(10)],
    "III": [1.0] * 10,
    "IV": [0.5] * 5 + [1.0] * 5,
}


@dataclass(frozen=True)
class ChainSpec:
    burn_in: int = DEFAULT_BURN_IN
    draws: int = DEFAULT_DRAWS


@dataclass(frozen=True)
class ExperimentSpec:
    """
    One simulation experiment: a model, a sampling method, the data-generating
    truth (``data``), prior hyperparameters, chain lengths and replications.
    """

    model: ModelFamily
    method: Method
    data: Dict[str, Any] = field(default_factory=dict)
    prior: Dict[str, Any] = field(default_factory=dict)
    chain: ChainSpec = ChainSpec()
    replications: int = DEFAULT_REPLICATIONS
    seed: int = DEFAULT_SEED
    scenario: str = ""
    k_levels: int = 0

    @classmethod
    def from_dict(cls, raw: Any) -> "ExperimentSpec":
        """
        Validates a raw experiment document and builds the ExperimentSpec.

        Arguments:
        ----------
            raw (Any): parsed JSON object.

        Returns:
        --------
            ExperimentSpec

        Raises:
        -------
            ValidationFailure: with every problem found, each naming its field path.
        """
        errors = Validator.validate_spec(raw, DIR_MULT_SCENARIOS)
        if errors:
            raise ValidationFailure(errors)
        chain = raw.get("chain", {})
        return cls(
            model=ModelFamily.from_str(raw["model"]),
            method=Method.from_str(raw["method"]),
            data=dict(raw.get("data", {})),
            prior=dict(raw.get("prior", {})),
            chain=ChainSpec(
                burn_in=chain.get("burn_in", DEFAULT_BURN_IN),
                draws=chain.get("draws", DEFAULT_DRAWS),
            ),
            replications=raw.get("replications", DEFAULT_REPLICATIONS),
            seed=raw.get("seed", DEFAULT_SEED),
            scenario=raw.get("scenario", ""),
            k_levels=raw.get("k_levels", 0) or 0,
        )

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["model"] = self.model.value
        out["method"] = self.method.value
        return out

    def replace(self, **changes) -> "ExperimentSpec":
        return replace(self, **changes)

    @property
    def method_label(self) -> str:
        if self.method is Method.DA_K:
            return f"da_k{self.k_levels}"
        return self.method.value


@dataclass(frozen=True)
class ReportRow:
    model: str
    method: str
    scenario: str
    n: int
    param: str
    ess: float
    sess: float
    ct_seconds: float
    mse: float
    accept_rate: float

    def asdict(self) -> Dict[str, Any]:
        return asdict(self)


def load_specs(path: Union[str, Path], overrides: Optional[Mapping[str, Any]] = None) -> List[ExperimentSpec]:
    """
    Reads one experiment object, or an array of them, from a JSON file.
    ``overrides`` (seed, replications) replace the document values when not None.
    """
    with open(path) as f:
        doc = json.load(f)
    raws = doc if isinstance(doc, list) else [doc]
    specs = [ExperimentSpec.from_dict(raw) for raw in raws]
    changes = {k: v for k, v in (overrides or {}).items() if v is not None}
    if changes:
        specs = [s.replace(**changes) for s in specs]
    return specs
