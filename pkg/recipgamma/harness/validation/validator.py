import math
from itertools import chain
from typing import Any, Dict, List, Mapping, Sequence, Tuple

from recipgamma.harness.validation import errors as err
from recipgamma.utils.constants import MAX_K_LEVELS
from recipgamma.utils.types import MODEL_METHODS, Method, ModelFamily

TOP_LEVEL_FIELDS = ("model", "method", "data", "prior", "chain", "replications", "seed", "scenario", "k_levels")
REQUIRED_FIELDS = ("model", "method")

# data field -> (requirement label, predicate), per model family
_POSITIVE = ("a positive number", lambda v: _is_number(v) and v > 0)
_REAL = ("a finite number", lambda v: _is_number(v))
_PROBABILITY = ("a number in (0, 1)", lambda v: _is_number(v) and 0 < v < 1)


def _int_at_least(k: int) -> Tuple[str, Any]:
    return f"an integer >= {k}", lambda v: _is_int(v) and v >= k


_EVEN_DIM = ("an even integer >= 2", lambda v: _is_int(v) and v >= 2 and v % 2 == 0)

DATA_FIELDS: Dict[ModelFamily, Dict[str, Tuple[str, Any]]] = {
    ModelFamily.GAMMA: {"n": _int_at_least(1), "alpha": _POSITIVE, "beta": _POSITIVE},
    ModelFamily.STUDENT_T: {"n": _int_at_least(1), "df": _POSITIVE, "theta": _REAL, "tau": _POSITIVE},
    ModelFamily.DIR_MULT: {"n": _int_at_least(2), "categories": _int_at_least(2), "trials": _int_at_least(1)},
    ModelFamily.ONE_DIR: {
        "n": _int_at_least(1),
        "categories": _int_at_least(2),
        "trials": _int_at_least(1),
        "alpha": _POSITIVE,
    },
    ModelFamily.NEG_BIN: {"n": _int_at_least(2), "alpha": _POSITIVE, "p": _PROBABILITY},
    ModelFamily.WISHART: {"n": _int_at_least(1), "dim": _EVEN_DIM, "alpha": _POSITIVE, "beta": _POSITIVE},
}

PRIOR_FIELDS: Dict[ModelFamily, Dict[str, Tuple[str, Any]]] = {
    ModelFamily.GAMMA: {k: _POSITIVE for k in ("a", "b", "c", "d")},
    ModelFamily.STUDENT_T: {
        **{k: _POSITIVE for k in ("a", "c", "d", "a0", "b0")},
        "b": _REAL,
        "alpha_lower": ("a non-negative number", lambda v: _is_number(v) and v >= 0),
    },
    ModelFamily.DIR_MULT: {k: _POSITIVE for k in ("a", "b")},
    ModelFamily.ONE_DIR: {k: _POSITIVE for k in ("a", "b")},
    ModelFamily.NEG_BIN: {k: _POSITIVE for k in ("a", "b")},
    ModelFamily.WISHART: {k: _POSITIVE for k in ("a", "b", "c", "d")},
}


Scenarios = Mapping[str, Sequence[float]]


def _is_int(v: Any) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_number(v: Any) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


class Validator:
    @staticmethod
    def validate_required_checks(raw: Any) -> List[err.ValidationError]:
        if not isinstance(raw, Mapping):
            return [err.InvalidDocument(type(raw).__name__)]
        required_checks = chain(
            Validator._check_missing_fields(raw),
            Validator._check_unknown_fields(raw),
            Validator._check_section_types(raw),
        )
        return list(required_checks)

    @staticmethod
    def validate_params(raw: Mapping[str, Any]) -> List[err.ValidationError]:
        model_checks = Validator._check_invalid_model(raw["model"])
        method_checks = Validator._check_invalid_method(raw["method"])
        if model_checks or method_checks:
            return list(chain(model_checks, method_checks))
        model = ModelFamily.from_str(raw["model"])
        method = Method.from_str(raw["method"])
        return list(
            chain(
                Validator._check_method_for_model(model, method),
                Validator._check_k_levels(method, raw.get("k_levels")),
            )
        )

    @staticmethod
    def validate_values(raw: Mapping[str, Any], scenarios: Scenarios) -> List[err.ValidationError]:
        model = ModelFamily.from_str(raw["model"])
        value_checks = chain(
            Validator._check_chain(raw.get("chain", {})),
            Validator._check_replications(raw.get("replications")),
            Validator._check_seed(raw.get("seed")),
            Validator._check_data(model, raw.get("data", {}), scenarios),
            Validator._check_prior(model, raw.get("prior", {})),
        )
        return list(value_checks)

    @staticmethod
    def validate_spec(raw: Any, scenarios: Scenarios) -> List[err.ValidationError]:
        """All problems of a raw experiment document; later stages run only when earlier ones pass."""
        errors = Validator.validate_required_checks(raw)
        if errors:
            return errors
        errors = Validator.validate_params(raw)
        if errors:
            return errors
        return Validator.validate_values(raw, scenarios)

    # ----------------------
    # Minimum required checks
    # ----------------------

    @staticmethod
    def _check_missing_fields(raw: Mapping[str, Any]) -> List[err.MissingField]:
        return [err.MissingField(f) for f in REQUIRED_FIELDS if f not in raw]

    @staticmethod
    def _check_unknown_fields(raw: Mapping[str, Any]) -> List[err.UnknownFields]:
        unknown = [k for k in raw if k not in TOP_LEVEL_FIELDS]
        if unknown:
            return [err.UnknownFields(unknown)]
        return []

    @staticmethod
    def _check_section_types(raw: Mapping[str, Any]) -> List[err.InvalidFieldType]:
        errors = []
        for section in ("data", "prior", "chain"):
            if section in raw and not isinstance(raw[section], Mapping):
                errors.append(err.InvalidFieldType(section, "an object", raw[section]))
        for name in ("model", "method"):
            if name in raw and not isinstance(raw[name], str):
                errors.append(err.InvalidFieldType(name, "a string", raw[name]))
        if "scenario" in raw and not isinstance(raw["scenario"], str):
            errors.append(err.InvalidFieldType("scenario", "a string", raw["scenario"]))
        return errors

    # ----------------
    # Parameter checks
    # ----------------

    @staticmethod
    def _check_invalid_model(model: str) -> List[err.InvalidModel]:
        if model.lower() in ModelFamily.list_types():
            return []
        return [err.InvalidModel(model)]

    @staticmethod
    def _check_invalid_method(method: str) -> List[err.InvalidMethod]:
        if method.lower() in Method.list_types():
            return []
        return [err.InvalidMethod(method)]

    @staticmethod
    def _check_method_for_model(model: ModelFamily, method: Method) -> List[err.InvalidMethodForModel]:
        allowed = MODEL_METHODS[model]
        if method in allowed:
            return []
        return [err.InvalidMethodForModel(model, method, allowed)]

    @staticmethod
    def _check_k_levels(method: Method, k_levels: Any) -> List[err.InvalidKLevels]:
        if method is Method.DA_K:
            if _is_int(k_levels) and 1 <= k_levels <= MAX_K_LEVELS:
                return []
            return [err.InvalidKLevels(k_levels, MAX_K_LEVELS, method)]
        if k_levels in (None, 0):
            return []
        return [err.InvalidKLevels(k_levels, MAX_K_LEVELS, method)]

    # -------------
    # Value checks
    # -------------

    @staticmethod
    def _check_chain(chain_cfg: Mapping[str, Any]) -> List[err.InvalidChainLength]:
        errors = []
        burn_in = chain_cfg.get("burn_in", 0)
        if not (_is_int(burn_in) and burn_in >= 0):
            errors.append(err.InvalidChainLength("chain.burn_in", burn_in, "an integer >= 0"))
        draws = chain_cfg.get("draws", 1)
        if not (_is_int(draws) and draws > 0):
            errors.append(err.InvalidChainLength("chain.draws", draws, "an integer > 0"))
        return errors

    @staticmethod
    def _check_replications(replications: Any) -> List[err.InvalidReplications]:
        if replications is None or (_is_int(replications) and replications >= 1):
            return []
        return [err.InvalidReplications(replications)]

    @staticmethod
    def _check_seed(seed: Any) -> List[err.InvalidSeed]:
        if seed is None or (_is_int(seed) and 0 <= seed < 2**64):
            return []
        return [err.InvalidSeed(seed)]

    @staticmethod
    def _check_data(model: ModelFamily, data: Mapping[str, Any], scenarios: Scenarios) -> List[err.ValidationError]:
        errors: List[err.ValidationError] = []
        fields = DATA_FIELDS[model]
        allowed = set(fields)
        if model is ModelFamily.DIR_MULT:
            allowed |= {"alpha", "scenario"}
        unknown = [f"data.{k}" for k in data if k not in allowed]
        if unknown:
            errors.append(err.UnknownFields(unknown))
        for name, (requirement, ok) in fields.items():
            if name in data and not ok(data[name]):
                errors.append(err.InvalidTruthValue(f"data.{name}", data[name], requirement))
        if model is ModelFamily.DIR_MULT:
            errors.extend(Validator._check_dir_mult_truth(data, scenarios))
        return errors

    @staticmethod
    def _check_dir_mult_truth(data: Mapping[str, Any], scenarios: Scenarios) -> List[err.ValidationError]:
        if "scenario" in data and "alpha" in data:
            return [err.InvalidTruthValue("data.alpha", data["alpha"], "omitted when data.scenario is set")]
        if "scenario" in data:
            if data["scenario"] not in scenarios:
                return [err.UnknownScenario(data["scenario"], list(scenarios))]
            categories = data.get("categories")
            width = len(scenarios[data["scenario"]])
            if categories is not None and categories != width:
                expected = f"{width} for scenario {data['scenario']}"
                return [err.InvalidTruthValue("data.categories", categories, expected)]
            return []
        if "alpha" not in data:
            return []
        alpha = data["alpha"]
        if not (isinstance(alpha, list) and alpha and all(_is_number(a) and a > 0 for a in alpha)):
            return [err.InvalidTruthValue("data.alpha", alpha, "a non-empty list of positive numbers")]
        categories = data.get("categories")
        if categories is not None and len(alpha) != categories:
            return [err.InvalidTruthValue("data.alpha", alpha, f"of length data.categories = {categories}")]
        return []

    @staticmethod
    def _check_prior(model: ModelFamily, prior: Mapping[str, Any]) -> List[err.ValidationError]:
        errors: List[err.ValidationError] = []
        fields = PRIOR_FIELDS[model]
        unknown = [f"prior.{k}" for k in prior if k not in fields]
        if unknown:
            errors.append(err.UnknownFields(unknown))
        for name, (requirement, ok) in fields.items():
            if name in prior and not ok(prior[name]):
                errors.append(err.InvalidPriorValue(f"prior.{name}", prior[name], requirement))
        return errors
