from abc import ABC, abstractmethod
from typing import Any, Iterable, List

from recipgamma.utils.types import Method, ModelFamily


class ValidationError(Exception, ABC):
    def __str__(self) -> str:
        return self.error_message()

    @abstractmethod
    def __repr__(self) -> str:
        pass

    @abstractmethod
    def error_message(self) -> str:
        pass


class ValidationFailure(Exception):
    def __init__(self, errors: List[ValidationError]) -> None:
        self.errors = errors

    def __str__(self) -> str:
        return "; ".join(e.error_message() for e in self.errors)


# ----------------------
# Minimum required checks
# ----------------------


class InvalidDocument(ValidationError):
    def __repr__(self) -> str:
        return "Invalid_Document"

    def __init__(self, kind: str) -> None:
        self.kind = kind

    def error_message(self) -> str:
        return f"An experiment must be a JSON object, got {self.kind}."


class MissingField(ValidationError):
    def __repr__(self) -> str:
        return "Missing_Field"

    def __init__(self, path: str) -> None:
        self.path = path

    def error_message(self) -> str:
        return f"Missing required field '{self.path}'."


class UnknownFields(ValidationError):
    def __repr__(self) -> str:
        return "Unknown_Fields"

    def __init__(self, paths: Iterable[str]) -> None:
        self.paths = list(paths)

    def error_message(self) -> str:
        return f"Unknown field(s): {', '.join(self.paths)}."


class InvalidFieldType(ValidationError):
    def __repr__(self) -> str:
        return "Invalid_Field_Type"

    def __init__(self, path: str, expected: str, value: Any) -> None:
        self.path = path
        self.expected = expected
        self.value = value

    def error_message(self) -> str:
        return f"'{self.path}' must be {self.expected}, got {self.value!r}."


# ----------------
# Parameter checks
# ----------------


class InvalidModel(ValidationError):
    def __repr__(self) -> str:
        return "Invalid_Model"

    def __init__(self, value: Any) -> None:
        self.value = value

    def error_message(self) -> str:
        return f"'model' is {self.value!r}; expected one of {ModelFamily.list_types()}."


class InvalidMethod(ValidationError):
    def __repr__(self) -> str:
        return "Invalid_Method"

    def __init__(self, value: Any) -> None:
        self.value = value

    def error_message(self) -> str:
        return f"'method' is {self.value!r}; expected one of {Method.list_types()}."


class InvalidMethodForModel(ValidationError):
    def __repr__(self) -> str:
        return "Invalid_Method_For_Model"

    def __init__(self, model: ModelFamily, method: Method, allowed: List[Method]) -> None:
        self.model = model
        self.method = method
        self.allowed = allowed

    def error_message(self) -> str:
        return (
            f"Method '{self.method.value}' is not available for model '{self.model.value}'; "
            f"use one of {[m.value for m in self.allowed]}."
        )


class InvalidKLevels(ValidationError):
    def __repr__(self) -> str:
        return "Invalid_K_Levels"

    def __init__(self, value: Any, max_levels: int, method: Method) -> None:
        self.value = value
        self.max_levels = max_levels
        self.method = method

    def error_message(self) -> str:
        if self.method is Method.DA_K:
            return f"'k_levels' must be an integer in [1, {self.max_levels}] for method da_k, got {self.value!r}."
        return f"'k_levels' is only meaningful for method da_k; got {self.value!r} with '{self.method.value}'."


# -------------
# Value checks
# -------------


class InvalidChainLength(ValidationError):
    def __repr__(self) -> str:
        return "Invalid_Chain_Length"

    def __init__(self, path: str, value: Any, requirement: str) -> None:
        self.path = path
        self.value = value
        self.requirement = requirement

    def error_message(self) -> str:
        return f"'{self.path}' must be {self.requirement}, got {self.value!r}."


class InvalidReplications(ValidationError):
    def __repr__(self) -> str:
        return "Invalid_Replications"

    def __init__(self, value: Any) -> None:
        self.value = value

    def error_message(self) -> str:
        return f"'replications' must be an integer >= 1, got {self.value!r}."


class InvalidSeed(ValidationError):
    def __repr__(self) -> str:
        return "Invalid_Seed"

    def __init__(self, value: Any) -> None:
        self.value = value

    def error_message(self) -> str:
        return f"'seed' must be an integer in [0, 2^64), got {self.value!r}."


class InvalidTruthValue(ValidationError):
    def __repr__(self) -> str:
        return "Invalid_Truth_Value"

    def __init__(self, path: str, value: Any, requirement: str) -> None:
        self.path = path
        self.value = value
        self.requirement = requirement

    def error_message(self) -> str:
        return f"'{self.path}' must be {self.requirement}, got {self.value!r}."


class InvalidPriorValue(ValidationError):
    def __repr__(self) -> str:
        return "Invalid_Prior_Value"

    def __init__(self, path: str, value: Any, requirement: str) -> None:
        self.path = path
        self.value = value
        self.requirement = requirement

    def error_message(self) -> str:
        return f"'{self.path}' must be {self.requirement}, got {self.value!r}."


class UnknownScenario(ValidationError):
    def __repr__(self) -> str:
        return "Unknown_Scenario"

    def __init__(self, value: Any, known: List[str]) -> None:
        self.value = value
        self.known = known

    def error_message(self) -> str:
        return f"'data.scenario' is {self.value!r}; expected one of {self.known}."
