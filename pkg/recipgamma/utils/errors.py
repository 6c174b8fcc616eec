from abc import ABC, abstractmethod
from typing import Optional


class RecipGammaError(Exception, ABC):
    def __str__(self) -> str:
        return self.error_message()

    @abstractmethod
    def __repr__(self) -> str:
        pass

    @abstractmethod
    def error_message(self) -> str:
        pass


class DomainError(RecipGammaError, ValueError):
    def __repr__(self) -> str:
        return "Domain_Error"

    def __init__(self, parameter: str, value, requirement: str) -> None:
        self.parameter = parameter
        self.value = value
        self.requirement = requirement

    def error_message(self) -> str:
        return f"{self.parameter}={self.value!r} is out of domain: must be {self.requirement}"


class InfeasibleTruncationError(RecipGammaError):
    def __repr__(self) -> str:
        return "Infeasible_Truncation"

    def __init__(self, shape: float, rate: float, lower: float, tail_mass: float) -> None:
        self.shape = shape
        self.rate = rate
        self.lower = lower
        self.tail_mass = tail_mass

    def error_message(self) -> str:
        return (
            f"Ga(shape={self.shape}, rate={self.rate}) has upper-tail mass {self.tail_mass:.3e} "
            f"above lower={self.lower}; the truncated draw is numerically infeasible"
        )


class UnsupportedRegimeError(RecipGammaError):
    def __repr__(self) -> str:
        return "Unsupported_Regime"

    def __init__(self, message: str) -> None:
        self.message = message

    def error_message(self) -> str:
        return self.message


class NumericalProprietyError(RecipGammaError):
    """A conditional that must be a proper gamma density came out with a non-positive rate."""

    def __repr__(self) -> str:
        return "Numerical_Propriety"

    def __init__(self, block: str, rate: float, context: Optional[str] = None) -> None:
        self.block = block
        self.rate = rate
        self.context = context

    def error_message(self) -> str:
        msg = f"full conditional of {self.block} has non-positive rate {self.rate!r}"
        if self.context:
            msg += f" ({self.context})"
        return msg


class DegenerateSeriesError(RecipGammaError):
    def __repr__(self) -> str:
        return "Degenerate_Series"

    def __init__(self, length: int) -> None:
        self.length = length

    def error_message(self) -> str:
        return f"series of length {self.length} is constant; effective sample size is undefined"


class ExperimentFailedError(RecipGammaError):
    def __repr__(self) -> str:
        return "Experiment_Failed"

    def __init__(self, failed: int, total: int, limit: float) -> None:
        self.failed = failed
        self.total = total
        self.limit = limit

    def error_message(self) -> str:
        return (
            f"{self.failed} of {self.total} replications failed, "
            f"above the allowed fraction {self.limit:.0%}"
        )
