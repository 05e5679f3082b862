"""Exception types shared across the package."""


class SemgraphError(Exception):
    """Base class for all semgraph errors."""


class DatasetFormatError(SemgraphError):
    """Malformed dataset/graph input. Carries the offending line number when known."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class DanglingIdError(SemgraphError):
    """An entity or relation id does not resolve in the vocabulary."""


class UnknownTripleError(SemgraphError):
    """Queried head/tail pair or relation is not in the knowledge base."""


class UndefinedConditionalError(SemgraphError):
    """Conditional probability has an empty denominator (incompatible conditions)."""


class CorruptMessageError(SemgraphError):
    """A compressed message cannot be restored against the given knowledge base."""


class InsufficientOmissionCapacityError(SemgraphError):
    """Requested omission count exceeds what the omission profile supports."""


class ZeroRateError(SemgraphError):
    """Transmission at zero power with a non-empty payload."""


class ComputationBudgetError(SemgraphError):
    """Computation latency alone exceeds the total latency budget."""


class InfeasibleInstanceError(SemgraphError):
    """No (power, omissions) choice satisfies all constraints."""


class GeneratorConfigError(SemgraphError):
    """Synthetic corpus configuration is impossible to satisfy."""


class ConfigFileError(SemgraphError):
    """Parameter/sweep config file could not be parsed."""
