"""Exception types shared across the pipeline."""


class PipelineError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(PipelineError):
    """A parameter value is outside its documented domain."""


class InvalidInputError(PipelineError):
    """Input data violates a structural requirement (NaNs, bad shape, bad range)."""


class InsufficientDataError(PipelineError):
    """Input is too short for the requested computation."""


class DegenerateInputError(PipelineError):
    """Input has no usable variation (e.g. zero variance)."""


class CannotOversampleError(PipelineError):
    """Minority class too small to synthesize from."""


class InvalidConfigurationError(PipelineError):
    """A configuration combination cannot be honoured."""


class TrainingDivergedError(PipelineError):
    """Model training produced a non-finite loss."""


class SearchFailedError(PipelineError):
    """Every hyperparameter grid point failed to train."""


class RunFailedError(PipelineError):
    """Too many cross-validation folds failed to produce a report."""


class UndefinedClassError(PipelineError):
    """A metric needs at least one true sample of every class."""


class UndefinedStatisticError(PipelineError):
    """A statistic is undefined for this input (e.g. all values tied)."""
