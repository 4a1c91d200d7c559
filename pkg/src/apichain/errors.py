"""Exception types raised across the pipeline."""


class ApichainError(Exception):
    """Base class for all package-specific errors."""


class MalformedSignature(ApichainError):
    """Call signature text does not match the accepted grammar."""


class MalformedGraphFile(ApichainError):
    """Graph file is structurally invalid (reports the offending line)."""


class IoFailure(ApichainError):
    """Underlying file could not be read or written."""


class PathExplosion(ApichainError):
    """Path enumeration exceeded the configured path budget."""


class DegenerateInput(ApichainError):
    """Input matrix too small for the requested decomposition."""


class DimensionMismatch(ApichainError):
    """Matrix/model dimensions disagree."""


class InsufficientPoints(ApichainError):
    """Fewer distinct points than requested clusters."""


class SingleClassTraining(ApichainError):
    """Training set contains only one class."""


class InsufficientSamples(ApichainError):
    """Training set smaller than the neighbor count."""


class TooFewSamples(ApichainError):
    """Dataset smaller than the number of folds."""


class MissingYearTag(ApichainError):
    """Temporal evaluation needs year-tagged samples."""


class NoDiscriminativeFeatures(ApichainError):
    """No label is more frequent in malware than in benign training data."""


class ModeMismatch(ApichainError):
    """Abstraction modes of two objects disagree."""


class InvalidSpec(ApichainError):
    """Synthetic corpus parameters are inconsistent."""
