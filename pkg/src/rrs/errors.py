"""Exception types shared across the pipeline."""


class RrsError(Exception):
    """Base class for all pipeline errors."""


class ConfigError(RrsError):
    """Bad or missing run configuration."""


class CorpusFormatError(RrsError):
    """Malformed corpus record; carries the 1-based line number."""

    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DuplicatePairIdError(RrsError):
    """Two corpus records share a pair_id."""

    def __init__(self, pair_id, line_no):
        super().__init__(f"line {line_no}: duplicate pair_id {pair_id!r}")
        self.pair_id = pair_id
        self.line_no = line_no


class ParseFailure(RrsError):
    """Source produced no recognizable function structure."""


class TreeBudgetExceeded(RrsError):
    """Tree pair too large for the edit-distance budget."""


class UndefinedSimilarityError(RrsError):
    """Cosine similarity undefined (zero-norm vector)."""


class DimensionMismatchError(RrsError):
    """Embedding vectors disagree on dimensionality."""


class MissingVectorError(RrsError):
    """File store has no vector for the requested key."""


class ProviderServiceError(RrsError):
    """Embedding service unreachable or returned a non-success status."""


class WeightConfigError(RrsError):
    """Weights outside [0,1] or not summing to 1."""


class EmptyBatchError(RrsError):
    """Operation requires at least one element."""


class ToolUnavailableError(RrsError):
    """Static analyzer executable not found on this host."""


class ToolTimeoutError(RrsError):
    """Static analyzer exceeded its per-run timeout."""


class UnknownSeriesError(RrsError):
    """Requested plot series name is not defined."""
