"""Exception types shared across the package."""

from __future__ import annotations


class PwBanditError(Exception):
    """Base class for all package-specific errors."""


class FrequencyListError(PwBanditError, ValueError):
    """A frequency-list stream violates the file format or a dictionary invariant.

    ``line`` is the 1-based line number of the offending line, or None when
    the problem is not tied to a single line (e.g. an empty stream).
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedLine(FrequencyListError):
    """Line is not `word<TAB>count`."""


class NonPositiveCount(FrequencyListError):
    """Count parsed but is zero or negative."""


class DuplicateWord(FrequencyListError):
    """The same word appears twice in one dictionary."""


class EmptyDictionary(FrequencyListError):
    """No entries at all."""


class EmptyInput(PwBanditError, ValueError):
    """An operation that needs at least one element got none."""


class DimensionMismatch(PwBanditError, ValueError):
    """Weight vector length does not match the number of dictionaries."""


class DuplicateGuess(PwBanditError, ValueError):
    """A word was guessed twice in one attack."""


class SuccessExceedsPopulation(PwBanditError, ValueError):
    """Reported successes exceed the users not yet compromised."""


class ConfigError(PwBanditError, ValueError):
    """Experiment configuration is invalid.

    ``field`` names the offending key as `section.key` where known.
    """

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
