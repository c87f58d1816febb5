"""Exception types shared across the pipeline."""


class TweetscopeError(Exception):
    """Base class for all pipeline errors."""


class ConfigError(TweetscopeError):
    """Bad or missing configuration (CLI exit code 2)."""


class StageError(TweetscopeError):
    """A pipeline stage failed (CLI exit code 3).

    completed carries the stages that finished before the abort, so callers
    can report the partial state; their outputs are left intact on disk.
    """

    def __init__(self, stage: str, message: str, completed=None):
        super().__init__(f"stage '{stage}' failed: {message}")
        self.stage = stage
        self.completed = list(completed or [])


class ParseError(TweetscopeError):
    """A single input record could not be turned into a Tweet."""


class MalformedRecord(ParseError):
    """Input line is not valid JSON."""


class MissingField(ParseError):
    """Record lacks a required field (id or text)."""


class InvalidTimestamp(ParseError):
    """created_at could not be parsed in any accepted format."""


class DuplicatePattern(TweetscopeError):
    """Gazetteer file contains the same pattern twice."""


class BadRow(TweetscopeError):
    """A CSV row does not match the expected schema."""


class UnparsableUrl(TweetscopeError):
    """URL has no extractable host."""


class UnknownTag(TweetscopeError):
    """Provider tag outside the known vocabulary (strict mode)."""


class TooFewPoints(TweetscopeError):
    """Fewer vectors than requested clusters."""


class WindowTooShort(TweetscopeError):
    """Trend window spans fewer than two days."""


class EmptyTrace(TweetscopeError):
    """No cascade member carries usable geolocation."""
