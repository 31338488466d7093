"""Exception hierarchy. Data problems raise subclasses of MetalandError so
the CLI can map them to exit code 1; anything else is a genuine bug."""

from __future__ import annotations


class MetalandError(Exception):
    """Base class for expected failures (bad data, bad state)."""


class ParseError(MetalandError):
    """A document or record stream did not match its wire format."""

    def __init__(self, message: str, locator: str | None = None):
        self.locator = locator
        super().__init__(f"{locator}: {message}" if locator else message)


class DataError(MetalandError):
    """Structurally valid input that breaks a domain rule."""


class StageError(MetalandError):
    """Pipeline failure, tagged with the stage that raised it."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage!r} failed: {cause}")
