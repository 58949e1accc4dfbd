"""Exception types shared across the package."""


class CharlogicError(Exception):
    """Base class for package errors."""


class OracleUnavailable(CharlogicError):
    """A condition oracle could not produce a verdict (transport dead,
    backend gone). Carries the segment being executed when the failure
    surfaced inside the interpreter, else segment_id is None."""

    def __init__(self, message: str, segment_id: str | None = None):
        super().__init__(message)
        self.segment_id = segment_id


class Unparseable(CharlogicError):
    """A model completion could not be mapped onto any expected label."""


class MissingBinding(CharlogicError):
    """A prompt template placeholder was left unfilled."""


class CodifyFailed(CharlogicError):
    """All codification attempts for a segment produced unparseable programs.

    Keeps the per-attempt diagnostics so callers can report what the model
    actually got wrong.
    """

    def __init__(self, segment_id: str, attempts: list):
        super().__init__(f"could not codify segment {segment_id!r} "
                         f"after {len(attempts)} attempts")
        self.segment_id = segment_id
        self.attempts = attempts


class ReviseFailed(CharlogicError):
    """All revision attempts for a segment produced unparseable programs."""

    def __init__(self, segment_id: str, attempts: list):
        super().__init__(f"could not revise segment {segment_id!r} "
                         f"after {len(attempts)} attempts")
        self.segment_id = segment_id
        self.attempts = attempts


class OverAggressiveFilter(CharlogicError):
    """Spoiler filtering tried to drop more than half the profile."""
