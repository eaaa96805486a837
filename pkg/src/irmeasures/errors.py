"""Exception types raised by irmeasures."""


class IrMeasuresError(ValueError):
    """Base class for all errors raised by this package."""


class TrecFormatError(IrMeasuresError):
    """A qrels or run file could not be parsed.

    ``lineno`` is 1-based, or ``None`` when the problem is not tied to a line.
    """

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class MeasureError(IrMeasuresError):
    """A measure expression is unknown, malformed or has invalid parameters."""


class EvaluationError(IrMeasuresError):
    """Evaluation could not produce a value (no queries, divergent user model)."""
