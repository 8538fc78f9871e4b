"""Error types shared across the toolkit."""


class CovarError(Exception):
    """Base class for all toolkit errors."""


class ParseError(CovarError):
    """Lexical or syntactic error, carrying a source position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class EvalError(CovarError):
    """Evaluation-domain error (missing variable, parity/mod/power on a
    non-integer, negative expectation value)."""


class PreconditionError(CovarError):
    """A caller-facing precondition was violated (bad probability, nested
    loop where a loop-free body is required, tau not zero, ...)."""
