"""Exception hierarchy for planar-decomp."""

from typing import Any


class DecompError(Exception):
    """Base class for all errors raised by planar-decomp."""


class GraphValidationError(DecompError, ValueError):
    """Raised when a rotation system does not describe a simple plane graph."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class ParseError(DecompError, ValueError):
    """Raised for malformed documents, annotated with a 1-based position."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line} column {column}: {message}")


class ArgumentError(DecompError, ValueError):
    """Raised when an argument is outside the accepted range."""


class ContractViolation(DecompError, RuntimeError):
    """Raised when an internal precondition does not hold."""


class ClassError(DecompError):
    """Raised when a graph satisfies none of the three hypotheses."""

    def __init__(self, report: Any):
        self.report = report
        super().__init__(f"graph is outside every case: {report.describe()}")


class TheoremViolation(DecompError):
    """Raised when an in-class graph has no reducible configuration."""

    def __init__(self, message: str, audit: Any = None):
        self.audit = audit
        super().__init__(message)


class StepVerificationError(DecompError):
    """Raised when an intermediate certificate fails verification."""

    def __init__(self, message: str, verdict: Any = None):
        self.verdict = verdict
        super().__init__(message)


class CyclicOrientationError(DecompError, ValueError):
    """Raised when an orientation contains a directed cycle."""

    def __init__(self, cycle: list[tuple[int, int]]):
        self.cycle = list(cycle)
        super().__init__(f"orientation has a directed cycle: {self.cycle}")
