"""Exception hierarchy shared by every sector_verifier module."""


class VerifierError(Exception):
    """Root of all errors raised by the verifier."""


class ConstructionFailed(VerifierError):
    """A constructive operation could not produce a witness.

    Attributes:
        trace: The construction cases that were attempted, in order.
    """

    def __init__(self, message: str, trace: list[str] | None = None):
        super().__init__(message)
        self.trace = list(trace or [])


class PreconditionViolated(VerifierError):
    """An input does not satisfy the precondition of an operation."""


class DegenerateGeometry(VerifierError, ValueError):
    """A region is degenerate (zero or full opening, zero radius)."""


class InvalidPoset(VerifierError, ValueError):
    """A finite poset description is not a partial order with involution."""


class MalformedScript(VerifierError):
    """A proof script or term could not be parsed.

    Attributes:
        line: 1-based line number of the offending line, if known.
    """

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class NoCommonRegion(VerifierError):
    """No declared region is an upper bound for a product of terms."""


class BackendMismatch(VerifierError):
    """Elements from different poset backends were combined."""


class ConfigError(VerifierError):
    """Settings or command-line values are invalid."""


class RewriteError(VerifierError):
    """A rewrite rule does not apply to the term at the requested position."""


class RegionSyntaxError(VerifierError, ValueError):
    """A region text does not parse or names a form of another backend."""
