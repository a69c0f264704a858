"""Exception hierarchy shared by all modules and mapped to CLI exit codes."""

from __future__ import annotations


class FOError(Exception):
    """Base class. ``exit_code`` is what the CLI returns for this error."""

    exit_code = 2


class ValidationError(FOError, ValueError):
    """Malformed input: bad matrices, unresolved references, bad parameters."""


class InvalidSeifertMatrix(ValidationError):
    pass


class SingularForm(FOError, ArithmeticError):
    """The Tristram-Levine form is degenerate at the requested root of unity."""

    def __init__(self, m: int, n: int, detail: str = ""):
        self.m, self.n = m, n
        msg = f"Hermitian form (1-w)V + (1-w̄)V^T is singular at w = exp(2πi·{m}/{n})"
        super().__init__(msg + (f": {detail}" if detail else ""))


class NotAHomologySphere(ValidationError):
    pass


class NotAdmissible(ValidationError):
    def __init__(self, term: str, reasons: list[str] | tuple[str, ...] = ()):
        self.term = term
        self.reasons = tuple(reasons)
        super().__init__(f"not admissible: {term}" + "".join(f"; {r}" for r in reasons))


class Unresolvable(FOError):
    """A formula term cannot be reduced to knot data."""

    exit_code = 3

    def __init__(self, term: str, why: str):
        self.term = term
        self.why = why
        super().__init__(f"unresolvable term {term}: {why}")


class NonUnimodular(ValidationError):
    pass


class NotInvariant(ValidationError):
    pass


class NonTransverse(ValidationError):
    def __init__(self, location, detail: str):
        self.location = location
        super().__init__(f"non-transverse at {location}: {detail}")


class InvalidParams(ValidationError):
    pass


class UnknownKnot(ValidationError):
    pass
