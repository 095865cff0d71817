"""Exception types shared across the workbench."""

from __future__ import annotations


class LTError(Exception):
    """Base class for all workbench errors."""


class ParseError(LTError):
    """Syntax error with a byte offset and the set of tokens that were expected."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        self.offset = offset
        self.expected = tuple(expected)
        detail = f"syntax error at offset {offset}: {message}"
        if self.expected:
            detail += " (expected: " + ", ".join(self.expected) + ")"
        super().__init__(detail)


class EvalError(LTError):
    """Evaluation failed, e.g. a variable or label atom has no binding."""


class AlgebraMismatchError(LTError):
    """Two denotations from different algebras were combined."""


class BudgetExceededError(LTError):
    """An enumeration or decision procedure exceeded its configured budget."""

    def __init__(self, message: str, checked: int = 0, total: int | None = None):
        self.checked = checked
        self.total = total
        super().__init__(message)


class FragmentError(LTError):
    """A formula falls outside the syntactic fragment an operation requires."""


class PrincipalVariableError(LTError):
    """A homomorphism was required to have principal variables but does not."""
