# Error hierarchy shared by all modules; each error carries the CLI exit code it maps to.
from typing import Optional


class BinoidError(Exception):
    """Base class for all binoid-hk errors"""

    exit_code = 1

    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


class PresentationSyntaxError(BinoidError):
    """Malformed presentation text, with 1-based line/column"""

    exit_code = 2

    def __init__(self, message: str, line: int, column: int, source_line: str = ""):
        self.line = line
        self.column = column
        self.source_line = source_line
        super().__init__(f"line {line}, column {column}: {message}")

    def render(self) -> str:
        if not self.source_line:
            return self.message
        caret = " " * (self.column - 1) + "^"
        return f"{self.message}\n  {self.source_line}\n  {caret}"


class UndeclaredGeneratorError(BinoidError):
    exit_code = 2


class InvalidPresentationError(BinoidError):
    exit_code = 2


class UsageError(BinoidError):
    exit_code = 2


class ModeMismatchError(BinoidError):
    exit_code = 2


class CompletionBudgetExceeded(BinoidError):
    """Completion stopped before all critical pairs resolved"""

    exit_code = 3

    def __init__(self, budget: int, unresolved_pair: Optional[tuple] = None):
        self.budget = budget
        self.unresolved_pair = unresolved_pair
        super().__init__(f"completion budget of {budget} exhausted; unresolved critical pair {unresolved_pair}")


class EnumerationCapExceeded(BinoidError):
    exit_code = 3

    def __init__(self, cap: int, partial_count: int, primary_status: str = "unverified"):
        self.cap = cap
        self.partial_count = partial_count
        self.primary_status = primary_status
        super().__init__(
            f"enumeration exceeded cap of {cap} elements (ideal primary status: {primary_status})"
        )


class SubsetCapExceeded(BinoidError):
    exit_code = 3


class HypothesisRefuted(BinoidError):
    """A hypothesis was checked and is false (non-primary ideal, non-cancellative witness)"""

    exit_code = 4


class HypothesisUnmet(BinoidError):
    """A theorem hypothesis is not satisfied or cannot be established"""

    exit_code = 5
