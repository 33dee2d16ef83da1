"""
Exception hierarchy for the £ workbench.

Every error carries a stable ``code`` used in JSON output and an ``exit_code``
for the command line (1 for domain errors, 2 for budget or convergence).
"""
from typing import Any, Dict, Optional


class LibraError(Exception):
    """Base class for all workbench errors"""

    code = "LibraError"
    exit_code = 1

    def __init__(self, message: str = "", **details: Any):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"error": self.code, "message": self.message}
        for key, value in self.details.items():
            payload[key] = value if isinstance(value, (int, str, bool, type(None))) else str(value)
        return payload


class MalformedFormation(LibraError):
    code = "MalformedFormation"


class NotInCategory(LibraError):
    code = "NotInCategory"


class Ambiguous(LibraError):
    """Raised when a string parses in more than one way"""

    code = "Ambiguous"

    def __init__(self, message: str, first: Any = None, second: Any = None):
        super().__init__(message)
        self.first = first
        self.second = second


class ZeroNotFormation(LibraError):
    code = "ZeroNotFormation"


class ZeroOperand(LibraError):
    code = "ZeroOperand"


class BudgetExceeded(LibraError):
    code = "BudgetExceeded"
    exit_code = 2

    def __init__(self, message: str, required: Optional[int] = None, budget: Optional[int] = None):
        super().__init__(message, required=required, budget=budget)
        self.required = required
        self.budget = budget


class NotCognomen(LibraError):
    code = "NotCognomen"


class NotTermCode(LibraError):
    code = "NotTermCode"


class WrongNoemata(LibraError):
    code = "WrongNoemata"


class NotEnumerated(LibraError):
    code = "NotEnumerated"


class UnresolvedTerm(LibraError):
    code = "UnresolvedTerm"


class EuroDisabled(LibraError):
    code = "EuroDisabled"


class NotConverged(LibraError):
    """Budgets ran out before a block-opening state repeated; ``trace`` is partial"""

    code = "NotConverged"
    exit_code = 2

    def __init__(self, message: str, trace: Any = None):
        super().__init__(message)
        self.trace = trace


class Untracked(LibraError):
    code = "Untracked"


class PresentableSyntaxError(LibraError):
    code = "PresentableSyntaxError"


class FragmentFileError(LibraError):
    code = "FragmentFileError"


class FileNotFound(FragmentFileError):
    code = "FileNotFound"
