"""Exception classes for SternbergKit"""

from typing import Any, Optional


class SternbergKitError(Exception):
    """Base exception for SternbergKit"""

    def __init__(
        self,
        message: str,
        exit_code: Optional[int] = None,
        details: Optional[Any] = None
    ):
        super().__init__(message)
        self.exit_code = exit_code
        self.details = details


class ValidationError(SternbergKitError):
    """Raised when inputs are malformed or incompatible"""

    def __init__(self, message: str, errors: Optional[Any] = None):
        super().__init__(message, exit_code=1, details=errors)


class SchemaError(SternbergKitError):
    """Raised when a JSON document does not match its schema"""

    def __init__(self, message: str, errors: Optional[Any] = None):
        super().__init__(message, exit_code=1, details=errors)


class HorizonError(SternbergKitError):
    """Raised when a weight or table is too short for an operation"""

    def __init__(self, message: str, required: Optional[int] = None):
        super().__init__(message, exit_code=1, details={"required": required})
        self.required = required


class WeightAssumptionError(SternbergKitError):
    """Raised when a weight fails a structural precondition"""

    def __init__(self, message: str, report: Optional[Any] = None):
        super().__init__(message, exit_code=2, details=report)
        self.report = report


class ResonanceError(SternbergKitError):
    """Raised when a resonance blocks the formal recursion"""

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message, exit_code=3, details=witness)
        self.witness = witness


class ImplicationChainError(SternbergKitError):
    """Raised when a later property fails while an earlier one holds"""

    def __init__(self, message: str, reports: Optional[Any] = None):
        super().__init__(message, exit_code=2, details=reports)


class VerificationError(SternbergKitError):
    """Raised when an internal identity or unconditional bound fails"""

    def __init__(self, message: str, details: Optional[Any] = None):
        super().__init__(message, exit_code=2, details=details)


class DominationError(SternbergKitError):
    """Raised when a domination policy cannot be met on the table"""

    def __init__(self, message: str, trace: Optional[Any] = None):
        super().__init__(message, exit_code=2, details=trace)
        self.trace = trace


class EscalationBudgetError(SternbergKitError):
    """Raised when regularity escalation runs out of budget"""

    def __init__(self, message: str, attempts: int = 0):
        super().__init__(message, exit_code=2, details={"attempts": attempts})
        self.attempts = attempts
