from enum import StrEnum


class ErrorCode(StrEnum):
    CONFIG = "config"
    COMPLEX_INVALID = "complex_invalid"
    RELATOR_VIOLATED = "relator_violated"
    ORDER_VIOLATED = "order_violated"
    NOT_INVERTIBLE = "not_invertible"
    MISSING_GENERATOR = "missing_generator"
    UNSUPPORTED = "unsupported"
    BUDGET_EXCEEDED = "budget_exceeded"


class RephomError(Exception):
    """
    Base class for all errors raised by rephom.

    Every error carries a stable machine-readable code and the process exit
    code the CLI uses when the error reaches it.
    """

    code: ErrorCode = ErrorCode.CONFIG
    exit_code: int = 2

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def to_dict(self) -> dict:
        return {
            "error": {
                "code": str(self.code),
                "message": self.message,
                "line": self.line,
                "column": self.column,
            }
        }


class ConfigError(RephomError):
    code = ErrorCode.CONFIG
    exit_code = 2


class MathDomainError(RephomError):
    exit_code = 3


class ComplexInvalid(MathDomainError):
    code = ErrorCode.COMPLEX_INVALID


class RelatorViolated(MathDomainError):
    code = ErrorCode.RELATOR_VIOLATED

    def __init__(self, index: int, word: str):
        super().__init__(f"Relator {index} ({word}) does not evaluate to the identity")
        self.index = index
        self.word = word


class OrderViolated(MathDomainError):
    code = ErrorCode.ORDER_VIOLATED


class NotInvertible(MathDomainError):
    code = ErrorCode.NOT_INVERTIBLE


class MissingGenerator(MathDomainError):
    code = ErrorCode.MISSING_GENERATOR


class Unsupported(MathDomainError):
    code = ErrorCode.UNSUPPORTED


class BudgetExceeded(RephomError):
    code = ErrorCode.BUDGET_EXCEEDED
    exit_code = 4

    def __init__(self, message: str, dims: dict[str, int]):
        super().__init__(message)
        self.dims = dims

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["error"]["dims"] = self.dims
        return d
