"""Exception hierarchy for the engine."""

from __future__ import annotations


class ObscuraError(Exception):
    """Base class for every error raised by obscura."""


class OrderMismatchError(ObscuraError, ValueError):
    pass


class InvalidOrderError(ObscuraError, ValueError):
    pass


class ScalarZeroDivisionError(ObscuraError, ZeroDivisionError):
    pass


class InvalidGradeError(ObscuraError, ValueError):
    pass


class UnsupportedGroupError(ObscuraError, ValueError):
    pass


class SizeLimitError(ObscuraError):
    pass


class InvalidMembershipError(ObscuraError, ValueError):
    pass


class UndefinedMembershipError(ObscuraError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else "undefined membership"


class InvalidLambdaError(ObscuraError, ValueError):
    pass


class ArityError(ObscuraError, ValueError):
    pass


class InvalidPermutationError(ObscuraError, ValueError):
    pass


class InvalidWordError(ObscuraError, ValueError):
    pass


class FlattenError(ObscuraError, ValueError):
    pass


class HomogeneityError(ObscuraError, ValueError):
    pass


class RefusedError(ObscuraError):
    """A precondition gate rejected the input; ``report`` explains why."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class ExpressionSyntaxError(ObscuraError, ValueError):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at column {position + 1})"
        super().__init__(message)
        self.position = position


class SpecError(ObscuraError):
    """Raised by the spec loader; carries every validation problem found."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
