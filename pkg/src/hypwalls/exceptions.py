class HypWallsError(Exception):
    """Base class for all library errors."""


class ZeroQuaternion(HypWallsError, ZeroDivisionError):
    pass


class DeterminantError(HypWallsError, ValueError):
    pass


class NoIsometricSphere(HypWallsError):
    """Raised for elements fixing infinity (c = 0)."""


class InSU2(HypWallsError):
    """Raised when the element fixes the base point, so its bisector is undefined."""


class BisectorIsPlane(HypWallsError):
    """Raised by operations that need a spherical bisector but got a vertical plane."""


class DomainError(HypWallsError, ValueError):
    pass


class NoIntersection(HypWallsError):
    pass


class IdentityHasAllPoints(HypWallsError):
    pass


class Inconclusive(HypWallsError):
    pass


class StepLimit(HypWallsError):
    pass


class NotSquarefree(HypWallsError, ValueError):
    pass


class ParseError(HypWallsError, ValueError):
    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
