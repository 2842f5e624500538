"""Exception hierarchy for the dok package."""


class DokError(Exception):
    """Base class for all package errors."""


class InvalidStepSize(DokError, ValueError):
    pass


class DegenerateRoots(DokError, ArithmeticError):
    """Roots of the symbol denominator collapse onto the unit circle."""


class BranchMismatch(DokError, ArithmeticError):
    """Direct and series evaluation disagree in strict precision mode."""


class RadiusTooSmall(DokError, ValueError):
    pass


class TooCloseToOrigin(DokError, ValueError):
    pass


class NonDecayingKernel(DokError, ValueError):
    pass


class TolUnachievable(DokError, ArithmeticError):
    pass


class PoleProximity(DokError, ArithmeticError):
    pass


class InconsistentA1(DokError, ArithmeticError):
    pass


class EmptyInput(DokError, ValueError):
    pass
