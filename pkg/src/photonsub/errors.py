"""Exception hierarchy shared by every module in the package."""


class PhotonSubError(Exception):
    """Base class for all errors raised by photonsub."""


class DomainError(PhotonSubError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConvergenceError(PhotonSubError, ArithmeticError):
    """A series did not reach the requested tolerance within its term budget."""


class VanishingStateError(DomainError):
    """The requested state has no nonzero amplitude (e.g. over-subtraction)."""


class ParityError(DomainError):
    """Amplitudes violate the even/odd support required by the operation."""


class ShapeMismatchError(PhotonSubError, ValueError):
    """Two states with different truncations were combined."""


class NoCrossingError(PhotonSubError):
    """Two probability curves do not change order inside the search bracket."""


class DegeneratePairError(NoCrossingError):
    """Two probability curves coincide, so every point is a root."""
