"""Exception hierarchy shared by every module of the package."""


class ScatteringError(Exception):
    """Base class for all errors raised by :mod:`matscat`."""


class NotHermitian(ScatteringError):
    def __init__(self, message="matrix is not Hermitian", index=None):
        self.index = index
        if index is not None:
            message = f"fragment {index}: {message}"
        super().__init__(message)


class NoConvergence(ScatteringError):
    pass


class Singular(ScatteringError):
    pass


class ValidationError(ScatteringError):
    """A potential failed structural validation."""

    def __init__(self, message, index=None):
        self.index = index
        super().__init__(message)


class OverlappingSupports(ValidationError):
    pass


class EmptyFragment(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class ZeroWavenumber(ScatteringError):
    pass


class MixedKind(ScatteringError):
    pass


class MixedWavenumber(ScatteringError):
    pass


class SingularCoupling(ScatteringError):
    pass


class NonRealDeterminant(ScatteringError):
    pass


class BracketingFailure(ScatteringError):
    pass


class PhaseJump(ScatteringError):
    pass


class ParseError(ScatteringError):
    """Malformed potential configuration; ``location`` names the field or line."""

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)
