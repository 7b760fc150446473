"""Exception types raised by mubkit."""


class MubkitError(Exception):
    pass


class RangeError(MubkitError, ValueError):
    pass


class InvalidHalfInteger(MubkitError, ValueError):
    pass


class TriangleViolation(MubkitError, ValueError):
    pass


class UnsupportedJ(MubkitError, ValueError):
    pass


class NotPrime(MubkitError, ValueError):
    pass


class SpaceMismatch(MubkitError, ValueError):
    pass


class DimensionMismatch(MubkitError, ValueError):
    pass


class ParityViolation(MubkitError, ValueError):
    pass


class Inapplicable(MubkitError, ValueError):
    """The sign analysis of S(u, v, w) = +-S(u, -v, w) has no solution t."""


class NonInvariantSubspace(MubkitError):
    pass


class CriterionMismatch(MubkitError):
    pass


class ClosureOverflow(MubkitError):
    pass


class ParseError(MubkitError, ValueError):
    pass
