"""Exception types shared across the package."""


class SvbiderError(Exception):
    pass


class InvalidBasisVector(SvbiderError, ValueError):
    pass


class ParameterIncompatible(SvbiderError):
    """A map was requested outside the parameter coset where it is defined."""


class UndefinedSupport(SvbiderError):
    """A window-backed map was evaluated on a pair outside its domain."""


class PreconditionViolated(SvbiderError):
    pass


class NotCommuting(SvbiderError):
    pass


class BadPrime(SvbiderError):
    """A prime divides a denominator of the matrix being reduced."""


class DimensionMismatch(SvbiderError, ValueError):
    pass


class ModularMismatch(SvbiderError):
    """Modular and exact passes disagree and no retry resolved it."""
