"""Exception hierarchy shared by every layer of the library."""


class TameParamsError(Exception):
    """Base class; the CLI maps it to exit code 1."""


class SingularMatrix(TameParamsError):
    pass


class PDivisibleDeterminant(TameParamsError):
    pass


class NonInvertible(TameParamsError):
    pass


class InfiniteOrder(TameParamsError):
    pass


class DimensionMismatch(TameParamsError):
    pass


class BadPairing(TameParamsError):
    pass


class NotPinned(TameParamsError):
    pass


class MetacyclicViolation(TameParamsError):
    pass


class WildRamification(TameParamsError):
    pass


class Explosion(TameParamsError):
    pass


class UnknownGroup(TameParamsError):
    pass


class BadParams(TameParamsError):
    pass


class RankMismatch(TameParamsError):
    pass


class LevelNotCoprime(TameParamsError):
    pass


class IntegralityFailure(TameParamsError):
    pass


class NoTwistingElement(TameParamsError):
    pass


class NotSimplyConnected(TameParamsError):
    pass


class NotRegular(TameParamsError):
    pass


class TorsionUnavailable(TameParamsError):
    pass


class HypothesisViolation(TameParamsError):
    pass


class SearchSpaceExceeded(TameParamsError):
    pass
