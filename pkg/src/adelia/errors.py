"""Exception hierarchy shared by every adelia module."""


class AdeliaError(Exception):
    pass


class NonPIDRing(AdeliaError):
    pass


class RingMismatch(AdeliaError):
    pass


class BadPrime(AdeliaError):
    pass


class ZeroElement(AdeliaError):
    pass


class NotIrreducible(AdeliaError):
    pass


# scheme-model
class EmptyPrimeSet(AdeliaError):
    pass


class DuplicatePrime(AdeliaError):
    pass


class NotAPartialOrder(AdeliaError):
    pass


class DimensionViolation(AdeliaError):
    pass


class UnreducedFlag(AdeliaError):
    pass


class EmptySubset(AdeliaError):
    pass


class ArityMismatch(AdeliaError):
    pass


# adele-engine
class NotFiniteLength(AdeliaError):
    pass


class UnsupportedFamily(AdeliaError):
    pass


class PrecisionMismatch(AdeliaError):
    pass


class SupportTooLarge(AdeliaError):
    pass


class NotLocal(AdeliaError):
    pass


# limits-homology
class NonCommutingCube(AdeliaError):
    pass


class IdentityViolation(AdeliaError):
    pass


# k-theory-shadow
class UnknownRingClass(AdeliaError):
    pass


class ZeroComponent(AdeliaError):
    pass


# cli
class ConfigError(AdeliaError):
    """Raised for unreadable or invalid run configurations (exit code 2)."""

    def __init__(self, message, path=None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class ParseError(ConfigError):
    pass


class ValidationError(ConfigError):
    pass
