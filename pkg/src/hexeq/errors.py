"""Exception types shared across the package."""


class HexeqError(Exception):
    """Base class for all package errors."""


class DomainMismatch(HexeqError):
    pass


class PoleAtLatticePoint(HexeqError):
    pass


class NonConvergent(HexeqError):
    pass


class EllipticUnavailable(HexeqError):
    pass


class UnsupportedFamily(HexeqError):
    pass


class UnknownFamily(HexeqError):
    pass


class NotApplicable(HexeqError):
    pass


class DegenerateSample(HexeqError):
    pass


class CorrespondenceFailed(HexeqError):
    def __init__(self, message, sample=None):
        super().__init__(message)
        self.sample = sample


class SingularSolve(HexeqError):
    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class BranchAmbiguity(HexeqError):
    pass


class GuardExhausted(HexeqError):
    pass


class IllegalPair(HexeqError):
    pass


class IllegalCombo(HexeqError):
    pass


class UnknownRow(HexeqError):
    pass


class Stalled(HexeqError):
    def __init__(self, message, frontier=None):
        super().__init__(message)
        self.frontier = frontier or []


class PatternTooSmall(HexeqError):
    pass


class ConfigError(HexeqError):
    pass
