"""Exception hierarchy shared by every module."""


class DeloneForgeError(ValueError):
    """Base class; the CLI maps these to exit status 1."""


class NotSquare(DeloneForgeError):
    pass


class NotSymmetric(DeloneForgeError):
    pass


class Singular(DeloneForgeError, ArithmeticError):
    pass


class RankDeficient(DeloneForgeError):
    pass


class NotPositiveDefinite(DeloneForgeError):
    pass


class NotInLattice(DeloneForgeError):
    pass


class Degenerate(DeloneForgeError):
    pass


class NotCospherical(DeloneForgeError):
    pass


class EnumerationLimitExceeded(DeloneForgeError):
    pass


class NotHadamard(DeloneForgeError):
    pass


class NotNormalized(DeloneForgeError):
    pass


class NotLinearCode(DeloneForgeError):
    pass


class EpsilonExhausted(DeloneForgeError):
    pass


class CertificationFailed(DeloneForgeError):
    """A required Delone certificate came back negative; carries it."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate
