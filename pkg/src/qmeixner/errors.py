"""Exception hierarchy.

Every exception carries an ``exit_code`` used by the command line:
1 for invalid input, 2 for a failed verification, 3 for an internal fault
(an invariant that should hold by construction did not).
"""


class QMeixnerError(Exception):
    exit_code = 3


# -- invalid input -----------------------------------------------------------

class InvalidParams(QMeixnerError, ValueError):
    exit_code = 1


class NonIntegerBeta(InvalidParams):
    """Exact mode needs a positive integer beta."""


class BetaUnderflow(InvalidParams):
    """A beta shift would leave the exact range (beta >= 1)."""


class TransformInadmissible(InvalidParams):
    """A parameter transform (alpha_i -> alpha_i/q, ...) leaves the admissible set."""


# -- verification failures ----------------------------------------------------

class VerificationFailure(QMeixnerError):
    exit_code = 2


class NonzeroResidual(VerificationFailure):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class CoefficientMismatch(VerificationFailure):
    pass


class ZeroCountMismatch(VerificationFailure):
    pass


class BracketingFailure(VerificationFailure):
    pass


class TailBoundFailure(VerificationFailure):
    pass


class PrecisionExhausted(VerificationFailure):
    pass


# -- internal faults ----------------------------------------------------------

class InexactDivision(QMeixnerError):
    pass


class WindowUnderflow(QMeixnerError):
    pass


class SingularSystem(QMeixnerError):
    pass


class InconsistentSystem(QMeixnerError):
    pass


class DegreeCertificateFailure(QMeixnerError):
    pass


class NotMonic(QMeixnerError):
    pass


class CacheMiss(QMeixnerError, KeyError):
    pass
