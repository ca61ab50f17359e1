"""Exception hierarchy.

Errors are split by how the CLI reports them: ``InputRefused`` (exit 2) for
inputs the theory does not cover, ``VerificationFailure`` (exit 3) when a
checked property does not hold, anything else is internal (exit 1).
"""


class PisotLabError(Exception):
    pass


class InputRefused(PisotLabError):
    pass


class VerificationFailure(PisotLabError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(InputRefused):
    pass


class NotMonic(InputRefused):
    pass


class NotUnit(InputRefused):
    pass


class NotPisot(InputRefused):
    def __init__(self, message, root=None):
        super().__init__(message)
        self.root = root


class Reducible(InputRefused):
    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class PrecisionCapExceeded(InputRefused):
    pass


class MixedFields(InputRefused):
    pass


class OutOfRange(InputRefused):
    pass


class NegativeDifference(InputRefused):
    pass


class DigitOutOfRange(InputRefused):
    pass


class NotAdmissible(InputRefused):
    pass


class NotInPisotGroup(InputRefused):
    pass


class NotFinitary(InputRefused):
    pass


class NotRecurrent(InputRefused):
    pass


class NotEventuallyRecurrent(NotRecurrent):
    pass


class MaxStepsExceeded(PisotLabError):
    pass


class ReconstructionFailed(PisotLabError):
    pass


class InternalInconsistency(VerificationFailure):
    pass


class DeterminantMismatch(VerificationFailure):
    pass


class KernelViolation(VerificationFailure):
    pass


class SemiconjugacyViolation(VerificationFailure):
    pass


class FactorizationViolation(VerificationFailure):
    pass
