"""Exception hierarchy shared by every module."""


class DiscriminationError(Exception):
    """Base class for all errors raised by seqdisc."""


class NotUnitary(DiscriminationError, ValueError):
    def __init__(self, defect, tol):
        self.defect = float(defect)
        self.tol = float(tol)
        super().__init__(f"matrix is not unitary: defect {self.defect:.3e} exceeds tol {self.tol:.1e}")


class NumericalFailure(DiscriminationError, ArithmeticError):
    pass


class DimensionMismatch(DiscriminationError, ValueError):
    pass


class IndexOutOfRange(DiscriminationError, IndexError):
    pass


class EmptyInput(DiscriminationError, ValueError):
    pass


class NotDifferent(DiscriminationError, ValueError):
    """The two operators agree up to a global phase, so no finite scheme separates them."""


class NoCertificate(DiscriminationError, ValueError):
    pass


class TooLarge(DiscriminationError, ValueError):
    pass


class PreconditionViolation(DiscriminationError, ValueError):
    pass


class HypothesisViolation(DiscriminationError, ValueError):
    pass


class OrthogonalityFailure(DiscriminationError, ArithmeticError):
    pass


class InvalidPartitionRequest(DiscriminationError, ValueError):
    pass


class ParseError(DiscriminationError, ValueError):
    pass
