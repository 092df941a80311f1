"""Exception hierarchy shared by all modules."""


class CurveError(ValueError):
    """Base class for invalid curve input."""


class NotCoprime(CurveError):
    pass


class BadArity(CurveError):
    pass


class SingularCurve(CurveError):
    pass


class UnsupportedCurve(CurveError):
    """The requested operation is only implemented for (2, 2g+1) and (3, 4)."""


class UnsupportedR(UnsupportedCurve):
    pass


class BranchPoint(ValueError):
    """The x-coordinate is (numerically) a root of f."""


class NumericalError(RuntimeError):
    """Base class for numerical failures."""


class RootFindingFailure(NumericalError):
    pass


class QuadratureNonConvergence(NumericalError):
    pass


class PathThroughBranchPoint(NumericalError):
    pass


class ReductionFailure(NumericalError):
    pass


class NonPositiveTau(NumericalError):
    pass


class LegendreViolation(NumericalError):
    pass


class AmbiguousCharacteristic(NumericalError):
    pass


class NoneFound(NumericalError):
    pass


class NormalizationUnstable(NumericalError):
    pass


class OnThetaDivisor(NumericalError):
    pass


class InconclusiveSlope(NumericalError):
    pass


class DegenerateConfiguration(NumericalError):
    pass


class RootMultiplicityUnresolved(NumericalError):
    pass


class TrivializationZero(NumericalError):
    pass


class NormalizationSolveFailure(NumericalError):
    pass


class DegenerateSample(NumericalError):
    pass


class UnsupportedFamily(UnsupportedCurve):
    """The requested closed form exists only for (2, 2g+1) and (3, 4)."""


class OnZeroDivisor(OnThetaDivisor):
    """A sigma factor vanishes at the evaluation point."""
