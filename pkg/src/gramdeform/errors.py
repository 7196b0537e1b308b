"""Exception hierarchy.

Each error carries the CLI exit code it maps to: 2 for malformed or invalid
input, 3 for mathematical infeasibility / positivity failures, 4 when a
deformation method does not apply or a search comes back empty.
"""


class GramDeformError(Exception):
    exit_code = 1


class InvalidInput(GramDeformError, ValueError):
    exit_code = 2


class NonHermitianInput(InvalidInput):
    pass


class DimensionMismatch(InvalidInput):
    pass


class ShapeMismatch(InvalidInput):
    pass


class InvalidEnsemble(InvalidInput):
    pass


class InvalidDistribution(InvalidInput):
    pass


class NonUnitVector(InvalidInput):
    pass


class IndexOutOfRange(InvalidInput, IndexError):
    pass


class MathError(GramDeformError, ArithmeticError):
    exit_code = 3


class NotPositive(MathError):
    pass


class TraceNotOne(MathError):
    pass


class Infeasible(MathError):
    pass


class DegenerateBasis(MathError):
    pass


class GramMismatch(MathError):
    def __init__(self, message, max_deviation=None):
        super().__init__(message)
        self.max_deviation = max_deviation


class UndefinedPhase(MathError):
    pass


class OutsideSimplex(MathError):
    pass


class DiagonalMismatch(MathError):
    pass


class OverlapIncreaseFromZero(MathError):
    pass


class R2Violation(MathError):
    pass


class RankDeficient(MathError):
    pass


class NotPlanar(MathError):
    pass


class MethodInapplicable(GramDeformError):
    exit_code = 4


class NotFound(GramDeformError):
    exit_code = 4
