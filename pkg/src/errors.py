"""Exception hierarchy for octode"""


class OctodeError(Exception):
    """Base class for every error raised by the library."""


# algebra

class LevelMismatch(OctodeError, ValueError):
    pass


class NonFiniteValue(OctodeError, ValueError):
    pass


class ZeroOrNearZero(OctodeError, ZeroDivisionError):
    pass


# functions

class ZeroInput(OctodeError, ValueError):
    pass


class ZeroBase(OctodeError, ValueError):
    pass


class PathThroughZero(OctodeError, ValueError):
    pass


class StepTooCoarse(OctodeError, ArithmeticError):
    pass


class BranchUndefined(OctodeError, ArithmeticError):
    pass


# phrase

class NotLeftReducible(OctodeError, ValueError):
    pass


class NegativePowerOne(OctodeError, ValueError):
    pass


class ExpressionSyntaxError(OctodeError, SyntaxError):
    """Malformed expression text; ``position`` is the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownSymbol(ExpressionSyntaxError):
    pass


# calculus

class EvaluationFailure(OctodeError, RuntimeError):
    pass


class NotIntegrable(OctodeError, ValueError):
    pass


class QuadratureNonConvergent(OctodeError, ArithmeticError):
    pass


class NotExact(OctodeError, ValueError):
    pass


class NotQuaternion(OctodeError, ValueError):
    pass


class CompatibilityFailed(OctodeError, ValueError):
    pass


class NonInvertibleOperator(OctodeError, ArithmeticError):
    pass


# odes

class ZeroVectorField(OctodeError, ValueError):
    pass


class NonTransversalField(OctodeError, ValueError):
    pass


class SeriesDiverged(OctodeError, ArithmeticError):
    pass


class NonRealCoefficient(OctodeError, ValueError):
    pass


class NewtonNonConvergent(OctodeError, ArithmeticError):
    pass


class SingularJacobian(OctodeError, ArithmeticError):
    pass


class DegenerateDenominator(OctodeError, ArithmeticError):
    pass


class ShapeMismatch(OctodeError, ValueError):
    pass


class AnsatzViolation(OctodeError, ValueError):
    pass


class InvalidParameter(OctodeError, ValueError):
    pass


# series

class RecursionBlowup(OctodeError, ArithmeticError):
    pass


class NonAnalyticInput(OctodeError, ValueError):
    pass
