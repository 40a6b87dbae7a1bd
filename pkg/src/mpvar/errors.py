"""Exception classes raised across the package."""


class MPVError(Exception):
    """Base class for all library errors."""


# fields
class DivisionByZero(MPVError, ZeroDivisionError):
    pass


class MixedFields(MPVError, ValueError):
    pass


class BadReduction(MPVError, ValueError):
    pass


class ZeroPolynomial(MPVError, ValueError):
    pass


# polynomial rings
class DuplicateName(MPVError, ValueError):
    pass


class BadArity(MPVError, ValueError):
    pass


class NotHomogeneous(MPVError, ValueError):
    pass


class ExponentOverflow(MPVError, OverflowError):
    pass


class MixedRings(MPVError, ValueError):
    pass


class InhomogeneousImages(MPVError, ValueError):
    pass


# groebner / ideals
class ZeroVector(MPVError, ValueError):
    pass


class ZeroDivisorInput(MPVError, ValueError):
    pass


class ZeroIdealDivisor(MPVError, ValueError):
    pass


class UnitIdeal(MPVError, ValueError):
    pass


class NotMonomial(MPVError, ValueError):
    pass


class DegreeMismatch(MPVError, ValueError):
    pass


# varieties
class EmptyVariety(MPVError, ValueError):
    pass


class UnsupportedClass(MPVError, NotImplementedError):
    pass


class SamplingFailed(MPVError, RuntimeError):
    pass


# rational maps
class ZeroRepresentative(MPVError, ValueError):
    pass


class InhomogeneousForms(MPVError, ValueError):
    pass


class TargetMismatch(MPVError, ValueError):
    pass


class ShapeMismatch(MPVError, ValueError):
    pass


class NotComposable(MPVError, ValueError):
    pass


class RestrictionUndefined(MPVError, ValueError):
    pass


class NeedsFiniteField(MPVError, ValueError):
    pass


class NonIntegralDegree(MPVError, ArithmeticError):
    pass


class NotBirational(MPVError, ValueError):
    pass


# scripts
class ParseError(MPVError, SyntaxError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ScriptError(MPVError, RuntimeError):
    def __init__(self, message: str, line: int, cause: Exception | None = None):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.cause = cause


class AssertionFailed(ScriptError):
    pass
