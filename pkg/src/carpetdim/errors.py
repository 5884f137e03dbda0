"""Exception hierarchy.

Two families matter to callers (and map to CLI exit codes): ``ValidationError``
for inputs that violate a structural axiom, ``NumericError`` for computations
that cannot be carried out.
"""


class CarpetError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(CarpetError, ValueError):
    """An input system or parameter set violates a structural requirement."""


class NumericError(CarpetError, ArithmeticError):
    """A numerical routine could not produce a result."""


# -- system axioms -------------------------------------------------------------


class InvalidPartition(ValidationError):
    pass


class DominationViolation(ValidationError):
    pass


class ColumnInconsistency(ValidationError):
    pass


class ColumnMassViolation(ValidationError):
    pass


class ColumnWidthViolation(ValidationError):
    pass


class OverlapColumnsInTGLClass(ValidationError):
    pass


class OutOfUnitSquare(ValidationError):
    pass


class SpecFormatError(ValidationError):
    """Malformed system spec document (missing or unknown keys, wrong types)."""


class IndexOutOfRange(ValidationError, IndexError):
    pass


class LengthMismatch(ValidationError):
    pass


class ZeroEntry(ValidationError):
    pass


class EmptyInput(ValidationError):
    pass


class RatioOutOfRange(ValidationError):
    pass


class NotDiagHomo(ValidationError):
    pass


class AllColumnsSingleton(ValidationError):
    pass


class ResolutionOutOfRange(ValidationError):
    pass


class LambdaOrderViolation(ValidationError):
    pass


class OutOfUnitCube(ValidationError):
    pass


class TheoremHypothesisViolation(ValidationError):
    pass


class UnknownEntry(ValidationError, KeyError):
    def __str__(self):  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class ParamOutOfRange(ValidationError):
    pass


# -- numerics ------------------------------------------------------------------


class NoBracket(NumericError):
    pass


class NonFinite(NumericError):
    pass


class DegenerateInput(NumericError):
    pass


class OptimizerFailure(NumericError):
    pass


class ScanTooLarge(NumericError):
    pass


class CoverTooLarge(NumericError):
    pass


class SeriesDiverges(NumericError):
    pass
