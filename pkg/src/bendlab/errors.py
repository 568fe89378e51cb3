"""Exception hierarchy.  Every error raised on purpose derives from BendlabError."""


class BendlabError(Exception):
    pass


# numbers and fields
class DivisionByZero(BendlabError, ZeroDivisionError):
    pass


class ZeroElement(BendlabError, ValueError):
    pass


class NotTotallyReal(BendlabError, ValueError):
    pass


class PrecisionBudgetExceeded(BendlabError):
    pass


# units and extensions
class RankZeroField(BendlabError):
    pass


class DegenerateBasis(BendlabError):
    pass


class NotAUnit(BendlabError, ValueError):
    pass


class SquareDiscriminant(BendlabError):
    pass


class NegativeDiscriminant(BendlabError):
    pass


class PlaceCountMismatch(BendlabError):
    pass


# forms and bending
class SignatureError(BendlabError, ValueError):
    pass


class EntriesOutsideBaseField(BendlabError, ValueError):
    pass


class NotUnitary(BendlabError, ValueError):
    pass


class CentralizerViolation(BendlabError):
    pass


class UnknownGenerator(BendlabError, KeyError):
    pass


class Singular(BendlabError, ZeroDivisionError):
    pass


# projective geometry
class NotCollinear(BendlabError, ValueError):
    pass


class CoincidentPoints(BendlabError, ValueError):
    pass


class PointOnBoundary(BendlabError, ValueError):
    pass


class PointOutside(BendlabError, ValueError):
    pass


class DimensionTooSmall(BendlabError, ValueError):
    pass


class NotOnLeaf(BendlabError, ValueError):
    pass


class ZeroVector(BendlabError, ValueError):
    pass


# certification
class EmptyGenerators(BendlabError, ValueError):
    pass


class BadReduction(BendlabError):
    pass


class BudgetExceeded(BendlabError):
    pass


class ConfigError(BendlabError):
    pass
