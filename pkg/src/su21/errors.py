"""Exception hierarchy.

Every error raised on purpose by the package derives from `Su21Error`, so a
caller (the CLI in particular) can separate domain failures from bugs.
`HypothesisNotCertified` is special: it means the input was fine but the
search depth was not enough to certify the hypotheses an algorithm needs.
"""


class Su21Error(Exception):
    pass


# number fields
class ReducibleMinimalPolynomial(Su21Error):
    pass


class ConjugationNotInternal(Su21Error):
    pass


class AmbiguousRoot(Su21Error):
    pass


class FieldMismatch(Su21Error):
    pass


class DivisionByZero(Su21Error, ZeroDivisionError):
    pass


# matrices and forms
class ModeMismatch(Su21Error, TypeError):
    pass


class DegenerateForm(Su21Error):
    pass


class NotInteriorPoint(Su21Error):
    pass


class ProportionalPoints(Su21Error):
    pass


class SingularTransform(Su21Error):
    pass


# isometries
class NotUnitary(Su21Error):
    pass


class BoundaryCase(Su21Error):
    pass


class UnipotentTrace(Su21Error):
    pass


class DegenerateDenominator(Su21Error):
    pass


class NotParabolic(Su21Error):
    pass


class CubeRootUnavailable(Su21Error):
    pass


# trace fields
class FloatModeUnsupported(Su21Error):
    pass


class NotFound(Su21Error):
    pass


class DegenerateConfiguration(Su21Error):
    pass


class HypothesisNotCertified(Su21Error):
    pass


class GramSingular(Su21Error):
    pass


class InternalContradiction(Su21Error):
    pass


# tetrahedra
class DegeneratePosition(Su21Error):
    pass


class ZeroDenominator(Su21Error, ZeroDivisionError):
    pass


class SingularSystem(Su21Error):
    pass


class InconsistentInvariant(Su21Error):
    pass


class DegenerateTriple(Su21Error):
    pass


class FieldRepresentationFailure(Su21Error):
    pass


# arithmetic
class EntryOutsideField(Su21Error):
    pass


class WrongSignatureAtIdentity(Su21Error):
    pass


class NoIntegralBasis(Su21Error):
    pass


class NotLoxodromic(Su21Error):
    pass


# input files
class SchemaError(Su21Error):
    """Malformed input; `pointer` is the JSON pointer of the offending value."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
