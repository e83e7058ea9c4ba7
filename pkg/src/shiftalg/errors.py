"""Exception types and completeness flags shared across the library.

Every structured failure the library can produce is an instance of
ShiftAlgError.  CompletenessFlag is not an error: it records that a search
was truncated at the documented boundary (constant field extensions beyond
quadratic, isotropic-vector degree bounds), so that a negative answer can
be reported honestly as "nothing found within scope".
"""

from dataclasses import dataclass


class ShiftAlgError(Exception):
    """Base class for all library errors."""


class StepMismatch(ShiftAlgError):
    """Two operators/modules live in different subrings D_s, D_t."""


class StepNotMultiple(ShiftAlgError):
    """Restriction target step is not a multiple of the source step."""


class StepNotDivisor(ShiftAlgError):
    """Induction target step does not divide the source step."""


class DivisionByZeroOperator(ShiftAlgError):
    pass


class ZeroVector(ShiftAlgError):
    pass


class SearchExhausted(ShiftAlgError):
    """The deterministic cyclic-vector ladder ran out of candidates."""


class DimensionTooSmall(ShiftAlgError):
    pass


class NotDimension3(ShiftAlgError):
    pass


class ReducibleInput(ShiftAlgError):
    """An operation that requires an irreducible module got a reducible one."""


class WrongOrder(ShiftAlgError):
    pass


class CoefficientsNotRational(ShiftAlgError):
    """An operation restricted to Q coefficients met the quadratic extension."""


class ExtensionTooDeep(ShiftAlgError):
    """A computation needs an algebraic extension beyond one square root.

    Carries the offending algebraic condition as a message so callers can
    report exactly which step could not be completed over Q(sqrt(delta)).
    """


class DeltaMismatch(ShiftAlgError):
    """Arithmetic mixed two constants with different extension tags."""


class DegenerateForm(ShiftAlgError):
    """reduce_quadratic was handed a singular Gram matrix."""


class IsotropicSearchFailed(ShiftAlgError):
    """No isotropic vector found within the degree bound.

    Attributes:
        degree_bound: the ansatz degree that was exhausted.
    """

    def __init__(self, message, degree_bound=None):
        super().__init__(message)
        self.degree_bound = degree_bound


class SingularPoint(ShiftAlgError):
    """Sequence generation hit a zero of the defining coefficient."""

    def __init__(self, index):
        super().__init__(f"singular point at index {index}")
        self.index = index


class MalformedLine(ShiftAlgError):
    def __init__(self, lineno, text=""):
        super().__init__(f"malformed line {lineno}: {text!r}")
        self.lineno = lineno


class NonMonotoneIndex(ShiftAlgError):
    def __init__(self, lineno):
        super().__init__(f"non-increasing index at line {lineno}")
        self.lineno = lineno


class ParseError(ShiftAlgError):
    """Text input could not be parsed; carries the offending position."""

    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class InternalVerificationError(ShiftAlgError):
    """An identity that must hold by theorem failed an exact re-check.

    This is never a property of the input; it indicates a bug and is
    deliberately loud instead of being silently returned.
    """


@dataclass(frozen=True)
class CompletenessFlag:
    """Record of a search truncated at a documented completeness boundary.

    kind: short machine-readable tag, e.g. "z-extension-degree",
          "coefficients-not-rational", "isotropic-search".
    detail: human-readable description of the offending condition.
    """

    kind: str
    detail: str

    def to_json(self):
        return {"kind": self.kind, "detail": self.detail}
