"""Exception types shared across the package.

Every library error derives from OrdkitError and may carry a structured
``witness`` (a tuple of element labels or similar) describing where the
condition failed.
"""

from __future__ import annotations


class OrdkitError(Exception):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(OrdkitError):
    """Input text does not conform to one of the file formats."""


class UnknownLabel(OrdkitError):
    """A cover or glue pair references an element that does not exist."""


class CycleError(OrdkitError):
    """Transitive closure of the cover relation violates antisymmetry."""


class PreconditionError(OrdkitError):
    """An operation was called outside its mathematical precondition."""


class SizeCapExceeded(OrdkitError):
    """Input is larger than the configured exhaustive-search cap."""


class UnknownPredicate(OrdkitError):
    """Counterexample predicate id is not in the registry."""


class AxiomViolation(OrdkitError):
    """A groupoid table fails one of the section-operation axioms (i)-(v)."""

    def __init__(self, axiom: str, witness):
        super().__init__(f"groupoid axiom {axiom} fails at {witness}", witness)
        self.axiom = axiom


class NotCongruence(OrdkitError):
    """Partition is not compatible with the section operation."""


class NotConvex(OrdkitError):
    """Partition has a non-convex class."""


class NotStronglySecPc(OrdkitError):
    """Poset is not strongly sectionally pseudocomplemented."""


class ClassWithoutGreatest(OrdkitError):
    """A congruence class has no greatest element."""


class InvalidFamily(OrdkitError):
    """A sum family violates one of the construction conditions."""

    def __init__(self, condition: str, witness):
        super().__init__(f"sum family condition {condition} fails at {witness}", witness)
        self.condition = condition


class YokedConditionFailed(OrdkitError):
    """A completed family violates one of the boundary conditions (y1)-(y8)."""

    def __init__(self, condition: str, witness):
        super().__init__(f"yoked family condition {condition} fails at {witness}", witness)
        self.condition = condition


class HypothesisViolated(OrdkitError):
    """A summand without a least element follows a summand with a greatest one."""

    def __init__(self, index_label: str, pred_label: str):
        super().__init__(
            f"summand {index_label!r} has no least element but its predecessor "
            f"{pred_label!r} has a greatest element",
            (index_label, pred_label),
        )
        self.index_label = index_label
        self.pred_label = pred_label
