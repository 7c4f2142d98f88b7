"""Exception hierarchy.

Every error that reports a concrete witness carries it in ``.witness`` as a
plain dict of element names, so CLI reports can surface it without chasing
internal indices.
"""

from __future__ import annotations


class IsgError(Exception):
    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


class ParseError(IsgError):
    """Malformed input file or unresolvable name."""


class ValidationError(IsgError):
    """Structurally well-formed input that violates an axiom."""


class NonAssociative(ValidationError):
    pass


class NotInverseSemigroup(ValidationError):
    pass


class ZeroViolation(ValidationError):
    pass


class SizeLimit(IsgError):
    """An enumeration would exceed its configured cap."""


class NotDownSet(ValidationError):
    pass


class BaseMismatch(IsgError):
    pass


class ConjugationClosureFails(ValidationError):
    pass


class NoZero(IsgError):
    pass


class NotAPseudogroup(ValidationError):
    pass


class NotAFrame(ValidationError):
    pass


class NotHomomorphism(ValidationError):
    pass


class NotIdempotentPure(ValidationError):
    pass


class NucleusAxiomFails(ValidationError):
    pass


class CompatibilityLost(IsgError):
    """A coverage closure left the compatible world; the input is broken."""


class NotGenerating(IsgError):
    pass


class NotEtale(ValidationError):
    pass


class NotT1Sober(ValidationError):
    pass


class DomainMismatch(IsgError):
    pass


class PreconditionFailed(IsgError):
    pass
