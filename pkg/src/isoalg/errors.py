"""Exception types shared across the package."""

from __future__ import annotations


class IsoalgError(Exception):
    """Base class for all isoalg errors."""


class DimensionMismatch(IsoalgError):
    """Operands have incompatible shapes."""


class NotSelfAdjoint(IsoalgError):
    """A matrix expected to be self-adjoint is not, beyond tolerance."""


class NotPSD(IsoalgError):
    """A matrix has a significantly negative eigenvalue."""


class NotPartialIsometry(IsoalgError):
    """An operator fails the partial-isometry characterizations.

    Carries the full diagnostic report in ``report``.
    """

    def __init__(self, msg: str, report=None):
        super().__init__(msg)
        self.report = report


class ToleranceCollapse(IsoalgError):
    """Gram-Schmidt produced a residual in the ambiguous band (tol, 10*tol).

    Signals an ill-conditioned generator set: the candidate is neither
    clearly inside nor clearly outside the current span.
    """


class NotCommutative(IsoalgError):
    """An algebra required to be commutative has a non-commuting basis pair."""


class HypothesisViolated(IsoalgError):
    """A checker's hypothesis failed; carries the failing report."""

    def __init__(self, msg: str, report=None):
        super().__init__(msg)
        self.report = report


class NotCoefficientAlgebra(IsoalgError):
    """Normal-form rewriting was requested on a system whose algebra is not
    a coefficient algebra, so the rewrite rules are unsound.  Carries the
    failing report.
    """

    def __init__(self, msg: str, report=None):
        super().__init__(msg)
        self.report = report


class CoefficientEscape(IsoalgError):
    """A rewritten coefficient left the coefficient algebra beyond tolerance."""


class SystemMismatch(IsoalgError):
    """Normal forms over different systems were combined."""


class NotUnimodular(IsoalgError):
    """Gauge parameter does not lie on the unit circle."""


class InsufficientResolution(IsoalgError):
    """Too few sample points to separate the degrees present."""


class Overflow(IsoalgError):
    """Coefficient norms exceeded the representable range while powering."""


class ParseError(IsoalgError):
    """Expression text is not in the grammar.  ``position`` is the offset
    of the offending character."""

    def __init__(self, msg: str, position: int):
        super().__init__(f"{msg} (at position {position})")
        self.position = position


class UnknownGenerator(IsoalgError):
    """An identifier in an expression is not in the generator table."""


class PolarConditionViolated(IsoalgError):
    """a*adjoint(a) is not contained in the algebra generated by abs(a).

    Carries the membership defect in ``defect``.
    """

    def __init__(self, msg: str, defect: float):
        super().__init__(msg)
        self.defect = defect


class RhoConditionViolated(IsoalgError):
    """The weight function rho violates one of its standing requirements
    (negativity on the spectrum, or U*U rho(Q) != rho(Q))."""
