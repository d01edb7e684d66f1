"""Canonical normal forms over an isometry system.

An element of the algebra generated by a coefficient algebra A and the
partial isometry U is stored as a finite map degree -> coefficient::

    degree  k > 0:   a_k U^k          (coefficient on the left)
    degree  k = 0:   a_0
    degree  k < 0:   U^{*|k|} a_|k|   (coefficient on the right)

with every coefficient in A and normalized so that multiplying by the range
projection U^{|k|} U^{*|k|} (on the matching side) leaves it fixed.  The
right-coefficient convention for negative degrees is canonical here; the
left-coefficient variant is available through :func:`left_coefficients` when
the adjoint intertwining relation U* a = delta_star(a) U* holds.

Multiplication reduces cross terms with the four product rules

    (c U^j)(d U^k)          = c delta^j(d) U^{j+k}
    (U^{*j} c)(U^{*k} d)    = U^{*(j+k)} delta^k(c) d
    (c U^j)(U^{*k} d)       = U^{*(k-j)} delta^{k-j}(c) F_k d       (j <= k)
                            = c F_j delta^{j-k}(d) U^{j-k}          (j >= k)
    (U^{*j} c)(d U^k)       = delta_star^j(c d) U^{k-j}             (j <= k)
                            = U^{*(j-k)} delta_star^k(c d)          (j >= k)

where F_k = U^k U^{*k}.  These are sound exactly when A is a coefficient
algebra, so every constructor refuses systems whose coefficient report fails.
"""

from __future__ import annotations

import numpy as np

from . import expr as _expr
from .algebra import IsometrySystem
from .errors import (
    CoefficientEscape,
    HypothesisViolated,
    InsufficientResolution,
    NotCoefficientAlgebra,
    NotUnimodular,
    SystemMismatch,
)
from .linalg import (
    adjoint,
    as_matrix,
    hs_norm,
    matrix_from_json,
    matrix_to_json,
    spectral_norm,
)
from .report import ConditionReport


def _require_coefficient_system(system: IsometrySystem) -> None:
    rep = system.coefficient_report
    if not rep.passed:
        raise NotCoefficientAlgebra(
            "the system's algebra is not a coefficient algebra; "
            "normal-form rewriting would be unsound", rep)


def _normalize(system: IsometrySystem, k: int, c: np.ndarray) -> np.ndarray:
    """Apply the range-projection normalization on the side matching k."""
    if k == 0:
        return c
    f = system.proj_final(abs(k))
    return c @ f if k > 0 else f @ c


class NormalForm:
    """Immutable canonical form over an isometry system.

    ``drop_scale`` sets the zero-coefficient threshold tol * drop_scale;
    arithmetic passes the scale of its operands so that cancellation leaves
    genuinely empty forms.  It defaults to the largest input coefficient
    norm.
    """

    def __init__(self, system: IsometrySystem, coeffs: dict[int, np.ndarray],
                 drop_scale: float | None = None):
        _require_coefficient_system(system)
        self.system = system
        if drop_scale is None:
            drop_scale = max((hs_norm(c) for c in coeffs.values()), default=0.0)
        cleaned: dict[int, np.ndarray] = {}
        for k, c in coeffs.items():
            c = _normalize(system, int(k), as_matrix(c))
            if hs_norm(c) <= system.tol * drop_scale:
                continue
            ok, defect = system.algebra.contains(c)
            if not ok:
                raise CoefficientEscape(
                    f"coefficient at degree {k} is outside the algebra "
                    f"(defect {defect:.3e})")
            cleaned[int(k)] = c
        self._coeffs = cleaned

    # -- access ------------------------------------------------------------

    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted(self._coeffs))

    @property
    def max_degree(self) -> int:
        return max((abs(k) for k in self._coeffs), default=0)

    def coefficient(self, k: int) -> np.ndarray:
        """The stored normalized coefficient at degree k (zero if absent)."""
        n = self.system.dim
        if k in self._coeffs:
            return self._coeffs[k]
        return np.zeros((n, n), dtype=complex)

    def scale(self) -> float:
        return max((hs_norm(c) for c in self._coeffs.values()), default=0.0)

    def eval(self) -> np.ndarray:
        """The represented matrix: sum of all degree terms."""
        n = self.system.dim
        out = np.zeros((n, n), dtype=complex)
        for k in sorted(self._coeffs):
            c = self._coeffs[k]
            if k > 0:
                out += c @ self.system.power(k)
            elif k < 0:
                out += self.system.star_power(-k) @ c
            else:
                out += c
        return out

    def to_json(self) -> dict:
        return {"degrees": [{"k": k, "coeff": matrix_to_json(self._coeffs[k])}
                            for k in sorted(self._coeffs)]}

    @staticmethod
    def from_json(obj: dict, system: IsometrySystem) -> "NormalForm":
        coeffs = {int(d["k"]): matrix_from_json(d["coeff"])
                  for d in obj["degrees"]}
        return NormalForm(system, coeffs)

    def __repr__(self) -> str:
        return f"NormalForm(degrees={self.degrees()})"


def zero_form(system: IsometrySystem) -> NormalForm:
    return NormalForm(system, {})


def identity_form(system: IsometrySystem) -> NormalForm:
    return NormalForm(system, {0: np.eye(system.dim, dtype=complex)})


def _check_same_system(x: NormalForm, y: NormalForm) -> None:
    if x.system is not y.system:
        raise SystemMismatch("normal forms built over different systems")


def nf_add(x: NormalForm, y: NormalForm) -> NormalForm:
    _check_same_system(x, y)
    out: dict[int, np.ndarray] = {k: c.copy() for k, c in x._coeffs.items()}
    for k, c in y._coeffs.items():
        out[k] = out[k] + c if k in out else c
    return NormalForm(x.system, out, drop_scale=max(x.scale(), y.scale()))


def nf_scale(x: NormalForm, z: complex) -> NormalForm:
    return NormalForm(x.system, {k: z * c for k, c in x._coeffs.items()})


def nf_adjoint(x: NormalForm) -> NormalForm:
    """Degree k maps to -k with the coefficient adjoint moved to the other
    side; the normalization carries over exactly."""
    return NormalForm(x.system, {-k: adjoint(c) for k, c in x._coeffs.items()})


def _term_product(system: IsometrySystem, j: int, c: np.ndarray,
                  k: int, d: np.ndarray) -> tuple[int, np.ndarray]:
    """Product of two canonical single terms, as (degree, raw coefficient)."""
    if j >= 0 and k >= 0:
        return j + k, c @ system.delta_n(d, j)
    if j <= 0 and k <= 0:
        return j + k, system.delta_n(c, -k) @ d
    if j > 0:  # j > 0 > k
        b = -k
        if j <= b:
            return j + k, system.delta_n(c, b - j) @ system.proj_final(b) @ d
        return j + k, c @ system.proj_final(j) @ system.delta_n(d, j - b)
    # j < 0 < k
    a = -j
    m = c @ d
    return j + k, system.delta_star_n(m, min(a, k))


def nf_multiply(x: NormalForm, y: NormalForm) -> NormalForm:
    _check_same_system(x, y)
    system = x.system
    acc: dict[int, np.ndarray] = {}
    for j in sorted(x._coeffs):
        for k in sorted(y._coeffs):
            deg, c = _term_product(system, j, x._coeffs[j], k, y._coeffs[k])
            acc[deg] = acc[deg] + c if deg in acc else c
    return NormalForm(system, acc, drop_scale=x.scale() * y.scale())


def gauge(x: NormalForm, lam: complex) -> NormalForm:
    """Substitute U -> lam*U for unimodular lam: degree k picks up lam^k."""
    if abs(abs(lam) - 1.0) > 1e-12:
        raise NotUnimodular(f"|lam| = {abs(lam)!r} is not 1")
    return NormalForm(x.system, {k: (lam ** k) * c
                                 for k, c in x._coeffs.items()})


def gauge_average(x: NormalForm, k: int, m: int) -> np.ndarray:
    """Fourier extraction of the degree-k monomial by averaging over m-th
    roots of unity: (1/m) * sum_j lam_j^{-k} eval(gauge(x, lam_j)).

    Exact (up to rounding) once m exceeds twice the maximum degree; this is
    the independent oracle for :meth:`NormalForm.coefficient`.
    """
    if m <= 2 * x.max_degree:
        raise InsufficientResolution(
            f"m = {m} roots cannot separate degrees up to {x.max_degree}; "
            f"need m > {2 * x.max_degree}")
    n = x.system.dim
    out = np.zeros((n, n), dtype=complex)
    for j in range(m):
        lam = np.exp(2j * np.pi * j / m)
        out += (lam ** (-k)) * gauge(x, lam).eval()
    return out / m


def strip_power(system: IsometrySystem, monomial: np.ndarray, k: int) -> np.ndarray:
    """Recover the normalized coefficient from a degree-k monomial matrix:
    right-multiply by U^{*k} for k > 0, left-multiply by U^{|k|} for k < 0."""
    monomial = as_matrix(monomial)
    if k > 0:
        return monomial @ system.star_power(k)
    if k < 0:
        return system.power(-k) @ monomial
    return monomial


def reduce(e: _expr.Expression, system: IsometrySystem) -> NormalForm:
    """Rewrite a parsed expression to its canonical normal form.

    Distributes over sums and folds products left with the term product
    rules.  Refuses (NotCoefficientAlgebra) when the system's coefficient
    report fails, since the rewrite rules are only sound for coefficient
    algebras.
    """
    _require_coefficient_system(system)
    n = system.dim

    if isinstance(e, _expr.Scalar):
        return NormalForm(system, {0: e.value * np.eye(n, dtype=complex)})
    if isinstance(e, _expr.Gen):
        return NormalForm(system, {0: as_matrix(e.matrix)})
    if isinstance(e, _expr.USym):
        f1 = system.proj_final(1)
        return NormalForm(system, {(-1 if e.star else 1): f1})
    if isinstance(e, _expr.Sum):
        out = zero_form(system)
        for item in e.items:
            out = nf_add(out, reduce(item, system))
        return out
    if isinstance(e, _expr.Prod):
        out = identity_form(system)
        for item in e.items:
            out = nf_multiply(out, reduce(item, system))
        return out
    if isinstance(e, _expr.Adj):
        return nf_adjoint(reduce(e.item, system))
    if isinstance(e, _expr.Pow):
        out = identity_form(system)
        base = reduce(e.item, system)
        for _ in range(e.exponent):
            out = nf_multiply(out, base)
        return out
    raise TypeError(f"not an expression node: {e!r}")


def check_adjoint_intertwining(sys: IsometrySystem,
                               tol: float | None = None) -> ConditionReport:
    """Check U* a = delta_star(a) U* on the basis (the mirror intertwining
    relation that makes the left-coefficient convention available)."""
    tol = sys.tol if tol is None else tol
    rep = ConditionReport("adjoint_intertwining")
    ustar = adjoint(sys.u)
    d = max(spectral_norm(ustar @ a - sys.delta_star(a) @ ustar)
            for a in sys.algebra.basis)
    rep.add("U*a = delta_star(a)U* on basis", d, tol)
    return rep


def left_coefficients(x: NormalForm) -> dict[int, np.ndarray]:
    """Coefficients in the left-placement convention (b_k U^{*k} for k < 0).

    Only available when the adjoint intertwining relation holds; raises
    HypothesisViolated otherwise.  Positive and zero degrees are unchanged;
    at degree k < 0 the left coefficient is delta_star^{|k|} of the stored
    one.
    """
    rep = check_adjoint_intertwining(x.system)
    if not rep.passed:
        raise HypothesisViolated(
            "adjoint intertwining fails; left-coefficient form unavailable", rep)
    out: dict[int, np.ndarray] = {}
    for k in x.degrees():
        c = x.coefficient(k)
        out[k] = x.system.delta_star_n(c, -k) if k < 0 else c
    return out
