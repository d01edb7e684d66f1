"""Finite-dimensional *-algebra machinery.

A *-subalgebra of the ambient matrix algebra is stored as a Hilbert-Schmidt
orthonormal basis, which turns span membership, commutants and generated
closures into ordinary linear algebra.  On top of that sit the condition
checkers for a pair (algebra, partial isometry U) and the extension builders
that enlarge an initial algebra until the maps

    delta(x) = U x U*,        delta_star(x) = U* x U

send it into itself.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .errors import (
    DimensionMismatch,
    HypothesisViolated,
    NotCommutative,
    NotPartialIsometry,
    ToleranceCollapse,
)
from .linalg import (
    DEFAULT_TOL,
    adjoint,
    as_matrix,
    hs_norm,
    is_partial_isometry,
    spectral_norm,
)
from .report import ConditionReport


def _chain_cap(n: int) -> int:
    # longest strictly increasing chain of subspaces of the n*n matrices,
    # plus slack; guards stabilization loops against tolerance oscillation
    return n * n + 2


def _flatten(mats: list[np.ndarray]) -> np.ndarray:
    return np.array([m.ravel() for m in mats])


def _orth_insert(flat: list[np.ndarray], cand: np.ndarray, tol: float):
    """Try to extend an orthonormal flat basis by one candidate.

    Returns the new unit vector, or None when the candidate lies in the span.
    Raises ToleranceCollapse for residual norms in the ambiguous band
    (tol, 10*tol) after normalizing the candidate.
    """
    norm = np.linalg.norm(cand)
    if norm <= tol:
        return None
    v = cand / norm
    # two Gram-Schmidt passes for orthogonality at machine precision
    for _ in range(2):
        for b in flat:
            v = v - np.vdot(b, v) * b
    r = np.linalg.norm(v)
    if r <= tol:
        return None
    if r < 10.0 * tol:
        raise ToleranceCollapse(
            f"Gram-Schmidt residual {r:.3e} in ambiguous band "
            f"({tol:.1e}, {10 * tol:.1e}); generator set is ill-conditioned")
    return v / r


def _svd_span(mats: list[np.ndarray]) -> np.ndarray:
    """Orthonormal flat basis of the span, for comparisons (no band semantics)."""
    stack = _flatten(mats)
    _, s, vh = np.linalg.svd(stack, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return vh[:0]
    rank = int(np.sum(s > 1e-12 * s[0]))
    return vh[:rank]


def _span_defect(flat: np.ndarray, m: np.ndarray) -> float:
    """Frobenius distance from m to the span of an orthonormal flat basis."""
    v = m.ravel()
    if flat.shape[0]:
        v = v - flat.T @ (flat.conj() @ v)
    return float(np.linalg.norm(v))


def spans_equal(a: list[np.ndarray], b: list[np.ndarray], tol: float) -> tuple[bool, float]:
    """Mutual containment of two matrix spans; returns (equal, worst defect)."""
    fa, fb = _svd_span(a), _svd_span(b)
    worst = 0.0
    for m in b:
        worst = max(worst, _span_defect(fa, m) / max(1.0, hs_norm(m)))
    for m in a:
        worst = max(worst, _span_defect(fb, m) / max(1.0, hs_norm(m)))
    return worst <= tol, worst


class FiniteStarAlgebra:
    """A unital *-subalgebra of the n x n matrices.

    ``basis`` is Hilbert-Schmidt orthonormal, closed under adjoints and
    products within ``tol``, and spans the identity.
    """

    def __init__(self, basis: list[np.ndarray], tol: float = DEFAULT_TOL,
                 validate: bool = True):
        if not basis:
            raise DimensionMismatch("empty basis")
        self.basis = [as_matrix(b) for b in basis]
        self.ambient_dim = self.basis[0].shape[0]
        if any(b.shape[0] != self.ambient_dim for b in self.basis):
            raise DimensionMismatch("basis matrices have mixed dimensions")
        self.tol = float(tol)
        self._flat = _flatten(self.basis)
        if validate:
            rep = self.invariant_report()
            if not rep.passed:
                raise ValueError(f"invalid *-algebra basis:\n{rep}")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def project_coeffs(self, m: np.ndarray) -> np.ndarray:
        """Coordinates of the HS projection of m onto the span."""
        return self._flat.conj() @ np.asarray(m).ravel()

    def project(self, m: np.ndarray) -> np.ndarray:
        """HS projection of m onto the span, as a matrix."""
        c = self.project_coeffs(m)
        return (self._flat.T @ c).reshape(self.ambient_dim, self.ambient_dim)

    def contains(self, m: np.ndarray) -> tuple[bool, float]:
        """Membership test; defect is the Frobenius distance to the span."""
        m = as_matrix(m)
        if m.shape[0] != self.ambient_dim:
            raise DimensionMismatch(
                f"matrix dim {m.shape[0]} != ambient dim {self.ambient_dim}")
        defect = _span_defect(self._flat, m)
        return defect <= self.tol * max(1.0, hs_norm(m)), defect

    def invariant_report(self) -> ConditionReport:
        rep = ConditionReport("star_algebra_invariants")
        gram = self._flat.conj() @ self._flat.T
        rep.add("basis orthonormal", float(np.abs(gram - np.eye(self.dim)).max()),
                10.0 * self.tol)
        rep.add("identity in span",
                _span_defect(self._flat, np.eye(self.ambient_dim, dtype=complex)),
                self.tol * self.ambient_dim)
        adj = max(_span_defect(self._flat, adjoint(b)) for b in self.basis)
        rep.add("closed under adjoint", adj, self.tol)
        prod = 0.0
        for bi in self.basis:
            for bj in self.basis:
                prod = max(prod, _span_defect(self._flat, bi @ bj))
        rep.add("closed under product", prod, self.tol)
        return rep

    def to_json(self) -> list[dict]:
        from .linalg import matrix_to_json
        return [matrix_to_json(b) for b in self.basis]

    def __repr__(self) -> str:
        return (f"FiniteStarAlgebra(dim={self.dim}, "
                f"ambient={self.ambient_dim}, tol={self.tol:g})")


def generate_closure(gens: list[np.ndarray], tol: float = DEFAULT_TOL,
                     dim: int | None = None) -> FiniteStarAlgebra:
    """Minimal unital *-algebra containing the generators.

    Iteratively adjoins adjoints and pairwise products, re-orthonormalizing
    by Hilbert-Schmidt Gram-Schmidt, until the dimension stabilizes.  The
    identity is always adjoined.  ``dim`` is required when ``gens`` is empty.
    """
    gens = [as_matrix(g) for g in gens]
    if gens:
        n = gens[0].shape[0]
        if any(g.shape[0] != n for g in gens):
            raise DimensionMismatch("generators have mixed dimensions")
        if dim is not None and dim != n:
            raise DimensionMismatch(f"dim={dim} but generators are {n}x{n}")
    elif dim is None:
        raise DimensionMismatch("empty generator set needs an explicit dim")
    else:
        n = dim

    flat: list[np.ndarray] = []
    eye = np.eye(n, dtype=complex)
    for cand in [eye] + gens:
        v = _orth_insert(flat, cand.ravel(), tol)
        if v is not None:
            flat.append(v)

    cap = _chain_cap(n)
    for _ in range(cap):
        grew = False
        mats = [v.reshape(n, n) for v in flat]
        candidates = [adjoint(m) for m in mats]
        for mi in mats:
            for mj in mats:
                candidates.append(mi @ mj)
        for cand in candidates:
            v = _orth_insert(flat, cand.ravel(), tol)
            if v is not None:
                flat.append(v)
                grew = True
        if not grew:
            break

    basis = [v.reshape(n, n) for v in flat]
    return FiniteStarAlgebra(basis, tol=tol, validate=True)


def commutant(mats: list[np.ndarray], tol: float = DEFAULT_TOL) -> FiniteStarAlgebra:
    """All matrices commuting with every element of ``mats``.

    Solved as the joint null space of X -> sX - Xs over the given matrices;
    the null space of the stacked system is computed by SVD, whose right
    singular vectors are already HS-orthonormal.
    """
    mats = [as_matrix(m) for m in mats]
    if not mats:
        raise DimensionMismatch("commutant of an empty set is the full algebra; "
                                "pass at least one matrix (e.g. the identity)")
    n = mats[0].shape[0]
    eye = np.eye(n)
    blocks = [np.kron(s, eye) - np.kron(eye, s.T) for s in mats]
    stack = np.vstack(blocks)
    _, s, vh = np.linalg.svd(stack)
    smax = s[0] if s.size else 0.0
    cutoff = max(tol * max(1.0, smax), n * n * np.finfo(float).eps * smax)
    null_rows = [vh[i] for i in range(vh.shape[0]) if i >= s.size or s[i] <= cutoff]
    basis = [v.conj().reshape(n, n) for v in null_rows]
    return FiniteStarAlgebra(basis, tol=tol, validate=True)


def bicommutant(alg: FiniteStarAlgebra) -> FiniteStarAlgebra:
    """Commutant of the commutant (the von Neumann algebra generated)."""
    return commutant(commutant(alg.basis, alg.tol).basis, alg.tol)


class IsometrySystem:
    """A *-algebra together with a partial isometry acting on the same space.

    Powers of U and the projections U^{*k} U^k, U^k U^{*k} are cached eagerly
    up to ``depth`` (further powers are computed on demand without mutating
    the cache).  The instance is immutable after construction.
    """

    def __init__(self, algebra: FiniteStarAlgebra, u: np.ndarray,
                 depth: int | None = None):
        self.algebra = algebra
        self.u = as_matrix(u)
        if self.u.shape[0] != algebra.ambient_dim:
            raise DimensionMismatch(
                f"U dim {self.u.shape[0]} != ambient dim {algebra.ambient_dim}")
        self.tol = algebra.tol
        rep = is_partial_isometry(self.u, self.tol)
        if not rep.passed:
            raise NotPartialIsometry("U is not a partial isometry", rep)

        if depth is None:
            depth = 2 * algebra.ambient_dim + 4
        n = algebra.ambient_dim
        powers = [np.eye(n, dtype=complex)]
        for _ in range(depth):
            nxt = powers[-1] @ self.u
            powers.append(nxt)
            if not nxt.any():
                break
        self._powers = powers
        self._nilpotent_at = len(powers) - 1 if not powers[-1].any() else None
        self._proj_initial = [adjoint(p) @ p for p in powers]
        self._proj_final = [p @ adjoint(p) for p in powers]

    @property
    def dim(self) -> int:
        return self.algebra.ambient_dim

    def power(self, k: int) -> np.ndarray:
        """U^k for k >= 0."""
        if k < 0:
            raise ValueError("negative power; use star_power")
        if self._nilpotent_at is not None and k >= self._nilpotent_at:
            return np.zeros_like(self.u)
        if k < len(self._powers):
            return self._powers[k]
        m = self._powers[-1]
        for _ in range(k - len(self._powers) + 1):
            m = m @ self.u
        return m

    def star_power(self, k: int) -> np.ndarray:
        return adjoint(self.power(k))

    def proj_initial(self, k: int) -> np.ndarray:
        """U^{*k} U^k."""
        if k < len(self._proj_initial):
            return self._proj_initial[k]
        p = self.power(k)
        return adjoint(p) @ p

    def proj_final(self, k: int) -> np.ndarray:
        """U^k U^{*k}."""
        if k < len(self._proj_final):
            return self._proj_final[k]
        p = self.power(k)
        return p @ adjoint(p)

    def delta(self, m: np.ndarray) -> np.ndarray:
        """U m U*."""
        m = as_matrix(m)
        if m.shape[0] != self.dim:
            raise DimensionMismatch("dimension mismatch in delta")
        return self.u @ m @ adjoint(self.u)

    def delta_star(self, m: np.ndarray) -> np.ndarray:
        """U* m U."""
        m = as_matrix(m)
        if m.shape[0] != self.dim:
            raise DimensionMismatch("dimension mismatch in delta_star")
        return adjoint(self.u) @ m @ self.u

    def delta_n(self, m: np.ndarray, n: int) -> np.ndarray:
        """U^n m U^{*n} (the identity map for n = 0)."""
        if n == 0:
            return as_matrix(m)
        p = self.power(n)
        return p @ m @ adjoint(p)

    def delta_star_n(self, m: np.ndarray, n: int) -> np.ndarray:
        """U^{*n} m U^n (the identity map for n = 0)."""
        if n == 0:
            return as_matrix(m)
        p = self.power(n)
        return adjoint(p) @ m @ p

    @cached_property
    def coefficient_report(self) -> ConditionReport:
        """Cached result of check_coefficient_algebra on this system."""
        return check_coefficient_algebra(self)

    def __repr__(self) -> str:
        return f"IsometrySystem(algebra={self.algebra!r})"


def delta(sys: IsometrySystem, m: np.ndarray) -> np.ndarray:
    return sys.delta(m)


def delta_star(sys: IsometrySystem, m: np.ndarray) -> np.ndarray:
    return sys.delta_star(m)


# ---------------------------------------------------------------------------
# condition checkers
# ---------------------------------------------------------------------------

def check_intertwining_equivalents(sys: IsometrySystem,
                                   tol: float | None = None) -> ConditionReport:
    """Check the three equivalent forms of the intertwining relation.

    (i)   U a = delta(a) U for every basis element a;
    (ii)  U is a partial isometry and U*U commutes with the algebra;
    (iii) U*U commutes with the algebra and delta is multiplicative on
          basis pairs.

    The three are equivalent in exact arithmetic, so a disagreement among
    them flags a numerical fault and is noted on the report.
    """
    tol = sys.tol if tol is None else tol
    rep = ConditionReport("intertwining_equivalents")
    u, ustar = sys.u, adjoint(sys.u)
    basis = sys.algebra.basis

    d_i = max(spectral_norm(u @ a - sys.delta(a) @ u) for a in basis)
    rep.add("(i) Ua = delta(a)U on basis", d_i, tol)

    pi = is_partial_isometry(u, tol)
    d_pi = max(d.value for d in pi.defects)
    rep.add("(ii) U is a partial isometry", d_pi, tol)
    p = ustar @ u
    d_comm = max(spectral_norm(p @ a - a @ p) for a in basis)
    rep.add("(ii)/(iii) U*U commutes with algebra", d_comm, tol)

    d_mult = 0.0
    deltas = [sys.delta(a) for a in basis]
    for a, da in zip(basis, deltas):
        for b, db in zip(basis, deltas):
            d_mult = max(d_mult, spectral_norm(sys.delta(a @ b) - da @ db))
    rep.add("(iii) delta multiplicative on basis pairs", d_mult, tol)

    verdicts = [d_i <= tol,
                d_pi <= tol and d_comm <= tol,
                d_comm <= tol and d_mult <= tol]
    if len(set(verdicts)) > 1:
        rep.note("equivalent conditions disagree; suspect a numerical fault")
    return rep


def check_coefficient_algebra(sys: IsometrySystem,
                              tol: float | None = None) -> ConditionReport:
    """Check that the algebra is a coefficient algebra for (algebra, U):
    the intertwining relation holds and both delta and delta_star map the
    algebra into itself.
    """
    tol = sys.tol if tol is None else tol
    rep = ConditionReport("coefficient_algebra")
    rep.merge(check_intertwining_equivalents(sys, tol))
    d_in = max(sys.algebra.contains(sys.delta(a))[1] for a in sys.algebra.basis)
    rep.add("delta maps algebra into itself", d_in, tol)
    d_star_in = max(sys.algebra.contains(sys.delta_star(a))[1]
                    for a in sys.algebra.basis)
    rep.add("delta_star maps algebra into itself", d_star_in, tol)
    return rep


def check_extendability(sys: IsometrySystem, n_max: int,
                        tol: float | None = None) -> ConditionReport:
    """Check that U*U commutes with every iterated image delta^n(a).

    This is the obstruction for extending the algebra to one satisfying the
    intertwining relation with delta mapping it into itself.  The span chain
    delta^n(basis) stabilizes in finite dimension; the first index where two
    consecutive spans agree is reported as a note.
    """
    tol = sys.tol if tol is None else tol
    rep = ConditionReport("extendability")
    p = sys.proj_initial(1)
    images = list(sys.algebra.basis)
    worst = 0.0
    stabilized_at = None
    prev = images
    for n in range(n_max + 1):
        if n > 0:
            images = [sys.delta(a) for a in images]
            if stabilized_at is None:
                eq, _ = spans_equal(prev, images, tol)
                if eq:
                    stabilized_at = n
            prev = images
        for a in images:
            worst = max(worst, spectral_norm(p @ a - a @ p))
    rep.add(f"U*U commutes with delta^n(basis), n <= {n_max}", worst, tol)
    if stabilized_at is not None:
        rep.note(f"delta^n span stabilizes at n = {stabilized_at}")
    else:
        rep.note(f"delta^n span did not stabilize within n <= {n_max}")
    return rep


def check_commutative_extendability(sys: IsometrySystem, n_max: int,
                                    tol: float | None = None) -> ConditionReport:
    """Check the two conditions for a commutative coefficient extension:
    the algebra commutes with all delta^n images of itself, and U*U does too.

    Raises NotCommutative when the algebra itself is not commutative.
    """
    tol = sys.tol if tol is None else tol
    basis = sys.algebra.basis
    d_comm = 0.0
    for i, a in enumerate(basis):
        for b in basis[i + 1:]:
            d_comm = max(d_comm, spectral_norm(a @ b - b @ a))
    if d_comm > tol:
        exc = NotCommutative(
            f"algebra has commutator defect {d_comm:.3e} > {tol:.1e}")
        exc.defect = d_comm
        raise exc

    rep = ConditionReport("commutative_extendability")
    rep.add("algebra commutative", d_comm, tol)
    images = list(basis)
    worst = 0.0
    for n in range(n_max + 1):
        if n > 0:
            images = [sys.delta(a) for a in images]
        for a in basis:
            for img in images:
                worst = max(worst, spectral_norm(a @ img - img @ a))
    rep.add(f"algebra commutes with delta^n(algebra), n <= {n_max}", worst, tol)
    rep.merge(check_extendability(sys, n_max, tol))
    return rep


def _tower(sys: IsometrySystem, image, tol: float) -> FiniteStarAlgebra:
    """Generated closure of all iterated images of the algebra under ``image``.

    Because the chain is nested, two consecutive equal dimensions certify a
    fixed point.
    """
    cur = sys.algebra
    cap = _chain_cap(sys.dim)
    for _ in range(cap):
        imgs = [image(b) for b in cur.basis]
        nxt = generate_closure(cur.basis + imgs, tol, dim=sys.dim)
        if nxt.dim == cur.dim:
            return cur
        cur = nxt
    return cur


def extend_delta(sys: IsometrySystem, tol: float | None = None) -> FiniteStarAlgebra:
    """Smallest *-algebra containing the algebra and all its delta^n images.

    Requires extendability (otherwise the result need not intertwine with U);
    raises HypothesisViolated carrying the failed report.
    """
    tol = sys.tol if tol is None else tol
    pre = check_extendability(sys, n_max=sys.dim, tol=tol)
    if not pre.passed:
        raise HypothesisViolated("extendability fails; delta tower unsound", pre)
    return _tower(sys, sys.delta, tol)


def extend_delta_star(sys: IsometrySystem,
                      tol: float | None = None) -> FiniteStarAlgebra:
    """Smallest *-algebra containing the algebra and all delta_star^n images.

    Requires the intertwining relation and delta mapping the algebra into
    itself; raises HypothesisViolated carrying the failed report.
    """
    tol = sys.tol if tol is None else tol
    pre = ConditionReport("delta_star_tower_hypotheses")
    sub = check_intertwining_equivalents(sys, tol)
    pre.add("intertwining relation", sub.defects[0].value, tol)
    d_in = max(sys.algebra.contains(sys.delta(a))[1] for a in sys.algebra.basis)
    pre.add("delta maps algebra into itself", d_in, tol)
    if not pre.passed:
        raise HypothesisViolated(
            "intertwining or delta-invariance fails; delta_star tower unsound", pre)
    return _tower(sys, sys.delta_star, tol)


def verify_power_identities(sys: IsometrySystem, k_max: int,
                            tol: float | None = None) -> ConditionReport:
    """Verify the power structure of a coefficient system up to k_max:

    - U^k a = delta^k(a) U^k on the basis;
    - U^{*k} U^k commutes with the algebra;
    - both projection families U^{*k}U^k and U^kU^{*k} consist of pairwise
      commuting, decreasing projections;
    - the two families commute with each other;
    - the absorption identities U* U^k U^{*l} = U^{k-1} U^{*l} and
      U U^{*k} U^l = U^{*(k-1)} U^l for 1 <= k <= l.

    Report-valued; the hypothesis (intertwining + delta-invariance) is
    recorded as the first entries instead of raising.
    """
    tol = sys.tol if tol is None else tol
    rep = ConditionReport("power_structure")
    sub = check_intertwining_equivalents(sys, tol)
    rep.add("hypothesis: intertwining relation", sub.defects[0].value, tol)
    d_in = max(sys.algebra.contains(sys.delta(a))[1] for a in sys.algebra.basis)
    rep.add("hypothesis: delta maps algebra into itself", d_in, tol)

    basis = sys.algebra.basis
    d = 0.0
    for k in range(1, k_max + 1):
        uk = sys.power(k)
        for a in basis:
            d = max(d, spectral_norm(uk @ a - sys.delta_n(a, k) @ uk))
    rep.add(f"U^k a = delta^k(a) U^k, k <= {k_max}", d, tol)

    d = 0.0
    for k in range(1, k_max + 1):
        p = sys.proj_initial(k)
        for a in basis:
            d = max(d, spectral_norm(p @ a - a @ p))
    rep.add(f"U^{{*k}}U^k commutes with algebra, k <= {k_max}", d, tol)

    for label, proj in (("U^{*k}U^k", sys.proj_initial),
                        ("U^kU^{*k}", sys.proj_final)):
        d_proj = 0.0
        d_pair = 0.0
        d_dec = 0.0
        for k in range(1, k_max + 1):
            p = proj(k)
            d_proj = max(d_proj, spectral_norm(p @ p - p),
                         spectral_norm(p - adjoint(p)))
            d_dec = max(d_dec, spectral_norm(p @ proj(k + 1) - proj(k + 1)))
            for l in range(1, k_max + 1):
                q = proj(l)
                d_pair = max(d_pair, spectral_norm(p @ q - q @ p))
        rep.add(f"{label} are projections, k <= {k_max}", d_proj, tol)
        rep.add(f"{label} pairwise commute", d_pair, tol)
        rep.add(f"{label} decreasing", d_dec, tol)

    d = 0.0
    for k in range(0, k_max + 1):
        p = sys.proj_initial(k)
        for l in range(0, k_max + 1):
            f = sys.proj_final(l)
            d = max(d, spectral_norm(p @ f - f @ p))
    rep.add("[U^{*k}U^k, U^lU^{*l}] = 0", d, tol)

    d = 0.0
    u, ustar = sys.u, adjoint(sys.u)
    for l in range(1, k_max + 1):
        for k in range(1, l + 1):
            lhs = ustar @ sys.power(k) @ sys.star_power(l)
            rhs = sys.power(k - 1) @ sys.star_power(l)
            d = max(d, spectral_norm(lhs - rhs))
            lhs = u @ sys.star_power(k) @ sys.power(l)
            rhs = sys.star_power(k - 1) @ sys.power(l)
            d = max(d, spectral_norm(lhs - rhs))
    rep.add(f"absorption identities, 1 <= k <= l <= {k_max}", d, tol)
    return rep


def check_extension_towers(sys: IsometrySystem,
                           tol: float | None = None) -> ConditionReport:
    """Verify that the two extension towers agree:

    extending by delta then delta_star yields the same span as extending by
    delta_star then delta, the result is commutative, and both maps send it
    into itself.

    Requires commutative extendability; raises HypothesisViolated (or
    NotCommutative) otherwise.
    """
    tol = sys.tol if tol is None else tol
    pre = check_commutative_extendability(sys, n_max=sys.dim, tol=tol)
    if not pre.passed:
        raise HypothesisViolated("commutative extendability fails", pre)

    ext_d = extend_delta(sys, tol)
    tower_a = extend_delta_star(IsometrySystem(ext_d, sys.u), tol)
    ext_s = extend_delta_star(sys, tol)
    tower_b = extend_delta(IsometrySystem(ext_s, sys.u), tol)

    rep = ConditionReport("extension_towers")
    _, defect = spans_equal(tower_a.basis, tower_b.basis, tol)
    rep.add("towers have equal spans", defect, tol)

    d_comm = 0.0
    for i, a in enumerate(tower_a.basis):
        for b in tower_a.basis[i + 1:]:
            d_comm = max(d_comm, spectral_norm(a @ b - b @ a))
    rep.add("tower is commutative", d_comm, tol)

    sys_t = IsometrySystem(tower_a, sys.u)
    rep.add("delta an endomorphism of the tower",
            max(tower_a.contains(sys_t.delta(b))[1] for b in tower_a.basis), tol)
    rep.add("delta_star an endomorphism of the tower",
            max(tower_a.contains(sys_t.delta_star(b))[1] for b in tower_a.basis),
            tol)
    rep.note(f"tower dimensions: start {sys.algebra.dim}, delta-first "
             f"{tower_a.dim}, delta_star-first {tower_b.dim}")
    return rep
