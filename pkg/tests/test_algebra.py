import numpy as np
import pytest

import isoalg as ia
from isoalg import (
    DimensionMismatch,
    FiniteStarAlgebra,
    HypothesisViolated,
    IsometrySystem,
    NotCommutative,
    NotPartialIsometry,
    ToleranceCollapse,
    adjoint,
    bicommutant,
    check_coefficient_algebra,
    check_commutative_extendability,
    check_extendability,
    check_extension_towers,
    check_intertwining_equivalents,
    commutant,
    extend_delta,
    extend_delta_star,
    generate_closure,
    spans_equal,
    spectral_norm,
    verify_power_identities,
)

E12 = np.array([[0, 1], [0, 0]], complex)


def closure_dim_oracle(gens, dim, length=6):
    """Brute-force span dimension of the unital *-algebra generated by gens:
    stack all words (over gens and their adjoints) up to the given length
    and take the matrix rank."""
    letters = [np.eye(dim, dtype=complex)]
    for g in gens:
        letters.append(np.asarray(g, complex))
        letters.append(adjoint(g))
    words = [np.eye(dim, dtype=complex)]
    frontier = [np.eye(dim, dtype=complex)]
    for _ in range(length):
        frontier = [w @ l for w in frontier for l in letters]
        words.extend(frontier)
    stack = np.array([w.ravel() for w in words])
    return np.linalg.matrix_rank(stack, tol=1e-8)


def test_closure_examples_against_oracle():
    d3 = np.diag([1.0, 2.0, 3.0]).astype(complex)
    assert closure_dim_oracle([d3], 3) == 3
    assert generate_closure([d3]).dim == 3

    assert generate_closure([], dim=3).dim == 1

    assert closure_dim_oracle([E12], 2) == 4
    assert generate_closure([E12]).dim == 4


def test_closure_random_against_oracle():
    rng = np.random.default_rng(7)
    for _ in range(10):
        n = int(rng.integers(2, 5))
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = np.diag(rng.standard_normal(n)).astype(complex)
        for gens in ([g], [h], [g, h]):
            assert generate_closure(gens).dim == closure_dim_oracle(gens, n)


def test_closure_idempotent():
    alg = generate_closure([E12])
    again = generate_closure(alg.basis)
    assert again.dim == alg.dim
    assert spans_equal(alg.basis, again.basis, alg.tol)[0]


def test_closure_invariants():
    d = np.diag([1.0, 2.0, 3.0]).astype(complex)
    alg = generate_closure([d])
    assert alg.invariant_report().passed


def test_tolerance_collapse():
    # a generator within the ambiguous band of the identity
    g = np.eye(2, dtype=complex) + 5e-9 * E12
    with pytest.raises(ToleranceCollapse):
        generate_closure([g])


def test_contains_examples(polar2):
    diag2 = generate_closure([np.diag([1.0, 2.0]).astype(complex)])
    ok, defect = diag2.contains(np.diag([7.0, -1.0]))
    assert ok and defect <= 1e-12

    ok, defect = diag2.contains(E12)
    assert not ok
    assert defect == pytest.approx(1.0)  # off-diagonal is HS-orthogonal

    a = polar2.a
    alg = generate_closure([polar2.abs_a])
    ok, defect = alg.contains(a @ adjoint(a))
    assert ok and defect <= 1e-12

    with pytest.raises(DimensionMismatch):
        diag2.contains(np.eye(3))


def test_algebra_rejects_bad_basis():
    with pytest.raises(ValueError):
        FiniteStarAlgebra([E12])  # not closed, no identity


def test_delta_examples():
    alg = generate_closure([np.diag([1.0, 2.0]).astype(complex)])
    sys = IsometrySystem(alg, E12)
    m = np.diag([3.0, 4.0]).astype(complex)
    assert np.allclose(sys.delta(m), np.diag([4.0, 0.0]))
    assert np.allclose(sys.delta(np.eye(2)), E12 @ adjoint(E12))
    assert np.allclose(sys.delta_star(np.eye(2)), adjoint(E12) @ E12)
    assert np.allclose(sys.delta_n(m, 0), m)


def test_system_rejects_non_partial_isometry():
    alg = generate_closure([], dim=2)
    with pytest.raises(NotPartialIsometry):
        IsometrySystem(alg, np.diag([1.0, 0.5]))
    with pytest.raises(DimensionMismatch):
        IsometrySystem(alg, np.zeros((3, 3)))


def test_power_cache_matches_direct():
    alg = generate_closure([], dim=5)
    u = ia.backward_shift(5)
    sys = IsometrySystem(alg, u, depth=3)
    for k in range(0, 9):
        assert np.allclose(sys.power(k), np.linalg.matrix_power(u, k))
        p = np.linalg.matrix_power(u, k)
        assert np.allclose(sys.proj_initial(k), adjoint(p) @ p)
        assert np.allclose(sys.proj_final(k), p @ adjoint(p))


def test_intertwining_equivalents():
    # truncated backward shift with the diagonal algebra: all three pass
    n = 4
    u = ia.backward_shift(n)
    diag = generate_closure([np.diag(np.arange(1.0, n + 1)).astype(complex)])
    rep = check_intertwining_equivalents(IsometrySystem(diag, u))
    assert rep.passed
    assert max(d.value for d in rep.defects) <= 1e-14
    assert not rep.notes  # no disagreement

    # identity isometry with any algebra
    full = generate_closure([E12])
    rep = check_intertwining_equivalents(IsometrySystem(full, np.eye(2)))
    assert rep.passed


def test_intertwining_fails_together(broken_system):
    rep = check_intertwining_equivalents(broken_system)
    assert not rep.passed
    d = {x.check: x.ok for x in rep.defects}
    # the composite verdicts all fail; the bare partial-isometry sub-check
    # may still pass on its own
    assert not d["(i) Ua = delta(a)U on basis"]
    assert not d["(ii)/(iii) U*U commutes with algebra"]
    assert not d["(iii) delta multiplicative on basis pairs"]
    assert not rep.notes


def test_coefficient_algebra_negative():
    # span{1} with a truncated shift: delta(1) = UU* escapes the span
    trivial = generate_closure([], dim=3)
    sys = IsometrySystem(trivial, ia.backward_shift(3))
    rep = check_coefficient_algebra(sys)
    assert not rep.passed
    bad = {d.check: d.ok for d in rep.defects}
    assert not bad["delta maps algebra into itself"]


def test_extendability_and_growth():
    # span{1} with the truncated shift is extendable, and the delta tower
    # grows to the full diagonal algebra
    n = 5
    trivial = generate_closure([], dim=n)
    sys = IsometrySystem(trivial, ia.backward_shift(n))
    rep = check_extendability(sys, n_max=n)
    assert rep.passed

    ext = extend_delta(sys)
    assert ext.dim == n
    for k in range(1, n):
        ok, _ = ext.contains(sys.proj_final(k))
        assert ok
    # monotone: the original basis is contained
    for b in trivial.basis:
        assert ext.contains(b)[0]


def test_extendability_negative(broken_system):
    rep = check_extendability(broken_system, n_max=4)
    assert not rep.passed
    assert rep.defects[0].value > 0.1
    with pytest.raises(HypothesisViolated):
        extend_delta(broken_system)
    with pytest.raises(HypothesisViolated):
        extend_delta_star(broken_system)


def test_extension_fixed_point(qdeform6):
    sys = qdeform6.system
    ext = extend_delta(sys)
    assert ext.dim == sys.algebra.dim
    assert spans_equal(ext.basis, sys.algebra.basis, sys.tol)[0]
    ext = extend_delta_star(sys)
    assert ext.dim == sys.algebra.dim
    assert spans_equal(ext.basis, sys.algebra.basis, sys.tol)[0]


def test_commutative_extendability_rejects_noncommutative(broken_system):
    with pytest.raises(NotCommutative):
        check_commutative_extendability(broken_system, n_max=3)


def test_power_identities_shift():
    n = 7
    u = ia.backward_shift(n)
    diag = generate_closure([np.diag(np.arange(1.0, n + 1)).astype(complex)])
    rep = verify_power_identities(IsometrySystem(diag, u), k_max=5, tol=1e-12)
    assert rep.passed
    assert max(d.value for d in rep.defects) <= 1e-13


def test_power_identities_unitary():
    # a cyclic permutation is unitary: every projection is the identity
    n = 4
    perm = np.roll(np.eye(n), 1, axis=0).astype(complex)
    alg = generate_closure([], dim=n)
    rep = verify_power_identities(IsometrySystem(alg, perm), k_max=4)
    assert rep.passed


def test_commutant_examples():
    diag3 = generate_closure([np.diag([1.0, 2.0, 3.0]).astype(complex)])
    c = commutant(diag3.basis)
    assert c.dim == 3  # commutant of the full diagonal algebra is itself
    assert spans_equal(c.basis, diag3.basis, 1e-9)[0]

    full = generate_closure([E12])
    c = commutant(full.basis)
    assert c.dim == 1  # scalars

    # block scalars: commutant of {1, diag(1,1,2)} is diag blocks 2x2 + 1x1
    blocky = generate_closure([np.diag([1.0, 1.0, 2.0]).astype(complex)])
    c = commutant(blocky.basis)
    assert c.dim == 5
    dbl = bicommutant(blocky)
    assert dbl.dim == 2
    assert spans_equal(dbl.basis, blocky.basis, 1e-9)[0]

    # triple commutant collapses back to the commutant
    c3 = commutant(bicommutant(blocky).basis)
    assert spans_equal(c3.basis, c.basis, 1e-9)[0]


def test_iterated_image_products_stay_inside(qdeform6):
    # delta_star^k(A) delta_star^l(A) lies in delta_star^k(A) for l <= k
    sys = qdeform6.system
    basis = sys.algebra.basis
    for k in range(0, 5):
        imgs_k = [sys.delta_star_n(b, k) for b in basis]
        from isoalg.algebra import _svd_span, _span_defect
        span_k = _svd_span(imgs_k)
        for l in range(0, k + 1):
            imgs_l = [sys.delta_star_n(b, l) for b in basis]
            for x in imgs_k[:3]:
                for y in imgs_l[:3]:
                    assert _span_defect(span_k, x @ y) <= 1e-9
                    assert _span_defect(span_k, y @ x) <= 1e-9


def test_delta_star_span_decomposition(qdeform6):
    # the delta_star tower span equals the span of all iterated images
    sys = qdeform6.system
    ext = extend_delta_star(sys)
    imgs = []
    for k in range(0, sys.dim + 1):
        imgs.extend(sys.delta_star_n(b, k) for b in sys.algebra.basis)
    assert spans_equal(ext.basis, imgs, sys.tol)[0]


def test_extension_towers(qdeform6):
    seed_sys = IsometrySystem(qdeform6.seed_algebra, qdeform6.u)
    rep = check_extension_towers(seed_sys)
    assert rep.passed


def test_intertwining_agrees_after_extension(qdeform6):
    # the intertwining relation holds for the seed iff it holds for the
    # delta_star tower; the checkers must agree
    seed_sys = IsometrySystem(qdeform6.seed_algebra, qdeform6.u)
    before = check_intertwining_equivalents(seed_sys).passed
    ext = extend_delta_star(seed_sys)
    after = check_intertwining_equivalents(
        IsometrySystem(ext, qdeform6.u)).passed
    assert before == after


def test_multiplicativity_agrees_after_extension(qdeform6):
    # delta multiplicative on the seed iff multiplicative on its tower
    seed_sys = IsometrySystem(qdeform6.seed_algebra, qdeform6.u)

    def mult_defect(sys):
        ds = [sys.delta(b) for b in sys.algebra.basis]
        worst = 0.0
        for b1, d1 in zip(sys.algebra.basis, ds):
            for b2, d2 in zip(sys.algebra.basis, ds):
                worst = max(worst, spectral_norm(sys.delta(b1 @ b2) - d1 @ d2))
        return worst

    assert mult_defect(seed_sys) <= 1e-12
    ext = extend_delta_star(seed_sys)
    assert mult_defect(IsometrySystem(ext, qdeform6.u)) <= 1e-12


def test_commutative_extendability_yields_coefficient_tower():
    # whenever the commutative extendability conditions hold, the two-step
    # tower is a commutative coefficient algebra
    n = 5
    trivial = generate_closure([], dim=n)
    sys = IsometrySystem(trivial, ia.backward_shift(n))
    assert check_commutative_extendability(sys, n_max=n).passed
    ext = extend_delta(sys)
    full = extend_delta_star(IsometrySystem(ext, sys.u))
    full_sys = IsometrySystem(full, sys.u)
    assert check_coefficient_algebra(full_sys).passed
    worst = max(spectral_norm(a @ b - b @ a)
                for a in full.basis for b in full.basis)
    assert worst <= 1e-12
