import numpy as np
import pytest

import isoalg as ia
from isoalg import (
    NormalForm,
    adjoint,
    check_sum_norm_estimates,
    gauge_invariance_check,
    norm_limit,
    sample_coefficient_bound,
    spectral_norm,
)
from isoalg.norms import (
    gauge_invariance_sample,
    norm_limit_sample,
    sum_norm_estimates_sample,
)


def test_coefficient_bound_zero_degree_equality(qdeform6):
    # a single degree-0 term realizes equality ||a_0|| = ||x||
    sys = qdeform6.system
    x = NormalForm(sys, {0: qdeform6.big_q})
    assert spectral_norm(x.coefficient(0)) == pytest.approx(
        spectral_norm(x.eval()), abs=1e-14)


def test_coefficient_bound_sampler(qdeform6):
    rep = sample_coefficient_bound(qdeform6.system, samples=60, seed=1)
    assert rep.passed
    # the bound is exact for this model, not merely within tolerance
    assert all(d.value <= 1e-12 for d in rep.defects)


def test_coefficient_bound_deterministic(qdeform6):
    a = sample_coefficient_bound(qdeform6.system, samples=20, seed=5)
    b = sample_coefficient_bound(qdeform6.system, samples=20, seed=5)
    assert [d.value for d in a.defects] == [d.value for d in b.defects]


def test_sum_norm_estimates_single_element():
    # m = 1 reduces all four estimates to the C*-identity, with equality
    rng = np.random.default_rng(20)
    d = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rep = check_sum_norm_estimates([d])
    assert rep.passed
    assert all(x.value <= 1e-12 for x in rep.defects)


def test_sum_norm_estimates_projections():
    # d1 = diag(1,0), d2 = diag(0,1): ||d1+d2||^2 = 1 <= 2 ||sum dd*|| = 2
    d1 = np.diag([1.0, 0.0]).astype(complex)
    d2 = np.diag([0.0, 1.0]).astype(complex)
    total = d1 + d2
    assert spectral_norm(total) ** 2 == pytest.approx(1.0)
    assert 2 * spectral_norm(d1 @ adjoint(d1) + d2 @ adjoint(d2)) == \
        pytest.approx(2.0)
    assert check_sum_norm_estimates([d1, d2]).passed


def test_sum_norm_estimates_random():
    rep = sum_norm_estimates_sample(count=100, seed=2)
    assert rep.passed


def test_norm_limit_degree_zero_exact(qdeform6):
    # degree-0 forms: s_k = ||a_0|| exactly at every stage
    sys = qdeform6.system
    x = NormalForm(sys, {0: qdeform6.big_q})
    tr = norm_limit(x, 8)
    norm = spectral_norm(qdeform6.big_q)
    for s in tr.s_values:
        assert s == pytest.approx(norm, rel=1e-12)
    assert tr.direct_norm == pytest.approx(norm, rel=1e-12)


def test_norm_limit_shift(qdeform6):
    # x = U: xx* is a projection, so s_k = 1 = ||U|| exactly
    sys = qdeform6.system
    x = NormalForm(sys, {1: sys.proj_final(1)})
    tr = norm_limit(x, 8)
    assert tr.direct_norm == pytest.approx(1.0, rel=1e-12)
    for s in tr.s_values:
        assert s == pytest.approx(1.0, rel=1e-10)


def test_norm_limit_zero_form(qdeform6):
    tr = norm_limit(ia.zero_form(qdeform6.system), 8)
    assert tr.direct_norm == 0.0
    assert all(s == 0.0 for s in tr.s_values)


def test_norm_limit_schedule_and_sandwich(qdeform6):
    rng = np.random.default_rng(21)
    x = ia.random_normal_form(qdeform6.system, rng)
    star = sample_coefficient_bound(qdeform6.system, 20, 0)
    tr = norm_limit(x, 8, star_report=star)
    assert tr.k_values == [1, 2, 4, 8]
    assert tr.property_star is True
    d = tr.direct_norm
    assert tr.sandwich_lo <= d * d * (1 + 1e-9)
    assert d * d <= tr.sandwich_hi * (1 + 1e-9)
    for k, s in zip(tr.k_values, tr.s_values):
        assert s <= d * (1 + 1e-9)
        bound = (4 * k * tr.max_degree + 1) ** (1.0 / (4 * k)) * s
        assert d <= bound * (1 + 1e-9)
    # monotone improvement is typical on this model
    assert abs(tr.s_values[-1] - d) <= abs(tr.s_values[0] - d) + 1e-12


def test_norm_limit_against_matrix_power_oracle(qdeform6):
    # in the q-model the degree-0 part of any element is its main matrix
    # diagonal, so every s_k can be recomputed from raw matrix powers,
    # independently of the normal-form arithmetic
    sys = qdeform6.system
    rng = np.random.default_rng(24)
    for _ in range(10):
        x = ia.random_normal_form(sys, rng)
        tr = norm_limit(x, 8)
        m = x.eval()
        nx = spectral_norm(m)
        if nx == 0.0:
            continue
        p = (m / nx) @ adjoint(m / nx)
        for k, s in zip(tr.k_values, tr.s_values):
            p = p @ p
            oracle = nx * spectral_norm(np.diag(np.diag(p))) ** (1.0 / (4 * k))
            assert s == pytest.approx(oracle, rel=1e-9, abs=1e-12)


def test_norm_limit_sample_report(qdeform6):
    rep, traces = norm_limit_sample(qdeform6.system, samples=10, seed=3)
    assert rep.passed
    assert len(traces) == 10
    doc = traces[0].to_json()
    assert set(doc) >= {"k_values", "s_values", "direct_norm",
                        "sandwich_lo", "sandwich_hi"}


def test_gauge_invariance(qdeform6):
    rng = np.random.default_rng(22)
    x = ia.random_normal_form(qdeform6.system, rng)
    rep = gauge_invariance_check(x, 16)
    assert rep.passed

    x0 = NormalForm(qdeform6.system, {0: qdeform6.big_q})
    rep = gauge_invariance_check(x0, 7)
    assert rep.defects[0].value <= 1e-14  # gauge acts trivially in degree 0

    rep = gauge_invariance_sample(qdeform6.system, samples=10, seed=4)
    assert rep.passed
