"""Norm estimates: the coefficient bound, sum inequalities, the norm-limit
formula and gauge invariance.

The central hypothesis is the *coefficient bound*: for every finite canonical
form x, the zero-degree coefficient satisfies ||a_0|| <= ||x||.  It is a
hypothesis about the pair (algebra, U), not a theorem, so it is sampled and
never assumed: every routine whose soundness depends on it records the
sampler's verdict instead of taking it for granted.

When the bound holds, the operator norm of x can be computed from coefficient
data alone::

    ||x|| = lim_k  || N_0[ (x x*)^{2k} ] || ^ (1/4k)

with the two-sided estimate, for x of maximum degree N,

    ||N_0(x x*)|| <= ||x||^2 <= (2N+1) ||N_0(x x*)||

holding at every stage (with 2N+1 growing to 4kN+1 for the k-th power).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import IsometrySystem
from .errors import DimensionMismatch, Overflow
from .linalg import DEFAULT_TOL, adjoint, as_matrix, psd_sqrt, spectral_norm
from .normalform import NormalForm, gauge, nf_adjoint, nf_multiply, nf_scale
from .report import ConditionReport


def random_normal_form(system: IsometrySystem, rng: np.random.Generator,
                       max_degree: int = 4) -> NormalForm:
    """Draw a random canonical form: a uniform maximum degree N <= max_degree
    and, for every degree in [-N, N], an i.i.d. standard complex Gaussian
    matrix projected into the coefficient algebra (then range-normalized by
    the NormalForm constructor)."""
    n = system.dim
    top = int(rng.integers(0, max_degree + 1))
    coeffs = {}
    for k in range(-top, top + 1):
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        coeffs[k] = system.algebra.project(g)
    return NormalForm(system, coeffs)


def sample_coefficient_bound(system: IsometrySystem, samples: int, seed: int,
                             tol: float | None = None,
                             max_degree: int = 4) -> ConditionReport:
    """Sample the coefficient bound ||a_0|| <= ||x|| and its per-degree
    extension ||a_k|| <= ||x|| on random canonical forms.

    The reported defect is the worst margin max_k ||a_k|| - ||x|| over all
    samples (negative when the bound holds strictly).
    """
    tol = system.tol if tol is None else tol
    rep = ConditionReport("coefficient_bound")
    coeff_rep = system.coefficient_report
    rep.add("hypothesis: coefficient algebra",
            max((d.value for d in coeff_rep.defects), default=0.0), tol)

    rng = np.random.default_rng(seed)
    worst_zero = -np.inf
    worst_any = -np.inf
    for _ in range(samples):
        x = random_normal_form(system, rng, max_degree)
        norm_x = spectral_norm(x.eval())
        worst_zero = max(worst_zero, spectral_norm(x.coefficient(0)) - norm_x)
        for k in x.degrees():
            worst_any = max(worst_any,
                            spectral_norm(x.coefficient(k)) - norm_x)
    rep.add(f"||a_0|| - ||x|| over {samples} samples", worst_zero, tol)
    rep.add(f"max_k ||a_k|| - ||x|| over {samples} samples", worst_any, tol)
    rep.note(f"seed = {seed}, max degree = {max_degree}")
    return rep


def check_sum_norm_estimates(mats: list[np.ndarray],
                             tol: float = DEFAULT_TOL) -> ConditionReport:
    """Check the four norm estimates for a tuple d_1, ..., d_m:

        ||sum d_i||^2        <= m ||sum d_i d_i*||
        ||sum d_i||^2        <= m ||sum d_i* d_i||
        ||sum |d_i|||^2      >= (1/m) ||sum d_i* d_i||
        ||sum sqrt(d_i d_i*)||^2 >= (1/m) ||sum d_i d_i*||

    These hold in every C*-algebra, so any violation beyond rounding flags a
    numerical bug; defects are normalized by the right-hand sides.
    """
    mats = [as_matrix(m) for m in mats]
    if not mats:
        raise DimensionMismatch("need at least one matrix")
    if any(m.shape != mats[0].shape for m in mats):
        raise DimensionMismatch("mixed dimensions in tuple")
    m = len(mats)
    rep = ConditionReport("sum_norm_estimates")

    total = sum(mats)
    sum_ddstar = sum(d @ adjoint(d) for d in mats)
    sum_dstard = sum(adjoint(d) @ d for d in mats)
    lhs = spectral_norm(total) ** 2

    rhs = m * spectral_norm(sum_ddstar)
    rep.add("||sum d||^2 <= m ||sum dd*||",
            max(0.0, lhs - rhs) / max(1.0, rhs), tol)
    rhs = m * spectral_norm(sum_dstard)
    rep.add("||sum d||^2 <= m ||sum d*d||",
            max(0.0, lhs - rhs) / max(1.0, rhs), tol)

    abs_sum = sum(psd_sqrt(adjoint(d) @ d) for d in mats)
    lhs = spectral_norm(abs_sum) ** 2
    rhs = spectral_norm(sum_dstard) / m
    rep.add("||sum |d|||^2 >= (1/m) ||sum d*d||",
            max(0.0, rhs - lhs) / max(1.0, rhs), tol)

    absstar_sum = sum(psd_sqrt(d @ adjoint(d)) for d in mats)
    lhs = spectral_norm(absstar_sum) ** 2
    rhs = spectral_norm(sum_ddstar) / m
    rep.add("||sum sqrt(dd*)||^2 >= (1/m) ||sum dd*||",
            max(0.0, rhs - lhs) / max(1.0, rhs), tol)
    return rep


@dataclass
class NormLimitTrace:
    """The s_k sequence of the norm-limit formula together with the direct
    norm and the two-sided sandwich at the first stage."""

    x: NormalForm
    k_values: list[int]
    s_values: list[float]
    direct_norm: float
    sandwich_lo: float
    sandwich_hi: float
    max_degree: int
    property_star: bool | None = None

    def to_json(self, include_form: bool = True) -> dict:
        doc = {
            "k_values": list(self.k_values),
            "s_values": [float(s) for s in self.s_values],
            "direct_norm": float(self.direct_norm),
            "sandwich_lo": float(self.sandwich_lo),
            "sandwich_hi": float(self.sandwich_hi),
            "max_degree": self.max_degree,
            "property_star": self.property_star,
        }
        if include_form:
            doc["x"] = self.x.to_json()
        return doc


def norm_limit(x: NormalForm, k_max: int,
               star_report: ConditionReport | None = None) -> NormLimitTrace:
    """Evaluate s_k = ||N_0[(xx*)^{2k}]||^{1/4k} on a doubling schedule
    k = 1, 2, 4, ... up to k_max.

    x is pre-scaled by 1/||x|| before powering (the powers are computed by
    repeated squaring of the canonical form) and the s_k are rescaled
    afterwards, so coefficient norms stay bounded by one.  ``star_report``,
    when given, records whether the coefficient-bound sampler passed; without
    it the trace is marked as unchecked.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    direct = spectral_norm(x.eval())
    n_deg = x.max_degree
    schedule = [1]
    while 2 * schedule[-1] <= k_max:
        schedule.append(2 * schedule[-1])

    star = None if star_report is None else star_report.passed
    if direct == 0.0:
        return NormLimitTrace(x, schedule, [0.0] * len(schedule), 0.0,
                              0.0, 0.0, n_deg, star)

    y = nf_scale(x, 1.0 / direct)
    p = nf_multiply(y, nf_adjoint(y))
    n0 = spectral_norm(p.coefficient(0))
    sandwich_lo = direct * direct * n0
    sandwich_hi = (2 * n_deg + 1) * direct * direct * n0

    s_values = []
    for k in schedule:
        p = nf_multiply(p, p)
        if p.scale() > 1e100:
            raise Overflow("coefficient norms exceeded 1e100 while powering; "
                           "pre-scale x by 1/||x||")
        s = spectral_norm(p.coefficient(0)) ** (1.0 / (4 * k))
        s_values.append(direct * s)
    return NormLimitTrace(x, schedule, s_values, direct,
                          sandwich_lo, sandwich_hi, n_deg, star)


def gauge_invariance_check(x: NormalForm, lam_grid: int,
                           star_report: ConditionReport | None = None,
                           tol: float | None = None) -> ConditionReport:
    """Check that the substitution U -> lam*U preserves the operator norm
    over the lam_grid-th roots of unity."""
    tol = x.system.tol if tol is None else tol
    rep = ConditionReport("gauge_invariance")
    base = spectral_norm(x.eval())
    scale = max(1.0, base)
    worst = 0.0
    for j in range(lam_grid):
        lam = np.exp(2j * np.pi * j / lam_grid)
        worst = max(worst, abs(spectral_norm(gauge(x, lam).eval()) - base))
    rep.add(f"norm deviation over {lam_grid} roots of unity", worst, tol * scale)
    if star_report is not None:
        rep.note("coefficient-bound sampler: "
                 + ("pass" if star_report.passed else "FAIL"))
    else:
        rep.note("coefficient-bound sampler: not run")
    return rep


def gauge_invariance_sample(system: IsometrySystem, samples: int, seed: int,
                            lam_grid: int = 16,
                            star_report: ConditionReport | None = None,
                            tol: float | None = None,
                            max_degree: int = 4) -> ConditionReport:
    """Gauge norm invariance over random canonical forms; the defect is the
    worst norm deviation normalized by max(1, ||x||) per sample."""
    tol = system.tol if tol is None else tol
    rep = ConditionReport("gauge_invariance")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        x = random_normal_form(system, rng, max_degree)
        base = spectral_norm(x.eval())
        scale = max(1.0, base)
        for j in range(lam_grid):
            lam = np.exp(2j * np.pi * j / lam_grid)
            dev = abs(spectral_norm(gauge(x, lam).eval()) - base)
            worst = max(worst, dev / scale)
    rep.add(f"norm deviation over {lam_grid} roots of unity, "
            f"{samples} samples", worst, tol)
    rep.note(f"seed = {seed}")
    if star_report is not None:
        rep.note("coefficient-bound sampler: "
                 + ("pass" if star_report.passed else "FAIL"))
    return rep


def norm_limit_sample(system: IsometrySystem, samples: int, seed: int,
                      k_max: int = 8,
                      star_report: ConditionReport | None = None,
                      rel_tol: float = 0.05, slack: float = 1e-9,
                      max_degree: int = 4
                      ) -> tuple[ConditionReport, list[NormLimitTrace]]:
    """Run the norm-limit formula on random canonical forms and check, per
    sample:

    - the lower estimate s_k <= ||x|| at every stage;
    - the upper estimate ||x|| <= (4kN+1)^{1/4k} s_k at every stage;
    - the first-stage sandwich lo <= ||x||^2 <= hi;
    - convergence |s_{k_max} - ||x||| / ||x|| <= rel_tol.
    """
    rep = ConditionReport("norm_limit")
    rng = np.random.default_rng(seed)
    traces = []
    worst_lower = 0.0
    worst_upper = 0.0
    worst_sandwich = 0.0
    worst_conv = 0.0
    for _ in range(samples):
        x = random_normal_form(system, rng, max_degree)
        tr = norm_limit(x, k_max, star_report)
        traces.append(tr)
        if tr.direct_norm == 0.0:
            continue
        d = tr.direct_norm
        for k, s in zip(tr.k_values, tr.s_values):
            worst_lower = max(worst_lower, (s - d) / d)
            bound = (4 * k * tr.max_degree + 1) ** (1.0 / (4 * k)) * s
            worst_upper = max(worst_upper, (d - bound) / d)
        worst_sandwich = max(worst_sandwich,
                             (tr.sandwich_lo - d * d) / (d * d),
                             (d * d - tr.sandwich_hi) / (d * d))
        worst_conv = max(worst_conv, abs(tr.s_values[-1] - d) / d)
    rep.add(f"lower estimate s_k <= ||x||, {samples} samples", worst_lower, slack)
    rep.add("upper estimate ||x|| <= (4kN+1)^{1/4k} s_k", worst_upper, slack)
    rep.add("first-stage sandwich", worst_sandwich, slack)
    rep.add(f"convergence at k = {k_max}", worst_conv, rel_tol)
    rep.note(f"seed = {seed}")
    if star_report is not None:
        rep.note("coefficient-bound sampler: "
                 + ("pass" if star_report.passed else "FAIL"))
    return rep, traces


def sum_norm_estimates_sample(count: int, seed: int, tol: float = DEFAULT_TOL,
                              max_m: int = 5, max_dim: int = 8) -> ConditionReport:
    """Run the sum-norm estimates on random tuples (sizes up to max_m,
    dimensions up to max_dim) and fold the worst defects."""
    rng = np.random.default_rng(seed)
    rep = ConditionReport("sum_norm_estimates")
    worst = [0.0, 0.0, 0.0, 0.0]
    labels = None
    for _ in range(count):
        m = int(rng.integers(1, max_m + 1))
        n = int(rng.integers(1, max_dim + 1))
        mats = [rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
                for _ in range(m)]
        sub = check_sum_norm_estimates(mats, tol)
        labels = [d.check for d in sub.defects]
        worst = [max(w, d.value) for w, d in zip(worst, sub.defects)]
    for label, w in zip(labels or [], worst):
        rep.add(f"{label} ({count} tuples)", w, tol)
    rep.note(f"seed = {seed}")
    return rep
