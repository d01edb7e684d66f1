"""The two worked operator models and their verification suites.

The polar model starts from an operator a, takes its polar decomposition
a = U |a|, generates the commutative algebra of |a|, and extends it to a
coefficient algebra.  Its standing condition is that a a* lies in the algebra
generated by |a|.

The truncated q-model lives on C^n with Q = diag(q^0, ..., q^{n-1}) and the
backward shift U (U e_j = e_{j-1}, U e_1 = 0).  The backward orientation
makes U Q = q Q U exact in finite dimension, confining all truncation error
to U U* != 1 at the top basis vector: UQU* - qQ has a single entry -q^n, and
the defect of a a* = rho^2(qQ) equals rho^2(q^n) at e_n while vanishing on
the bulk.  Those analytically derived defects are themselves checked, so the
truncation artifact doubles as a regression test.

The weight function rho is represented by its samples on the spectrum of Q
plus the shifted point q^n (continuous function calculus is diagonal
substitution in finite dimension); q^n is needed because the shifted
relations evaluate rho at q * q^{n-1}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    FiniteStarAlgebra,
    IsometrySystem,
    bicommutant,
    extend_delta,
    extend_delta_star,
    generate_closure,
)
from .errors import PolarConditionViolated, RhoConditionViolated
from .linalg import (
    DEFAULT_TOL,
    adjoint,
    as_matrix,
    herm_eig,
    matrix_from_json,
    psd_sqrt,
    spectral_norm,
)
from .report import ConditionReport

# Eigenvalues of |a| below RANK_TOL * ||a|| are treated as kernel.
RANK_TOL = 1e-10


def backward_shift(n: int) -> np.ndarray:
    """The truncated backward shift on C^n: U e_j = e_{j-1}, U e_1 = 0."""
    return np.diag(np.ones(n - 1), 1).astype(complex)


def weighted_backward_shift(weights) -> np.ndarray:
    """a e_{j+1} = w_j e_j for the given weights (dimension len(weights)+1)."""
    return np.diag(np.asarray(weights, dtype=complex), 1)


def polar_decompose(a: np.ndarray,
                    rank_tol: float = RANK_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Polar decomposition a = U |a| with U a partial isometry.

    |a| = sqrt(a* a); U maps |a| xi to a xi and vanishes on ker |a|
    (eigenvalues of |a| below rank_tol * ||a|| count as kernel).
    """
    a = as_matrix(a)
    abs_a = psd_sqrt(adjoint(a) @ a)
    w, v = herm_eig(abs_a)
    thr = rank_tol * spectral_norm(a)
    inv = np.where(w > thr, 1.0 / np.where(w > thr, w, 1.0), 0.0)
    u = a @ (v * inv) @ adjoint(v)
    return u, abs_a


@dataclass
class PolarModel:
    a: np.ndarray
    abs_a: np.ndarray
    u: np.ndarray
    seed_algebra: FiniteStarAlgebra  # generated by {1, |a|}
    system: IsometrySystem           # over the full coefficient extension


def build_polar_model(a: np.ndarray, tol: float = DEFAULT_TOL) -> PolarModel:
    """Build the polar model of a, extending {1, |a|} to a coefficient
    algebra.

    Raises PolarConditionViolated (carrying the membership defect) when
    a a* does not lie in the algebra generated by |a|.
    """
    a = as_matrix(a)
    u, abs_a = polar_decompose(a)
    seed = generate_closure([abs_a], tol)
    ok, defect = seed.contains(a @ adjoint(a))
    if not ok:
        raise PolarConditionViolated(
            f"a a* is outside the algebra generated by |a| "
            f"(defect {defect:.3e})", defect)
    sys0 = IsometrySystem(seed, u)
    ext = extend_delta(sys0, tol)
    full = extend_delta_star(IsometrySystem(ext, u), tol)
    return PolarModel(a, abs_a, u, seed, IsometrySystem(full, u))


def polar_structure_suite(m: PolarModel, k_max: int,
                          tol: float = 1e-12) -> ConditionReport:
    """Structure checks for the polar model, up to power k_max:

    - delta^k(|a|) lies in the algebra generated by |a| and the range
      projections U U*, ..., U^{k-1} U^{*(k-1)};
    - delta is multiplicative on that algebra;
    - the range projections U^k U^{*k} = delta^k(1) lie in the double
      commutant of the seed algebra and commute with it;
    - the absorption identities U* U^k U^{*l} = U^{k-1} U^{*l} and
      U U^{*k} U^l = U^{*(k-1)} U^l for 1 <= k <= l;
    - the two projection families commute.
    """
    rep = ConditionReport("polar_structure")
    sys = IsometrySystem(m.seed_algebra, m.u)
    u, ustar = sys.u, adjoint(sys.u)

    d = 0.0
    for k in range(1, k_max + 1):
        gens = [m.abs_a] + [sys.proj_final(j) for j in range(1, k)]
        closure_k = generate_closure(gens, m.seed_algebra.tol)
        d = max(d, closure_k.contains(sys.delta_n(m.abs_a, k))[1])
    rep.add(f"delta^k(|a|) in span of |a| and lower projections, k <= {k_max}",
            d, tol)

    gens = [m.abs_a] + [sys.proj_final(j) for j in range(1, k_max + 1)]
    ext = generate_closure(gens, m.seed_algebra.tol)
    sys_ext = IsometrySystem(ext, m.u)
    d = 0.0
    deltas = [sys_ext.delta(b) for b in ext.basis]
    for b1, d1 in zip(ext.basis, deltas):
        for b2, d2 in zip(ext.basis, deltas):
            d = max(d, spectral_norm(sys_ext.delta(b1 @ b2) - d1 @ d2))
    rep.add("delta multiplicative on the extended algebra", d, tol)

    dbl = bicommutant(m.seed_algebra)
    d_mem = 0.0
    d_comm = 0.0
    for k in range(1, k_max + 1):
        f = sys.proj_final(k)
        d_mem = max(d_mem, dbl.contains(f)[1])
        for b in m.seed_algebra.basis:
            d_comm = max(d_comm, spectral_norm(f @ b - b @ f))
    rep.add(f"U^k U^{{*k}} in double commutant of seed, k <= {k_max}", d_mem, tol)
    rep.add("U^k U^{*k} commutes with seed algebra", d_comm, tol)

    d = 0.0
    for l in range(1, k_max + 1):
        for k in range(1, l + 1):
            d = max(d, spectral_norm(
                ustar @ sys.power(k) @ sys.star_power(l)
                - sys.power(k - 1) @ sys.star_power(l)))
            d = max(d, spectral_norm(
                u @ sys.star_power(k) @ sys.power(l)
                - sys.star_power(k - 1) @ sys.power(l)))
    rep.add(f"absorption identities, 1 <= k <= l <= {k_max}", d, tol)

    d = 0.0
    for k in range(0, k_max + 1):
        for l in range(0, k_max + 1):
            p, f = sys.proj_initial(l), sys.proj_final(k)
            d = max(d, spectral_norm(p @ f - f @ p))
    rep.add("initial and range projection families commute", d, tol)
    return rep


@dataclass(frozen=True)
class RhoSpec:
    """Weight function sampled on q^0, ..., q^n (n+1 points; the last is the
    shifted edge point q * q^{n-1})."""

    name: str
    samples: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "samples",
                           np.asarray(self.samples, dtype=float))


def heisenberg_rho(n: int, q: float) -> RhoSpec:
    """rho(t) = (1 - t) / (1 - q) sampled on q^0, ..., q^n."""
    if not 0.0 < q < 1.0:
        raise RhoConditionViolated(f"q = {q} not in (0, 1)")
    j = np.arange(n + 1)
    return RhoSpec("heisenberg", (1.0 - q ** j) / (1.0 - q))


def sl2_rho(n: int, q: float) -> RhoSpec:
    """rho taken from the printed square

        rho^2(t) = -(q/t + t) / ((1-q)(1-q^2)(1-q)^2)

    which is negative for every t > 0 and 0 < q < 1, so this constructor
    always raises RhoConditionViolated for the admissible q range; it exists
    to flag the unusable parameter combinations rather than silently guess a
    corrected formula.
    """
    if not 0.0 < q < 1.0:
        raise RhoConditionViolated(f"q = {q} not in (0, 1)")
    t = q ** np.arange(n + 1)
    rho_sq = -(q / t + t) / ((1.0 - q) * (1.0 - q * q) * (1.0 - q) ** 2)
    if np.any(rho_sq < 0.0):
        bad = int(np.argmin(rho_sq))
        raise RhoConditionViolated(
            f"rho^2({t[bad]:g}) = {rho_sq[bad]:g} < 0; the printed formula "
            f"admits no nonnegative rho for q = {q}")
    return RhoSpec("sl2", np.sqrt(rho_sq))


def constant_rho(n: int, value: float = 1.0) -> RhoSpec:
    """Constant weight; violates the kernel condition (negative control)."""
    return RhoSpec("constant", np.full(n + 1, float(value)))


@dataclass
class QDeformModel:
    n: int
    q: float
    big_q: np.ndarray           # Q = diag(q^0, ..., q^{n-1})
    u: np.ndarray               # truncated backward shift
    rho: RhoSpec
    rho_matrix: np.ndarray      # rho(Q)
    a: np.ndarray               # U rho(Q)
    seed_algebra: FiniteStarAlgebra
    system: IsometrySystem


def build_qdeform(n: int, q: float, rho: RhoSpec | str) -> QDeformModel:
    """Build the truncated q-model with the given weight function.

    ``rho`` may be a RhoSpec, one of the named choices "heisenberg" / "sl2",
    or a sequence of n+1 samples.  The kernel condition U*U rho(Q) = rho(Q)
    is checked, not assumed: it holds exactly iff rho(q^0) = 0, since ker U
    is spanned by e_1.
    """
    if n < 2:
        raise ValueError(f"n = {n} must be >= 2")
    if not 0.0 < q < 1.0:
        raise ValueError(f"q = {q} not in (0, 1)")
    if isinstance(rho, str):
        if rho == "heisenberg":
            rho = heisenberg_rho(n, q)
        elif rho == "sl2":
            rho = sl2_rho(n, q)
        else:
            raise ValueError(f"unknown rho name {rho!r}")
    elif not isinstance(rho, RhoSpec):
        rho = RhoSpec("custom", rho)
    if rho.samples.shape != (n + 1,):
        raise ValueError(
            f"rho needs {n + 1} samples (on q^0..q^{n}), got {rho.samples.shape}")
    if np.any(rho.samples < 0.0):
        bad = int(np.argmin(rho.samples))
        raise RhoConditionViolated(
            f"rho(q^{bad}) = {rho.samples[bad]:g} is negative")
    scale = float(rho.samples.max())
    if abs(rho.samples[0]) > 1e-12 * max(1.0, scale):
        raise RhoConditionViolated(
            f"U*U rho(Q) != rho(Q) at basis vector 1: rho(q^0) = "
            f"{rho.samples[0]:g} but U annihilates e_1")
    interior = rho.samples[1:n]
    if np.any(interior == 0.0):
        bad = 1 + int(np.argmin(interior))
        raise RhoConditionViolated(
            f"rho(q^{bad}) = 0 at an interior spectrum point; U would not "
            f"vanish on ker rho(Q)")

    big_q = np.diag(q ** np.arange(n)).astype(complex)
    u = backward_shift(n)
    rho_matrix = np.diag(rho.samples[:n]).astype(complex)
    a = u @ rho_matrix

    seed = generate_closure([big_q])
    sys0 = IsometrySystem(seed, u)
    ext = extend_delta(sys0)
    full = extend_delta_star(IsometrySystem(ext, u))
    return QDeformModel(n, q, big_q, u, rho, rho_matrix, a, seed,
                        IsometrySystem(full, u))


def qdeform_relations_suite(m: QDeformModel, tol_exact: float = 1e-13,
                            tol_edge: float = 1e-10) -> ConditionReport:
    """Verify the defining relations of the q-model, separating exact
    identities from the analytically derived truncation defects:

    - a* a = rho^2(Q), a Q = q Q a and Q a* = q a* Q hold globally;
    - U Q = q Q U holds globally (the backward orientation makes it exact);
    - a a* = rho^2(qQ) holds on the bulk span(e_1..e_{n-1}); its global
      defect must equal rho^2(q^n);
    - the global defect of U Q U* = q Q must equal q^n.
    """
    n, q = m.n, m.q
    rep = ConditionReport("qdeform_relations")
    a, astar = m.a, adjoint(m.a)
    rho2_q = np.diag(m.rho.samples[:n] ** 2).astype(complex)
    rho2_shift = np.diag(m.rho.samples[1:n + 1] ** 2).astype(complex)

    rep.add("a*a = rho^2(Q)", spectral_norm(astar @ a - rho2_q), tol_exact)
    rep.add("aQ = qQa", spectral_norm(a @ m.big_q - q * m.big_q @ a), tol_exact)
    rep.add("Qa* = qa*Q",
            spectral_norm(m.big_q @ astar - q * astar @ m.big_q), tol_exact)
    rep.add("UQ = qQU",
            spectral_norm(m.u @ m.big_q - q * m.big_q @ m.u), 1e-14)

    diff = a @ astar - rho2_shift
    bulk = np.diag(np.concatenate([np.ones(n - 1), [0.0]])).astype(complex)
    rep.add("aa* = rho^2(qQ) on the bulk",
            spectral_norm(bulk @ diff @ bulk), tol_exact)
    edge_expected = float(m.rho.samples[n] ** 2)
    edge_measured = spectral_norm(diff)
    rep.add("aa* edge defect equals rho^2(q^n)",
            abs(edge_measured - edge_expected), tol_edge)
    rep.note(f"aa* edge defect: measured {edge_measured:.12e}, "
             f"derived {edge_expected:.12e}")

    trunc_measured = spectral_norm(m.u @ m.big_q @ adjoint(m.u) - q * m.big_q)
    trunc_expected = float(q ** n)
    rep.add("UQU* - qQ defect equals q^n",
            abs(trunc_measured - trunc_expected), tol_edge)
    rep.note(f"UQU* truncation defect: measured {trunc_measured:.12e}, "
             f"derived {trunc_expected:.12e}")
    return rep


@dataclass
class LoadedModel:
    """A model built from a JSON spec, with the generator table its
    expressions can refer to."""

    kind: str
    system: IsometrySystem
    generators: dict[str, np.ndarray]
    polar: PolarModel | None = None
    qdeform: QDeformModel | None = None


def load_model(obj: dict, tol: float = DEFAULT_TOL) -> LoadedModel:
    """Build a model from its JSON spec.

    Accepted forms::

        {"type": "polar", "a": <matrix>}
        {"type": "qdeform", "n": int, "q": real,
         "rho": "heisenberg" | "sl2" | {"samples": [real, ...]}}
        {"type": "system", "generators": [<matrix>, ...], "U": <matrix>}

    Matrices are {"dim": n, "entries": [[[re, im], ...], ...]}.  The raw
    "system" form generates the *-algebra closure of the given generators;
    it does not require a coefficient algebra, so it can express the
    deliberately broken configurations used as negative controls.
    """
    kind = obj.get("type")
    if kind == "polar":
        model = build_polar_model(matrix_from_json(obj["a"]), tol)
        # generator names must denote coefficient-algebra elements; the
        # operator itself is written U*absa
        return LoadedModel("polar", model.system,
                           {"absa": model.abs_a}, polar=model)
    if kind == "qdeform":
        rho = obj["rho"]
        if isinstance(rho, dict):
            rho = RhoSpec("custom", rho["samples"])
        model = build_qdeform(int(obj["n"]), float(obj["q"]), rho)
        # the model operator a is written U*rhoQ
        return LoadedModel("qdeform", model.system,
                           {"Q": model.big_q, "rhoQ": model.rho_matrix},
                           qdeform=model)
    if kind == "system":
        gens = [matrix_from_json(g) for g in obj["generators"]]
        u = matrix_from_json(obj["U"])
        algebra = generate_closure(gens, tol, dim=u.shape[0])
        table = {f"g{i}": g for i, g in enumerate(gens)}
        return LoadedModel("system", IsometrySystem(algebra, u), table)
    raise ValueError(f"unknown model type {kind!r}")
