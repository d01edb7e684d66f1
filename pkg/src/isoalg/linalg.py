"""Dense complex matrix primitives.

Everything in the package represents operators as dense square complex
matrices.  The spectral primitives all go through Hermitian eigensolving
(the spectral norm is computed from eigenvalues of M*M rather than a general
SVD), which keeps the numeric core to a single LAPACK path.

All tolerances are explicit parameters; there are no hidden globals.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NotPSD, NotSelfAdjoint
from .report import ConditionReport

DEFAULT_TOL = 1e-9

# Eigenvalue clamping threshold for PSD inputs, relative to the matrix norm.
# Matches the rounding accumulated in products of <= 1e3 desk-scale factors.
PSD_CLAMP = 1e-10


def as_matrix(m) -> np.ndarray:
    """Coerce to a square complex ndarray (no copy when already one)."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    return a


def adjoint(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product trace(adjoint(a) @ b)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return complex(np.vdot(a, b))


def hs_norm(m: np.ndarray) -> float:
    """Frobenius norm (the norm induced by hs_inner)."""
    return float(np.linalg.norm(m))


def spectral_norm(m: np.ndarray) -> float:
    """Largest singular value, via eigenvalues of adjoint(m) @ m."""
    m = as_matrix(m)
    w = np.linalg.eigvalsh(m.conj().T @ m)
    top = float(w[-1])
    return float(np.sqrt(top)) if top > 0.0 else 0.0


def herm_eig(m: np.ndarray, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a self-adjoint matrix.

    Returns (w, v) with m = v @ diag(w) @ adjoint(v), eigenvalues ascending,
    v unitary.  Raises NotSelfAdjoint when the defect norm of m - adjoint(m)
    exceeds tol * ||m||.
    """
    m = as_matrix(m)
    scale = spectral_norm(m)
    defect = spectral_norm(m - m.conj().T)
    if defect > tol * scale:
        raise NotSelfAdjoint(
            f"self-adjointness defect {defect:.3e} exceeds {tol:.1e} * {scale:.3e}")
    w, v = np.linalg.eigh((m + m.conj().T) / 2.0)
    return w, v


def psd_sqrt(m: np.ndarray, tol: float = PSD_CLAMP) -> np.ndarray:
    """Positive square root of a PSD matrix.

    Eigenvalues in [-tol * ||m||, 0) are clamped to zero; anything more
    negative raises NotPSD.
    """
    w, v = herm_eig(m, tol=max(tol, 1e-10))
    scale = float(np.abs(w).max()) if w.size else 0.0
    if w[0] < -tol * scale:
        raise NotPSD(
            f"eigenvalue {w[0]:.3e} below -{tol:.1e} * {scale:.3e}")
    w = np.sqrt(np.clip(w, 0.0, None))
    s = (v * w) @ v.conj().T
    return (s + s.conj().T) / 2.0


def is_partial_isometry(u: np.ndarray, tol: float = DEFAULT_TOL) -> ConditionReport:
    """Check the five equivalent characterizations of a partial isometry.

    1. u is isometric on the orthogonal complement of its kernel and zero on
       the kernel, i.e. every eigenvalue of adjoint(u) @ u (the squared
       singular values) lies in {0, 1};
    2. the same for adjoint(u);
    3. adjoint(u) @ u is a projection;
    4. u @ adjoint(u) is a projection;
    5. u @ adjoint(u) @ u = u and adjoint(u) @ u @ adjoint(u) = adjoint(u).

    These agree exactly in theory; each is measured independently (the
    squared scale avoids the sqrt noise floor near zero) so a disagreement
    flags a numerical fault.
    """
    u = as_matrix(u)
    ustar = u.conj().T
    rep = ConditionReport("partial_isometry")

    w = np.linalg.eigvalsh(ustar @ u)
    rep.add("squared singular values of U in {0,1}",
            float(np.minimum(np.abs(w), np.abs(w - 1.0)).max()), tol)
    w = np.linalg.eigvalsh(u @ ustar)
    rep.add("squared singular values of U* in {0,1}",
            float(np.minimum(np.abs(w), np.abs(w - 1.0)).max()), tol)

    p = ustar @ u
    rep.add("U*U idempotent and self-adjoint",
            max(spectral_norm(p @ p - p), spectral_norm(p - p.conj().T)), tol)
    f = u @ ustar
    rep.add("UU* idempotent and self-adjoint",
            max(spectral_norm(f @ f - f), spectral_norm(f - f.conj().T)), tol)

    rep.add("UU*U = U and U*UU* = U*",
            max(spectral_norm(u @ ustar @ u - u),
                spectral_norm(ustar @ u @ ustar - ustar)), tol)

    oks = [d.ok for d in rep.defects]
    if any(oks) and not all(oks):
        rep.note("characterizations disagree; suspect a numerical fault")
    return rep


def matrix_to_json(m: np.ndarray) -> dict:
    """Serialize as {"dim": n, "entries": [[[re, im], ...], ...]} row-major."""
    m = as_matrix(m)
    n = m.shape[0]
    entries = [[[float(m[i, j].real), float(m[i, j].imag)] for j in range(n)]
               for i in range(n)]
    return {"dim": n, "entries": entries}


def matrix_from_json(obj: dict) -> np.ndarray:
    """Inverse of matrix_to_json; bit-exact for 64-bit float entries."""
    try:
        n = int(obj["dim"])
        entries = obj["entries"]
    except (KeyError, TypeError) as exc:
        raise DimensionMismatch(f"malformed matrix object: {exc}") from exc
    if n < 1 or len(entries) != n or any(len(row) != n for row in entries):
        raise DimensionMismatch(f"entries do not form a {n}x{n} matrix")
    m = np.empty((n, n), dtype=complex)
    for i, row in enumerate(entries):
        for j, (re, im) in enumerate(row):
            m[i, j] = complex(re, im)
    return m
