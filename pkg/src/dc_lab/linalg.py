"""Small dense complex linear-algebra kernels.

Everything here operates on plain numpy arrays of complex128.  The sizes of
interest are tiny (d up to a few dozen), so the routines favor clarity and
deterministic, reproducible behavior over asymptotic speed.
"""

from __future__ import annotations

import numpy as np

UNITARITY_TOL = 1e-10
COMPLETION_RESIDUAL_TOL = 1e-12

# A canonical-basis candidate survives orthonormal completion only if its
# post-projection norm exceeds this.
_KEEP_NORM = 1e-6
# Entries below this cannot anchor the phase fix of a completed column.
_PHASE_EPS = 1e-12


def as_matrix(entries) -> np.ndarray:
    """Coerce input to a 2-D complex matrix, rejecting NaN/Inf entries."""
    a = np.asarray(entries, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def mat_mul(a, b) -> np.ndarray:
    """Matrix product with an explicit inner-dimension check."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def trace(a) -> complex:
    """Sum of diagonal entries of a square matrix."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"trace requires a square matrix, got {a.shape}")
    return complex(np.trace(a))


def unitarity_residual(u) -> float:
    """Max-abs entry of U^dag U - I."""
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        raise ValueError(f"unitarity check requires a square matrix, got {u.shape}")
    d = u.shape[0]
    return float(np.max(np.abs(u.conj().T @ u - np.eye(d))))


def is_unitary(u, tol: float = UNITARITY_TOL) -> bool:
    return unitarity_residual(u) <= tol


def require_unitary(u, tol: float = UNITARITY_TOL, what: str = "matrix") -> np.ndarray:
    """Return the matrix, raising if its unitarity residual exceeds tol."""
    u = as_matrix(u)
    res = unitarity_residual(u)
    if res > tol:
        raise ValueError(f"{what} is not unitary: residual {res:.3e} > {tol:.3e}")
    return u


def kron_with_identity(u, d: int) -> np.ndarray:
    """Tensor a d x d operator with the identity on a second d-level system."""
    u = as_matrix(u)
    if u.shape != (d, d):
        raise ValueError(f"expected a {d}x{d} matrix, got {u.shape}")
    return np.kron(u, np.eye(d))


def _mgs_orthonormalize(cols: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt over the columns, two projection passes each."""
    out = np.array(cols, dtype=np.complex128)
    for j in range(out.shape[1]):
        v = out[:, j]
        for _ in range(2):
            for i in range(j):
                v = v - (out[:, i].conj() @ v) * out[:, i]
        nrm = np.linalg.norm(v)
        if nrm < _KEEP_NORM:
            raise ValueError("columns are numerically dependent")
        out[:, j] = v / nrm
    return out


def complete_to_unitary(partial_columns, d: int, tol: float = UNITARITY_TOL) -> np.ndarray:
    """Extend orthonormal columns to a full d x d unitary, deterministically.

    Canonical basis vectors e_0 .. e_{d-1} are tried in index order through
    modified Gram-Schmidt; a candidate is kept when its post-projection norm
    exceeds 1e-6, and every kept column is rephased so that its first nonzero
    entry is real and positive.  The same inputs always yield the same matrix,
    and exactly-orthonormal inputs are preserved bit for bit as the leading
    columns.  Inputs whose pairwise inner products deviate by more than 1e-12
    (but within `tol`) are re-orthonormalized first so the result still meets
    the completion residual contract.
    """
    cols = [np.asarray(c, dtype=np.complex128).reshape(-1) for c in partial_columns]
    k = len(cols)
    if k > d:
        raise ValueError(f"cannot fit {k} columns in dimension {d}")
    for c in cols:
        if c.shape != (d,):
            raise ValueError(f"expected columns of length {d}, got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("column entries must be finite")

    basis: list[np.ndarray] = []
    if k:
        given = np.column_stack(cols)
        gram_res = float(np.max(np.abs(given.conj().T @ given - np.eye(k))))
        if gram_res > tol:
            raise ValueError(
                f"input columns are not orthonormal: residual {gram_res:.3e} > {tol:.3e}"
            )
        if gram_res > COMPLETION_RESIDUAL_TOL:
            given = _mgs_orthonormalize(given)
        basis = [given[:, i] for i in range(k)]

    for idx in range(d):
        if len(basis) == d:
            break
        v = np.zeros(d, dtype=np.complex128)
        v[idx] = 1.0
        for _ in range(2):
            for b in basis:
                v = v - (b.conj() @ v) * b
        nrm = np.linalg.norm(v)
        if nrm <= _KEEP_NORM:
            continue
        v = v / nrm
        anchor = v[np.abs(v) > _PHASE_EPS][0]
        v = v * (anchor.conjugate() / abs(anchor))
        basis.append(v)

    if len(basis) < d:
        raise ValueError("could not complete the given columns to a unitary")
    return np.column_stack(basis)
