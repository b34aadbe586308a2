"""Constructors for explicit families of encoding unitaries.

Each constructor returns an EncodingFamily whose members are plain (d, d)
complex arrays in a fixed documented order, together with a provenance label
and the largest Schmidt weight lambda0 the family is designed for (None when
the family works for every state).

Several constructions pin down only the first two columns of a member; that is
all that matters for weighted orthogonality when only lambda0 and lambda1 are
nonzero, and the remaining columns come from the deterministic completion in
:func:`dc_lab.linalg.complete_to_unitary`.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .linalg import UNITARITY_TOL, as_matrix, complete_to_unitary, unitarity_residual


@dataclass(frozen=True, eq=False)
class EncodingFamily:
    """An ordered family of same-dimension encoding unitaries."""

    d: int
    members: tuple[np.ndarray, ...]
    label: str
    target_lambda0: float | None = None

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def _family(d: int, members, label: str, target_lambda0: float | None) -> EncodingFamily:
    mats = tuple(as_matrix(m).copy() for m in members)
    for i, m in enumerate(mats):
        if m.shape != (d, d):
            raise ValueError(f"member {i} of {label} has shape {m.shape}, expected ({d}, {d})")
        res = unitarity_residual(m)
        if res > UNITARITY_TOL:
            raise ValueError(f"member {i} of {label} is not unitary: residual {res:.3e}")
    k = len(mats)
    if not d <= k <= d * d:
        raise ValueError(f"{label} has {k} members, outside [{d}, {d * d}]")
    for m in mats:
        m.flags.writeable = False
    return EncodingFamily(d=d, members=mats, label=label, target_lambda0=target_lambda0)


def root_of_unity(n: int, k: int = 1) -> complex:
    """exp(2 pi i k / n), evaluated directly for the reduced exponent."""
    return complex(np.exp(2j * np.pi * (k % n) / n))


def shift(d: int) -> np.ndarray:
    """Cyclic shift X_d with X_d|j> = |(j+1) mod d>."""
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    x = np.zeros((d, d), dtype=np.complex128)
    for j in range(d):
        x[(j + 1) % d, j] = 1.0
    return x


def phase(d: int) -> np.ndarray:
    """Phase operator Z_d = diag(1, w, w^2, ...) with w = exp(2 pi i / d)."""
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    return np.diag([root_of_unity(d, k) for k in range(d)])


def weyl_family(d: int) -> EncodingFamily:
    """The d^2 products Z^a X^b, ordered lexicographically in (a, b).

    Pairwise orthogonal against the maximally entangled state; for d = 2 this
    is the identity together with Pauli-equivalent matrices.
    """
    members = []
    for a in range(d):
        for b in range(d):
            m = np.zeros((d, d), dtype=np.complex128)
            for j in range(d):
                row = (j + b) % d
                m[row, j] = root_of_unity(d, a * row)
            members.append(m)
    return _family(d, members, "weyl", 1.0 / d)


def qutrit_five_family() -> EncodingFamily:
    """The five-member qutrit family {I, A, M, M*, U} aimed at lambda0 = 3/5.

    Orthogonal against weights (3/5, 2/5, 0); every member has a zero at its
    3,2 entry.
    """
    s3 = np.sqrt(3.0)
    s5 = np.sqrt(5.0)
    eye = np.eye(3, dtype=np.complex128)
    a = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=np.complex128)
    u = np.array(
        [
            [-2 / 3, 0, s5 / 3],
            [0, 1, 0],
            [-s5 / 3, 0, -2 / 3],
        ],
        dtype=np.complex128,
    )
    m = np.array(
        [
            [-1 / 3, -(s3 / 2) * 1j, s5 / 6],
            [(1 / s3) * 1j, 1 / 2, -(s5 / (2 * s3)) * 1j],
            [s5 / 3, 0, 2 / 3],
        ],
        dtype=np.complex128,
    )
    return _family(3, [eye, a, m, m.conj(), u], "five", 3 / 5)


def family_f46() -> EncodingFamily:
    """Six 4x4 encoding unitaries {I, A, U1, U2, V1, V2} at lambda0 = 2/3."""
    h = np.sqrt(3.0) / 2
    eye = np.eye(4, dtype=np.complex128)
    a = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], dtype=np.complex128)
    u1 = np.array(
        [[-0.5, 0, h, 0], [0, 1, 0, 0], [-h, 0, -0.5, 0], [0, 0, 0, 1]], dtype=np.complex128
    )
    u2 = np.array(
        [[-0.5, 0, h, 0], [0, 1, 0, 0], [h, 0, 0.5, 0], [0, 0, 0, 1]], dtype=np.complex128
    )
    v1 = np.array(
        [[0, 1, 0, 0], [-0.5, 0, h, 0], [0, 0, 0, 1], [-h, 0, -0.5, 0]], dtype=np.complex128
    )
    v2 = np.array(
        [[0, 1, 0, 0], [-0.5, 0, h, 0], [0, 0, 0, 1], [h, 0, 0.5, 0]], dtype=np.complex128
    )
    return _family(4, [eye, a, u1, u2, v1, v2], "F_4/6", 2 / 3)


def family_f47() -> EncodingFamily:
    """Seven 4x4 encoding unitaries {I, A1, A2, U, M0, M1, M2} at lambda0 = 4/7."""
    s7 = np.sqrt(7.0)
    eye = np.eye(4, dtype=np.complex128)
    a1 = np.array([[0, 0, 1, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128)
    a2 = np.array([[0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0], [0, 0, 0, 1]], dtype=np.complex128)
    u = np.array(
        [
            [-3 / 4, 0, 0, s7 / 4],
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [-s7 / 4, 0, 0, -3 / 4],
        ],
        dtype=np.complex128,
    )
    members = [eye, a1, a2, u]
    for j in range(3):
        w1 = root_of_unity(3, j)
        w2 = root_of_unity(3, 2 * j)
        mj = np.array(
            [
                [-1 / 4, -(2 / 3) * w2, -(2 / 3) * w1, s7 / 12],
                [(1 / 2) * w1, 1 / 3, -(2 / 3) * w2, -(s7 / 6) * w1],
                [(1 / 2) * w2, -(2 / 3) * w1, 1 / 3, -(s7 / 6) * w2],
                [s7 / 4, 0, 0, 3 / 4],
            ],
            dtype=np.complex128,
        )
        members.append(mj)
    return _family(4, members, "F_4/7", 4 / 7)


def _block_shift(d: int, j: int) -> np.ndarray:
    """Block-diagonal matrix with X_{d-1}^j in the top-left corner over [1]."""
    out = np.zeros((d, d), dtype=np.complex128)
    for col in range(d - 1):
        out[(col + j) % (d - 1), col] = 1.0
    out[d - 1, d - 1] = 1.0
    return out


def _two_dm1_m_column(d: int, j: int) -> np.ndarray:
    """First column of member M_j in the 2d-1 construction."""
    col = np.zeros(d, dtype=np.complex128)
    col[0] = -1.0 / d
    col[d - 1] = np.sqrt(2 * d - 1) / d
    inv_root = 1.0 / np.sqrt(d)
    if d % 2 == 1:
        for k in range(1, d - 1):
            sign = -((-1.0) ** (k // 2))
            col[k] = sign * inv_root * (1j**k) * root_of_unity(d - 1, k * j)
    else:
        for k in range(1, d - 1):
            exp_small = (k - 1) // 2 if k % 2 == 1 else 0
            col[k] = -inv_root * 1j * root_of_unity(d - 3, exp_small) * root_of_unity(d - 1, k * j)
    return col


def _second_column_from_first(d: int, col1: np.ndarray) -> np.ndarray:
    """Second column of M_j, determined entrywise by the first column."""
    col2 = np.zeros(d, dtype=np.complex128)
    factor = -d / (d - 1)
    col2[0] = factor * col1[d - 2]
    for k in range(d - 2):
        col2[k + 1] = factor * col1[k]
    col2[d - 1] = 0.0
    return col2


def family_2dm1(d: int) -> EncodingFamily:
    """2d-1 encoding unitaries at lambda0 = d/(2d-1), for d >= 4.

    Members are ordered A_0 = I, A_1, ..., A_{d-2}, M_0, ..., M_{d-2}, U.
    The d = 4 case does not fit the general pattern and is served by
    :func:`family_f47`.
    """
    if d < 4:
        raise ValueError(f"the 2d-1 construction needs d >= 4, got {d}")
    if d == 4:
        return family_f47()
    members = [_block_shift(d, j) for j in range(d - 1)]
    for j in range(d - 1):
        col1 = _two_dm1_m_column(d, j)
        col2 = _second_column_from_first(d, col1)
        members.append(complete_to_unitary([col1, col2], d))
    u_col1 = np.zeros(d, dtype=np.complex128)
    u_col1[0] = -(d - 1.0) / d
    u_col1[d - 1] = -np.sqrt(2 * d - 1) / d
    u_col2 = np.zeros(d, dtype=np.complex128)
    u_col2[1] = 1.0
    members.append(complete_to_unitary([u_col1, u_col2], d))
    label = "2d-1-odd" if d % 2 == 1 else "2d-1-even"
    return _family(d, members, label, d / (2 * d - 1))


def _rotate_second_entry_last(v: np.ndarray) -> np.ndarray:
    """Row permutation used by the d+2 recursion: entry 1 moves to the end."""
    return np.concatenate([v[:1], v[2:], v[1:2]])


def _dp2_first_columns(d: int):
    """First columns of the U, V (and M, when d is odd) members at dimension d.

    Returns (us, vs, m) where m is None for even d.  Both parities grow the
    same way: each smaller column is rescaled by sqrt(1 - (2/d)^2) after the
    row rotation, two leading entries are prepended, and one fresh column of
    the simplest shape joins each of the U and V lists.
    """
    if d == 4:
        h = np.sqrt(3.0) / 2
        us = [np.array([-0.5, 0, -h, 0]), np.array([-0.5, 0, h, 0])]
        vs = [np.array([0, -0.5, 0, -h]), np.array([0, -0.5, 0, h])]
        return [u.astype(np.complex128) for u in us], [v.astype(np.complex128) for v in vs], None
    if d == 5:
        s21 = np.sqrt(21.0) / 5
        us = [
            np.array([-2 / 5, 0, s21 * (-2 / 3), s21 * (np.sqrt(5.0) / 3), 0]),
            np.array([-2 / 5, 0, s21, 0, 0]),
        ]
        vs = [np.array([0, -2 / 5, 0, 0, s21])]
        m = np.array(
            [
                -1 / 5,
                -(np.sqrt(3.0) / 5) * 1j,
                s21 * (-1 / 3),
                s21 * (-np.sqrt(5.0) / 3),
                s21 * (-(np.sqrt(3.0) / 3) * 1j),
            ]
        )
        return [u.astype(np.complex128) for u in us], [v.astype(np.complex128) for v in vs], m.astype(np.complex128)

    prev_us, prev_vs, prev_m = _dp2_first_columns(d - 2)
    scale = np.sqrt(1.0 - (2.0 / d) ** 2)
    head = np.array([-2.0 / d, 0.0], dtype=np.complex128)
    us = [np.concatenate([head, scale * _rotate_second_entry_last(u)]) for u in prev_us]
    vs = [np.concatenate([head[::-1], scale * _rotate_second_entry_last(v)]) for v in prev_vs]
    new_u = np.zeros(d, dtype=np.complex128)
    new_u[0] = -2.0 / d
    new_u[2] = scale
    us.append(new_u)
    new_v = np.zeros(d, dtype=np.complex128)
    new_v[1] = -2.0 / d
    new_v[d - 1] = scale
    vs.append(new_v)
    m = None
    if prev_m is not None:
        m = np.concatenate(
            [np.array([-1.0 / d, -(np.sqrt(3.0) / d) * 1j]), scale * _rotate_second_entry_last(prev_m)]
        )
    return us, vs, m


def family_dp2(d: int) -> EncodingFamily:
    """d+2 encoding unitaries at lambda0 = d/(d+2), for every d >= 2.

    d = 2 is the identity-plus-Pauli-equivalents set, d = 3 the qutrit five
    family, d = 4 the explicit six-member family; larger dimensions are built
    recursively two dimensions at a time.  Members are ordered I, A
    (first-two-columns swap), then M and its conjugate when d is odd, then
    U_1..U_j, V_1..V_k.
    """
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    if d == 2:
        return dataclasses.replace(weyl_family(2), label="F_2/4")
    if d == 3:
        return qutrit_five_family()
    if d == 4:
        return family_f46()

    us, vs, m = _dp2_first_columns(d)
    eye = np.eye(d, dtype=np.complex128)
    a = eye.copy()
    a[:, [0, 1]] = a[:, [1, 0]]
    members = [eye, a]
    if m is not None:
        m_col2 = np.zeros(d, dtype=np.complex128)
        m_col2[0] = (np.sqrt(3.0) / 2) * 1j
        m_col2[1] = 0.5
        m_full = complete_to_unitary([m, m_col2], d)
        members.append(m_full)
        members.append(m_full.conj())
    e0 = np.zeros(d, dtype=np.complex128)
    e0[0] = 1.0
    e1 = np.zeros(d, dtype=np.complex128)
    e1[1] = 1.0
    members.extend(complete_to_unitary([u, e1], d) for u in us)
    members.extend(complete_to_unitary([v, e0], d) for v in vs)
    return _family(d, members, f"F_{d}/{d + 2}", d / (d + 2))


def shift_diag_family(d: int, diagonals) -> EncodingFamily:
    """The family {X_d^k D_k} for unitary diagonal D_k, valid for every state.

    Off the k = 0 member, every pairwise product has an all-zero main
    diagonal, so weighted orthogonality holds regardless of the weights.
    Diagonals may be given as length-d vectors or as (d, d) diagonal matrices.
    """
    diags = []
    for i, entry in enumerate(diagonals):
        arr = np.asarray(entry, dtype=np.complex128)
        if arr.ndim == 2:
            if arr.shape != (d, d):
                raise ValueError(f"diagonal {i} has shape {arr.shape}, expected ({d}, {d})")
            off = arr - np.diag(np.diag(arr))
            if np.max(np.abs(off)) > UNITARITY_TOL:
                raise ValueError(f"matrix {i} is not diagonal")
            arr = np.diag(arr)
        if arr.shape != (d,):
            raise ValueError(f"diagonal {i} has length {arr.shape}, expected {d}")
        if np.max(np.abs(np.abs(arr) - 1.0)) > UNITARITY_TOL:
            raise ValueError(f"diagonal {i} is not unitary")
        diags.append(arr)
    if len(diags) != d:
        raise ValueError(f"expected {d} diagonals, got {len(diags)}")
    members = []
    for k, dk in enumerate(diags):
        m = np.zeros((d, d), dtype=np.complex128)
        for j in range(d):
            m[(j + k) % d, j] = dk[j]
        members.append(m)
    return _family(d, members, "shift-diag", None)
