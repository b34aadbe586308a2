"""Verification, capacity bounds, and obstruction predicates.

Two unitaries M, U are Lambda-orthogonal for the diagonal weight matrix
Lambda when tr(Lambda M^dag U) = 0; a family is valid for a state exactly
when its members are pairwise Lambda-orthogonal, which is the same as the
encoded joint-space messages being pairwise orthogonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix
from .states import SchmidtState, message_vectors

VERIFY_TOL = 1e-10
SATURATION_TOL = 1e-9
KC_RESIDUAL_TOL = 1e-8


def _diagonal_of(weights) -> np.ndarray:
    """Accept a SchmidtState, a weight vector, or a full diagonal matrix."""
    if isinstance(weights, SchmidtState):
        return np.asarray(weights.lambdas, dtype=float)
    arr = np.asarray(weights)
    if arr.ndim == 2:
        arr = np.diag(arr)
    return arr.real.astype(float)


def lambda_inner(weights, m, u) -> complex:
    """The weighted trace inner product tr(Lambda M^dag U)."""
    lam = _diagonal_of(weights)
    m = as_matrix(m)
    u = as_matrix(u)
    d = lam.shape[0]
    if m.shape != (d, d) or u.shape != (d, d):
        raise ValueError(f"dimension mismatch: weights d={d}, matrices {m.shape} and {u.shape}")
    return complex(np.einsum("a,ba,ba->", lam, m.conj(), u))


def _member_stack(family, d: int) -> np.ndarray:
    members = tuple(getattr(family, "members", family))
    stack = np.stack([np.asarray(m, dtype=np.complex128) for m in members])
    if stack.shape[1:] != (d, d):
        raise ValueError(f"family members have shape {stack.shape[1:]}, state has d={d}")
    return stack


def _weighted_gram(stack: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Matrix of tr(Lambda U_i^dag U_j) over all member pairs."""
    return np.einsum("a,iba,jba->ij", lam, stack.conj(), stack, optimize=True)


@dataclass(frozen=True)
class VerificationReport:
    """Residual summary for one family checked against one state."""

    max_pairwise_residual: float
    max_unitarity_residual: float
    max_norm_deviation: float
    tol: float
    passed: bool


def verify_family(family, state: SchmidtState, tol: float = VERIFY_TOL) -> VerificationReport:
    """Check pairwise weighted orthogonality, unitarity, and message norms."""
    stack = _member_stack(family, state.d)
    k, d = stack.shape[0], state.d
    gram = _weighted_gram(stack, state.lambdas)
    off = gram - np.diag(np.diag(gram))
    max_pair = float(np.max(np.abs(off))) if k > 1 else 0.0
    eye = np.eye(d)
    max_unit = float(np.max(np.abs(np.einsum("iba,ibc->iac", stack.conj(), stack) - eye[None])))
    norms = np.linalg.norm(message_vectors(stack, state), axis=1)
    max_norm = float(np.max(np.abs(norms - 1.0)))
    passed = max_pair <= tol and max_unit <= tol and max_norm <= tol
    return VerificationReport(
        max_pairwise_residual=max_pair,
        max_unitarity_residual=max_unit,
        max_norm_deviation=max_norm,
        tol=tol,
        passed=passed,
    )


def gram_equivalence_residual(family, state: SchmidtState) -> float:
    """Max deviation between message inner products and weighted traces.

    The two sides are computed independently: one from explicit joint-space
    vectors, the other from the weighted trace form.  They agree to roundoff
    for any members whatsoever.
    """
    stack = _member_stack(family, state.d)
    msgs = message_vectors(stack, state)
    vector_gram = msgs.conj() @ msgs.T
    trace_gram = _weighted_gram(stack, state.lambdas)
    return float(np.max(np.abs(vector_gram - trace_gram)))


def wcsg_bound(state: SchmidtState) -> int:
    """Largest message count K not excluded by lambda0 * K <= d.

    The bound is capped at d^2; a zero largest weight is treated as the
    maximally-entangled cap.
    """
    d = state.d
    lam0 = state.lambda0
    if lam0 <= 0.0:
        return d * d
    return int(min(math.floor(d / lam0 + SATURATION_TOL), d * d))


def bns_excluded(state: SchmidtState, k: int) -> bool:
    """True when K messages are impossible for proven reasons.

    Covers K beyond the weight bound and the strict d+1 case: no state with
    lambda0 >= d/(d+1) supports d+1 messages (equality included).
    """
    d = state.d
    if k > wcsg_bound(state):
        return True
    return k == d + 1 and state.lambda0 >= d / (d + 1) - 1e-12


@dataclass(frozen=True)
class KcReport:
    """Span diagnostic at the saturation point lambda0 = d/K.

    residuals[m] is || P_S |m0> - |m0> || for the projector P_S onto the span
    of the message vectors.  Under exact saturation every residual vanishes;
    `saturated` records whether the hypothesis held (the residuals are still
    computed, as an advisory, when it does not).
    """

    residuals: tuple[float, ...]
    span_dim: int
    saturated: bool

    @property
    def max_residual(self) -> float:
        return max(self.residuals)


def kc_span_check(family, state: SchmidtState) -> KcReport:
    """Measure how far each |m0> basis vector is from the message span."""
    stack = _member_stack(family, state.d)
    k, d = stack.shape[0], state.d
    saturated = abs(state.lambda0 - d / k) <= SATURATION_TOL
    msgs = message_vectors(stack, state)
    # Near-miss families get an orthonormalization pass so the projector
    # diagnostic stays meaningful; clean families are projected as-is.
    if verify_family(stack, state, tol=KC_RESIDUAL_TOL).max_pairwise_residual > KC_RESIDUAL_TOL:
        q, _ = np.linalg.qr(msgs.T.conj())
        msgs = q.T.conj()
    residuals = []
    for m in range(d):
        idx = m * d
        projected = msgs.T @ msgs[:, idx].conj()
        projected[idx] -= 1.0
        residuals.append(float(np.linalg.norm(projected)))
    span_dim = int(np.linalg.matrix_rank(msgs))
    return KcReport(residuals=tuple(residuals), span_dim=span_dim, saturated=saturated)


def shift_family_obstructed(state: SchmidtState) -> bool:
    """True when no shift-times-diagonal family extends: lambda0 > 1/2."""
    return state.lambda0 > 0.5


def diagonal_identity_obstructed(state: SchmidtState) -> bool:
    """True when no valid family contains both I and another diagonal unitary.

    For lambda0 > 1/2 the triangle inequality forces
    |tr(Lambda D)| >= lambda0 - (1 - lambda0) > 0 for unitary diagonal D.
    """
    return state.lambda0 > 0.5
