"""Seeded random-restart search for weighted-orthogonal unitary families.

For a state with weight vector lambda and a requested family size K, the
search fixes U_0 = I (any valid family can be rotated so one member is the
identity), parametrizes each remaining member as U = exp(iH) with H Hermitian
(d^2 real parameters per member), and minimizes

    f = sum_{i<j} |tr(Lambda U_i^dag U_j)|^2,

which vanishes exactly on valid families.  Each restart draws a fresh random
H from a generator seeded by the configured base seed, runs Adam on the
analytic gradient, then hands the best point to a small Levenberg-Marquardt
polish that drives true zeros far below the acceptance tolerance.  Every run
with the same configuration is bit-for-bit reproducible.

A failed search is evidence, not proof: results label such outcomes
"not found (heuristic)".  Only the closed-form exclusion predicates from
:mod:`dc_lab.analysis` justify the label "excluded (proven)".
"""

from __future__ import annotations

import dataclasses
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analysis import SATURATION_TOL, _diagonal_of, _weighted_gram, bns_excluded, wcsg_bound
from .families import EncodingFamily
from .linalg import UNITARITY_TOL, as_matrix, unitarity_residual
from .states import SchmidtState, entropy_bits, make_state

_DEGENERACY_EPS = 1e-12


@dataclass
class SearchConfig:
    """Knobs for the restart search; defaults suit d <= 5 desk-scale runs."""

    max_k: int | None = None
    restarts: int = 50
    max_iters: int = 2000
    accept_tol: float = 1e-10
    step_size: float = 0.15
    init_scale: float = 1.0
    handoff_tol: float = 1e-6
    polish_iters: int = 60
    stall_window: int = 200
    stall_rtol: float = 1e-3
    pin_fr: bool = False
    base_seed: int = 42

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.accept_tol <= 0:
            raise ValueError("accept_tol must be positive")
        if self.base_seed < 0:
            raise ValueError("base_seed must be nonnegative")


@dataclass(frozen=True)
class KAttempt:
    """Outcome of the search at one family size."""

    k: int
    status: str  # "found" | "not found (heuristic)" | "excluded (proven)"
    best_objective: float | None
    max_pair_residual: float | None


@dataclass(frozen=True, eq=False)
class SearchResult:
    """Per-K outcomes for one state, plus the largest certified family size."""

    d: int
    lambdas: tuple[float, ...]
    seed: int
    attempts: tuple[KAttempt, ...]
    witnesses: dict[int, EncodingFamily]
    n_max_estimate: int


# ---------------------------------------------------------------------------
# parametrization


def _expand_hermitian(theta: np.ndarray, n: int, d: int) -> np.ndarray:
    """Map a real parameter vector to a stack of n Hermitian (d, d) matrices.

    Per-matrix layout: d diagonal entries, then the real and imaginary parts
    of the strict upper triangle in row-major order.
    """
    npair = d * (d - 1) // 2
    th = np.asarray(theta, dtype=float).reshape(n, d * d)
    hs = np.zeros((n, d, d), dtype=np.complex128)
    ii = np.arange(d)
    hs[:, ii, ii] = th[:, :d]
    iu0, iu1 = np.triu_indices(d, 1)
    vals = th[:, d : d + npair] + 1j * th[:, d + npair :]
    hs[:, iu0, iu1] = vals
    hs[:, iu1, iu0] = vals.conj()
    return hs


def _eig_unitaries(theta: np.ndarray, n: int, d: int):
    """exp(iH) for each parametrized H, via eigendecomposition."""
    hs = _expand_hermitian(theta, n, d)
    w, v = np.linalg.eigh(hs)
    phases = np.exp(1j * w)
    u = (v * phases[:, None, :]) @ v.conj().swapaxes(1, 2)
    return u, w, v, phases


def _divided_difference(w: np.ndarray, phases: np.ndarray) -> np.ndarray:
    """First divided differences of x -> exp(ix) over each eigenvalue pair."""
    dw = w[:, :, None] - w[:, None, :]
    dphase = phases[:, :, None] - phases[:, None, :]
    near = np.abs(dw) < _DEGENERACY_EPS
    mid = 0.5 * (w[:, :, None] + w[:, None, :])
    safe = np.where(near, 1.0, dw)
    return np.where(near, 1j * np.exp(1j * mid), dphase / safe)


def _collapse_gradient(g: np.ndarray, d: int) -> np.ndarray:
    """Fold per-matrix complex gradients G into the real parameter layout."""
    ii = np.arange(d)
    iu0, iu1 = np.triu_indices(d, 1)
    diag = 2.0 * g[:, ii, ii].real
    re = 2.0 * (g[:, iu0, iu1] + g[:, iu1, iu0]).real
    im = 2.0 * (g[:, iu0, iu1] - g[:, iu1, iu0]).imag
    return np.concatenate([diag, re, im], axis=1).reshape(-1)


# ---------------------------------------------------------------------------
# objective and derivatives


def objective(weights, family) -> float:
    """Sum of squared pairwise weighted traces; zero iff the family is valid."""
    lam = _diagonal_of(weights)
    members = tuple(getattr(family, "members", family))
    stack = np.stack([np.asarray(m, dtype=np.complex128) for m in members])
    t = _weighted_gram(stack, lam)
    iu, ju = np.triu_indices(stack.shape[0], 1)
    return float(np.sum(np.abs(t[iu, ju]) ** 2))


def _stack_objective(stack: np.ndarray, lam: np.ndarray):
    t = _weighted_gram(stack, lam)
    iu, ju = np.triu_indices(stack.shape[0], 1)
    tvals = t[iu, ju]
    return float(np.sum(np.abs(tvals) ** 2)), t, tvals


def _objective_and_grad(lam, theta, n_free, d, fixed_stack, pin):
    """Objective and its analytic gradient in the Hermitian parameters.

    The gradient flows through exp(iH) with the divided-difference form of
    the derivative of a matrix function at a Hermitian argument.
    """
    ufree, w, v, phases = _eig_unitaries(theta, n_free, d)
    stack = np.concatenate([fixed_stack, ufree], axis=0)
    f, t, _ = _stack_objective(stack, lam)
    c = t.conj().copy()
    np.fill_diagonal(c, 0.0)
    nf = fixed_stack.shape[0]
    wmat = np.einsum("iq,qba->iba", c[nf:], stack, optimize=True) * lam[None, None, :]
    if pin:
        z = ufree[0, 0, 1]
        f += abs(z) ** 2
        wmat[0, 0, 1] += z
    vh = v.conj().swapaxes(1, 2)
    p = vh @ wmat @ v
    gamma = _divided_difference(w, phases)
    g = v @ (p * gamma.conj()) @ vh
    return f, _collapse_gradient(g, d)


def objective_and_gradient(state: SchmidtState, theta, k: int, fixed=None, pin_fr: bool = False):
    """Public wrapper exposing the search objective and analytic gradient.

    `theta` parametrizes the k - len(fixed) free members (d^2 reals each)
    appended after the fixed prefix (the identity by default).
    """
    fixed_stack = _prepare_fixed(state, fixed)
    n_free = k - fixed_stack.shape[0]
    if n_free <= 0:
        raise ValueError("no free members to differentiate")
    pin = _pin_active(state, pin_fr, n_free)
    return _objective_and_grad(
        state.lambdas, np.asarray(theta, dtype=float), n_free, state.d, fixed_stack, pin
    )


# ---------------------------------------------------------------------------
# Levenberg-Marquardt polish


def _pair_jacobian_blocks(stack, lam, v, gamma, nf, d):
    """For each free matrix, d/dtheta of every tr(Lambda dU^dag U_q) trace.

    Returns an array S with S[m, q, :] the complex derivative of the weighted
    trace against member q with respect to the d^2 parameters of free
    matrix m (dagger side); the swapped role is its conjugate.
    """
    ii = np.arange(d)
    iu0, iu1 = np.triu_indices(d, 1)
    n_free = stack.shape[0] - nf
    ul = stack * lam[None, None, :]
    s = np.empty((n_free, stack.shape[0], d * d), dtype=np.complex128)
    for m in range(n_free):
        vm = v[m]
        x = vm.conj().T @ ul @ vm
        zp = vm @ (gamma[m].conj()[None] * x) @ vm.conj().T
        s[m, :, :d] = zp[:, ii, ii]
        s[m, :, d : d + iu0.size] = zp[:, iu0, iu1] + zp[:, iu1, iu0]
        s[m, :, d + iu0.size :] = 1j * (zp[:, iu1, iu0] - zp[:, iu0, iu1])
    return s


def _pin_jacobian_row(v0, gamma0, d):
    """Complex derivative of (U_1)_{0,1} in the first free matrix's parameters."""
    ii = np.arange(d)
    iu0, iu1 = np.triu_indices(d, 1)
    tmat = v0[0, :][:, None] * gamma0 * v0[1, :].conj()[None, :]
    tp = v0.conj() @ tmat @ v0.T
    out = np.empty(d * d, dtype=np.complex128)
    out[:d] = tp[ii, ii]
    out[d : d + iu0.size] = tp[iu0, iu1] + tp[iu1, iu0]
    out[d + iu0.size :] = 1j * (tp[iu0, iu1] - tp[iu1, iu0])
    return out


def _residuals_and_jacobian(lam, theta, n_free, d, fixed_stack, pin):
    ufree, w, v, phases = _eig_unitaries(theta, n_free, d)
    stack = np.concatenate([fixed_stack, ufree], axis=0)
    k = stack.shape[0]
    nf = fixed_stack.shape[0]
    t = _weighted_gram(stack, lam)
    iu, ju = np.triu_indices(k, 1)
    tvals = t[iu, ju]
    npairs = iu.size
    nres = 2 * npairs + (2 if pin else 0)
    nparam = n_free * d * d
    r = np.empty(nres)
    r[:npairs] = tvals.real
    r[npairs : 2 * npairs] = tvals.imag
    gamma = _divided_difference(w, phases)
    s = _pair_jacobian_blocks(stack, lam, v, gamma, nf, d)
    jac = np.zeros((nres, nparam))
    for pidx in range(npairs):
        i, j = int(iu[pidx]), int(ju[pidx])
        for gmi, other, conjugate in ((i, j, False), (j, i, True)):
            m = gmi - nf
            if m < 0:
                continue
            dt = s[m, other].conj() if conjugate else s[m, other]
            sl = slice(m * d * d, (m + 1) * d * d)
            jac[pidx, sl] = dt.real
            jac[npairs + pidx, sl] = dt.imag
    if pin:
        z = ufree[0, 0, 1]
        r[2 * npairs] = z.real
        r[2 * npairs + 1] = z.imag
        dz = _pin_jacobian_row(v[0], gamma[0], d)
        jac[2 * npairs, : d * d] = dz.real
        jac[2 * npairs + 1, : d * d] = dz.imag
    return r, jac


def _total_objective(lam, theta, n_free, d, fixed_stack, pin):
    ufree, _, _, _ = _eig_unitaries(theta, n_free, d)
    stack = np.concatenate([fixed_stack, ufree], axis=0)
    f, _, _ = _stack_objective(stack, lam)
    if pin:
        f += abs(ufree[0, 0, 1]) ** 2
    return f


def _lm_polish(lam, theta, n_free, d, fixed_stack, pin, iters):
    theta = np.array(theta, dtype=float)
    r, jac = _residuals_and_jacobian(lam, theta, n_free, d, fixed_stack, pin)
    f = float(r @ r)
    mu = 1e-3
    for _ in range(iters):
        if f <= 1e-28:
            break
        a = jac.T @ jac
        g = jac.T @ r
        if np.max(np.abs(g)) < 1e-15:
            break
        damp = np.diag(np.maximum(np.diag(a), 1e-12))
        try:
            delta = np.linalg.solve(a + mu * damp, -g)
        except np.linalg.LinAlgError:
            delta = np.linalg.lstsq(a + mu * damp, -g, rcond=None)[0]
        trial = theta + delta
        ft = _total_objective(lam, trial, n_free, d, fixed_stack, pin)
        if ft < f:
            theta = trial
            f = ft
            mu = max(mu / 3.0, 1e-14)
            r, jac = _residuals_and_jacobian(lam, theta, n_free, d, fixed_stack, pin)
        else:
            mu *= 4.0
            if mu > 1e12:
                break
    return theta, f


# ---------------------------------------------------------------------------
# Adam exploration


def _adam(lam, theta, n_free, d, fixed_stack, pin, cfg: SearchConfig):
    theta = np.array(theta, dtype=float)
    mom = np.zeros_like(theta)
    vel = np.zeros_like(theta)
    b1, b2, eps = 0.9, 0.999, 1e-8
    best_f = np.inf
    best_theta = theta.copy()
    prev_mark = np.inf
    for it in range(1, cfg.max_iters + 1):
        f, g = _objective_and_grad(lam, theta, n_free, d, fixed_stack, pin)
        if f < best_f:
            best_f = f
            best_theta = theta.copy()
        if best_f < cfg.handoff_tol:
            break
        mom = b1 * mom + (1 - b1) * g
        vel = b2 * vel + (1 - b2) * g * g
        mhat = mom / (1 - b1**it)
        vhat = vel / (1 - b2**it)
        theta = theta - cfg.step_size * mhat / (np.sqrt(vhat) + eps)
        if it % cfg.stall_window == 0:
            if best_f > prev_mark * (1 - cfg.stall_rtol):
                break
            prev_mark = best_f
    return best_theta, best_f


# ---------------------------------------------------------------------------
# public search operations


def _prepare_fixed(state: SchmidtState, fixed) -> np.ndarray:
    d = state.d
    if fixed is None:
        return np.eye(d, dtype=np.complex128)[None]
    members = tuple(getattr(fixed, "members", fixed))
    stack = np.stack([as_matrix(m) for m in members])
    if stack.shape[1:] != (d, d):
        raise ValueError(f"fixed members have shape {stack.shape[1:]}, state has d={d}")
    for i, m in enumerate(stack):
        res = unitarity_residual(m)
        if res > UNITARITY_TOL:
            raise ValueError(f"fixed member {i} is not unitary: residual {res:.3e}")
    return stack


def _pin_active(state: SchmidtState, pin_fr: bool, n_free: int) -> bool:
    # Pinning the 1,2 entry of the first free member is a pure gauge choice
    # only on the lambda1 = lambda2 locus; elsewhere it is silently skipped.
    if not pin_fr or n_free < 1 or state.d < 3:
        return False
    return abs(float(state.lambdas[1]) - float(state.lambdas[2])) <= SATURATION_TOL


def find_family(state: SchmidtState, k: int, cfg: SearchConfig, fixed=None):
    """Search for k weighted-orthogonal unitaries for the given state.

    Returns (best_objective, witness) where the witness EncodingFamily is
    None unless the best objective fell within cfg.accept_tol.  The reported
    objective is always the plain pairwise one, even when the gauge pin adds
    a penalty term during optimization.
    """
    d = state.d
    if not d <= k <= d * d:
        raise ValueError(f"family size {k} outside [{d}, {d * d}]")
    fixed_stack = _prepare_fixed(state, fixed)
    if fixed_stack.shape[0] > k:
        raise ValueError(f"{fixed_stack.shape[0]} fixed members exceed family size {k}")
    lam = state.lambdas
    n_free = k - fixed_stack.shape[0]
    if n_free == 0:
        f = objective(lam, fixed_stack)
        witness = None
        if f <= cfg.accept_tol:
            witness = EncodingFamily(
                d=d,
                members=tuple(fixed_stack),
                label=f"search-K{k}",
                target_lambda0=state.lambda0,
            )
        return f, witness

    pin = _pin_active(state, cfg.pin_fr, n_free)
    rng = np.random.default_rng(cfg.base_seed)
    nparam = n_free * d * d
    best_total = np.inf
    best_theta = None
    for _ in range(cfg.restarts):
        theta0 = cfg.init_scale * rng.standard_normal(nparam)
        theta1, _ = _adam(lam, theta0, n_free, d, fixed_stack, pin, cfg)
        theta2, f2 = _lm_polish(lam, theta1, n_free, d, fixed_stack, pin, cfg.polish_iters)
        if f2 < best_total:
            best_total = f2
            best_theta = theta2
        if best_total <= cfg.accept_tol:
            break

    ufree, _, _, _ = _eig_unitaries(best_theta, n_free, d)
    members = tuple(np.concatenate([fixed_stack, ufree], axis=0))
    pure = objective(lam, members)
    if best_total <= cfg.accept_tol:
        witness = EncodingFamily(
            d=d, members=members, label=f"search-K{k}", target_lambda0=state.lambda0
        )
        return pure, witness
    return pure, None


def _max_pair_residual(state: SchmidtState, members) -> float:
    stack = np.stack([np.asarray(m, dtype=np.complex128) for m in members])
    t = _weighted_gram(stack, state.lambdas)
    iu, ju = np.triu_indices(stack.shape[0], 1)
    return float(np.max(np.abs(t[iu, ju]))) if iu.size else 0.0


def estimate_nmax(state: SchmidtState, cfg: SearchConfig) -> SearchResult:
    """Estimate the largest K the state supports, scanning K = d, d+1, ...

    The scan never queries K beyond the weight bound, stops at the first K
    that is neither found nor provably excluded, and reports the last
    certified K.  A failed K is heuristic evidence only.
    """
    d = state.d
    cap = min(cfg.max_k if cfg.max_k is not None else d * d, wcsg_bound(state))
    attempts: list[KAttempt] = []
    witnesses: dict[int, EncodingFamily] = {}
    n_max = d - 1
    for k in range(d, cap + 1):
        if bns_excluded(state, k):
            attempts.append(
                KAttempt(k=k, status="excluded (proven)", best_objective=None, max_pair_residual=None)
            )
            break
        best, fam = find_family(state, k, cfg)
        if fam is not None:
            witnesses[k] = fam
            attempts.append(
                KAttempt(
                    k=k,
                    status="found",
                    best_objective=best,
                    max_pair_residual=_max_pair_residual(state, fam.members),
                )
            )
            n_max = k
        else:
            attempts.append(
                KAttempt(k=k, status="not found (heuristic)", best_objective=best, max_pair_residual=None)
            )
            break
    return SearchResult(
        d=d,
        lambdas=tuple(float(x) for x in state.lambdas),
        seed=cfg.base_seed,
        attempts=tuple(attempts),
        witnesses=witnesses,
        n_max_estimate=n_max,
    )


# ---------------------------------------------------------------------------
# region sweep over the qutrit weight triangle


_TRIANGLE_CORNERS = (
    (1 / 3, 1 / 3, 1 / 3),
    (1 / 2, 1 / 2, 0.0),
    (1.0, 0.0, 0.0),
)
MANDATORY_SWEEP_STATES = (
    (1 / 3, 1 / 3, 1 / 3),
    (3 / 5, 2 / 5, 0.0),
    (3 / 5, 1 / 5, 1 / 5),
)


@dataclass(frozen=True)
class RegionCell:
    """One sweep sample: a weight triple plus its search summary."""

    index: int
    lambda0: float
    lambda1: float
    lambda2: float
    entropy_bits: float
    wcsg_bound: int
    n_max_estimate: int
    best_objective_at_refusal: float | None
    seed: int


@dataclass(frozen=True, eq=False)
class RegionMap:
    d: int
    resolution: int
    base_seed: int
    cells: tuple[RegionCell, ...]


def triangle_grid(resolution: int) -> list[tuple[float, float, float]]:
    """Weight triples sampling the sorted qutrit triangle.

    Takes the centroids of the upward sub-triangles of a barycentric
    subdivision (all strictly inside the region), then appends the three
    proven target states (uniform, (3/5, 2/5, 0), (3/5, 1/5, 1/5)).
    """
    if resolution < 4:
        raise ValueError(f"resolution must be at least 4, got {resolution}")
    n = resolution
    corners = np.asarray(_TRIANGLE_CORNERS)
    pts: list[tuple[float, float, float]] = []
    for a in range(n):
        for b in range(n - a):
            c = n - 1 - a - b
            bary = np.array([a + 1 / 3, b + 1 / 3, c + 1 / 3]) / n
            lam = bary @ corners
            pts.append((float(lam[0]), float(lam[1]), float(lam[2])))
    for target in MANDATORY_SWEEP_STATES:
        if not any(max(abs(p[i] - target[i]) for i in range(3)) <= 1e-12 for p in pts):
            pts.append(target)
    return pts


def _cell_state(d: int, lam3: tuple[float, float, float]) -> SchmidtState:
    padded = list(lam3) + [0.0] * (d - 3)
    return make_state(d, padded)


def _refusal_objective(result: SearchResult) -> float | None:
    for attempt in result.attempts:
        if attempt.status != "found":
            return attempt.best_objective
    return None


def _sweep_cell(args) -> RegionCell:
    index, lam3, d, cfg = args
    state = _cell_state(d, lam3)
    result = estimate_nmax(state, cfg)
    return RegionCell(
        index=index,
        lambda0=lam3[0],
        lambda1=lam3[1],
        lambda2=lam3[2],
        entropy_bits=entropy_bits(state),
        wcsg_bound=wcsg_bound(state),
        n_max_estimate=result.n_max_estimate,
        best_objective_at_refusal=_refusal_objective(result),
        seed=cfg.base_seed,
    )


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get("DC_LAB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def region_sweep(
    resolution: int, cfg: SearchConfig, d: int = 3, workers: int | None = None
) -> RegionMap:
    """Estimate N_max over the weight triangle, cell by cell.

    Cells carry seeds base_seed XOR index, are processed independently
    (optionally in parallel; DC_LAB_THREADS caps the workers), and are always
    returned in index order, so the map is reproducible for a fixed seed.
    For d > 3 the triangle states are padded with zero weights.
    """
    if d < 3:
        raise ValueError("the sweep needs at least three weights; use d >= 3")
    if d != 3:
        warnings.warn(f"sweep triangle is defined for d=3; padding zeros up to d={d}")
    pts = triangle_grid(resolution)
    tasks = [
        (idx, lam3, d, dataclasses.replace(cfg, base_seed=cfg.base_seed ^ idx))
        for idx, lam3 in enumerate(pts)
    ]
    nworkers = _worker_count(workers)
    if nworkers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            cells = list(pool.map(_sweep_cell, tasks))
    else:
        cells = [_sweep_cell(task) for task in tasks]
    cells.sort(key=lambda cell: cell.index)
    return RegionMap(d=d, resolution=resolution, base_seed=cfg.base_seed, cells=tuple(cells))
