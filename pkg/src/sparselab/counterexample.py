"""Block designs on which greedy boosting provably never finds the truth.

The family is parameterized by a target cone constant ``c``: pick the
smallest square size n = N^2 with (n + 1 - sqrt(n)) / sqrt(n) > c, set
s = sqrt(n) and gamma = n, and build

    X = [ gamma * I_s      0        | gamma * 1 ]
        [     0         I_{n-s}     |     1     ]

with truth beta = (1, ..., 1, 0, ..., 0) carrying s ones.  The nullspace
of X is spanned by z = (-1, ..., -1, 1), so the restricted nullspace
property holds for every cone constant below (n + 1 - sqrt(n)) / sqrt(n),
yet boosting walks toward beta + z instead of beta.  Everything is built
in integer arithmetic and cast to float at the end, so X @ z = 0 and
Y = X @ beta hold exactly.

The reduced recursion tracks the only degrees of freedom a boosting run
ever touches on this design: the parameter stays of the form
(0, ..., 0, -c_{s+1}, ..., -c_n, c_p) with every coordinate in [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import boosting
from .linalg import lq_norm

# Tolerance for the [0, 1] box on reduced coordinates; violations beyond
# this would falsify the form invariant, not just accumulate roundoff.
COORD_SLACK = 1e-12


class InvariantViolation(RuntimeError):
    """A reduced-coordinate trajectory left its invariant region."""


@dataclass(frozen=True)
class SparseInstance:
    """A constructed design with its truth, response, and nullspace ray."""

    X: np.ndarray
    beta: np.ndarray
    Y: np.ndarray
    S: tuple[int, ...]
    s: int
    n: int
    p: int
    gamma: float
    c_target: float
    z: np.ndarray


@dataclass(frozen=True)
class AnalyticState:
    """Reduced coordinates (c_{s+1}, ..., c_n, c_p) after k iterations."""

    c_mid: np.ndarray
    c_p: float
    k: int


def construct(c: float) -> SparseInstance:
    """Smallest admissible instance whose cone margin exceeds ``c``.

    N starts at 3 (so n >= 9 >= 5) and grows until
    (N^2 + 1 - N) / N > c; the comparison is done on integers against
    c * N to keep the boundary exact for integer and half-integer c.
    """
    if not (isinstance(c, (int, float)) and math.isfinite(c) and c > 0):
        raise ValueError(f"c must be a positive finite number, got {c!r}")
    N = 3
    while N * N + 1 - N <= c * N:
        N += 1
    n, s, p = N * N, N, N * N + 1
    gamma = n
    Xi = np.zeros((n, p), dtype=np.int64)
    for j in range(s):
        Xi[j, j] = gamma
    for j in range(s, n):
        Xi[j, j] = 1
    Xi[:s, n] = gamma
    Xi[s:, n] = 1
    beta_i = np.zeros(p, dtype=np.int64)
    beta_i[:s] = 1
    z_i = np.full(p, -1, dtype=np.int64)
    z_i[n] = 1
    Y_i = Xi @ beta_i
    return SparseInstance(
        X=Xi.astype(float),
        beta=beta_i.astype(float),
        Y=Y_i.astype(float),
        S=tuple(range(s)),
        s=s,
        n=n,
        p=p,
        gamma=float(gamma),
        c_target=float(c),
        z=z_i.astype(float),
    )


def column_norms(inst: SparseInstance) -> np.ndarray:
    """Closed-form column norms: gamma, then ones, then the mixed column."""
    g = inst.gamma
    last = math.sqrt((g * g - 1.0) * inst.s + inst.n)
    return np.concatenate(
        [np.full(inst.s, g), np.ones(inst.n - inst.s), [last]]
    )


def initial_analytic_state(inst: SparseInstance) -> AnalyticState:
    return AnalyticState(c_mid=np.zeros(inst.n - inst.s), c_p=0.0, k=0)


def analytic_beta(state: AnalyticState, inst: SparseInstance) -> np.ndarray:
    """Embed the reduced coordinates back into a full parameter vector."""
    return np.concatenate([np.zeros(inst.s), -state.c_mid, [state.c_p]])


def analytic_rho(state: AnalyticState, inst: SparseInstance) -> np.ndarray:
    """Correlations induced by a parameter in reduced form.

    rho_j = gamma * (1 - c_p) on the leading block, c_j - c_p on the
    middle block, and the norm-weighted mixture on the last column.
    """
    g, s, n = inst.gamma, inst.s, inst.n
    rho = np.empty(inst.p)
    rho[:s] = g * (1.0 - state.c_p)
    rho[s:n] = state.c_mid - state.c_p
    rho[n] = (
        s * g * g * (1.0 - state.c_p) + float(np.sum(state.c_mid - state.c_p))
    ) / math.sqrt((g * g - 1.0) * s + n)
    return rho


def analytic_step(state: AnalyticState, inst: SparseInstance, nu: float) -> AnalyticState:
    """One greedy step in reduced coordinates.

    Only two selections can occur: the mixed column (which advances c_p
    by nu * Delta) or a middle column (which averages its coordinate
    toward c_p).  A leading-block selection, or any coordinate leaving
    [0, 1] by more than COORD_SLACK, raises InvariantViolation because it
    would falsify the form invariant the construction is built on.  An
    all-zero correlation vector is a no-op, matching the matrix side.
    """
    if not 0.0 < nu <= 1.0:
        raise ValueError(f"nu must lie in (0, 1], got {nu}")
    rho = analytic_rho(state, inst)
    if float(np.max(np.abs(rho))) == 0.0:
        return AnalyticState(c_mid=state.c_mid.copy(), c_p=state.c_p, k=state.k + 1)
    j = boosting.select_index(rho)
    g, s, n = inst.gamma, inst.s, inst.n
    if j < s:
        raise InvariantViolation(
            f"leading column {j} won the correlation race at iteration {state.k}"
        )
    if j == n:
        denom = (g * g - 1.0) * s + n
        delta = (
            s * g * g * (1.0 - state.c_p)
            + float(np.sum(state.c_mid - state.c_p))
        ) / denom
        c_mid = state.c_mid.copy()
        c_p = state.c_p + nu * delta
    else:
        c_mid = state.c_mid.copy()
        c_mid[j - s] = (1.0 - nu) * state.c_mid[j - s] + nu * state.c_p
        c_p = state.c_p
    lo = c_p if c_mid.size == 0 else min(float(np.min(c_mid)), c_p)
    hi = c_p if c_mid.size == 0 else max(float(np.max(c_mid)), c_p)
    if lo < -COORD_SLACK or hi > 1.0 + COORD_SLACK:
        raise InvariantViolation(
            f"reduced coordinate left [0, 1] at iteration {state.k + 1}: "
            f"range [{lo!r}, {hi!r}]"
        )
    return AnalyticState(c_mid=c_mid, c_p=c_p, k=state.k + 1)


def equivalence_check(
    inst: SparseInstance,
    nu: float,
    iterations: int,
    residual_stop: float = 1e-12,
) -> float:
    """Lockstep the full-matrix run against the reduced recursion.

    Both sides advance together until ``iterations`` steps or until the
    matrix residual drops to ``residual_stop`` (past that point every
    correlation underflows to exact zero on one side but not the other,
    so comparison stops being meaningful).  Returns the largest l-inf
    deviation between the two parameter trajectories; a differing
    selection raises immediately, naming the iteration.
    """
    config = boosting.BoostingConfig(
        nu=nu, max_iterations=iterations, residual_stop=residual_stop
    )
    mstate = boosting.init(inst.Y, inst.p)
    astate = initial_analytic_state(inst)
    deviation = 0.0
    while mstate.k < iterations and lq_norm(mstate.residual, 2) > residual_stop:
        ja = boosting.select_index(analytic_rho(astate, inst))
        mstate = boosting.step(mstate, inst.X, config)
        astate = analytic_step(astate, inst, nu)
        jm = mstate.history[-1]
        if jm != ja:
            raise RuntimeError(
                f"selection mismatch at iteration {mstate.k}: "
                f"matrix picked {jm}, recursion picked {ja}"
            )
        deviation = max(
            deviation,
            float(np.max(np.abs(analytic_beta(astate, inst) - mstate.beta))),
        )
    return deviation
