"""Componentwise L2 boosting (matching pursuit with a damped step).

Each iteration projects the current residual onto the single column with
the largest normalized correlation and moves the matching coordinate by a
fraction ``nu`` of its least-squares step.  With ``nu = 1`` this is plain
matching pursuit; smaller values give the damped variant.  Selection uses
correlations against unit-normalized columns, so the selected sequence is
invariant under positive rescaling of individual columns.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .linalg import lq_norm

# Relative window for declaring two |rho| values tied.  The stall designs
# produce exact ties across a whole block that floating point may perturb;
# without a window the realized order would depend on rounding noise.
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class BoostingConfig:
    """Step length, iteration cap, and residual stopping floor.

    A zero floor never stops early; exhausted residuals turn the
    remaining iterations into recorded no-ops.
    """

    nu: float = 1.0
    max_iterations: int = 1000
    residual_stop: float = 1e-12

    def __post_init__(self):
        if not 0.0 < self.nu <= 1.0:
            raise ValueError(f"nu must lie in (0, 1], got {self.nu}")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be non-negative")
        if self.residual_stop < 0.0:
            raise ValueError("residual_stop must be non-negative")


@dataclass(frozen=True)
class BoostingState:
    """Snapshot after ``k`` iterations.

    ``rho`` holds the normalized correlations of ``residual`` (the vector
    the next selection will scan); it is None straight out of ``init``
    because the design matrix has not been seen yet.  ``history`` records
    the selected column per iteration, ``history_steps`` the applied
    increments ``nu * bhat``.
    """

    k: int
    beta: np.ndarray
    residual: np.ndarray
    rho: np.ndarray | None
    history: tuple[int, ...]
    history_steps: tuple[float, ...]


def _column_norms(X):
    norms = np.sqrt(np.sum(X * X, axis=0))
    dead = np.flatnonzero(norms == 0.0)
    if dead.size:
        raise ValueError(f"column {int(dead[0])} has zero norm")
    return norms


def init(Y, p: int) -> BoostingState:
    """Start state: beta = 0, residual = Y, empty history."""
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 1:
        raise ValueError(f"Y must be one-dimensional, got shape {Y.shape}")
    if not np.all(np.isfinite(Y)):
        raise ValueError("Y must be finite")
    if p < 1:
        raise ValueError(f"p must be positive, got {p}")
    return BoostingState(
        k=0,
        beta=np.zeros(p),
        residual=Y.copy(),
        rho=None,
        history=(),
        history_steps=(),
    )


def correlations(X, R) -> np.ndarray:
    """Normalized correlations rho_j = <R, X_j / ||X_j||_2>."""
    X = np.asarray(X, dtype=float)
    R = np.asarray(R, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"X must be a matrix, got shape {X.shape}")
    if R.ndim != 1 or R.size != X.shape[0]:
        raise ValueError(
            f"residual length {R.size} does not match row count {X.shape[0]}"
        )
    return (X.T @ R) / _column_norms(X)


def select_index(rho) -> int:
    """Smallest index attaining the largest |rho_j|.

    Magnitudes within TIE_RTOL relative of the maximum count as tied and
    the smallest tied index wins.  An all-zero vector selects index 0; the
    caller is expected to apply a zero step in that case.
    """
    rho = np.asarray(rho, dtype=float)
    if rho.ndim != 1 or rho.size == 0:
        raise ValueError("rho must be a non-empty vector")
    mags = np.abs(rho)
    peak = float(np.max(mags))
    if peak == 0.0:
        return 0
    return int(np.flatnonzero(mags >= peak - TIE_RTOL * peak)[0])


def step(state: BoostingState, X, config: BoostingConfig) -> BoostingState:
    """One boosting iteration: select, fit bhat, move by nu * bhat.

    A zero correlation vector is a no-op (index 0, zero increment) so
    trajectories keep uniform length when the residual is exhausted.
    """
    X = np.asarray(X, dtype=float)
    norms = _column_norms(X)
    R = state.residual
    rho = state.rho if state.rho is not None else correlations(X, R)
    j = select_index(rho)
    if float(np.abs(rho[j])) == 0.0:
        return BoostingState(
            k=state.k + 1,
            beta=state.beta.copy(),
            residual=R.copy(),
            rho=rho.copy(),
            history=state.history + (j,),
            history_steps=state.history_steps + (0.0,),
        )
    bhat = float(rho[j]) / float(norms[j])
    applied = config.nu * bhat
    beta = state.beta.copy()
    beta[j] += applied
    residual = R - applied * X[:, j]
    return BoostingState(
        k=state.k + 1,
        beta=beta,
        residual=residual,
        rho=correlations(X, residual),
        history=state.history + (j,),
        history_steps=state.history_steps + (applied,),
    )


def run(
    X,
    Y,
    config: BoostingConfig,
    snapshot_dense_limit: int = 1000,
    snapshot_stride: int = 10,
) -> list[BoostingState]:
    """Iterate until max_iterations or the residual floor, with snapshots.

    Every state up to ``snapshot_dense_limit`` is kept, then every
    ``snapshot_stride``-th, and the final state always.  The k = 0 state
    opens the list so trajectories start at beta = 0.  A residual_stop
    of exactly 0 disables the early stop: once the residual underflows
    to zero the remaining iterations are recorded as no-ops, so
    trajectories keep a uniform length.
    """
    X = np.asarray(X, dtype=float)
    state = init(Y, X.shape[1])
    state = replace(state, rho=correlations(X, state.residual))
    snapshots = [state]
    while state.k < config.max_iterations and (
        config.residual_stop == 0.0
        or lq_norm(state.residual, 2) > config.residual_stop
    ):
        state = step(state, X, config)
        if state.k <= snapshot_dense_limit or state.k % snapshot_stride == 0:
            snapshots.append(state)
    if snapshots[-1] is not state:
        snapshots.append(state)
    return snapshots
