"""Lasso by cyclic coordinate descent, plus a geometric penalty path.

The objective is ||Y - X b||_2^2 + lam * ||b||_1 with no sample-size
normalization, so the soft-threshold level is lam / 2 and the smallest
penalty with an all-zero solution is lambda_max = 2 * max_j |<X_j, Y>|.
Minimum-l1 interpolation (basis pursuit) is realized as the terminal
point of a decaying path followed by a least-squares polish on the
detected support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import least_squares_on_support, lq_norm

# Slack for the per-sweep objective monotonicity guard, relative to the
# current objective scale.  Exact arithmetic decreases the objective
# every sweep; anything beyond roundoff signals a broken update.
_OBJECTIVE_SLACK = 1e-10


@dataclass(frozen=True)
class LassoConfig:
    """Penalty and convergence control for a single solve."""

    lam: float
    max_sweeps: int = 100_000
    kkt_tolerance: float = 1e-10
    warm_start: np.ndarray | None = None

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0.0):
            raise ValueError(f"lam must be positive and finite, got {self.lam}")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be at least 1")
        if self.kkt_tolerance <= 0.0:
            raise ValueError("kkt_tolerance must be positive")


@dataclass(frozen=True)
class LassoPathConfig:
    """Geometric path from lambda_max down to lambda_min.

    The path starts at lambda_max_factor * 2 * max_j |<X_j, Y>|, decays
    by ``decay`` per point, and the final point is clamped to exactly
    ``lambda_min`` so callers can rely on the terminal penalty.
    """

    lambda_min: float
    lambda_max_factor: float = 1.0
    decay: float = 0.5
    max_sweeps: int = 100_000
    kkt_tolerance: float = 1e-10

    def __post_init__(self):
        if not (math.isfinite(self.lambda_min) and self.lambda_min > 0.0):
            raise ValueError("lambda_min must be positive and finite")
        if self.lambda_max_factor <= 0.0:
            raise ValueError("lambda_max_factor must be positive")
        if not 0.0 < self.decay < 1.0:
            raise ValueError(f"decay must lie in (0, 1), got {self.decay}")


class LassoFit(NamedTuple):
    beta: np.ndarray
    objective: float
    sweeps: int
    converged: bool
    kkt: float


class PathPoint(NamedTuple):
    lam: float
    beta: np.ndarray
    converged: bool
    kkt: float
    sweeps: int


def _soft(value: float, threshold: float) -> float:
    mag = abs(value) - threshold
    if mag <= 0.0:
        return 0.0
    return math.copysign(mag, value)


def objective_value(X, Y, b, lam: float) -> float:
    r = np.asarray(Y, dtype=float) - np.asarray(X, dtype=float) @ np.asarray(b, dtype=float)
    return float(r @ r + lam * np.sum(np.abs(b)))


def kkt_residual(X, Y, b, lam: float) -> float:
    """Distance to stationarity for the penalized objective.

    For b_j = 0 the gradient must sit inside [-lam/2, lam/2]; for
    b_j != 0 it must equal (lam/2) * sign(b_j).  Returns the largest
    violation over coordinates, 0 at an exact minimizer.
    """
    X = np.asarray(X, dtype=float)
    b = np.asarray(b, dtype=float)
    r = np.asarray(Y, dtype=float) - X @ b
    g = X.T @ r
    half = 0.5 * lam
    slack = np.where(
        b == 0.0,
        np.maximum(np.abs(g) - half, 0.0),
        np.abs(g - half * np.sign(b)),
    )
    return float(np.max(slack))


def lambda_max(X, Y) -> float:
    """Smallest penalty whose solution is identically zero."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    return 2.0 * float(np.max(np.abs(X.T @ Y)))


def lasso(X, Y, config: LassoConfig) -> LassoFit:
    """Cyclic coordinate descent with an in-place residual.

    Coordinates sweep in fixed order 0..p-1.  The run stops when the
    stationarity residual reaches ``kkt_tolerance``; hitting max_sweeps
    first returns the current iterate with ``converged=False`` rather
    than raising.  A sweep that increases the objective beyond roundoff
    raises RuntimeError since the update rule forbids it.
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.ndim != 2 or Y.ndim != 1 or Y.size != X.shape[0]:
        raise ValueError(
            f"incompatible shapes: X {X.shape}, Y {np.shape(Y)}"
        )
    p = X.shape[1]
    col_sq = np.sum(X * X, axis=0)
    dead = np.flatnonzero(col_sq == 0.0)
    if dead.size:
        raise ValueError(f"column {int(dead[0])} has zero norm")
    if config.warm_start is not None:
        b = np.asarray(config.warm_start, dtype=float).copy()
        if b.shape != (p,):
            raise ValueError(
                f"warm start has shape {b.shape}, expected {(p,)}"
            )
        r = Y - X @ b
    else:
        b = np.zeros(p)
        r = Y.copy()
    half = 0.5 * config.lam
    prev_obj = float(r @ r + config.lam * np.sum(np.abs(b)))
    kkt = math.inf
    for sweep in range(1, config.max_sweeps + 1):
        for j in range(p):
            old = b[j]
            full_corr = float(X[:, j] @ r) + col_sq[j] * old
            new = _soft(full_corr, half) / col_sq[j]
            if new != old:
                r += (old - new) * X[:, j]
                b[j] = new
        obj = float(r @ r + config.lam * np.sum(np.abs(b)))
        if obj > prev_obj + _OBJECTIVE_SLACK * (1.0 + abs(prev_obj)):
            raise RuntimeError(
                f"coordinate sweep {sweep} increased the objective "
                f"from {prev_obj!r} to {obj!r}"
            )
        prev_obj = obj
        g = X.T @ r
        slack = np.where(
            b == 0.0,
            np.maximum(np.abs(g) - half, 0.0),
            np.abs(g - half * np.sign(b)),
        )
        kkt = float(np.max(slack))
        if kkt <= config.kkt_tolerance:
            return LassoFit(beta=b, objective=obj, sweeps=sweep, converged=True, kkt=kkt)
    return LassoFit(beta=b, objective=prev_obj, sweeps=config.max_sweeps, converged=False, kkt=kkt)


def lasso_path(X, Y, config: LassoPathConfig) -> list[PathPoint]:
    """Warm-started solves along a geometrically decaying penalty grid."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    start = config.lambda_max_factor * lambda_max(X, Y)
    if start == 0.0:
        # Y is orthogonal to every column; the whole path is zero.
        return [PathPoint(config.lambda_min, np.zeros(X.shape[1]), True, 0.0, 0)]
    if config.lambda_min >= start:
        raise ValueError(
            f"lambda_min {config.lambda_min!r} is not below the path start {start!r}"
        )
    grid = [start]
    while grid[-1] * config.decay > config.lambda_min:
        grid.append(grid[-1] * config.decay)
    grid.append(config.lambda_min)
    points: list[PathPoint] = []
    warm = np.zeros(X.shape[1])
    for lam in grid:
        fit = lasso(
            X,
            Y,
            LassoConfig(
                lam=lam,
                max_sweeps=config.max_sweeps,
                kkt_tolerance=config.kkt_tolerance,
                warm_start=warm,
            ),
        )
        warm = fit.beta
        points.append(
            PathPoint(lam=lam, beta=fit.beta, converged=fit.converged, kkt=fit.kkt, sweeps=fit.sweeps)
        )
    return points


def basis_pursuit(
    X,
    Y,
    config: LassoPathConfig,
    support_threshold_factor: float = 1e-6,
) -> np.ndarray:
    """Minimum-l1 interpolation via the terminal path point plus polish.

    The terminal solution's support (entries above
    ``support_threshold_factor * max_j |b_j|``) is refit by least
    squares; the polished vector must reproduce Y to 1e-8 relative or
    the path did not get close enough and the caller should lower
    ``lambda_min``.
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    y_norm = lq_norm(Y, 2)
    if y_norm == 0.0:
        return np.zeros(X.shape[1])
    terminal = lasso_path(X, Y, config)[-1].beta
    peak = float(np.max(np.abs(terminal)))
    support = tuple(
        int(j) for j in np.flatnonzero(np.abs(terminal) > support_threshold_factor * peak)
    )
    fit = least_squares_on_support(X, Y, support)
    polished = np.zeros(X.shape[1])
    polished[list(support)] = fit.coeffs
    if lq_norm(Y - X @ polished, 2) > 1e-8 * y_norm:
        raise RuntimeError(
            "terminal path solution did not reach a feasible interpolant; "
            "decrease lambda_min"
        )
    return polished
