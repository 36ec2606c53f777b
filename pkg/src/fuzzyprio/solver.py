"""Crisp priorities from fuzzy comparisons by max-min membership.

For a fixed consistency level ``lam`` every judgment ``(l, m, u)`` on
``w_i / w_j`` turns into two linear constraints

    (m - l) * lam * w_j - w_i + l * w_j <= 0
    (u - m) * lam * w_j + w_i - u * w_j <= 0

so the largest feasible ``lam`` is found by bisection over linear
feasibility probes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .judgments import FuzzyComparisonMatrix
from .simplex import NumericalFailure, phase_one

__all__ = [
    "SolverConfig",
    "PrioritizationResult",
    "NotConverged",
    "InvalidMatrix",
    "TooLarge",
    "NumericalFailure",
    "solve",
    "feasible_at",
    "constraint_residual",
    "oracle_lambda",
    "min_membership",
]

FEASIBILITY_TOL = 1e-10


class NotConverged(RuntimeError):
    pass


class InvalidMatrix(ValueError):
    pass


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    lambda_tolerance: float = 1e-9
    epsilon_w: float = 1e-6
    max_expansions: int = 60
    max_iterations: int = 200

    def __post_init__(self):
        if not self.lambda_tolerance > 0:
            raise ValueError("lambda_tolerance must be positive")
        if not self.epsilon_w > 0:
            raise ValueError("epsilon_w must be positive")


@dataclass(frozen=True)
class PrioritizationResult:
    weights: np.ndarray
    lambda_: float
    iterations: int
    residual: float

    @property
    def lam(self) -> float:
        return self.lambda_


def _check(matrix, config):
    if not isinstance(matrix, FuzzyComparisonMatrix):
        raise InvalidMatrix(f"expected FuzzyComparisonMatrix, got {type(matrix).__name__}")
    if not config.epsilon_w < 1.0 / matrix.n:
        raise InvalidMatrix(f"epsilon_w={config.epsilon_w} leaves no room for {matrix.n} weights")


def _linear_system(matrix: FuzzyComparisonMatrix, lam: float):
    """Coefficients ``G @ w <= 0`` of both constraint families at ``lam``."""
    pairs, l, m, u = matrix.bounds()
    l, m, u = np.array(l), np.array(m), np.array(u)
    k = len(pairs)
    G = np.zeros((2 * k, matrix.n))
    idx = np.arange(k)
    i = np.array([p[0] for p in pairs])
    j = np.array([p[1] for p in pairs])
    G[idx, i] = -1.0
    G[idx, j] = (m - l) * lam + l
    G[k + idx, i] = 1.0
    G[k + idx, j] = (u - m) * lam - u
    return G


def constraint_residual(matrix: FuzzyComparisonMatrix, weights, lam: float, epsilon_w: float = 0.0) -> float:
    """Largest violation of any constraint (pair bounds, simplex, floor) at ``(weights, lam)``."""
    w = np.asarray(weights, dtype=float)
    G = _linear_system(matrix, lam)
    worst = max(float((G @ w).max()), abs(float(w.sum()) - 1.0), float((epsilon_w - w).max()))
    return max(worst, 0.0)


def feasible_at(matrix: FuzzyComparisonMatrix, lam: float, config: SolverConfig | None = None):
    """A weight vector meeting every judgment at level ``lam``, or ``None``.

    Weights are shifted by the floor ``epsilon_w`` so the probe runs on
    ``v = w - epsilon_w >= 0``.
    """
    config = config or SolverConfig()
    _check(matrix, config)
    n, eps = matrix.n, config.epsilon_w
    G = _linear_system(matrix, lam)
    b_ub = -eps * G.sum(axis=1)
    res = phase_one(G, b_ub, np.ones((1, n)), [1.0 - n * eps])
    if res.infeasibility > FEASIBILITY_TOL:
        return None
    w = res.x + eps
    return w / w.sum()


def solve(matrix: FuzzyComparisonMatrix, config: SolverConfig | None = None) -> PrioritizationResult:
    """Maximise the consistency index over the weight simplex.

    Probes ``lam = 1`` first (the membership peak); otherwise brackets the
    optimum in ``[-2, 1]``, doubling the lower end until feasible, and
    bisects to ``lambda_tolerance``. The reported index is the feasible
    end of the final bracket and the weights are its witness.
    """
    config = config or SolverConfig()
    _check(matrix, config)
    iterations = 1
    w = feasible_at(matrix, 1.0, config)
    if w is not None:
        return _result(matrix, w, 1.0, iterations, config)

    hi, lo = 1.0, -2.0
    expansions = 0
    while True:
        iterations += 1
        w = feasible_at(matrix, lo, config)
        if w is not None:
            break
        expansions += 1
        if expansions > config.max_expansions:
            raise NotConverged(f"no feasible level found down to {lo}")
        hi, lo = lo, 2.0 * lo

    while hi - lo > config.lambda_tolerance:
        if iterations >= config.max_iterations:
            raise NotConverged(f"bracket [{lo}, {hi}] still wider than tolerance after {iterations} probes")
        iterations += 1
        mid = 0.5 * (lo + hi)
        probe = feasible_at(matrix, mid, config)
        if probe is None:
            hi = mid
        else:
            lo, w = mid, probe
    return _result(matrix, w, lo, iterations, config)


def _result(matrix, w, lam, iterations, config):
    residual = constraint_residual(matrix, w, lam, config.epsilon_w)
    return PrioritizationResult(weights=w, lambda_=float(lam), iterations=iterations, residual=residual)


def min_membership(matrix: FuzzyComparisonMatrix, weights) -> np.ndarray:
    """Smallest membership over all pairs, for one weight vector or a stack of them."""
    W = np.atleast_2d(np.asarray(weights, dtype=float))
    pairs, l, m, u = matrix.bounds()
    out = np.full(W.shape[0], np.inf)
    for (i, j), lo, mid, up in zip(pairs, l, m, u):
        r = W[:, i] / W[:, j]
        mu = np.where(r <= mid, (r - lo) / (mid - lo), (up - r) / (up - mid))
        np.minimum(out, mu, out=out)
    return out


def _compositions(total: int, parts: int) -> np.ndarray:
    """All nonnegative integer vectors of length ``parts`` summing to ``total``."""
    if parts == 1:
        return np.array([[total]])
    if parts == 2:
        a = np.arange(total + 1)
        return np.column_stack([a, total - a])
    blocks = [np.column_stack([np.full(total - k + 1, k), _compositions(total - k, parts - 1)])
              for k in range(total + 1)]
    return np.vstack(blocks)


def oracle_lambda(matrix: FuzzyComparisonMatrix, grid_steps: int = 500, epsilon_w: float = 1e-6) -> float:
    """Brute-force max-min membership over a barycentric grid of the simplex.

    Independent of the bisection path: evaluates the membership function
    directly at every grid point (weights floored at ``epsilon_w``).
    Exponential in the item count, so limited to ``n <= 4``.
    """
    n = matrix.n
    if n > 4:
        raise TooLarge(f"oracle supports n <= 4, got {n}")
    if grid_steps < 100:
        raise ValueError("grid_steps must be at least 100")
    best = -math.inf
    # chunk on the first coordinate to bound memory
    for k in range(grid_steps + 1):
        rest = _compositions(grid_steps - k, n - 1)
        pts = np.column_stack([np.full(rest.shape[0], k), rest]) / grid_steps
        pts = np.maximum(pts, epsilon_w)
        best = max(best, float(min_membership(matrix, pts).max()))
    return best
