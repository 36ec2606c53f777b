"""Dense-tableau phase-one simplex for linear feasibility.

Finds ``x >= 0`` with ``A_ub @ x <= b_ub`` and ``A_eq @ x == b_eq`` by
minimising the total artificial slack. Bland's rule picks both the entering
and leaving variable, so the method cannot cycle on degenerate problems.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PIVOT_TOL = 1e-11
COST_TOL = 1e-12


class NumericalFailure(ArithmeticError):
    """Pivoting broke down (iteration cap hit or an unusable pivot element)."""


@dataclass
class PhaseOneResult:
    x: np.ndarray
    infeasibility: float
    pivots: int


def phase_one(A_ub, b_ub, A_eq=None, b_eq=None, max_pivots=None) -> PhaseOneResult:
    A_ub = np.atleast_2d(np.asarray(A_ub, dtype=float))
    b_ub = np.asarray(b_ub, dtype=float).ravel()
    n = A_ub.shape[1]
    if A_eq is None:
        A_eq = np.zeros((0, n))
        b_eq = np.zeros(0)
    A_eq = np.atleast_2d(np.asarray(A_eq, dtype=float)).reshape(-1, n)
    b_eq = np.asarray(b_eq, dtype=float).ravel()

    m_ub, m_eq = A_ub.shape[0], A_eq.shape[0]
    m = m_ub + m_eq

    # columns: x (n) | slacks (m_ub) | artificials (one per row that needs one)
    flip_ub = b_ub < 0
    needs_art = np.concatenate([flip_ub, np.ones(m_eq, dtype=bool)])
    n_art = int(needs_art.sum())
    width = n + m_ub + n_art

    T = np.zeros((m + 1, width + 1))
    T[:m_ub, :n] = A_ub
    T[:m_ub, n:n + m_ub] = np.eye(m_ub)
    T[:m_ub, -1] = b_ub
    T[m_ub:m, :n] = A_eq
    T[m_ub:m, -1] = b_eq
    flip = np.concatenate([flip_ub, b_eq < 0])
    T[:m][flip] *= -1.0

    basis = np.empty(m, dtype=int)
    art_col = n + m_ub
    for r in range(m):
        if needs_art[r]:
            T[r, art_col] = 1.0
            basis[r] = art_col
            art_col += 1
        else:
            basis[r] = n + r

    # reduced costs of the phase-one objective (sum of artificials)
    art_rows = needs_art
    T[-1, :] = -T[:m][art_rows].sum(axis=0)
    T[-1, n + m_ub:width] = 0.0

    if max_pivots is None:
        max_pivots = 50 * (m + width) + 100
    pivots = 0
    while True:
        costs = T[-1, :width]
        candidates = np.flatnonzero(costs < -COST_TOL)
        if candidates.size == 0:
            break
        col = candidates[0]
        column = T[:m, col]
        rows = np.flatnonzero(column > PIVOT_TOL)
        if rows.size == 0:
            # phase-one objective is bounded below by zero, so this is round-off
            raise NumericalFailure("unbounded direction in phase one")
        ratios = T[rows, -1] / column[rows]
        best = ratios.min()
        tied = rows[ratios <= best + 1e-14 * max(1.0, abs(best))]
        row = tied[np.argmin(basis[tied])]
        _pivot(T, row, col)
        basis[row] = col
        pivots += 1
        if pivots > max_pivots:
            raise NumericalFailure(f"no convergence after {pivots} pivots")

    values = np.zeros(width)
    values[basis] = T[:m, -1]
    x = np.clip(values[:n], 0.0, None)
    infeasibility = float(max(values[n + m_ub:].sum(), 0.0))
    return PhaseOneResult(x=x, infeasibility=infeasibility, pivots=pivots)


def _pivot(T, row, col):
    pivot = T[row, col]
    if not np.isfinite(pivot) or abs(pivot) <= PIVOT_TOL:
        raise NumericalFailure(f"pivot element {pivot!r} unusable")
    T[row] /= pivot
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, T[row])
