"""Dense two-phase simplex for the desk-scale linear programs used here.

Problems have at most a few dozen free variables (polynomial coefficients
plus an error scalar) and on the order of a hundred inequality rows, so a
plain dense tableau with Bland's anti-cycling rule is both sufficient and
easy to audit.  Free variables are split into positive parts internally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["LPSolution", "solve_linear_program"]

_PIVOT_TOL = 1e-9
_COST_TOL = 1e-9
_PHASE1_TOL = 1e-7


@dataclass(frozen=True)
class LPSolution:
    """Solution of min c.x subject to A_eq x = b_eq, A_ub x <= b_ub (x free)."""

    x: np.ndarray
    objective: float
    status: str  # "optimal" | "infeasible" | "iteration_limit"
    iterations: int
    max_equality_violation: float
    max_inequality_violation: float


def _pivot(tableau: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    for r in range(tableau.shape[0]):
        if r != row and abs(tableau[r, col]) > 0.0:
            tableau[r] -= tableau[r, col] * tableau[row]
    basis[row] = col


def _bland_iterate(
    tableau: np.ndarray, basis: np.ndarray, cost: np.ndarray, max_iter: int
) -> tuple[str, int]:
    """Run primal simplex on the tableau in place; cost is a full-length row."""
    m = tableau.shape[0]
    for iteration in range(max_iter):
        reduced = cost - cost[basis] @ tableau[:, :-1]
        entering = -1
        for j, rj in enumerate(reduced):
            if rj < -_COST_TOL:
                entering = j
                break
        if entering < 0:
            return "optimal", iteration
        ratios = np.full(m, np.inf)
        col = tableau[:, entering]
        positive = col > _PIVOT_TOL
        ratios[positive] = tableau[positive, -1] / col[positive]
        best = np.inf
        leave = -1
        for r in range(m):
            if ratios[r] < best - 1e-15 or (
                ratios[r] <= best + 1e-15 and leave >= 0 and basis[r] < basis[leave]
            ):
                if np.isfinite(ratios[r]):
                    best = ratios[r]
                    leave = r
        if leave < 0:
            return "unbounded", iteration
        _pivot(tableau, basis, leave, entering)
    return "iteration_limit", max_iter


def solve_linear_program(
    c: np.ndarray,
    A_eq: np.ndarray | None = None,
    b_eq: np.ndarray | None = None,
    A_ub: np.ndarray | None = None,
    b_ub: np.ndarray | None = None,
    max_iter: int = 20_000,
) -> LPSolution:
    """Two-phase dense simplex over free variables.

    Every variable is split as x = u - v with u, v >= 0; inequality rows
    receive slack variables; phase one minimizes artificial variables to
    find a feasible basis, phase two the true objective.
    """
    c = np.asarray(c, dtype=np.float64)
    n = c.shape[0]
    A_eq = np.zeros((0, n)) if A_eq is None else np.asarray(A_eq, dtype=np.float64)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=np.float64)
    A_ub = np.zeros((0, n)) if A_ub is None else np.asarray(A_ub, dtype=np.float64)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=np.float64)
    m_eq, m_ub = A_eq.shape[0], A_ub.shape[0]
    m = m_eq + m_ub

    # standard form: columns are [u (n), v (n), slack (m_ub), artificial (m)]
    A = np.vstack([A_eq, A_ub])
    split = np.hstack([A, -A])
    slack = np.zeros((m, m_ub))
    slack[m_eq:, :] = np.eye(m_ub)
    b = np.concatenate([b_eq, b_ub]).astype(np.float64)
    body = np.hstack([split, slack])
    negative = b < 0
    body[negative] *= -1.0
    b = np.abs(b)
    total = body.shape[1]
    tableau = np.hstack([body, np.eye(m), b[:, None]])
    basis = np.arange(total, total + m)

    phase1_cost = np.zeros(total + m)
    phase1_cost[total:] = 1.0
    status, it1 = _bland_iterate(tableau, basis, phase1_cost, max_iter)
    phase1_value = float(phase1_cost[basis] @ tableau[:, -1])
    if status == "iteration_limit" or phase1_value > _PHASE1_TOL:
        x = np.zeros(n)
        return LPSolution(x, float("nan"), "infeasible" if status == "optimal" else status, it1, float("inf"), float("inf"))

    # drive lingering artificial variables out of the basis; a row where no
    # structural pivot exists is redundant (all zeros after phase one) and
    # can be dropped outright
    drop_rows = []
    for r in range(m):
        if basis[r] >= total:
            pivot_col = -1
            for j in range(total):
                if abs(tableau[r, j]) > _PIVOT_TOL:
                    pivot_col = j
                    break
            if pivot_col >= 0:
                _pivot(tableau, basis, r, pivot_col)
            else:
                drop_rows.append(r)
    if drop_rows:
        keep_rows = [r for r in range(m) if r not in drop_rows]
        tableau = tableau[keep_rows]
        basis = basis[keep_rows]
    keep = np.concatenate([np.arange(total), [tableau.shape[1] - 1]])
    tableau = tableau[:, keep]

    phase2_cost = np.zeros(total)
    phase2_cost[:n] = c
    phase2_cost[n : 2 * n] = -c
    status, it2 = _bland_iterate(tableau, basis, phase2_cost, max_iter)
    if status == "unbounded":
        x = np.zeros(n)
        return LPSolution(x, float("-inf"), "unbounded", it1 + it2, float("inf"), float("inf"))

    full = np.zeros(total)
    for r, bi in enumerate(basis):
        if bi < total:
            full[bi] = tableau[r, -1]
    x = full[:n] - full[n : 2 * n]
    eq_violation = float(np.max(np.abs(A_eq @ x - b_eq), initial=0.0))
    ub_violation = float(np.max(A_ub @ x - b_ub, initial=0.0))
    return LPSolution(
        x=x,
        objective=float(c @ x),
        status="optimal" if status == "optimal" else status,
        iterations=it1 + it2,
        max_equality_violation=eq_violation,
        max_inequality_violation=max(ub_violation, 0.0),
    )
