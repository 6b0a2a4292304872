"""Self-contained dense two-phase simplex with Bland's anti-cycling rule.

This is deliberately dependency-free and deterministic: the pivot rule is
fixed (lowest eligible index enters, lowest-index basic variable leaves on
ratio ties), so identical inputs produce bit-identical solutions.  Problem
sizes here are tiny (tens of variables and rows), so a dense tableau is the
right tool.

Convention: maximize c.x subject to A_ub x <= b_ub, A_eq x = b_eq, x >= 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = ["LpSolution", "solve_lp", "LpError"]

_PIVOT_TOL = 1e-9
_FEAS_TOL = 1e-8
_MAX_ITER = 20000


class LpError(RuntimeError):
    """Internal solver failure (iteration cap hit); should not occur under
    Bland's rule on well-posed inputs."""


@dataclass(frozen=True)
class LpSolution:
    status: str                  # "optimal" | "infeasible" | "unbounded"
    x: Optional[np.ndarray]      # primal point when optimal
    value: Optional[float]       # objective value when optimal

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"


def _pivot(T: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    piv = T[row]
    for r in range(T.shape[0]):
        if r != row and T[r, col] != 0.0:
            T[r] -= T[r, col] * piv
    basis[row] = col


def _simplex_core(T: np.ndarray, basis: np.ndarray, cost: np.ndarray,
                  allowed: np.ndarray) -> str:
    """Run Bland-rule simplex on tableau T (rows = constraints, last column =
    rhs) maximizing `cost` over columns flagged in `allowed`.

    Returns "optimal" or "unbounded".  T and basis are updated in place.
    """
    m, ncols = T.shape
    n = ncols - 1
    for _ in range(_MAX_ITER):
        # Reduced costs: z_j - c_j computed by pricing the basis.
        y = cost[basis]                    # basic objective coefficients
        reduced = y @ T[:, :n] - cost[:n]
        enter = -1
        for j in range(n):
            if allowed[j] and reduced[j] < -_PIVOT_TOL:
                enter = j
                break                       # Bland: lowest eligible index
        if enter < 0:
            return "optimal"
        # Ratio test with Bland tie-break on the leaving basic variable index.
        leave = -1
        best_ratio = np.inf
        for r in range(m):
            a = T[r, enter]
            if a > _PIVOT_TOL:
                ratio = T[r, -1] / a
                if ratio < best_ratio - _PIVOT_TOL or (
                    abs(ratio - best_ratio) <= _PIVOT_TOL
                    and (leave < 0 or basis[r] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = r
        if leave < 0:
            return "unbounded"
        _pivot(T, basis, leave, enter)
    raise LpError("simplex iteration cap exceeded")


def solve_lp(
    c: np.ndarray,
    A_ub: Optional[np.ndarray] = None,
    b_ub: Optional[np.ndarray] = None,
    A_eq: Optional[np.ndarray] = None,
    b_eq: Optional[np.ndarray] = None,
) -> LpSolution:
    """Maximize c.x over {x >= 0 : A_ub x <= b_ub, A_eq x = b_eq}."""
    c = np.asarray(c, dtype=np.float64).reshape(-1)
    n = c.size
    rows = []
    rhs = []
    kinds = []  # "ub" or "eq"
    if A_ub is not None:
        A_ub = np.asarray(A_ub, dtype=np.float64).reshape(-1, n)
        b_ub = np.asarray(b_ub, dtype=np.float64).reshape(-1)
        for r in range(A_ub.shape[0]):
            rows.append(A_ub[r])
            rhs.append(b_ub[r])
            kinds.append("ub")
    if A_eq is not None:
        A_eq = np.asarray(A_eq, dtype=np.float64).reshape(-1, n)
        b_eq = np.asarray(b_eq, dtype=np.float64).reshape(-1)
        for r in range(A_eq.shape[0]):
            rows.append(A_eq[r])
            rhs.append(b_eq[r])
            kinds.append("eq")
    m = len(rows)
    if m == 0:
        # Unconstrained over the nonnegative orthant.
        if np.any(c > 0):
            return LpSolution("unbounded", None, None)
        return LpSolution("optimal", np.zeros(n), 0.0)

    n_slack = sum(1 for k in kinds if k == "ub")
    ncols = n + n_slack + m  # one artificial per row, unused ones stay zero
    T = np.zeros((m, ncols + 1))
    basis = np.full(m, -1, dtype=np.int64)
    art_cols = []
    s = 0
    for r in range(m):
        a = rows[r].copy()
        b = rhs[r]
        slack_col = -1
        if kinds[r] == "ub":
            slack_col = n + s
            s += 1
        sign = 1.0
        if b < 0:
            sign = -1.0
            a = -a
            b = -b
        T[r, :n] = a
        if slack_col >= 0:
            T[r, slack_col] = sign
        T[r, -1] = b
        if slack_col >= 0 and sign > 0:
            basis[r] = slack_col
        else:
            col = n + n_slack + r
            T[r, col] = 1.0
            basis[r] = col
            art_cols.append(col)
        # rows with negated slack need an artificial to start feasible

    art_mask = np.zeros(ncols, dtype=bool)
    art_mask[art_cols] = True

    # Phase 1: drive artificials to zero.
    if art_cols:
        cost1 = np.zeros(ncols + 1)
        cost1[art_cols] = -1.0
        allowed = np.ones(ncols, dtype=bool)
        status = _simplex_core(T, basis, cost1, allowed)
        if status != "optimal":
            raise LpError("phase 1 cannot be unbounded")
        obj1 = float(cost1[basis] @ T[:, -1])
        if obj1 < -_FEAS_TOL:
            return LpSolution("infeasible", None, None)
        # Pivot residual artificials out of the basis where possible.
        for r in range(m):
            if art_mask[basis[r]]:
                for j in range(n + n_slack):
                    if abs(T[r, j]) > _PIVOT_TOL:
                        _pivot(T, basis, r, j)
                        break
        # Any row still basic in an artificial is redundant; freeze it by
        # keeping the artificial blocked in phase 2 (its value is ~0).

    cost2 = np.zeros(ncols + 1)
    cost2[:n] = c
    allowed = ~art_mask
    status = _simplex_core(T, basis, cost2, allowed)
    if status == "unbounded":
        return LpSolution("unbounded", None, None)
    x = np.zeros(ncols)
    x[basis] = T[:, -1]
    xr = x[:n].copy()
    return LpSolution("optimal", xr, float(c @ xr))
