"""Self-contained dense two-phase primal simplex solver.

Solves ``max/min c @ x`` subject to per-row ``<=`` / ``>=`` constraints,
``x >= 0`` and optional finite upper bounds (folded in as extra rows).
Phase 1 minimizes artificial variables to find a basic feasible point;
both phases pivot with Bland's anti-cycling rule.  Rows are normalized by
their largest coefficient magnitude before the tableau is built.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import simplex_iterate

FEAS_TOL = 1e-9
COST_TOL = 1e-9
PIVOT_TOL = 1e-11


class SolverError(RuntimeError):
    """Numerical failure inside the solver (iteration cap, bad pivot)."""


@dataclass
class SimplexResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    objective: float
    x: np.ndarray


def solve_simplex(c, A, senses, b, upper=None, maximize=True) -> SimplexResult:
    """Solve a dense LP with nonnegative variables.

    Args:
        c: objective coefficients, length ``nvars``.
        A: constraint matrix, shape ``(nrows, nvars)`` (may be empty).
        senses: per-row "<=" or ">=".
        b: right-hand sides, length ``nrows``.
        upper: optional per-variable upper bounds (``np.inf`` for none).
        maximize: objective sense.
    """
    c = np.asarray(c, dtype=float)
    nvars = c.shape[0]
    A = np.asarray(A, dtype=float).reshape(-1, nvars)
    b = np.asarray(b, dtype=float).copy()
    senses = list(senses)
    if A.shape[0] != len(senses) or A.shape[0] != b.shape[0]:
        raise ValueError("constraint rows, senses, and rhs must align")

    rows = [A[i].copy() for i in range(A.shape[0])]
    rhs = list(b)
    row_senses = list(senses)
    if upper is not None:
        upper = np.asarray(upper, dtype=float)
        for j in range(nvars):
            if np.isfinite(upper[j]):
                bound_row = np.zeros(nvars)
                bound_row[j] = 1.0
                rows.append(bound_row)
                rhs.append(float(upper[j]))
                row_senses.append("<=")

    nrows = len(rows)
    M = np.array(rows, dtype=float).reshape(nrows, nvars)
    rv = np.array(rhs, dtype=float)

    # Normalize ">=" rows to "<=" and scale each row by its largest entry.
    for i in range(nrows):
        if row_senses[i] == ">=":
            M[i] = -M[i]
            rv[i] = -rv[i]
        elif row_senses[i] != "<=":
            raise ValueError("row sense must be '<=' or '>='")
        scale = np.max(np.abs(M[i]))
        if scale > 0.0:
            M[i] /= scale
            rv[i] /= scale

    # Standard form: M x + s = rv with s >= 0; rows with negative rhs get
    # negated (slack coefficient -1) and an artificial variable.
    art_rows = [i for i in range(nrows) if rv[i] < 0.0]
    nart = len(art_rows)
    ncols = nvars + nrows  # structural + slack columns; artificials follow
    total = ncols + nart
    T = np.zeros((nrows + 1, total + 1))
    basis = np.empty(nrows, dtype=np.int64)
    ai = 0
    for i in range(nrows):
        sign = -1.0 if rv[i] < 0.0 else 1.0
        T[i, :nvars] = sign * M[i]
        T[i, nvars + i] = sign
        T[i, total] = sign * rv[i]
        if rv[i] < 0.0:
            T[i, ncols + ai] = 1.0
            basis[i] = ncols + ai
            ai += 1
        else:
            basis[i] = nvars + i

    if nart > 0:
        # Phase 1: minimize the sum of artificials.  Reduced costs start as
        # the phase-1 objective minus the rows of the (artificial) basis.
        for i in range(nrows):
            if basis[i] >= ncols:
                T[nrows] -= T[i]
        for j in range(ncols, total):
            T[nrows, j] = 0.0
        status = simplex_iterate(T, basis, total, COST_TOL, PIVOT_TOL)
        if status == 2:
            raise SolverError("phase-1 iteration cap exceeded")
        phase1_obj = -T[nrows, total]
        if phase1_obj > 1e-7:
            return SimplexResult(status="infeasible", objective=np.nan, x=np.full(nvars, np.nan))
        # Pivot remaining basic artificials out where possible; rows whose
        # non-artificial coefficients vanished are redundant and inert.
        for i in range(nrows):
            if basis[i] >= ncols:
                for j in range(ncols):
                    if abs(T[i, j]) > 10.0 * PIVOT_TOL:
                        piv = T[i, j]
                        T[i] /= piv
                        for r in range(nrows + 1):
                            if r != i and T[r, j] != 0.0:
                                T[r] -= T[r, j] * T[i]
                        basis[i] = j
                        break

    # Phase 2: restore the true objective relative to the current basis.
    obj = np.zeros(total + 1)
    obj[:nvars] = -c if maximize else c
    for i in range(nrows):
        col = basis[i]
        if col < nvars and obj[col] != 0.0:
            obj -= obj[col] * T[i]
    T[nrows] = obj
    status = simplex_iterate(T, basis, ncols, COST_TOL, PIVOT_TOL)
    if status == 2:
        raise SolverError("phase-2 iteration cap exceeded")
    if status == 1:
        return SimplexResult(status="unbounded", objective=np.inf if maximize else -np.inf,
                             x=np.full(nvars, np.nan))

    x_full = np.zeros(total)
    for i in range(nrows):
        x_full[basis[i]] = T[i, total]
    x = np.where(np.abs(x_full[:nvars]) < 1e-12, 0.0, x_full[:nvars])
    value = float(c @ x)
    return SimplexResult(status="optimal", objective=value, x=x)
