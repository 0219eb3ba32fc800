"""Hot numeric loops, JIT-compiled with numba when available.

Every kernel is written as a plain function over numpy arrays so the same
source runs on two paths: compiled with ``numba.njit`` (default when numba
imports) or interpreted as ordinary Python.  Set the environment variable
``RMADVICE_DISABLE_NUMBA=1`` before import to force the interpreted path;
``benchmarks/kernel_benchmark.py`` compares the two.
"""

from __future__ import annotations

import os

import numpy as np


def _protection_run(fare_idx, levels):
    """Run a nested protection-level policy over an arrival sequence.

    ``fare_idx`` holds 0-based fare classes, ``levels`` the nondecreasing
    cumulative booking limits.  An arrival of class ``p`` is accepted at the
    largest fraction that keeps every cumulative count at or below its level.
    Returns the per-step accepted fractions and the final cumulative counts.
    """
    m = levels.shape[0]
    T = fare_idx.shape[0]
    q = np.zeros(m)
    w = np.zeros(T)
    for t in range(T):
        p = fare_idx[t]
        room = 1.0
        for k in range(p, m):
            slack = levels[k] - q[k]
            if slack < room:
                room = slack
        if room < 0.0:
            room = 0.0
        if room > 0.0:
            for k in range(p, m):
                q[k] += room
        w[t] = room
    return w, q


def _switch_run(
    fare_idx,
    advice_counts,
    ell0,
    base_levels,
    fallback_levels,
    trigger_mult,
    cap_phase1,
    eq_tol,
):
    """Run the two-phase switching policy over an arrival sequence.

    Phase 1 books against ``base_levels`` (cumulative limits derived from an
    LP solution).  The first arrival of a class strictly above ``ell0``
    (0-based lowest advised class) whose running count exceeds
    ``trigger_mult`` times its advised count flips the policy, which then
    books against one row of ``fallback_levels``.  The row is found by
    starting from the highest class currently filled to its base level and
    walking to the first row that dominates the current bookings.

    When ``cap_phase1`` is nonzero, phase 1 additionally rejects arrivals of
    classes above ``ell0`` whose running count already exceeds the advised
    count (used by the relaxed variant, whose trigger fires later).

    Returns per-step fractions, final cumulative counts, arrival counts,
    the 1-based trigger step (0 if never), 1-based start and chosen rows of
    the fallback search (0 if never), and the number of search iterations.
    """
    m = advice_counts.shape[0]
    T = fare_idx.shape[0]
    q = np.zeros(m)
    a = np.zeros(m)
    w = np.zeros(T)
    switched = False
    tau = 0
    s_row = 0
    k_row = 0
    search_iters = 0
    for t in range(T):
        p = fare_idx[t]
        a[p] += 1.0
        if (not switched) and p > ell0 and a[p] > trigger_mult * advice_counts[p]:
            switched = True
            tau = t + 1
            s0 = 0
            for j in range(m):
                if base_levels[j] - q[j] <= eq_tol:
                    s0 = j
            k = s0
            while True:
                bad = -1
                for j in range(m):
                    if q[j] > fallback_levels[k, j] + eq_tol:
                        bad = j
                        break
                if bad < 0:
                    break
                k = bad
                search_iters += 1
                if search_iters > m:
                    break
            s_row = s0 + 1
            k_row = k + 1
        if not switched:
            if cap_phase1 != 0 and p > ell0 and a[p] > advice_counts[p]:
                room = 0.0
            else:
                room = 1.0
                for j in range(p, m):
                    slack = base_levels[j] - q[j]
                    if slack < room:
                        room = slack
        else:
            room = 1.0
            for j in range(p, m):
                slack = fallback_levels[k_row - 1, j] - q[j]
                if slack < room:
                    room = slack
        if room < 0.0:
            room = 0.0
        if room > 0.0:
            for j in range(p, m):
                q[j] += room
        w[t] = room
    return w, q, a, tau, s_row, k_row, search_iters


def _simplex_iterate(T, basis, ncols, cost_tol, pivot_tol):
    """Run Bland-rule pivots on a dense minimization tableau in place.

    The last tableau row holds reduced costs with ``-objective`` in the
    right-hand-side slot; only columns below ``ncols`` may enter.  Returns
    0 when optimal, 1 when unbounded, 2 when the iteration cap is hit.
    """
    nrows = T.shape[0] - 1
    rhs = T.shape[1] - 1
    max_iters = 50000
    for _ in range(max_iters):
        enter = -1
        for j in range(ncols):
            if T[nrows, j] < -cost_tol:
                enter = j
                break
        if enter < 0:
            return 0
        leave = -1
        best = np.inf
        for i in range(nrows):
            coef = T[i, enter]
            if coef > pivot_tol:
                ratio = T[i, rhs] / coef
                if ratio < best - 1e-15:
                    best = ratio
                    leave = i
                elif ratio <= best + 1e-15 and leave >= 0 and basis[i] < basis[leave]:
                    leave = i
        if leave < 0:
            return 1
        piv = T[leave, enter]
        for j in range(rhs + 1):
            T[leave, j] /= piv
        for i in range(nrows + 1):
            if i != leave:
                factor = T[i, enter]
                if factor != 0.0:
                    for j in range(rhs + 1):
                        T[i, j] -= factor * T[leave, j]
        basis[leave] = enter
    return 2


_DISABLED = os.environ.get("RMADVICE_DISABLE_NUMBA", "") not in ("", "0")

try:
    if _DISABLED:
        raise ImportError("numba disabled by RMADVICE_DISABLE_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

if HAS_NUMBA:
    protection_run = njit(cache=True)(_protection_run)
    switch_run = njit(cache=True)(_switch_run)
    simplex_iterate = njit(cache=True)(_simplex_iterate)
else:
    protection_run = _protection_run
    switch_run = _switch_run
    simplex_iterate = _simplex_iterate
