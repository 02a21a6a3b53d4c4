"""Gated minimum-cost bipartite assignment.

The heavy lifting is scipy's Hungarian solver; this module adds the semantics
the tracker needs on top of it: an explicit FORBIDDEN sentinel (never a large
finite cost the solver could trade away), rectangular inputs, maximum-cardinality
-then-minimum-cost optimality, and a deterministic canonical choice among
equal-cost optima (lowest row index first, then lowest column index).
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

# Sentinel for pairings that must never be made, regardless of other costs.
FORBIDDEN = float("inf")


@dataclass(frozen=True)
class AssignmentResult:
    """Matched (row, col) pairs plus the leftovers, sorted ascending."""

    matches: tuple[tuple[int, int], ...]
    unmatched_rows: tuple[int, ...]
    unmatched_cols: tuple[int, ...]
    total_cost: float


def gate_costs(costs: np.ndarray, max_cost: float) -> np.ndarray:
    """Return a copy of `costs` with every entry above `max_cost` FORBIDDEN.

    Entries exactly at max_cost stay admissible.
    """
    if max_cost < 0:
        raise ValueError(f"max_cost must be >= 0, got {max_cost}")
    costs = np.asarray(costs, dtype=np.float64)
    return np.where(costs > max_cost, FORBIDDEN, costs)


def _validate(costs: np.ndarray) -> np.ndarray:
    if costs.ndim != 2:
        raise ValueError(f"cost matrix must be 2-D, got shape {costs.shape}")
    if np.any(np.isnan(costs)):
        raise ValueError("cost matrix contains NaN")
    finite = np.isfinite(costs)
    if np.any(costs[finite] < 0):
        raise ValueError("finite costs must be non-negative")
    return finite


def _canonicalize(costs: np.ndarray, pairs: list[tuple[int, int]]):
    """Rewrite `pairs` into the canonical optimum for tie-broken determinism.

    Exact-equality cost ties are resolved so lower row indices end up with
    lower column indices. Each move strictly decreases the sorted pair list
    lexicographically, so the sweep terminates.
    """
    pairs.sort()
    matched_rows = {i for i, _ in pairs}
    changed = True
    while changed:
        changed = False
        # Pull a match up to an earlier unmatched row at identical cost.
        for k, (i, j) in enumerate(pairs):
            for i2 in range(i):
                if i2 not in matched_rows and np.isfinite(costs[i2, j]) \
                        and costs[i2, j] == costs[i, j]:
                    matched_rows.discard(i)
                    matched_rows.add(i2)
                    pairs[k] = (i2, j)
                    changed = True
                    break
        pairs.sort()
        # Slide a match left to an unmatched column at identical cost.
        matched_cols = {j for _, j in pairs}
        for k, (i, j) in enumerate(pairs):
            for j2 in range(j):
                if j2 not in matched_cols and np.isfinite(costs[i, j2]) \
                        and costs[i, j2] == costs[i, j]:
                    matched_cols.discard(j)
                    matched_cols.add(j2)
                    pairs[k] = (i, j2)
                    changed = True
                    break
        # Swap columns between two matches when the totals tie exactly.
        for a in range(len(pairs)):
            for b in range(a + 1, len(pairs)):
                (i1, j1), (i2, j2) = pairs[a], pairs[b]
                if j2 < j1 and np.isfinite(costs[i1, j2]) and np.isfinite(costs[i2, j1]) \
                        and costs[i1, j2] + costs[i2, j1] == costs[i1, j1] + costs[i2, j2]:
                    pairs[a] = (i1, j2)
                    pairs[b] = (i2, j1)
                    changed = True
        pairs.sort()


def solve_assignment(costs: np.ndarray) -> AssignmentResult:
    """Optimal matching of rows to columns under FORBIDDEN constraints.

    Among all matchings that avoid FORBIDDEN entries, returns one of maximum
    cardinality and, within that, minimum total cost. Deterministic: exact
    cost ties are broken toward the lowest row index, then lowest column
    index. Rows and columns left over are reported unmatched.
    """
    costs = np.asarray(costs, dtype=np.float64)
    finite = _validate(costs)
    rows, cols = costs.shape
    if rows == 0 or cols == 0 or not finite.any():
        return AssignmentResult(
            matches=(),
            unmatched_rows=tuple(range(rows)),
            unmatched_cols=tuple(range(cols)),
            total_cost=0.0,
        )

    # Square padding. Forbidden entries get a cost exceeding any possible
    # finite total, so the solver minimizes the number of forbidden pairs it
    # is forced through before it minimizes real cost; dummy rows/columns are
    # free. Every padded solution then maps back to a maximum-cardinality
    # minimum-cost matching once forbidden and dummy pairs are dropped.
    n = max(rows, cols)
    big = float(costs[finite].sum()) + 1.0
    padded = np.zeros((n, n), dtype=np.float64)
    padded[:rows, :cols] = np.where(finite, costs, big)
    row_ind, col_ind = linear_sum_assignment(padded)

    pairs = [
        (int(i), int(j))
        for i, j in zip(row_ind, col_ind)
        if i < rows and j < cols and finite[i, j]
    ]
    _canonicalize(costs, pairs)

    total = 0.0
    for i, j in pairs:  # row-ascending accumulation keeps totals reproducible
        total += float(costs[i, j])
    matched_r = {i for i, _ in pairs}
    matched_c = {j for _, j in pairs}
    return AssignmentResult(
        matches=tuple(pairs),
        unmatched_rows=tuple(i for i in range(rows) if i not in matched_r),
        unmatched_cols=tuple(j for j in range(cols) if j not in matched_c),
        total_cost=total,
    )
