"""Sparse exact rank computation over the rationals.

Betti numbers must not depend on floating-point rank decisions, so boundary
ranks are computed by fraction-arithmetic Gaussian elimination with a
minimum-fill pivot heuristic.  Inputs here are tiny rationals (boundary
entries are signs), which keeps intermediate entries small in practice.
"""

from __future__ import annotations

import heapq
from fractions import Fraction


def rational_rank(rows) -> int:
    """Rank over the rationals of a sparse matrix.

    ``rows`` is an iterable of ``{column: value}`` dicts; values may be ints
    or Fractions.  The input is consumed destructively on a private copy.
    """
    live: dict[int, dict[int, Fraction]] = {}
    for i, row in enumerate(rows):
        cleaned = {c: Fraction(v) for c, v in row.items() if v}
        if cleaned:
            live[i] = cleaned
    col_rows: dict[int, set[int]] = {}
    for i, row in live.items():
        for c in row:
            col_rows.setdefault(c, set()).add(i)

    heap = [(len(row), i) for i, row in live.items()]
    heapq.heapify(heap)
    rank = 0
    while heap:
        nnz, i = heapq.heappop(heap)
        row = live.get(i)
        if row is None or len(row) != nnz:
            if row is not None:
                heapq.heappush(heap, (len(row), i))
            continue
        # pivot column: fewest other live rows touching it
        pivot_col = min(row, key=lambda c: (len(col_rows[c]), c))
        pivot_val = row[pivot_col]
        rank += 1
        del live[i]
        for c in row:
            col_rows[c].discard(i)
        targets = list(col_rows[pivot_col])
        for j in targets:
            other = live[j]
            factor = other[pivot_col] / pivot_val
            for c, v in row.items():
                cur = other.get(c)
                if cur is None:
                    other[c] = -factor * v
                    col_rows[c].add(j)
                else:
                    cur -= factor * v
                    if cur:
                        other[c] = cur
                    else:
                        del other[c]
                        col_rows[c].discard(j)
            if other:
                heapq.heappush(heap, (len(other), j))
            else:
                del live[j]
    return rank
