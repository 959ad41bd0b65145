"""Dense F2 linear algebra on Python-int bit rows.

Rows are ints; bit c is column c.  Everything here is exact and
deterministic.  The coset minimum-weight search dispatches to the compiled
kernel when present.
"""

from __future__ import annotations

from . import _core


def rank(rows) -> int:
    """Rank of the matrix whose rows are the given bit masks."""
    pivots: list[int] = []
    r = 0
    for row in rows:
        for p in pivots:
            low = p & -p
            if row & low:
                row ^= p
        if row:
            pivots.append(row)
            r += 1
    return r


def solve(rows, rhs_bits: int, ncols: int):
    """Solve row_i . x = rhs_i over F2.

    Returns (particular, kernel_basis) with particular an int over ncols
    bits and kernel_basis a list of ints, or None when inconsistent.
    rhs_bits packs the right-hand side, bit i for equation i.
    """
    reduced: list[tuple[int, int]] = []  # (mask, b) in echelon form, pivot = lowest set bit
    for i, mask in enumerate(rows):
        b = (rhs_bits >> i) & 1
        for rmask, rb in reduced:
            low = rmask & -rmask
            if mask & low:
                mask ^= rmask
                b ^= rb
        if mask == 0:
            if b:
                return None
            continue
        low = mask & -mask
        # keep reduced rows fully reduced against the new pivot
        for j, (rmask, rb) in enumerate(reduced):
            if rmask & low:
                reduced[j] = (rmask ^ mask, rb ^ b)
        reduced.append((mask, b))

    pivot_cols = set()
    particular = 0
    for mask, b in reduced:
        c = (mask & -mask).bit_length() - 1
        pivot_cols.add(c)
        if b:
            particular |= 1 << c
    basis = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        v = 1 << f
        for mask, _ in reduced:
            if (mask >> f) & 1:
                c = (mask & -mask).bit_length() - 1
                v |= 1 << c
        basis.append(v)
    return particular, basis


def coset_min_weight(start: int, basis, width: int) -> tuple[int, int]:
    """Minimum-weight vector in start + span(basis), exhaustively.

    Returns (weight, vector).  Ties broken toward the smaller integer
    value.  Cost is 2^len(basis) Gray-code steps.
    """
    return _core.coset_min_weight(start, list(basis), width)


def greedy_min_weight(start: int, basis) -> int:
    """Descend from start by single basis-vector XORs until no move improves.

    Improvement means smaller (weight, integer value).  Deterministic given
    the basis order; not guaranteed optimal.
    """
    cur = start
    cw = cur.bit_count()
    improved = True
    while improved:
        improved = False
        for v in basis:
            cand = cur ^ v
            w = cand.bit_count()
            if (w, cand) < (cw, cur):
                cur, cw = cand, w
                improved = True
    return cur
