"""Pure-Python reference implementations of the hot kernels.

Same contracts as pachlab._kernels, but on unbounded Python ints, so these
also serve as the fallback for inputs that exceed the compiled kernels'
int64 coordinate bounds.
"""

from __future__ import annotations


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def _crossing_bit(seg, nx: int, ny: int, dd: int, sx: int, sy: int):
    """Upward-ray crossing bit for one segment at the infinitesimal point.

    The query point is (nx/dd, ny/dd) + eps*(sx, sy) for eps -> 0+.  Returns
    0/1, or None when the point lies on the open segment (degenerate).
    """
    x1, y1, x2, y2 = seg
    t1 = nx - x1 * dd
    gt1 = t1 > 0 or (t1 == 0 and sx > 0)
    t2 = nx - x2 * dd
    gt2 = t2 > 0 or (t2 == 0 and sx > 0)
    if gt1 == gt2:
        return 0
    base = (x2 - x1) * (ny - y1 * dd) - (y2 - y1) * (nx - x1 * dd)
    if base != 0:
        s = _sign(base)
    else:
        s = _sign((x2 - x1) * sy - (y2 - y1) * sx)
        if s == 0:
            return None
    if x1 < x2:
        return 1 if s < 0 else 0
    return 1 if s > 0 else 0


def parity_scan(segs, faces, cands):
    """Per-candidate count of faces with odd boundary-crossing parity.

    segs: list of (x1, y1, x2, y2) integer segments.
    faces: list of segment-index lists (each face's boundary cycle).
    cands: list of (nx, ny, dd, sx, sy) infinitesimal query points, dd >= 1.
    Returns (counts, degenerate) as parallel lists.
    """
    counts = []
    degenerate = []
    nseg = len(segs)
    bits = bytearray(nseg)
    for nx, ny, dd, sx, sy in cands:
        bad = False
        for s in range(nseg):
            b = _crossing_bit(segs[s], nx, ny, dd, sx, sy)
            if b is None:
                bad = True
                break
            bits[s] = b
        if bad:
            counts.append(-1)
            degenerate.append(True)
            continue
        c = 0
        for fsegs in faces:
            par = 0
            for s in fsegs:
                par ^= bits[s]
            c += par
        counts.append(c)
        degenerate.append(False)
    return counts, degenerate


def parity_faces_one(segs, faces, cand):
    """Face parity bits for a single candidate; None if degenerate."""
    nx, ny, dd, sx, sy = cand
    bits = []
    for seg in segs:
        b = _crossing_bit(seg, nx, ny, dd, sx, sy)
        if b is None:
            return None
        bits.append(b)
    out = []
    for fsegs in faces:
        par = 0
        for s in fsegs:
            par ^= bits[s]
        out.append(par)
    return out


# pair classification codes
COLLINEAR_OVERLAP = 1
ENDPOINT_INTERIOR = 2


def classify_pairs(segs):
    """Pairwise incidence sweep over integer segments.

    Returns (violations, crossings): violations is a list of
    (i, j, code) with code COLLINEAR_OVERLAP or ENDPOINT_INTERIOR;
    crossings lists (i, j) pairs whose interiors cross properly.
    Pairs sharing an endpoint are fine unless they overlap collinearly.
    """
    n = len(segs)
    violations = []
    crossings = []
    boxes = []
    for x1, y1, x2, y2 in segs:
        boxes.append(
            (min(x1, x2), min(y1, y2), max(x1, x2), max(y1, y2))
        )
    for i in range(n):
        ax, ay, bx, by = segs[i]
        ix0, iy0, ix1, iy1 = boxes[i]
        for j in range(i + 1, n):
            jx0, jy0, jx1, jy1 = boxes[j]
            if jx0 > ix1 or ix0 > jx1 or jy0 > iy1 or iy0 > jy1:
                continue
            cx, cy, dx, dy = segs[j]
            o1 = _sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))
            o2 = _sign((bx - ax) * (dy - ay) - (by - ay) * (dx - ax))
            o3 = _sign((dx - cx) * (ay - cy) - (dy - cy) * (ax - cx))
            o4 = _sign((dx - cx) * (by - cy) - (dy - cy) * (bx - cx))
            shared = (
                (ax == cx and ay == cy)
                or (ax == dx and ay == dy)
                or (bx == cx and by == cy)
                or (bx == dx and by == dy)
            )
            if o1 == 0 and o2 == 0:
                # collinear; overlap iff 1-d projections meet in >1 point
                if shared:
                    # overlap beyond the shared point?
                    if ax == cx and ay == cy:
                        pdot = (bx - ax) * (dx - cx) + (by - ay) * (dy - cy)
                    elif ax == dx and ay == dy:
                        pdot = (bx - ax) * (cx - dx) + (by - ay) * (cy - dy)
                    elif bx == cx and by == cy:
                        pdot = (ax - bx) * (dx - cx) + (ay - by) * (dy - cy)
                    else:
                        pdot = (ax - bx) * (cx - dx) + (ay - by) * (cy - dy)
                    if pdot > 0:
                        violations.append((i, j, COLLINEAR_OVERLAP))
                elif not (jx0 > ix1 or ix0 > jx1 or jy0 > iy1 or iy0 > jy1):
                    violations.append((i, j, COLLINEAR_OVERLAP))
                continue
            if shared:
                continue
            hit = False
            if o1 == 0 and ix0 <= cx <= ix1 and iy0 <= cy <= iy1:
                violations.append((i, j, ENDPOINT_INTERIOR))
                hit = True
            if o2 == 0 and ix0 <= dx <= ix1 and iy0 <= dy <= iy1:
                violations.append((i, j, ENDPOINT_INTERIOR))
                hit = True
            if o3 == 0 and jx0 <= ax <= jx1 and jy0 <= ay <= jy1:
                violations.append((i, j, ENDPOINT_INTERIOR))
                hit = True
            if o4 == 0 and jx0 <= bx <= jx1 and jy0 <= by <= jy1:
                violations.append((i, j, ENDPOINT_INTERIOR))
                hit = True
            if hit:
                continue
            if o1 * o2 < 0 and o3 * o4 < 0:
                crossings.append((i, j))
    return violations, crossings


def coset_min_weight(start: int, basis, width: int):
    """Exhaustive minimum of (popcount, value) over start + span(basis)."""
    best = start
    bw = best.bit_count()
    cur = start
    n = len(basis)
    for g in range(1, 1 << n):
        cur ^= basis[(g & -g).bit_length() - 1]
        w = cur.bit_count()
        if w < bw or (w == bw and cur < best):
            best, bw = cur, w
    return bw, best
