# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: exact integer geometry scans and a Gray-code coset walk.

pachlab._core validates coordinate bounds before dispatching here; with
segment coordinates below 2**19, denominators below 2**42 and numerators
below 2**62 every intermediate product fits in 128 bits.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    ctypedef long long i128 "__int128"
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int _sign(i128 v) nogil:
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


cdef inline int _crossing_bit(long long x1, long long y1,
                              long long x2, long long y2,
                              long long nx, long long ny, long long dd,
                              long long sx, long long sy) nogil:
    """0/1 crossing bit of the upward ray from the infinitesimal point;
    -1 when the point lies on the open segment."""
    cdef i128 t1, t2, base, first
    cdef bint gt1, gt2
    cdef int s
    t1 = <i128> nx - <i128> x1 * dd
    gt1 = t1 > 0 or (t1 == 0 and sx > 0)
    t2 = <i128> nx - <i128> x2 * dd
    gt2 = t2 > 0 or (t2 == 0 and sx > 0)
    if gt1 == gt2:
        return 0
    base = (<i128> (x2 - x1)) * (<i128> ny - <i128> y1 * dd) \
        - (<i128> (y2 - y1)) * (<i128> nx - <i128> x1 * dd)
    if base != 0:
        s = _sign(base)
    else:
        first = (<i128> (x2 - x1)) * sy - (<i128> (y2 - y1)) * sx
        s = _sign(first)
        if s == 0:
            return -1
    if x1 < x2:
        return 1 if s < 0 else 0
    return 1 if s > 0 else 0


def parity_scan(cnp.int64_t[:, ::1] segs,
                cnp.int64_t[::1] face_ptr,
                cnp.int64_t[::1] face_idx,
                cnp.int64_t[:, ::1] cands):
    """Per-candidate count of faces whose boundary has odd crossing parity.

    Returns (counts, degenerate); counts[c] is -1 where degenerate[c] is set.
    """
    cdef Py_ssize_t nseg = segs.shape[0]
    cdef Py_ssize_t nface = face_ptr.shape[0] - 1
    cdef Py_ssize_t ncand = cands.shape[0]
    counts_arr = np.empty(ncand, dtype=np.int64)
    degen_arr = np.zeros(ncand, dtype=np.uint8)
    bits_arr = np.empty(nseg, dtype=np.uint8)
    cdef cnp.int64_t[::1] counts = counts_arr
    cdef cnp.uint8_t[::1] degen = degen_arr
    cdef cnp.uint8_t[::1] bits = bits_arr
    cdef Py_ssize_t c, s, f, k
    cdef long long nx, ny, dd, sx, sy
    cdef int b, par, total
    cdef bint bad
    with nogil:
        for c in range(ncand):
            nx = cands[c, 0]
            ny = cands[c, 1]
            dd = cands[c, 2]
            sx = cands[c, 3]
            sy = cands[c, 4]
            bad = False
            for s in range(nseg):
                b = _crossing_bit(segs[s, 0], segs[s, 1],
                                  segs[s, 2], segs[s, 3],
                                  nx, ny, dd, sx, sy)
                if b < 0:
                    bad = True
                    break
                bits[s] = <cnp.uint8_t> b
            if bad:
                counts[c] = -1
                degen[c] = 1
                continue
            total = 0
            for f in range(nface):
                par = 0
                for k in range(face_ptr[f], face_ptr[f + 1]):
                    par ^= bits[face_idx[k]]
                total += par
            counts[c] = total
    return counts_arr, degen_arr


def classify_pairs(cnp.int64_t[:, ::1] segs):
    """Pairwise incidence sweep; see pachlab._core._pure.classify_pairs."""
    cdef Py_ssize_t n = segs.shape[0]
    boxes_arr = np.empty((n, 4), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] boxes = boxes_arr
    cdef Py_ssize_t i, j
    cdef long long ax, ay, bx, by, cx, cy, dx, dy
    cdef i128 pdot
    cdef int o1, o2, o3, o4
    cdef bint shared, hit
    violations = []
    crossings = []
    for i in range(n):
        boxes[i, 0] = min(segs[i, 0], segs[i, 2])
        boxes[i, 1] = min(segs[i, 1], segs[i, 3])
        boxes[i, 2] = max(segs[i, 0], segs[i, 2])
        boxes[i, 3] = max(segs[i, 1], segs[i, 3])
    for i in range(n):
        ax = segs[i, 0]
        ay = segs[i, 1]
        bx = segs[i, 2]
        by = segs[i, 3]
        for j in range(i + 1, n):
            if (boxes[j, 0] > boxes[i, 2] or boxes[i, 0] > boxes[j, 2]
                    or boxes[j, 1] > boxes[i, 3] or boxes[i, 1] > boxes[j, 3]):
                continue
            cx = segs[j, 0]
            cy = segs[j, 1]
            dx = segs[j, 2]
            dy = segs[j, 3]
            o1 = _sign((<i128> (bx - ax)) * (cy - ay)
                       - (<i128> (by - ay)) * (cx - ax))
            o2 = _sign((<i128> (bx - ax)) * (dy - ay)
                       - (<i128> (by - ay)) * (dx - ax))
            o3 = _sign((<i128> (dx - cx)) * (ay - cy)
                       - (<i128> (dy - cy)) * (ax - cx))
            o4 = _sign((<i128> (dx - cx)) * (by - cy)
                       - (<i128> (dy - cy)) * (bx - cx))
            shared = ((ax == cx and ay == cy) or (ax == dx and ay == dy)
                      or (bx == cx and by == cy) or (bx == dx and by == dy))
            if o1 == 0 and o2 == 0:
                if shared:
                    if ax == cx and ay == cy:
                        pdot = (<i128> (bx - ax)) * (dx - cx) \
                            + (<i128> (by - ay)) * (dy - cy)
                    elif ax == dx and ay == dy:
                        pdot = (<i128> (bx - ax)) * (cx - dx) \
                            + (<i128> (by - ay)) * (cy - dy)
                    elif bx == cx and by == cy:
                        pdot = (<i128> (ax - bx)) * (dx - cx) \
                            + (<i128> (ay - by)) * (dy - cy)
                    else:
                        pdot = (<i128> (ax - bx)) * (cx - dx) \
                            + (<i128> (ay - by)) * (cy - dy)
                    if pdot > 0:
                        violations.append((i, j, 1))
                else:
                    violations.append((i, j, 1))
                continue
            if shared:
                continue
            hit = False
            if o1 == 0 and boxes[i, 0] <= cx <= boxes[i, 2] \
                    and boxes[i, 1] <= cy <= boxes[i, 3]:
                violations.append((i, j, 2))
                hit = True
            if o2 == 0 and boxes[i, 0] <= dx <= boxes[i, 2] \
                    and boxes[i, 1] <= dy <= boxes[i, 3]:
                violations.append((i, j, 2))
                hit = True
            if o3 == 0 and boxes[j, 0] <= ax <= boxes[j, 2] \
                    and boxes[j, 1] <= ay <= boxes[j, 3]:
                violations.append((i, j, 2))
                hit = True
            if o4 == 0 and boxes[j, 0] <= bx <= boxes[j, 2] \
                    and boxes[j, 1] <= by <= boxes[j, 3]:
                violations.append((i, j, 2))
                hit = True
            if hit:
                continue
            if o1 * o2 < 0 and o3 * o4 < 0:
                crossings.append((i, j))
    return violations, crossings


def coset_min_weight(cnp.uint64_t[::1] start,
                     cnp.uint64_t[:, ::1] basis):
    """Gray-code walk over start + span(basis), all packed as 64-bit words.

    Returns (weight, words) for the minimum under (popcount, value) order,
    value compared most-significant word first.
    """
    cdef Py_ssize_t nwords = start.shape[0]
    cdef Py_ssize_t nbasis = basis.shape[0]
    cur_arr = np.array(start, dtype=np.uint64)
    best_arr = np.array(start, dtype=np.uint64)
    cdef cnp.uint64_t[::1] cur = cur_arr
    cdef cnp.uint64_t[::1] best = best_arr
    cdef Py_ssize_t w, k
    cdef unsigned long long g, total
    cdef int bw, cw, cmp_
    bw = 0
    for w in range(nwords):
        bw += __builtin_popcountll(start[w])
    if nbasis == 0:
        return bw, best_arr
    total = (<unsigned long long> 1) << nbasis
    with nogil:
        for g in range(1, total):
            k = __builtin_ctzll(g)
            cw = 0
            for w in range(nwords):
                cur[w] ^= basis[k, w]
                cw += __builtin_popcountll(cur[w])
            if cw > bw:
                continue
            if cw == bw:
                cmp_ = 0
                for w in range(nwords - 1, -1, -1):
                    if cur[w] < best[w]:
                        cmp_ = -1
                        break
                    if cur[w] > best[w]:
                        cmp_ = 1
                        break
                if cmp_ >= 0:
                    continue
            bw = cw
            for w in range(nwords):
                best[w] = cur[w]
    return bw, best_arr
