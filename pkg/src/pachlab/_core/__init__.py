"""Kernel dispatch: compiled extension when available, pure Python otherwise.

The compiled lane requires bounded integer inputs (documented per wrapper);
anything larger silently takes the pure lane, which runs the same algorithms
on unbounded ints.  Set PACHLAB_FORCE_PURE=1 to disable the extension.
"""

from __future__ import annotations

import os

from . import _pure

COLLINEAR_OVERLAP = _pure.COLLINEAR_OVERLAP
ENDPOINT_INTERIOR = _pure.ENDPOINT_INTERIOR

_kernels = None
if os.environ.get("PACHLAB_FORCE_PURE", "") in ("", "0"):
    try:
        from .. import _kernels  # type: ignore[no-redef]
    except ImportError:
        _kernels = None

BACKEND = "compiled" if _kernels is not None else "pure"

# compiled-lane input bounds; everything beyond these runs pure
_SEG_COORD_BOUND = 1 << 19
_CAND_NUM_BOUND = 1 << 62
_CAND_DEN_BOUND = 1 << 42
_CAND_DIR_BOUND = 8
_PAIR_COORD_BOUND = 1 << 30


def backend_report() -> dict:
    return {"backend": BACKEND, "forced_pure": BACKEND == "pure" and
            os.environ.get("PACHLAB_FORCE_PURE", "") not in ("", "0")}


def _segs_fit(segs, bound: int) -> bool:
    for x1, y1, x2, y2 in segs:
        if not (-bound < x1 < bound and -bound < y1 < bound
                and -bound < x2 < bound and -bound < y2 < bound):
            return False
    return True


def _cands_fit(cands) -> bool:
    for nx, ny, dd, sx, sy in cands:
        if not (-_CAND_NUM_BOUND < nx < _CAND_NUM_BOUND
                and -_CAND_NUM_BOUND < ny < _CAND_NUM_BOUND):
            return False
        if not 1 <= dd < _CAND_DEN_BOUND:
            return False
        if abs(sx) > _CAND_DIR_BOUND or abs(sy) > _CAND_DIR_BOUND:
            return False
    return True


def parity_scan(segs, faces, cands):
    """counts[c], degenerate[c] for each infinitesimal candidate point.

    counts[c] is the number of faces (segment-index lists) whose boundary
    crosses the upward ray from candidate c an odd number of times; -1 with
    the degenerate flag set when the candidate lies on an open segment.
    """
    if not cands:
        return [], []
    if (_kernels is not None and segs
            and _segs_fit(segs, _SEG_COORD_BOUND) and _cands_fit(cands)):
        import numpy as np

        seg_arr = np.array(segs, dtype=np.int64)
        ptr = [0]
        idx = []
        for fsegs in faces:
            idx.extend(fsegs)
            ptr.append(len(idx))
        idx_arr = (np.array(idx, dtype=np.int64) if idx
                   else np.empty(0, dtype=np.int64))
        counts, degen = _kernels.parity_scan(
            seg_arr,
            np.array(ptr, dtype=np.int64),
            idx_arr,
            np.array(cands, dtype=np.int64),
        )
        return [int(v) for v in counts], [bool(v) for v in degen]
    return _pure.parity_scan(segs, faces, cands)


def parity_faces_one(segs, faces, cand):
    """Face parity bits for one candidate (pure lane; single-point cost)."""
    return _pure.parity_faces_one(segs, faces, cand)


def classify_pairs(segs):
    """(violations, crossings) over all segment pairs; see _pure."""
    if not segs:
        return [], []
    if _kernels is not None and _segs_fit(segs, _PAIR_COORD_BOUND):
        import numpy as np

        v, c = _kernels.classify_pairs(np.array(segs, dtype=np.int64))
        return ([(int(i), int(j), int(code)) for i, j, code in v],
                [(int(i), int(j)) for i, j in c])
    return _pure.classify_pairs(segs)


def coset_min_weight(start: int, basis, width: int):
    """(weight, vector) minimizing (popcount, int value) over the coset."""
    basis = [b for b in basis if b]
    if _kernels is not None and 0 < len(basis) <= 63:
        import numpy as np

        nwords = max(1, (width + 63) // 64)
        mask = (1 << 64) - 1

        def pack(v: int):
            return [(v >> (64 * w)) & mask for w in range(nwords)]

        start_arr = np.array(pack(start), dtype=np.uint64)
        basis_arr = np.array([pack(b) for b in basis], dtype=np.uint64)
        bw, words = _kernels.coset_min_weight(start_arr, basis_arr)
        best = 0
        for w in range(nwords - 1, -1, -1):
            best = (best << 64) | int(words[w])
        return int(bw), best
    return _pure.coset_min_weight(start, basis, width)
