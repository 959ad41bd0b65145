import os
import subprocess
import sys

import pytest

from pachlab import _core
from pachlab._core import _pure

_kernels = _core._kernels


def _random_scene(rng, nsegs, span=200):
    segs = []
    while len(segs) < nsegs:
        x1, y1, x2, y2 = (rng.randrange(-span, span) for _ in range(4))
        if (x1, y1) != (x2, y2):
            segs.append((x1, y1, x2, y2))
    return segs


def _random_cands(rng, k, span=200):
    cands = []
    for _ in range(k):
        dd = rng.randrange(1, 40)
        cands.append((rng.randrange(-span * dd, span * dd),
                      rng.randrange(-span * dd, span * dd),
                      dd,
                      rng.choice((1, -1)),
                      rng.choice((1, 2, -1, -2))))
    return cands


@pytest.mark.skipif(_kernels is None, reason="compiled lane not built")
def test_parity_scan_lanes_agree():
    from pachlab.util import sub_rng

    rng = sub_rng(0, "test-kern-scan")
    for trial in range(20):
        segs = _random_scene(rng, 12)
        faces = [[rng.randrange(len(segs)) for _ in range(3)]
                 for _ in range(6)]
        cands = _random_cands(rng, 30)
        got = _core.parity_scan(segs, faces, cands)
        want = _pure.parity_scan(segs, faces, cands)
        assert got == want


@pytest.mark.skipif(_kernels is None, reason="compiled lane not built")
def test_classify_pairs_lanes_agree():
    from pachlab.util import sub_rng

    rng = sub_rng(1, "test-kern-pairs")
    for trial in range(20):
        segs = _random_scene(rng, 14, span=40)
        got = _core.classify_pairs(segs)
        want = _pure.classify_pairs(segs)
        assert (sorted(got[0]), sorted(got[1])) == \
               (sorted(want[0]), sorted(want[1]))


@pytest.mark.skipif(_kernels is None, reason="compiled lane not built")
def test_coset_min_weight_lanes_agree():
    from pachlab.util import sub_rng

    rng = sub_rng(2, "test-kern-coset")
    for trial in range(50):
        width = rng.randrange(5, 130)
        start = rng.getrandbits(width)
        basis = [rng.getrandbits(width) for _ in range(rng.randrange(1, 10))]
        got = _core.coset_min_weight(start, basis, width)
        want = _pure.coset_min_weight(start, basis, width)
        assert got == want
        w, v = got
        assert bin(v).count("1") == w


def test_parity_scan_hand_checked():
    # unit square boundary, candidate in the middle with offset (1, 2)
    segs = [(0, 0, 10, 0), (10, 0, 10, 10), (10, 10, 0, 10), (0, 10, 0, 0)]
    faces = [[0, 1, 2, 3], [0], [1, 3]]
    cands = [(5, 5, 1, 1, 2),      # inside: odd against the square
             (15, 5, 1, 1, 2),     # right of it: even
             (5, 5, 1, 0, 1)]      # offset straight up: still generic here
    counts, degen = _pure.parity_scan(segs, faces, cands)
    assert degen == [False, False, False]
    # middle point: crosses top edge only among [0,1,2,3] -> parity 1;
    # bottom edge alone 0; left+right pair 0
    assert counts[0] == 1
    assert counts[1] == 0


def test_parity_scan_degenerate_candidate():
    segs = [(0, 0, 10, 0)]
    faces = [[0]]
    # base point on the segment, offset direction along it: truly degenerate
    counts, degen = _pure.parity_scan(segs, faces, [(5, 0, 1, 1, 0)])
    assert degen == [True] and counts == [-1]
    # same base point with an upward component escapes the segment
    counts, degen = _pure.parity_scan(segs, faces, [(5, 0, 1, 1, 1)])
    assert degen == [False] and counts == [0]


def test_classify_pairs_codes():
    # collinear overlap
    segs = [(0, 0, 4, 0), (2, 0, 6, 0)]
    viol, cross = _pure.classify_pairs(segs)
    assert (0, 1, _core.COLLINEAR_OVERLAP) in viol
    # endpoint in the interior of the other
    segs = [(0, 0, 4, 0), (2, 0, 2, 3)]
    viol, cross = _pure.classify_pairs(segs)
    assert (0, 1, _core.ENDPOINT_INTERIOR) in viol
    # clean proper crossing
    segs = [(0, -1, 0, 1), (-1, 0, 1, 0)]
    viol, cross = _pure.classify_pairs(segs)
    assert viol == [] and cross == [(0, 1)]
    # shared endpoint pointing apart is clean
    segs = [(0, 0, 4, 0), (0, 0, 0, 4)]
    viol, cross = _pure.classify_pairs(segs)
    assert viol == [] and cross == []
    # shared endpoint with positive direction overlap is collinear overlap
    segs = [(0, 0, 4, 0), (0, 0, 2, 0)]
    viol, cross = _pure.classify_pairs(segs)
    assert (0, 1, _core.COLLINEAR_OVERLAP) in viol


def test_oversized_inputs_take_pure_lane():
    # coordinates beyond the compiled bound must still give exact answers
    big = 1 << 40
    segs = [(0, -big, 0, big), (-big, 0, big, 0)]
    faces = [[0, 1]]
    counts, degen = _core.parity_scan(segs, faces, [(big // 2, big // 2, 1, 1, 2)])
    assert counts == [0] and degen == [False]
    # below the horizontal segment the upward ray crosses it once
    counts, degen = _core.parity_scan(segs, faces, [(-big // 2, -big // 2, 1, 1, 2)])
    assert counts == [1]


def test_force_pure_env_flag():
    code = ("import pachlab; import json; "
            "print(json.dumps(pachlab.backend_report()))")
    env = dict(os.environ, PACHLAB_FORCE_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    import json

    rep = json.loads(out.stdout)
    assert rep["backend"] == "pure" and rep["forced_pure"]


def test_backend_report_shape():
    rep = _core.backend_report()
    assert rep["backend"] in ("compiled", "pure")
