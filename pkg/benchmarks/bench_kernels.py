"""Compiled-versus-pure timings for the three hot kernels.

Workloads are the real shapes the package produces: the heavy-point
candidate sweep of an affine map, the pairwise genericity classification
of a pushed map's full segment soup, and a coset minimum-weight search at
the coboundary coset scale.  Both lanes run the same inputs and their
outputs are compared before any timing is reported.

Usage: python3 benchmarks/bench_kernels.py [--n 6] [--coset-basis 18]
"""

import argparse
import time

from pachlab import _core
from pachlab._core import _pure
from pachlab.coloring import build_pushed_map, random_coloring
from pachlab.complexes import JoinComplex
from pachlab.geometry import integer_segments
from pachlab.pipeline import (
    _all_map_segments,
    _candidates_for_scan,
    _map_scan_arrays,
)
from pachlab.util import sub_rng


def _time(fn, repeats=3):
    best = None
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, out


def _row(name, size, pure_s, fast_s):
    speed = pure_s / fast_s if fast_s else float("inf")
    print(f"{name:<18} {size:<26} {pure_s * 1e3:10.1f} ms "
          f"{fast_s * 1e3:10.1f} ms   x{speed:.1f}")


def bench_parity_scan(n):
    # pushed maps live on a small integer grid, inside the int64 envelope;
    # random affine maps usually scale past it and take the pure lane anyway
    x = JoinComplex(2, n)
    m = build_pushed_map(random_coloring(x, 0))
    int_segs, _, _, face_segs, _ = _map_scan_arrays(m)
    cands = _candidates_for_scan(int_segs)
    size = f"{len(cands)} cands x {len(int_segs)} segs"
    fast_s, fast = _time(lambda: _core.parity_scan(int_segs, face_segs, cands),
                         repeats=1)
    pure_s, pure = _time(lambda: _pure.parity_scan(int_segs, face_segs, cands),
                         repeats=1)
    assert fast == pure, "parity_scan lanes disagree"
    _row("parity_scan", size, pure_s, fast_s)


def bench_classify_pairs(n):
    x = JoinComplex(2, n)
    m = build_pushed_map(random_coloring(x, 0))
    int_segs, _ = integer_segments(_all_map_segments(m))
    size = f"{len(int_segs)} segs (all pairs)"
    fast_s, fast = _time(lambda: _core.classify_pairs(int_segs), repeats=1)
    pure_s, pure = _time(lambda: _pure.classify_pairs(int_segs), repeats=1)
    assert (sorted(fast[0]), sorted(fast[1])) == \
        (sorted(pure[0]), sorted(pure[1])), "classify_pairs lanes disagree"
    _row("classify_pairs", size, pure_s, fast_s)


def bench_coset(width, k):
    rng = sub_rng(0, "bench-coset")
    start = rng.getrandbits(width)
    basis = [rng.getrandbits(width) | 1 << rng.randrange(width)
             for _ in range(k)]
    size = f"2^{k} combos, width {width}"
    fast_s, fast = _time(lambda: _core.coset_min_weight(start, basis, width))
    pure_s, pure = _time(lambda: _pure.coset_min_weight(start, basis, width),
                         repeats=1)
    assert fast == pure, "coset_min_weight lanes disagree"
    _row("coset_min_weight", size, pure_s, fast_s)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=5,
                    help="part size for the parity sweep map")
    ap.add_argument("--pairs-n", type=int, default=6,
                    help="part size for the pairwise classification map")
    ap.add_argument("--coset-width", type=int, default=120)
    ap.add_argument("--coset-basis", type=int, default=18)
    args = ap.parse_args()
    report = _core.backend_report()
    print(f"backend: {report['backend']}")
    if report["backend"] != "compiled":
        print("compiled extension unavailable; timing the pure lane "
              "against itself")
    print(f"{'kernel':<18} {'workload':<26} {'pure':>13} "
          f"{'dispatched':>13}   speedup")
    bench_parity_scan(args.n)
    bench_classify_pairs(args.pairs_n)
    bench_coset(args.coset_width, args.coset_basis)


if __name__ == "__main__":
    main()
