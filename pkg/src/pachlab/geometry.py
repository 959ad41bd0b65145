"""Exact rational plane geometry.

Everything here runs on Fractions; predicates return exact signs and raise
DegeneracyError instead of guessing, so callers re-randomize rather than
perturb.  Also provides the generic candidate points that represent every
region of a segment/line arrangement, and a far point standing in for the
unbounded region.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, NamedTuple

from .errors import DegeneracyError, SearchFailedError
from .util import frac_str, parse_frac, sub_rng


class ExactPoint(NamedTuple):
    x: Fraction
    y: Fraction

    def __str__(self):
        return f"({frac_str(self.x)}, {frac_str(self.y)})"


def pt(x, y) -> ExactPoint:
    return ExactPoint(Fraction(x), Fraction(y))


Segment = tuple[ExactPoint, ExactPoint]
Line = tuple[int, int, int]


def orientation(p: ExactPoint, q: ExactPoint, r: ExactPoint) -> int:
    v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    return (v > 0) - (v < 0)


def point_in_triangle(p: ExactPoint, tri) -> str:
    """Classify p against a nondegenerate triangle: inside/boundary/outside."""
    a, b, c = tri
    o = orientation(a, b, c)
    if o == 0:
        raise DegeneracyError(f"degenerate triangle {a}, {b}, {c}")
    s1 = orientation(a, b, p) * o
    s2 = orientation(b, c, p) * o
    s3 = orientation(c, a, p) * o
    if s1 > 0 and s2 > 0 and s3 > 0:
        return "inside"
    if s1 < 0 or s2 < 0 or s3 < 0:
        return "outside"
    return "boundary"


def _in_box(p: ExactPoint, a: ExactPoint, b: ExactPoint) -> bool:
    return (min(a.x, b.x) <= p.x <= max(a.x, b.x)
            and min(a.y, b.y) <= p.y <= max(a.y, b.y))


def point_on_segment(p: ExactPoint, seg: Segment) -> bool:
    a, b = seg
    return orientation(a, b, p) == 0 and _in_box(p, a, b)


def segments_cross_parity(s1: Segment, s2: Segment) -> int:
    """1 for a proper transversal crossing of open segments, else 0.

    Shared endpoints, an endpoint on the other segment, and collinear
    overlap are precondition violations and raise DegeneracyError.
    """
    a, b = s1
    c, d = s2
    if a == c or a == d or b == c or b == d:
        raise DegeneracyError(f"shared endpoint between {s1} and {s2}")
    for p, seg in ((c, s1), (d, s1), (a, s2), (b, s2)):
        if point_on_segment(p, seg):
            raise DegeneracyError(f"endpoint {p} lies on segment {seg}")
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    return 1 if (o1 * o2 < 0 and o3 * o4 < 0) else 0


def line_through(p: ExactPoint, q: ExactPoint) -> Line:
    """Integer (a, b, c) with ax + by = c through both points, normalized."""
    if p == q:
        raise DegeneracyError(f"line through coincident points {p}")
    a = q.y - p.y
    b = p.x - q.x
    c = a * p.x + b * p.y
    den = lcm(a.denominator, b.denominator, c.denominator)
    ai, bi, ci = int(a * den), int(b * den), int(c * den)
    g = gcd(gcd(abs(ai), abs(bi)), abs(ci))
    ai, bi, ci = ai // g, bi // g, ci // g
    if ai < 0 or (ai == 0 and bi < 0):
        ai, bi, ci = -ai, -bi, -ci
    return (ai, bi, ci)


def line_side(p: ExactPoint, line: Line) -> int:
    a, b, c = line
    v = a * p.x + b * p.y - c
    return (v > 0) - (v < 0)


def intersect_lines(l1: Line, l2: Line) -> ExactPoint | None:
    a1, b1, c1 = l1
    a2, b2, c2 = l2
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    return ExactPoint(Fraction(c1 * b2 - c2 * b1, det),
                      Fraction(a1 * c2 - a2 * c1, det))


@dataclass
class CandidateSet:
    """Generic sample points for an arrangement, plus one far point."""

    points: list[ExactPoint]
    far_point: ExactPoint


def _off_everything(p: ExactPoint, segments, lines) -> bool:
    for line in lines:
        if line_side(p, line) == 0:
            return False
    for seg in segments:
        if point_on_segment(p, seg):
            return False
    return True


def _vertex_offsets(v: ExactPoint, eps: Fraction, segments, lines):
    """Four generic points in distinct quadrants around v.

    Offset direction (1, q) steepens past every line slope through v, then
    eps halves until all four offsets are off every segment and line; both
    loops terminate because each feature can reject at most one step.
    """
    slopes = set()
    for a, b, _ in lines:
        if b != 0:
            slopes.add(abs(Fraction(a, b)))
    q = 1
    while Fraction(q) in slopes:
        q += 1
    e = eps / (1 + q)
    for _ in range(128):
        pts = [ExactPoint(v.x + sx * e, v.y + sy * q * e)
               for sx in (1, -1) for sy in (1, -1)]
        if all(_off_everything(p, segments, lines) for p in pts):
            return pts
        e /= 2
    raise SearchFailedError(f"no generic offsets around {v}")


def _closest_pair_sq(pts):
    """Exact minimum squared distance among distinct points, None if < 2.

    Divide and conquer on x order with the usual y-sorted strip merge; all
    comparisons stay rational, so the result matches the pairwise scan.
    """
    pts = sorted(set(pts))
    if len(pts) < 2:
        return None

    def d2(p, q):
        dx, dy = p.x - q.x, p.y - q.y
        return dx * dx + dy * dy

    def rec(lo, hi):
        m = hi - lo
        if m <= 3:
            block = sorted(pts[lo:hi], key=lambda p: (p.y, p.x))
            best = None
            for i in range(m):
                for j in range(i + 1, m):
                    v = d2(block[i], block[j])
                    if best is None or v < best:
                        best = v
            return best, block
        mid = (lo + hi) // 2
        mid_x = pts[mid].x
        best_l, left = rec(lo, mid)
        best_r, right = rec(mid, hi)
        if best_l is None:
            best = best_r
        elif best_r is None or best_l < best_r:
            best = best_l
        else:
            best = best_r
        merged = []
        i = j = 0
        while i < len(left) and j < len(right):
            if (left[i].y, left[i].x) <= (right[j].y, right[j].x):
                merged.append(left[i])
                i += 1
            else:
                merged.append(right[j])
                j += 1
        merged.extend(left[i:])
        merged.extend(right[j:])
        strip = [p for p in merged
                 if best is None or (p.x - mid_x) ** 2 < best]
        for i in range(len(strip)):
            for j in range(i + 1, len(strip)):
                dy = strip[j].y - strip[i].y
                if best is not None and dy * dy >= best:
                    break
                v = d2(strip[i], strip[j])
                if best is None or v < best:
                    best = v
        return best, merged

    return rec(0, len(pts))[0]


def candidate_points(segments, lines=(),
                     signature: Callable[[ExactPoint], object] | None = None
                     ) -> CandidateSet:
    """Generic points meeting every region that touches a bounded point.

    Intersects all supporting lines pairwise and surrounds each crossing
    with four diagonal offsets at a rational step below a quarter of the
    minimum gap between distinct crossings; adds a far point outside the
    segment bounding box.  With a signature callable, offsets are
    deduplicated to one representative per region signature.
    """
    segments = [tuple(s) for s in segments]
    all_lines = list(lines)
    for a, b in segments:
        all_lines.append(line_through(a, b))
    all_lines = sorted(set(all_lines))

    vertices: list[ExactPoint] = []
    seen = set()
    for i in range(len(all_lines)):
        for j in range(i + 1, len(all_lines)):
            p = intersect_lines(all_lines[i], all_lines[j])
            if p is not None and p not in seen:
                seen.add(p)
                vertices.append(p)

    anchors = list(vertices)
    if not anchors and segments:
        # no crossings (e.g. parallel segments): anchor at midpoints
        anchors = [ExactPoint((a.x + b.x) / 2, (a.y + b.y) / 2)
                   for a, b in segments]

    min_sq = _closest_pair_sq(vertices)
    # eps <= sqrt(min_sq)/4 without taking roots: min(1, min_sq)/4
    eps = min(Fraction(1), min_sq) / 4 if min_sq is not None else Fraction(1, 4)

    points: list[ExactPoint] = []
    sigs = set()
    for v in anchors:
        for p in _vertex_offsets(v, eps, segments, all_lines):
            if signature is not None:
                s = signature(p)
                if s in sigs:
                    continue
                sigs.add(s)
            points.append(p)

    xs = [c.x for a, b in segments for c in (a, b)] or [Fraction(0)]
    ys = [c.y for a, b in segments for c in (a, b)] or [Fraction(0)]
    far = ExactPoint(max(xs) + 1, max(ys) + 1)
    while not _off_everything(far, segments, all_lines):
        far = ExactPoint(far.x + 1, far.y)
    return CandidateSet(points=points, far_point=far)


@dataclass
class PointConfiguration:
    """Vertex-to-point embedding with a general-position certificate."""

    points: dict
    certified: bool = field(default=False)

    def certify(self) -> list:
        violations = certify_general_position(self)
        self.certified = not violations
        return violations


def certify_general_position(config) -> list:
    """All violations: duplicate point pairs and collinear triples, by id."""
    points = config.points if isinstance(config, PointConfiguration) else dict(config)
    ids = sorted(points)
    violations = []
    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            if points[ids[i]] == points[ids[j]]:
                violations.append(("duplicate", ids[i], ids[j]))
    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            for k in range(j + 1, len(ids)):
                a, b, c = points[ids[i]], points[ids[j]], points[ids[k]]
                if a != b and a != c and b != c \
                        and orientation(a, b, c) == 0:
                    violations.append(("collinear", ids[i], ids[j], ids[k]))
    return violations


def random_configuration(vertex_ids, seed: int, span: int = 512,
                         max_den: int = 16, tries: int = 64
                         ) -> PointConfiguration:
    """Certified random embedding with bounded-denominator coordinates."""
    ids = list(vertex_ids)
    for t in range(tries):
        rng = sub_rng(seed, f"config:{t}")
        pts = {}
        for vid in ids:
            x = Fraction(rng.randrange(-span, span + 1),
                         rng.randrange(1, max_den + 1))
            y = Fraction(rng.randrange(-span, span + 1),
                         rng.randrange(1, max_den + 1))
            pts[vid] = ExactPoint(x, y)
        config = PointConfiguration(pts)
        if not config.certify():
            return config
    raise SearchFailedError(f"no certified configuration in {tries} tries")


def integer_segments(segments):
    """Scale rational segments onto a common integer grid.

    Returns (scaled, den): scaled[i] is (x1, y1, x2, y2) in ints and the
    original coordinates are those divided by den.
    """
    den = 1
    for a, b in segments:
        den = lcm(den, a.x.denominator, a.y.denominator,
                  b.x.denominator, b.y.denominator)
    scaled = [(int(a.x * den), int(a.y * den), int(b.x * den), int(b.y * den))
              for a, b in segments]
    return scaled, den


def config_to_json(config: PointConfiguration) -> dict:
    items = []
    for vid in sorted(config.points):
        p = config.points[vid]
        items.append([list(vid), [frac_str(p.x), frac_str(p.y)]])
    return {"type": "point-configuration", "certified": config.certified,
            "points": items}


def config_from_json(obj: dict) -> PointConfiguration:
    if obj.get("type") != "point-configuration":
        raise ValueError("not a serialized point configuration")
    pts = {}
    for vid, (xs, ys) in obj["points"]:
        pts[tuple(vid)] = ExactPoint(parse_frac(xs), parse_frac(ys))
    return PointConfiguration(pts, certified=bool(obj.get("certified")))
