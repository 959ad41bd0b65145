"""Piecewise-linear maps of a join complex into the plane.

A PLMap carries a point per vertex, a polyline per 1-face, and a list of
filling triangles per 2-face whose mod-2 boundary must reproduce the three
edge polylines.  Intersection parities of faces against points and of edges
against paths are exact, and degeneracies raise instead of perturbing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _core
from .complexes import Face, JoinComplex
from .errors import DegeneracyError
from .geometry import (
    ExactPoint,
    PointConfiguration,
    integer_segments,
    orientation,
    point_in_triangle,
    point_on_segment,
    segments_cross_parity,
)
from .util import frac_str, parse_frac

Triangle = tuple[ExactPoint, ExactPoint, ExactPoint]

PLMAP_FORMAT_VERSION = 1


@dataclass(frozen=True)
class Polyline:
    points: tuple[ExactPoint, ...]

    def __post_init__(self):
        if len(self.points) < 2:
            raise ValueError("polyline needs at least 2 points")
        for a, b in zip(self.points, self.points[1:]):
            if a == b:
                raise ValueError("polyline has repeated consecutive point")

    @property
    def start(self) -> ExactPoint:
        return self.points[0]

    @property
    def end(self) -> ExactPoint:
        return self.points[-1]

    def segments(self):
        return list(zip(self.points, self.points[1:]))


def polyline(*coords) -> Polyline:
    return Polyline(tuple(ExactPoint(Fraction(x), Fraction(y))
                          for x, y in coords))


@dataclass
class PLMap:
    complex: JoinComplex
    vertices: PointConfiguration
    edges: dict
    faces: dict

    def edge_polyline(self, tau: Face) -> Polyline:
        return self.edges[tau]

    def face_triangles(self, sigma: Face):
        return self.faces[sigma]

    def boundary_edges(self, sigma: Face):
        """The three 1-faces of a 2-face, in drop-a-vertex order."""
        if len(sigma) != 3:
            raise ValueError("need a 2-face")
        return [sigma[:j] + sigma[j + 1:] for j in range(3)]

    def edge_image_segments(self):
        """All edge-image segments with owners, ordered by edge rank."""
        out = []
        for tau in sorted(self.edges, key=self.complex.rank_face):
            for s, seg in enumerate(self.edges[tau].segments()):
                out.append((tau, s, seg))
        return out


def affine_map(x: JoinComplex, config: PointConfiguration) -> PLMap:
    """Straight-line map: segment edges, single-triangle faces."""
    pts = config.points
    edges = {}
    for tau in x.faces(1):
        edges[tau] = Polyline((pts[tau[0]], pts[tau[1]]))
    faces = {}
    for sigma in x.faces(2):
        faces[sigma] = [tuple(pts[v] for v in sigma)]
    return PLMap(complex=x, vertices=config, edges=edges, faces=faces)


def _norm_seg(a: ExactPoint, b: ExactPoint):
    return (a, b) if a <= b else (b, a)


@dataclass
class ValidationReport:
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_map(m: PLMap) -> ValidationReport:
    """Structural and genericity checks; returns all violations found.

    Checks: every face present with matching endpoints, each 2-face's
    triangles nondegenerate with mod-2 boundary equal to its three edge
    polylines, and the edge 1-skeleton pairwise generic (no collinear
    overlap, no endpoint inside another segment, no three segments through
    one interior point; shared endpoints are fine).
    """
    x = m.complex
    v = []
    pts = m.vertices.points
    for vid in x.vertices():
        if vid not in pts:
            v.append(("missing-vertex", vid))
    for tau in x.faces(1):
        if tau not in m.edges:
            v.append(("missing-edge", tau))
            continue
        pl = m.edges[tau]
        if tau[0] in pts and pl.start != pts[tau[0]]:
            v.append(("endpoint-mismatch", tau, 0))
        if tau[1] in pts and pl.end != pts[tau[1]]:
            v.append(("endpoint-mismatch", tau, 1))
    for sigma in x.faces(2):
        if sigma not in m.faces:
            v.append(("missing-face", sigma))
            continue
        parity = set()
        for t, tri in enumerate(m.faces[sigma]):
            if orientation(*tri) == 0:
                v.append(("degenerate-triangle", sigma, t))
                continue
            for e in range(3):
                parity ^= {_norm_seg(tri[e], tri[(e + 1) % 3])}
        expect = set()
        for tau in m.boundary_edges(sigma):
            if tau not in m.edges:
                continue
            for a, b in m.edges[tau].segments():
                expect ^= {_norm_seg(a, b)}
        if parity != expect:
            v.append(("boundary-parity", sigma))

    owners = m.edge_image_segments()
    segs = [seg for _, _, seg in owners]
    int_segs, _den = integer_segments(segs)
    pair_viols, crossings = _core.classify_pairs(int_segs)
    for i, j, code in pair_viols:
        kind = ("collinear-overlap" if code == _core.COLLINEAR_OVERLAP
                else "endpoint-on-segment")
        v.append((kind, owners[i][:2], owners[j][:2]))
    by_point = {}
    for i, j in crossings:
        p = _cross_point(segs[i], segs[j])
        by_point.setdefault(p, set()).update((i, j))
    for p, involved in sorted(by_point.items()):
        if len(involved) >= 3:
            v.append(("concurrent-segments", p,
                      tuple(owners[i][:2] for i in sorted(involved))))
    return ValidationReport(violations=v)


def _cross_point(s1, s2) -> ExactPoint:
    (a, b), (c, d) = s1, s2
    den = (b.x - a.x) * (d.y - c.y) - (b.y - a.y) * (d.x - c.x)
    t = Fraction((c.x - a.x) * (d.y - c.y) - (c.y - a.y) * (d.x - c.x), den)
    return ExactPoint(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))


def point_face_parity(m: PLMap, sigma: Face, p: ExactPoint) -> int:
    """Parity of the number of filling triangles of sigma containing p."""
    par = 0
    for tri in m.faces[sigma]:
        where = point_in_triangle(p, tri)
        if where == "boundary":
            raise DegeneracyError(
                f"point {p} on a filling-triangle boundary of {sigma}"
            )
        if where == "inside":
            par ^= 1
    return par


def face_winding_parity(m: PLMap, sigma: Face, p: ExactPoint) -> int:
    """Independent oracle: parity of upward-ray crossings of the boundary.

    Counts proper crossings of the ray from p with the segments of the
    three edge polylines, half-open in x so shared joints count once.
    """
    par = 0
    for tau in m.boundary_edges(sigma):
        for a, b in m.edges[tau].segments():
            if point_on_segment(p, (a, b)):
                raise DegeneracyError(f"point {p} on boundary of {sigma}")
            if (a.x > p.x) == (b.x > p.x):
                continue
            o = orientation(a, b, p)
            if o == 0:
                raise DegeneracyError(f"point {p} on boundary line of {sigma}")
            if (o < 0) == (a.x < b.x):
                par ^= 1
    return par


def edge_path_parity(m: PLMap, tau: Face, path: Polyline) -> int:
    """Crossing parity of an edge image with a generic path."""
    par = 0
    for es in m.edges[tau].segments():
        for ps in path.segments():
            par ^= segments_cross_parity(es, ps)
    return par


def boundary_identity_check(m: PLMap, sigma: Face, path: Polyline) -> bool:
    """Whether edge crossings of the path match its endpoint parities."""
    lhs = 0
    for tau in m.boundary_edges(sigma):
        lhs ^= edge_path_parity(m, tau, path)
    rhs = point_face_parity(m, sigma, path.start) \
        ^ point_face_parity(m, sigma, path.end)
    return lhs == rhs


def _pt_json(p: ExactPoint):
    return [frac_str(p.x), frac_str(p.y)]


def _pt_parse(obj) -> ExactPoint:
    return ExactPoint(parse_frac(obj[0]), parse_frac(obj[1]))


def map_to_json(m: PLMap) -> dict:
    x = m.complex
    verts = [[list(vid), _pt_json(m.vertices.points[vid])]
             for vid in sorted(m.vertices.points)]
    edges = [{"face": [list(v) for v in tau],
              "polyline": [_pt_json(p) for p in m.edges[tau].points]}
             for tau in sorted(m.edges, key=x.rank_face)]
    faces = [{"face": [list(v) for v in sigma],
              "triangles": [[_pt_json(p) for p in tri]
                            for tri in m.faces[sigma]]}
             for sigma in sorted(m.faces, key=x.rank_face)]
    return {"type": "plmap", "version": PLMAP_FORMAT_VERSION,
            "d": x.d, "n": x.n,
            "vertices": verts, "edges": edges, "faces": faces}


def map_from_json(obj: dict) -> PLMap:
    if obj.get("type") != "plmap":
        raise ValueError("not a serialized PL map")
    if obj.get("version") != PLMAP_FORMAT_VERSION:
        raise ValueError(f"unsupported plmap version {obj.get('version')!r}")
    x = JoinComplex(int(obj["d"]), int(obj["n"]))
    pts = {tuple(vid): _pt_parse(p) for vid, p in obj["vertices"]}
    edges = {}
    for rec in obj["edges"]:
        tau = tuple(tuple(v) for v in rec["face"])
        edges[tau] = Polyline(tuple(_pt_parse(p) for p in rec["polyline"]))
    faces = {}
    for rec in obj["faces"]:
        sigma = tuple(tuple(v) for v in rec["face"])
        faces[sigma] = [tuple(_pt_parse(p) for p in tri)
                        for tri in rec["triangles"]]
    return PLMap(complex=x, vertices=PointConfiguration(pts),
                 edges=edges, faces=faces)
