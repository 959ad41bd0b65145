from fractions import Fraction

import pytest

from pachlab.complexes import JoinComplex
from pachlab.errors import DegeneracyError
from pachlab.geometry import ExactPoint, pt, random_configuration
from pachlab.plmap import (PLMap, Polyline, affine_map,
                           boundary_identity_check, edge_path_parity,
                           face_winding_parity, map_from_json, map_to_json,
                           point_face_parity, polyline, validate_map)
from pachlab.util import sub_rng


@pytest.fixture(scope="module")
def amap():
    x = JoinComplex(2, 3)
    cfg = random_configuration(list(x.vertices()), seed=11)
    return affine_map(x, cfg)


def test_polyline_validation():
    with pytest.raises(ValueError):
        Polyline((pt(0, 0),))
    with pytest.raises(ValueError):
        Polyline((pt(0, 0), pt(0, 0)))
    p = polyline((0, 0), (1, 0), (1, 1))
    assert p.start == pt(0, 0) and p.end == pt(1, 1)
    assert len(p.segments()) == 2


def test_affine_map_validates(amap):
    report = validate_map(amap)
    assert report.ok, report.violations[:5]


def test_validate_catches_endpoint_mismatch(amap):
    bad_edges = dict(amap.edges)
    tau = next(iter(bad_edges))
    a, b = bad_edges[tau].points
    bad_edges[tau] = Polyline((ExactPoint(a.x + 1, a.y), b))
    bad = PLMap(complex=amap.complex, vertices=amap.vertices,
                edges=bad_edges, faces=amap.faces)
    kinds = {v[0] for v in validate_map(bad).violations}
    assert "endpoint-mismatch" in kinds


def test_validate_catches_missing_and_degenerate(amap):
    edges = dict(amap.edges)
    dropped = next(iter(edges))
    del edges[dropped]
    faces = dict(amap.faces)
    sigma = next(iter(faces))
    p = faces[sigma][0][0]
    faces[sigma] = [(p, p, p)]
    bad = PLMap(complex=amap.complex, vertices=amap.vertices,
                edges=edges, faces=faces)
    kinds = {v[0] for v in validate_map(bad).violations}
    assert "missing-edge" in kinds
    assert "degenerate-triangle" in kinds
    assert "boundary-parity" in kinds


def test_validate_catches_skeleton_overlap(amap):
    # reroute one edge through a point of another edge's segment
    edges = dict(amap.edges)
    taus = sorted(edges, key=amap.complex.rank_face)
    t0 = taus[0]
    a, b = edges[t0].points
    other = edges[taus[1]].points
    mid = ExactPoint((other[0].x + other[1].x) / 2,
                     (other[0].y + other[1].y) / 2)
    edges[t0] = Polyline((a, mid, b))
    bad = PLMap(complex=amap.complex, vertices=amap.vertices,
                edges=edges, faces=amap.faces)
    kinds = {v[0] for v in validate_map(bad).violations}
    assert "endpoint-on-segment" in kinds or "concurrent-segments" in kinds


def test_point_parity_against_winding_oracle(amap):
    rng = sub_rng(3, "test-winding")
    x = amap.complex
    faces = list(x.faces(2))
    done = 0
    while done < 150:
        p = ExactPoint(Fraction(rng.randrange(-4096, 4096), 64),
                       Fraction(rng.randrange(-4096, 4096), 64))
        sigma = faces[rng.randrange(len(faces))]
        try:
            a = point_face_parity(amap, sigma, p)
            b = face_winding_parity(amap, sigma, p)
        except DegeneracyError:
            continue
        assert a == b
        done += 1


def test_point_parity_boundary_raises(amap):
    sigma = next(iter(amap.faces))
    tri = amap.faces[sigma][0]
    mid = ExactPoint((tri[0].x + tri[1].x) / 2, (tri[0].y + tri[1].y) / 2)
    with pytest.raises(DegeneracyError):
        point_face_parity(amap, sigma, mid)


def test_edge_path_parity_fixture():
    x = JoinComplex(2, 2)
    pts = {(0, 0): pt(0, 0), (0, 1): pt(0, 4),
           (1, 0): pt(4, 0), (1, 1): pt(4, 4),
           (2, 0): pt(2, -1), (2, 1): pt(2, 5)}
    from pachlab.geometry import PointConfiguration

    m = affine_map(x, PointConfiguration(pts))
    tau = ((0, 0), (1, 0))  # segment (0,0)-(4,0)
    crossing = polyline((2, -2), (2, 2))
    missing = polyline((5, -2), (5, 2))
    assert edge_path_parity(m, tau, crossing) == 1
    assert edge_path_parity(m, tau, missing) == 0


def test_boundary_identity_random(amap):
    rng = sub_rng(4, "test-identity")
    x = amap.complex
    faces = list(x.faces(2))
    done = 0
    draws = 0
    while done < 60:
        draws += 1
        sigma = faces[rng.randrange(len(faces))]
        ptsr = [ExactPoint(Fraction(rng.randrange(-8192, 8192), 64),
                           Fraction(rng.randrange(-8192, 8192), 64))
                for _ in range(3)]
        try:
            path = Polyline(tuple(ptsr))
            assert boundary_identity_check(amap, sigma, path)
        except DegeneracyError:
            continue
        except ValueError:
            continue
        done += 1
    assert draws < 2 * 60  # degeneracy should be rare


def test_map_json_roundtrip(amap):
    obj = map_to_json(amap)
    back = map_from_json(obj)
    assert back.complex.n == amap.complex.n
    assert back.vertices.points == amap.vertices.points
    assert back.edges == amap.edges
    assert back.faces == amap.faces
    assert validate_map(back).ok


def test_map_json_rejects_garbage():
    with pytest.raises(ValueError):
        map_from_json({"type": "something-else"})
    with pytest.raises(ValueError):
        map_from_json({"type": "plmap", "version": 999})
