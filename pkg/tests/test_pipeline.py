"""Tests for the lower-bound pipeline stages and the end-to-end run."""

import os
import subprocess
import sys
from fractions import Fraction
from math import ceil

import pytest

from pachlab.coloring import build_pushed_map, random_coloring
from pachlab.complexes import JoinComplex
from pachlab.errors import DegeneracyError, PipelineError
from pachlab.geometry import ExactPoint, random_configuration
from pachlab.pipeline import (
    build_H,
    escape_path,
    heavy_point,
    pi_vector,
    pigeonhole_class,
    run_pipeline,
)
from pachlab.plmap import PLMap, Polyline, edge_path_parity, point_face_parity
from pachlab.util import sub_rng


@pytest.fixture(scope="module")
def amap():
    x = JoinComplex(2, 3)
    cfg = random_configuration(list(x.vertices()), seed=0)
    from pachlab.plmap import affine_map
    return affine_map(x, cfg)


@pytest.fixture(scope="module")
def heavy(amap):
    return heavy_point(amap)


def test_heavy_point_parities_recomputed(amap, heavy):
    x = amap.complex
    covered = {s for s in x.faces(2) if point_face_parity(amap, s, heavy.p)}
    assert covered == set(heavy.faces)
    assert heavy.density == Fraction(len(heavy.faces), x.face_count(2))
    assert heavy.density == Fraction(10, 27)
    assert heavy.p == ExactPoint(Fraction(141, 20), Fraction(69, 14))


def test_heavy_point_beats_random_samples(amap, heavy):
    # parities only change across edge images, so no sampled point can win
    x = amap.complex
    faces = list(x.faces(2))
    rng = sub_rng(5, "coverage-samples")
    tried = 0
    while tried < 300:
        p = ExactPoint(Fraction(rng.randrange(-2**20, 2**20), 2**13),
                       Fraction(rng.randrange(-2**20, 2**20), 2**13))
        try:
            k = sum(point_face_parity(amap, s, p) for s in faces)
        except DegeneracyError:
            continue
        tried += 1
        assert k <= len(heavy.faces)


def test_heavy_point_deterministic_across_jobs(amap, heavy):
    assert heavy_point(amap, jobs=2) == heavy


def test_heavy_point_pure_lane_matches(amap, heavy):
    code = (
        "from pachlab.complexes import JoinComplex\n"
        "from pachlab.geometry import random_configuration\n"
        "from pachlab.plmap import affine_map\n"
        "from pachlab.pipeline import heavy_point\n"
        "from pachlab.util import frac_str\n"
        "import pachlab._core as core\n"
        "assert core.BACKEND == 'pure', core.BACKEND\n"
        "x = JoinComplex(2, 3)\n"
        "cfg = random_configuration(list(x.vertices()), seed=0)\n"
        "hp = heavy_point(affine_map(x, cfg))\n"
        "print(frac_str(hp.p.x), frac_str(hp.p.y), len(hp.faces))\n"
    )
    env = dict(os.environ, PACHLAB_FORCE_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    px, py, k = out.stdout.split()
    assert ExactPoint(Fraction(px), Fraction(py)) == heavy.p
    assert int(k) == len(heavy.faces)


def test_escape_path_shape_and_determinism(amap, heavy):
    path = escape_path(amap, heavy.p, seed=3)
    assert path.points[0] == heavy.p
    assert len(path.points) == 3
    assert escape_path(amap, heavy.p, seed=3) == path
    for tau in amap.complex.faces(1):
        edge_path_parity(amap, tau, path)


def test_pi_parity_law(amap, heavy):
    path = escape_path(amap, heavy.p, seed=3)
    for sigma in amap.complex.faces(2):
        pi = pi_vector(amap, sigma, path)
        assert len(pi) == 3
        assert sum(pi) & 1 == (sigma in heavy.faces)


def test_pigeonhole_class(amap, heavy):
    path = escape_path(amap, heavy.p, seed=3)
    cls = pigeonhole_class(heavy.faces, amap, path)
    assert cls.faces <= heavy.faces
    assert len(cls.faces) >= ceil(len(heavy.faces) / 8)
    for sigma in cls.faces:
        assert pi_vector(amap, sigma, path) == cls.pi
    assert cls.pi == (1, 0, 0) and len(cls.faces) == 8
    with pytest.raises(ValueError):
        pigeonhole_class([], amap, path)


def test_build_H_edges(amap, heavy):
    path = escape_path(amap, heavy.p, seed=3)
    cls = pigeonhole_class(heavy.faces, amap, path)
    g = build_H(cls.faces)
    assert g.sizes == (3, 3, 3)
    for (i0, a), (i1, b), (i2, c) in cls.faces:
        assert (i0, i1, i2) == (0, 1, 2)
        assert g.has_ab(a, b) and g.has_bc(b, c) and g.has_ac(a, c)
    assert g.edge_count() <= 3 * len(cls.faces)
    with pytest.raises(ValueError):
        build_H([((0, 0), (1, 0), (3, 0))])
    with pytest.raises(ValueError):
        build_H([])


def test_run_pipeline_end_to_end(amap):
    run = run_pipeline(amap, seed=0)
    assert run.proof["stages"] == [
        "validate", "heavy-point", "escape-path", "pi-parity-law",
        "pigeonhole", "build-H", "extract", "verify",
    ]
    assert run.witness.m == 2
    assert run.witness.exact
    assert run.proof["verified"]
    assert run.proof["F_size"] == len(run.heavy.faces) == 10
    assert run.proof["verified_faces"] == run.witness.m ** 3
    for a in run.witness.parts[0]:
        for b in run.witness.parts[1]:
            for c in run.witness.parts[2]:
                sigma = ((0, a), (1, b), (2, c))
                assert point_face_parity(amap, sigma, run.witness.p) == 1


def test_run_pipeline_deterministic(amap):
    a = run_pipeline(amap, seed=0)
    b = run_pipeline(amap, seed=0)
    assert a.proof == b.proof
    assert a.witness.parts == b.witness.parts
    c = run_pipeline(amap, seed=1)
    assert c.proof["verified"]


def test_run_pipeline_on_pushed_map():
    x = JoinComplex(2, 3)
    m = build_pushed_map(random_coloring(x, 1))
    run = run_pipeline(m, seed=5)
    assert run.proof["verified"] and run.witness.m >= 1
    for a in run.witness.parts[0]:
        for b in run.witness.parts[1]:
            for c in run.witness.parts[2]:
                sigma = ((0, a), (1, b), (2, c))
                assert point_face_parity(m, sigma, run.witness.p) == 1


def test_run_pipeline_rejects_invalid_map(amap):
    bad_edges = dict(amap.edges)
    tau = next(iter(bad_edges))
    a, b = bad_edges[tau].points
    bad_edges[tau] = Polyline((ExactPoint(a.x + 1, a.y), b))
    bad = PLMap(complex=amap.complex, vertices=amap.vertices,
                edges=bad_edges, faces=amap.faces)
    with pytest.raises(PipelineError) as err:
        run_pipeline(bad, seed=0)
    assert err.value.stage == "validate"
