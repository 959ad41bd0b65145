"""End-to-end tests of the command line driver via main(argv)."""

import json
from fractions import Fraction

import pytest

from pachlab.cli import main


def _load(path):
    with open(path) as fh:
        return json.load(fh)


def test_randomized_commands_refuse_without_seed(capsys):
    assert main(["chains-verify", "--n", "2"]) == 1
    record = json.loads(capsys.readouterr().err)
    assert record["error"]["type"] == "SeedRequired"
    assert "chains-verify" in record["error"]["message"]


def test_chains_verify_artifact(tmp_path):
    out = tmp_path / "chains.json"
    rc = main(["chains-verify", "--n", "2", "--seed", "0",
               "--pairs", "50", "--out", str(out)])
    assert rc == 0
    obj = _load(out)
    assert obj["artifact"]["command"] == "chains-verify"
    assert obj["artifact"]["config"]["seed"] == 0
    assert obj["artifact"]["version"]
    assert obj["result"]["all_ok"]
    assert obj["result"]["cohomology_ranks"] == [0, 0, 1]


def test_cofill_artifact(tmp_path):
    out = tmp_path / "cofill.json"
    assert main(["cofill", "--n", "2", "--seed", "1",
                 "--out", str(out)]) == 0
    res = _load(out)["result"]
    assert res["exact"]
    assert Fraction(res["ratio"]) <= Fraction(res["constant"])


def test_bounds_artifact_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["bounds", "--n", "100", "--out", str(a)]) == 0
    assert main(["bounds", "--n", "100", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    res = _load(a)["result"]
    assert res["gromov_bound"] == "1/192"
    assert res["coloring_threshold"] == 116
    assert res["coloring_union_bound"]["note"] == "m outside [1, n]"
    assert res["sphere_threshold"] == 5
    assert res["sphere_union_bound"]["m"] == 5


def test_bounds_with_explicit_m(tmp_path):
    out = tmp_path / "b.json"
    assert main(["bounds", "--n", "1000", "--m", "173",
                 "--out", str(out)]) == 0
    res = _load(out)["result"]
    assert res["coloring_union_bound"]["sign"] == -1
    assert res["coloring_union_bound"]["log"] < 0


def test_sphere_exp_csv(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    rc = main(["sphere-exp", "--n", "2", "--seed", "0", "--seeds", "1",
               "--format", "csv", "--out", str(out)])
    assert rc == 0
    assert "note:" in capsys.readouterr().err
    lines = out.read_text().splitlines()
    header = [ln for ln in lines if ln.startswith("#")]
    assert any(ln.startswith("# command=sphere-exp") for ln in header)
    assert any(ln.startswith("# config=") for ln in header)
    body = [ln for ln in lines if not ln.startswith("#")]
    assert body[0] == "seed,candidate_index,p,max_m,wall_ms"
    assert len(body) == 2


def test_sphere_exp_json_deterministic_modulo_wall(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["sphere-exp", "--n", "2", "--seed", "0", "--seeds", "1"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    rows_a = _load(a)["result"]["rows"]
    rows_b = _load(b)["result"]["rows"]
    strip = lambda rows: [
        {k: v for k, v in r.items() if k != "wall_ms"} for r in rows]
    assert strip(rows_a) == strip(rows_b)


def test_clique_prob_exact_needs_no_seed(tmp_path):
    out = tmp_path / "cp.json"
    assert main(["clique-prob", "--m", "1", "--out", str(out)]) == 0
    res = _load(out)["result"]
    assert res["exact"] and res["fraction"] == "7/8"


def test_clique_prob_sampled_requires_seed(tmp_path, capsys):
    assert main(["clique-prob", "--m", "2", "--budget-bits", "16"]) == 1
    record = json.loads(capsys.readouterr().err)
    assert record["error"]["type"] == "SeedRequired"
    out = tmp_path / "cp2.json"
    assert main(["clique-prob", "--m", "2", "--budget-bits", "16",
                 "--samples", "500", "--seed", "3", "--out", str(out)]) == 0
    res = _load(out)["result"]
    assert not res["exact"] and res["estimate"] is not None


def test_color_search_artifact(tmp_path):
    out = tmp_path / "col.json"
    assert main(["color-search", "--n", "3", "--m", "3", "--seed", "5",
                 "--out", str(out)]) == 0
    obj = _load(out)
    assert obj["result"]["verified"]
    assert obj["result"]["coloring"]["type"] == "two-coloring"
    assert obj["artifact"]["config"]["m"] == 3


def test_build_map_then_pipeline_roundtrip(tmp_path):
    mp = tmp_path / "map.json"
    assert main(["build-map", "--kind", "affine", "--n", "3",
                 "--seed", "0", "--out", str(mp)]) == 0
    gen = _load(mp)["generator"]
    assert gen["command"] == "build-map"
    assert gen["config"]["kind"] == "affine"
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["pipeline", "--map", str(mp), "--seed", "0",
                 "--out", str(a)]) == 0
    assert main(["pipeline", "--map", str(mp), "--seed", "0",
                 "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    proof = _load(a)["result"]["proof"]
    assert proof["verified"] and proof["witness_m"] == 2
    assert proof["F_size"] == 10


def test_build_map_pushed_with_target(tmp_path):
    mp = tmp_path / "pushed.json"
    assert main(["build-map", "--kind", "pushed", "--n", "3", "--m", "3",
                 "--seed", "5", "--out", str(mp)]) == 0
    obj = _load(mp)
    assert obj["type"] == "plmap"
    assert obj["generator"]["config"]["m"] == 3


def test_pipeline_rejects_invalid_map_file(tmp_path, capsys):
    from pachlab.complexes import JoinComplex
    from pachlab.geometry import ExactPoint, random_configuration
    from pachlab.plmap import PLMap, Polyline, affine_map, map_to_json

    x = JoinComplex(2, 3)
    cfg = random_configuration(list(x.vertices()), seed=0)
    m = affine_map(x, cfg)
    bad_edges = dict(m.edges)
    tau = next(iter(bad_edges))
    s, e = bad_edges[tau].points
    bad_edges[tau] = Polyline((ExactPoint(s.x + 1, s.y), e))
    bad = PLMap(complex=x, vertices=m.vertices, edges=bad_edges,
                faces=m.faces)
    mp = tmp_path / "bad.json"
    mp.write_text(json.dumps(map_to_json(bad)))
    assert main(["pipeline", "--map", str(mp), "--seed", "0"]) == 1
    record = json.loads(capsys.readouterr().err)
    assert record["error"]["type"] == "MapValidationError"
    assert record["error"]["violations"]


def test_pipeline_missing_file_error(capsys):
    assert main(["pipeline", "--map", "/nonexistent/x.json",
                 "--seed", "0"]) == 1
    record = json.loads(capsys.readouterr().err)
    assert record["error"]["type"] == "FileNotFoundError"


def test_config_file_defaults(tmp_path):
    cfg = tmp_path / "conf.json"
    cfg.write_text(json.dumps({"pairs": 7}))
    out = tmp_path / "o.json"
    assert main(["--config", str(cfg), "chains-verify", "--n", "2",
                 "--seed", "0", "--out", str(out)]) == 0
    assert _load(out)["artifact"]["config"]["pairs"] == 7


def test_extract_random_and_files(tmp_path, capsys):
    assert main(["extract", "--sizes", "5,5,5", "--density", "3/4",
                 "--t", "2"]) == 1
    assert json.loads(capsys.readouterr().err)["error"]["type"] == \
        "SeedRequired"
    out = tmp_path / "ex.json"
    assert main(["extract", "--sizes", "5,5,5", "--density", "3/4",
                 "--seed", "2", "--t", "2", "--oracle",
                 "--out", str(out)]) == 0
    res = _load(out)["result"]
    assert res["kind"] == "graph" and "triangles" in res
    if res["found"]:
        assert res["oracle_max"][0] >= 2

    from pachlab.extraction import (graph_to_json, random_tripartite,
                                    triangle_hypergraph, hypergraph_to_json)
    g = random_tripartite((4, 4, 4), Fraction(4, 5), seed=1)
    gf = tmp_path / "g.json"
    gf.write_text(json.dumps(graph_to_json(g)))
    out2 = tmp_path / "ex2.json"
    assert main(["extract", "--infile", str(gf), "--t", "1",
                 "--out", str(out2)]) == 0
    assert _load(out2)["result"]["kind"] == "graph"
    hf = tmp_path / "h.json"
    hf.write_text(json.dumps(hypergraph_to_json(triangle_hypergraph(g))))
    out3 = tmp_path / "ex3.json"
    assert main(["extract", "--infile", str(hf), "--t", "1", "--oracle",
                 "--out", str(out3)]) == 0
    res3 = _load(out3)["result"]
    assert res3["kind"] == "hypergraph"
    assert res3["oracle_max"][0] >= res3["t"] or not res3["found"]


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
