"""Batch experiment runner: every module behind one scriptable binary.

Artifacts embed the resolved config, the seed, and the package version, so
a rerun with the same flags reproduces them byte for byte (the lone
exception is the wall-clock column of the sphere experiment CSV).  Errors
leave a machine-readable record on stderr and a nonzero exit status.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .cochains import (F2Chain, F2Cochain, cofilling_constant, gromov_bound,
                       minimal_cofilling, pairing, cohomology_rank)
from .complexes import JoinComplex
from .errors import PachlabError
from .extraction import (brute_max_box, brute_max_complete_tripartite,
                         count_triangles, extract_box, extract_tripartite,
                         graph_from_json, hypergraph_from_json,
                         random_tripartite)
from .geometry import random_configuration
from .plmap import affine_map, map_from_json, map_to_json, validate_map
from .util import frac_str, sub_rng

_RANDOMIZED = {"chains-verify", "cofill", "sphere-exp", "color-search",
               "build-map", "pipeline"}


def _artifact(command: str, config: dict, result) -> dict:
    return {
        "artifact": {
            "command": command,
            "config": config,
            "seed": config.get("seed"),
            "version": __version__,
        },
        "result": result,
    }


def _emit(args, payload, text: str | None = None):
    """Write the artifact (JSON unless a CSV text body is given)."""
    if text is None:
        body = json.dumps(payload, indent=1, sort_keys=True) + "\n"
    else:
        header = "".join(
            f"# {k}={v}\n" for k, v in sorted(payload["artifact"].items())
            if k != "config"
        )
        cfg = json.dumps(payload["artifact"]["config"], sort_keys=True)
        body = header + f"# config={cfg}\n" + text
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(body)


def _config_of(args, keys) -> dict:
    return {k: getattr(args, k.replace("-", "_")) for k in keys}


def _cmd_chains_verify(args):
    x = JoinComplex(args.d, args.n)
    rng = sub_rng(args.seed, "chains-verify")
    checks = {}
    dd_ok = all(
        F2Chain(x, k, 1 << r).boundary().boundary().bits == 0
        for k in range(2, x.d + 1) for r in range(x.face_count(k))
    )
    checks["boundary_squares_to_zero"] = dd_ok
    cc_ok = all(
        F2Cochain(x, k, 1 << r).coboundary().coboundary().bits == 0
        for k in range(0, x.d - 1) for r in range(x.face_count(k))
    )
    checks["coboundary_squares_to_zero"] = cc_ok
    adj_ok = True
    for _ in range(args.pairs):
        k = rng.randrange(0, x.d)
        a = F2Cochain(x, k, rng.getrandbits(x.face_count(k)))
        c = F2Chain(x, k + 1, rng.getrandbits(x.face_count(k + 1)))
        if pairing(a.coboundary(), c) != pairing(a, c.boundary()):
            adj_ok = False
            break
    checks["adjoint_pairing"] = adj_ok
    ranks = [cohomology_rank(x, k) for k in range(x.d + 1)]
    result = {"checks": checks, "cohomology_ranks": ranks,
              "all_ok": all(checks.values())}
    cfg = _config_of(args, ["d", "n", "seed", "pairs"])
    _emit(args, _artifact("chains-verify", cfg, result))
    return 0 if result["all_ok"] else 1


def _cmd_cofill(args):
    x = JoinComplex(args.d, args.n)
    rng = sub_rng(args.seed, "cofill")
    k = args.k
    a0 = F2Cochain(x, k - 1, rng.getrandbits(x.face_count(k - 1)))
    b = a0.coboundary()
    rep = minimal_cofilling(x, b, mode=args.mode, budget=args.budget_coset)
    result = {
        "k": k,
        "norm_b": frac_str(rep.b.norm()),
        "norm_a": frac_str(rep.a.norm()),
        "ratio": frac_str(rep.ratio),
        "exact": rep.exact,
        "constant": frac_str(cofilling_constant(args.d, args.n, k)),
    }
    cfg = _config_of(args, ["d", "n", "k", "seed", "mode", "budget-coset"])
    _emit(args, _artifact("cofill", cfg, result))
    return 0


def _cmd_sphere_exp(args):
    from .sphere import sphere_upper_experiment

    report = sphere_upper_experiment(
        args.n, d=args.d, seeds=range(args.seed, args.seed + args.seeds),
        strategy=args.strategy, budget=args.budget_nodes,
        max_n=args.max_n, jobs=args.jobs,
    )
    cfg = _config_of(args, ["n", "d", "seed", "seeds", "strategy",
                            "budget-nodes", "max-n", "jobs"])
    if args.format == "csv":
        payload = _artifact("sphere-exp", cfg, None)
        _emit(args, payload, text=report.to_csv())
        for note in report.notes:
            print(f"note: {note}", file=sys.stderr)
        return 0
    result = {
        "threshold": report.threshold,
        "rows": [
            {"seed": r.seed, "candidate_index": r.candidate_index,
             "p": [frac_str(r.p.x), frac_str(r.p.y)],
             "max_m": r.max_m, "control_m": r.control_m,
             "wall_ms": r.wall_ms}
            for r in report.rows
        ],
        "notes": report.notes,
    }
    _emit(args, _artifact("sphere-exp", cfg, result))
    return 0


def _cmd_color_search(args):
    from .coloring import coloring_to_json, search_coloring, verify_coloring

    coloring = search_coloring(args.n, args.d, args.m, args.seed,
                               max_retries=args.retries,
                               budget=args.budget_selectors,
                               samples=args.samples, jobs=args.jobs)
    report = verify_coloring(coloring, args.m, budget=args.budget_selectors,
                             samples=args.samples, jobs=args.jobs)
    result = {
        "coloring": coloring_to_json(coloring),
        "verified": report.ok,
        "sampled": report.sampled,
        "selectors_checked": report.selectors_checked,
    }
    cfg = _config_of(args, ["n", "d", "m", "seed", "retries",
                            "budget-selectors", "samples", "jobs"])
    _emit(args, _artifact("color-search", cfg, result))
    return 0


def _cmd_clique_prob(args):
    from .coloring import clique_probability_oracle

    edges = (args.d + 1) * args.m ** args.d
    if 2 ** edges > args.budget_bits and args.seed is None:
        _error("SeedRequired",
               "sampled clique probability needs an explicit --seed")
        return 1
    rep = clique_probability_oracle(args.m, args.d, budget=args.budget_bits,
                                    samples=args.samples,
                                    seed=args.seed or 0)
    result = {
        "exact": rep.exact,
        "fraction": frac_str(rep.fraction) if rep.fraction is not None else None,
        "estimate": rep.estimate,
        "ci95": rep.ci95,
        "bound": frac_str(rep.bound),
        "edges": rep.edges,
        "cliques_per_edge": rep.cliques_per_edge,
    }
    cfg = _config_of(args, ["m", "d", "seed", "budget-bits", "samples"])
    _emit(args, _artifact("clique-prob", cfg, result))
    return 0


def _cmd_bounds(args):
    from .coloring import coloring_union_bound, pach_threshold_coloring
    from .sphere import pach_threshold_sphere, sphere_union_bound

    d, n = args.d, args.n
    result = {"gromov_bound": frac_str(gromov_bound(d))}
    tc = pach_threshold_coloring(n, d)
    result["coloring_threshold"] = tc
    mc = args.m if args.m is not None else tc
    if 1 <= mc <= n:
        cb = coloring_union_bound(n, d, mc)
        result["coloring_union_bound"] = {"m": mc, "log": cb.value,
                                          "sign": cb.sign}
    else:
        result["coloring_union_bound"] = {"m": mc, "note": "m outside [1, n]"}
    ts = pach_threshold_sphere(n, d)
    result["sphere_threshold"] = ts
    ms = args.m if args.m is not None else ts
    if 1 <= ms <= n:
        sb = sphere_union_bound(n, d, ms)
        result["sphere_union_bound"] = {"m": ms, "log": sb.value,
                                        "sign": sb.sign}
    else:
        result["sphere_union_bound"] = {"m": ms, "note": "m outside [1, n]"}
    cfg = _config_of(args, ["d", "n", "m"])
    _emit(args, _artifact("bounds", cfg, result))
    return 0


def _cmd_build_map(args):
    if args.kind == "pushed":
        from .coloring import (build_pushed_map, random_coloring,
                               search_coloring)

        x = JoinComplex(args.d, args.n)
        if args.m is not None:
            coloring = search_coloring(args.n, args.d, args.m, args.seed,
                                       jobs=args.jobs)
        else:
            coloring = random_coloring(x, args.seed)
        m = build_pushed_map(coloring)
    else:
        x = JoinComplex(args.d, args.n)
        cfg_pts = random_configuration(list(x.vertices()), args.seed)
        m = affine_map(x, cfg_pts)
    report = validate_map(m)
    if not report.ok:
        _error("MapValidationError",
               f"{len(report.violations)} violations",
               extra={"violations": [str(v) for v in report.violations[:16]]})
        return 1
    obj = map_to_json(m)
    obj["generator"] = {
        "command": "build-map",
        "config": _config_of(args, ["kind", "d", "n", "m", "seed"]),
        "version": __version__,
    }
    body = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(body)
    return 0


def _cmd_pipeline(args):
    from .pipeline import run_pipeline

    with open(args.map) as fh:
        obj = json.load(fh)
    m = map_from_json(obj)
    report = validate_map(m)
    if not report.ok:
        _error("MapValidationError",
               f"{len(report.violations)} violations",
               extra={"violations": [str(v) for v in report.violations[:16]]})
        return 1
    run = run_pipeline(m, args.seed, jobs=args.jobs)
    result = {"proof": run.proof, "witness_log": run.witness.log}
    cfg = _config_of(args, ["map", "seed", "jobs"])
    _emit(args, _artifact("pipeline", cfg, result))
    return 0


def _cmd_extract(args):
    if args.infile:
        with open(args.infile) as fh:
            obj = json.load(fh)
        if obj.get("type") == "tripartite-graph":
            g = graph_from_json(obj)
            kind = "graph"
        else:
            g = hypergraph_from_json(obj)
            kind = "hypergraph"
    else:
        if args.seed is None:
            _error("SeedRequired", "random graph generation needs --seed")
            return 1
        sizes = tuple(int(s) for s in args.sizes.split(","))
        g = random_tripartite(sizes, Fraction(args.density), args.seed)
        kind = "graph"
    result = {"kind": kind}
    if kind == "graph":
        result["triangles"] = count_triangles(g)
        parts = extract_tripartite(g, args.t)
        result["t"] = args.t
        result["found"] = parts is not None
        if parts is not None:
            result["parts"] = [list(p) for p in parts]
        if args.oracle:
            result["oracle_max"] = brute_max_complete_tripartite(g)
    else:
        parts = extract_box(g, args.t)
        result["t"] = args.t
        result["found"] = parts is not None
        if parts is not None:
            result["parts"] = [list(p) for p in parts]
        if args.oracle:
            result["oracle_max"] = brute_max_box(g)
    cfg = _config_of(args, ["infile", "sizes", "density", "seed", "t",
                            "oracle"])
    _emit(args, _artifact("extract", cfg, result))
    return 0


def _error(kind: str, message: str, extra: dict | None = None):
    record = {"error": {"type": kind, "message": message}}
    if extra:
        record["error"].update(extra)
    print(json.dumps(record, sort_keys=True), file=sys.stderr)


def _add_common(p, *, d=2, n=None, m=None, seed=False, jobs=False):
    p.add_argument("--d", type=int, default=d)
    if n == "required":
        p.add_argument("--n", type=int, required=True)
    if m == "required":
        p.add_argument("--m", type=int, required=True)
    elif m == "opt":
        p.add_argument("--m", type=int, default=None)
    if seed:
        p.add_argument("--seed", type=int, default=None)
    if jobs:
        p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pachlab",
        description="experiments on join complexes, cofilling norms, and "
                    "topological Pach families",
    )
    ap.add_argument("--config", default=None,
                    help="JSON file of flag defaults")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chains-verify", help="chain/cochain invariants")
    _add_common(p, n="required", seed=True)
    p.add_argument("--pairs", type=int, default=1000)
    p.set_defaults(func=_cmd_chains_verify)

    p = sub.add_parser("cofill", help="minimal cofilling of a coboundary")
    _add_common(p, n="required", seed=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--mode", choices=["exact", "greedy"], default="exact")
    p.add_argument("--budget-coset", type=int, default=1 << 24)
    p.set_defaults(func=_cmd_cofill)

    p = sub.add_parser("sphere-exp", help="random-filling upper-bound runs")
    _add_common(p, n="required", seed=True, jobs=True)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--strategy", default="regions")
    p.add_argument("--budget-nodes", type=int, default=2_000_000)
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=_cmd_sphere_exp)

    p = sub.add_parser("color-search", help="verified random 2-coloring")
    _add_common(p, n="required", m="required", seed=True, jobs=True)
    p.add_argument("--retries", type=int, default=256)
    p.add_argument("--budget-selectors", type=int, default=10_000_000)
    p.add_argument("--samples", type=int, default=2000)
    p.set_defaults(func=_cmd_color_search)

    p = sub.add_parser("clique-prob", help="monochromatic clique fraction")
    _add_common(p, m="required", seed=True)
    p.add_argument("--budget-bits", type=int, default=1 << 22)
    p.add_argument("--samples", type=int, default=200_000)
    p.set_defaults(func=_cmd_clique_prob)

    p = sub.add_parser("bounds", help="thresholds and union bounds")
    _add_common(p, n="required", m="opt")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("build-map", help="write a PL map file")
    _add_common(p, n="required", m="opt", seed=True, jobs=True)
    p.add_argument("--kind", choices=["pushed", "affine"], default="pushed")
    p.set_defaults(func=_cmd_build_map)

    p = sub.add_parser("pipeline", help="lower-bound pipeline on a map file")
    p.add_argument("--map", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_pipeline)

    p = sub.add_parser("extract", help="dense substructure extraction")
    p.add_argument("--infile", default=None)
    p.add_argument("--sizes", default="7,7,7")
    p.add_argument("--density", default="1/2")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_extract)

    return ap


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    ap = build_parser()
    args = ap.parse_args(argv)
    if known.config:
        with open(known.config) as fh:
            defaults = json.load(fh)
        for k, v in defaults.items():
            dest = k.replace("-", "_")
            on_cli = any(a == f"--{k}" or a.startswith(f"--{k}=")
                         for a in argv)
            if hasattr(args, dest) and not on_cli:
                setattr(args, dest, v)
    if args.command in _RANDOMIZED and getattr(args, "seed", None) is None:
        _error("SeedRequired",
               f"{args.command} is randomized; pass an explicit --seed")
        return 1
    try:
        return args.func(args)
    except PachlabError as e:
        extra = {}
        if hasattr(e, "stage"):
            extra["stage"] = e.stage
        if hasattr(e, "violations"):
            extra["violations"] = [str(v) for v in e.violations[:16]]
        _error(type(e).__name__, str(e), extra=extra or None)
        return 1
    except (OSError, ValueError) as e:
        _error(type(e).__name__, str(e))
        return 1


if __name__ == "__main__":
    sys.exit(main())
