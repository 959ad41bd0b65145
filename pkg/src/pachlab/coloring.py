"""Random 2-colorings of the cross-part graph and the pushed-edge map.

A coloring assigns +1/-1 to every (d-1)-face.  The verifier demands a
monochromatic top clique of each color inside every choice of m vertices
per part; the union bound says random colorings pass once m reaches
ceil(25 (ln n)^(1/(d-1))).  At d=2 a passing coloring turns into a planar
PL map by tenting each edge up or down according to its color.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from . import certlog
from .complexes import Face, JoinComplex
from .errors import MapValidationError, SearchFailedError
from .geometry import ExactPoint, PointConfiguration
from .plmap import PLMap, Polyline, validate_map
from .util import nth_prime, parallel_map, sub_rng


@dataclass(frozen=True)
class TwoColoring:
    """Sign per (d-1)-face, packed by face rank (set bit means +1)."""

    complex: JoinComplex
    bits: int
    seed: int | None = None

    def __post_init__(self):
        width = self.complex.face_count(self.complex.d - 1)
        if self.bits < 0 or self.bits >> width:
            raise ValueError("coloring does not fit the (d-1)-skeleton")

    def value(self, face: Face) -> int:
        if self.complex.check_face(face) != self.complex.d - 1:
            raise ValueError("coloring is defined on (d-1)-faces")
        r = self.complex.rank_face(face)
        return 1 if (self.bits >> r) & 1 else -1


def random_coloring(x: JoinComplex, seed: int, attempt: int = 0) -> TwoColoring:
    rng = sub_rng(seed, f"coloring:{attempt}")
    bits = rng.getrandbits(x.face_count(x.d - 1))
    return TwoColoring(x, bits, seed=seed)


def face_color(coloring: TwoColoring, sigma: Face) -> int:
    """+1/-1 when all facets of a top face share that color, else 0."""
    x = coloring.complex
    if x.check_face(sigma) != x.d:
        raise ValueError("need a top face")
    vals = {coloring.value(sigma[:j] + sigma[j + 1:])
            for j in range(len(sigma))}
    if len(vals) == 1:
        return vals.pop()
    return 0


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    failing_selector: tuple | None
    sampled: bool
    selectors_checked: int


def _facet_color_table(coloring: TwoColoring) -> dict:
    x = coloring.complex
    table = {}
    for f in x.faces(x.d - 1):
        table[f] = 1 if (coloring.bits >> x.rank_face(f)) & 1 else -1
    return table


def _selector_has_both(x: JoinComplex, table: dict, selector) -> bool:
    d = x.d
    found = 0
    pools = [[(i, a) for a in s] for i, s in enumerate(selector)]
    for tup in itertools.product(*pools):
        first = table[tup[1:]]
        mono = True
        for j in range(1, d + 1):
            if table[tup[:j] + tup[j + 1:]] != first:
                mono = False
                break
        if mono:
            found |= 1 if first > 0 else 2
            if found == 3:
                return True
    return False


def _verify_block(args):
    d, n, bits, m, first = args
    x = JoinComplex(d, n)
    table = _facet_color_table(TwoColoring(x, bits))
    rest = itertools.product(
        *[itertools.combinations(range(n), m) for _ in range(d)]
    )
    for tail in rest:
        selector = (first,) + tail
        if not _selector_has_both(x, table, selector):
            return selector
    return None


def verify_coloring(coloring: TwoColoring, m: int,
                    budget: int = 10_000_000, samples: int = 2000,
                    jobs: int = 1) -> VerifyReport:
    """Check every (d, m)-subgraph for monochromatic cliques of both colors.

    Exhaustive over all C(n, m)^(d+1) selectors (lexicographic order, so a
    reported failure is the smallest one) while that count fits the budget;
    beyond it, falls back to seeded random selectors and says so.
    """
    x = coloring.complex
    n, d = x.n, x.d
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    total = comb(n, m) ** (d + 1)
    table = _facet_color_table(coloring)
    if total <= budget:
        firsts = list(itertools.combinations(range(n), m))
        if jobs > 1:
            results = parallel_map(
                _verify_block,
                [(d, n, coloring.bits, m, f) for f in firsts],
                jobs=jobs,
            )
            for res in results:
                if res is not None:
                    return VerifyReport(False, res, False, total)
        else:
            for sel in itertools.product(
                *[itertools.combinations(range(n), m) for _ in range(d + 1)]
            ):
                if not _selector_has_both(x, table, sel):
                    return VerifyReport(False, sel, False, total)
        return VerifyReport(True, None, False, total)
    rng = sub_rng(coloring.seed or 0, f"verify-sample:{m}")
    for _ in range(samples):
        sel = tuple(tuple(sorted(rng.sample(range(n), m)))
                    for _ in range(d + 1))
        if not _selector_has_both(x, table, sel):
            return VerifyReport(False, sel, True, samples)
    return VerifyReport(True, None, True, samples)


def search_coloring(n: int, d: int, m_target: int, seed: int,
                    max_retries: int = 256, budget: int = 10_000_000,
                    samples: int = 2000, jobs: int = 1) -> TwoColoring:
    """First random coloring (deterministic in seed) passing the verifier."""
    x = JoinComplex(d, n)
    for t in range(max_retries):
        coloring = random_coloring(x, seed, attempt=t)
        report = verify_coloring(coloring, m_target, budget=budget,
                                 samples=samples, jobs=jobs)
        if report.ok:
            return coloring
    raise SearchFailedError(
        f"no coloring for n={n}, d={d}, m={m_target} in {max_retries} tries"
    )


@dataclass(frozen=True)
class CliqueOracleReport:
    exact: bool
    fraction: Fraction | None
    estimate: float | None
    ci95: float | None
    bound: Fraction
    edges: int
    cliques_per_edge: int


def clique_probability_oracle(m: int, d: int, budget: int = 1 << 22,
                              samples: int = 200_000, seed: int = 0
                              ) -> CliqueOracleReport:
    """Fraction of edge subsets of the complete (d, m)-graph with no top clique.

    Exhaustive while 2**((d+1) m^d) fits the budget, in which case the exact
    fraction is asserted to be at most (1 - 2^(-d-1))^(m^d); larger cases
    return a seeded sample estimate with a 95% interval and no assertion.
    Also checks, by direct counting, that every edge lies in equally many
    top cliques.
    """
    x = JoinComplex(d, m)
    n_edges = x.face_count(d - 1)
    per_edge = [0] * n_edges
    masks = []
    for sigma in x.faces(d):
        mask = 0
        for j in range(d + 1):
            r = x.rank_face(sigma[:j] + sigma[j + 1:])
            mask |= 1 << r
            per_edge[r] += 1
        masks.append(mask)
    if len(set(per_edge)) != 1:
        raise AssertionError("clique covering is not edge-regular")
    bound = Fraction((1 << (d + 1)) - 1, 1 << (d + 1)) ** (m ** d)
    if 1 << n_edges <= budget:
        count = 0
        for g in range(1 << n_edges):
            if not any(mask & g == mask for mask in masks):
                count += 1
        fraction = Fraction(count, 1 << n_edges)
        if fraction > bound:
            raise AssertionError(
                f"exact clique-free fraction {fraction} exceeds bound {bound}"
            )
        return CliqueOracleReport(True, fraction, None, None, bound,
                                  n_edges, per_edge[0])
    rng = sub_rng(seed, f"clique-oracle:{d}:{m}")
    hits = 0
    for _ in range(samples):
        g = rng.getrandbits(n_edges)
        if not any(mask & g == mask for mask in masks):
            hits += 1
    p = hits / samples
    ci = 1.96 * (p * (1 - p) / samples) ** 0.5
    return CliqueOracleReport(False, None, p, ci, bound,
                              n_edges, per_edge[0])


def coloring_union_bound(n: int, d: int, m: int) -> certlog.LogBound:
    """ln of C(n,m)^(d+1) * 2 * (1 - 2^(-d-1))^(m^d), sign certified.

    Negative means random colorings pass the verifier at this m with
    positive probability.
    """
    if not (2 <= n and 1 <= m <= n):
        raise ValueError("need n >= 2 and 1 <= m <= n")
    e = m ** d
    num = comb(n, m) ** (d + 1) * 2 * ((1 << (d + 1)) - 1) ** e
    den = 1 << ((d + 1) * e)
    return certlog.LogBound(certlog.log_ratio(num, den),
                            certlog.certified_sign(num, den))


def pach_threshold_coloring(n: int, d: int) -> int:
    """ceil(25 (ln n)^(1/(d-1))), the m at which the union bound is used."""
    if d < 2:
        raise ValueError("threshold needs d >= 2")
    return certlog.certified_ceil_ln_root(25, n, d - 1)


def default_positions(x: JoinComplex) -> dict:
    """Vertex (i, a) at x = 3a + i: distinct integers, parts interleaved."""
    if x.d != 2:
        raise ValueError("pushed maps are planar: d = 2 only")
    return {(i, a): Fraction(3 * a + i)
            for i in range(3) for a in range(x.n)}


def default_heights(x: JoinComplex, salt: int = 0) -> dict:
    """Distinct prime tent heights per edge, shifted as a block by salt."""
    n_edges = x.face_count(1)
    start = 1 + salt * (n_edges + x.face_count(2))
    return {tau: Fraction(nth_prime(start + x.rank_face(tau)))
            for tau in x.faces(1)}


def _default_apex(x: JoinComplex, positions: dict, salt: int):
    n_edges = x.face_count(1)
    start = 1 + salt * (n_edges + x.face_count(2)) + n_edges

    def apex(sigma: Face, sign: int) -> ExactPoint:
        cx = sum(positions[v] for v in sigma) / 3
        cy = Fraction(sign * nth_prime(start + x.rank_face(sigma)))
        return ExactPoint(cx, cy)

    return apex


def build_pushed_map(coloring: TwoColoring, positions: dict | None = None,
                     heights: dict | None = None, apex_rule=None,
                     max_salt: int = 64) -> PLMap:
    """Tent every edge up or down by its color and cone every 2-face.

    Vertices sit on the axis; edge (u, v) becomes the two-segment tent
    u -> (midpoint, chi(uv) * height) -> v; each 2-face is filled by the six
    triangles coning its tent cycle from an apex that lies above the axis
    when all three edge colors are +1, below when all are -1, and at a
    generic off-axis point otherwise.  With default geometry the prime
    streams are re-salted until validate_map passes.
    """
    x = coloring.complex
    if x.d != 2:
        raise ValueError("pushed maps are planar: d = 2 only")
    defaults = positions is None and heights is None and apex_rule is None
    salts = range(max_salt) if defaults else (0,)
    last = None
    for salt in salts:
        pos = positions if positions is not None else default_positions(x)
        _check_distinct("positions", pos)
        hts = heights if heights is not None else default_heights(x, salt)
        _check_heights(hts)
        apex = apex_rule if apex_rule is not None \
            else _default_apex(x, pos, salt)
        m = _assemble(x, coloring, pos, hts, apex)
        report = validate_map(m)
        if report.ok:
            return m
        last = report
    raise MapValidationError(last.violations)


def _check_distinct(what: str, mapping: dict) -> None:
    seen = {}
    clashes = []
    for key in sorted(mapping):
        v = mapping[key]
        if v in seen:
            clashes.append((seen[v], key))
        else:
            seen[v] = key
    if clashes:
        raise ValueError(f"{what} collide: {clashes}")


def _check_heights(heights: dict) -> None:
    for tau in heights:
        if heights[tau] <= 0:
            raise ValueError(f"height for {tau} is not positive")
    _check_distinct("heights", heights)


def _assemble(x: JoinComplex, coloring: TwoColoring, positions: dict,
              heights: dict, apex_rule) -> PLMap:
    pts = {v: ExactPoint(Fraction(positions[v]), Fraction(0))
           for v in x.vertices()}
    edges = {}
    for tau in x.faces(1):
        u, v = tau
        mid_x = (positions[u] + positions[v]) / 2
        mid = ExactPoint(mid_x, coloring.value(tau) * Fraction(heights[tau]))
        edges[tau] = Polyline((pts[u], mid, pts[v]))
    faces = {}
    for sigma in x.faces(2):
        u, v, w = sigma
        colors = [coloring.value((u, v)), coloring.value((v, w)),
                  coloring.value((u, w))]
        sign = colors[0] if colors[0] == colors[1] == colors[2] else 1
        apex = apex_rule(sigma, sign)
        cycle = [pts[u], edges[(u, v)].points[1], pts[v],
                 edges[(v, w)].points[1], pts[w], edges[(u, w)].points[1]]
        tris = []
        for e in range(6):
            tris.append((apex, cycle[e], cycle[(e + 1) % 6]))
        faces[sigma] = tris
    return PLMap(complex=x, vertices=PointConfiguration(pts, certified=True),
                 edges=edges, faces=faces)


def q_set(config: PointConfiguration, p: ExactPoint) -> set:
    """Vertices whose image is exactly p, for p on the axis."""
    if p.y != 0:
        raise ValueError("q_set expects a point with y = 0")
    return {vid for vid, q in config.points.items() if q == p}


def coloring_to_json(coloring: TwoColoring) -> dict:
    x = coloring.complex
    nbytes = (x.face_count(x.d - 1) + 7) // 8
    return {
        "type": "two-coloring",
        "d": x.d,
        "n": x.n,
        "seed": coloring.seed,
        "hex": coloring.bits.to_bytes(nbytes, "little").hex(),
    }


def coloring_from_json(obj: dict) -> TwoColoring:
    if obj.get("type") != "two-coloring":
        raise ValueError("not a serialized coloring")
    x = JoinComplex(int(obj["d"]), int(obj["n"]))
    bits = int.from_bytes(bytes.fromhex(obj["hex"]), "little")
    return TwoColoring(x, bits, seed=obj.get("seed"))
