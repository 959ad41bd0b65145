"""Complete multipartite extraction from triangle-rich structures.

The greedy finders make no existence promises; every success is re-verified
by direct membership checks, and exact branch-and-bound oracles cover the
sizes where exhaustion is feasible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

from .errors import SizeLimitError
from .util import sub_rng

BRUTE_PART_LIMIT = 8


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass
class TripartiteGraph:
    """Three parts with bitset adjacency per part pair; no in-part edges.

    ab[a] holds the part-2 neighbors of part-1 vertex a as a bitmask, and
    likewise bc over part 3 and ac over part 3.
    """

    sizes: tuple[int, int, int]
    ab: list[int] = field(default=None)
    bc: list[int] = field(default=None)
    ac: list[int] = field(default=None)

    def __post_init__(self):
        n1, n2, n3 = self.sizes
        if self.ab is None:
            self.ab = [0] * n1
        if self.bc is None:
            self.bc = [0] * n2
        if self.ac is None:
            self.ac = [0] * n1
        if len(self.ab) != n1 or len(self.ac) != n1 or len(self.bc) != n2:
            raise ValueError("adjacency rows do not match part sizes")

    def add_ab(self, a: int, b: int):
        self.ab[a] |= 1 << b

    def add_bc(self, b: int, c: int):
        self.bc[b] |= 1 << c

    def add_ac(self, a: int, c: int):
        self.ac[a] |= 1 << c

    def has_ab(self, a: int, b: int) -> bool:
        return bool((self.ab[a] >> b) & 1)

    def has_bc(self, b: int, c: int) -> bool:
        return bool((self.bc[b] >> c) & 1)

    def has_ac(self, a: int, c: int) -> bool:
        return bool((self.ac[a] >> c) & 1)

    def edge_count(self) -> int:
        return (sum(r.bit_count() for r in self.ab)
                + sum(r.bit_count() for r in self.bc)
                + sum(r.bit_count() for r in self.ac))


def random_tripartite(sizes, density: Fraction, seed: int) -> TripartiteGraph:
    """Each cross-part pair kept independently with the given probability."""
    density = Fraction(density)
    if not 0 <= density <= 1:
        raise ValueError("density must lie in [0, 1]")
    rng = sub_rng(seed, "tripartite")
    g = TripartiteGraph(tuple(sizes))
    n1, n2, n3 = g.sizes
    den = density.denominator
    num = density.numerator
    for a in range(n1):
        for b in range(n2):
            if rng.randrange(den) < num:
                g.add_ab(a, b)
    for b in range(n2):
        for c in range(n3):
            if rng.randrange(den) < num:
                g.add_bc(b, c)
    for a in range(n1):
        for c in range(n3):
            if rng.randrange(den) < num:
                g.add_ac(a, c)
    return g


def count_triangles(g: TripartiteGraph) -> int:
    """Exact transversal-triangle count by masked popcounts."""
    total = 0
    for a in range(g.sizes[0]):
        row = g.ab[a]
        aca = g.ac[a]
        for b in _bits(row):
            total += (g.bc[b] & aca).bit_count()
    return total


def _restricted_triangles(g: TripartiteGraph, m0: int, m1: int, m2: int) -> int:
    total = 0
    for a in _bits(m0):
        row = g.ab[a] & m1
        aca = g.ac[a] & m2
        for b in _bits(row):
            total += (g.bc[b] & aca).bit_count()
    return total


def _neighbor_masks(g: TripartiteGraph, part: int, v: int):
    """(mask over the other two parts) pairs keyed by part index."""
    if part == 0:
        return {1: g.ab[v], 2: g.ac[v]}
    if part == 1:
        return {0: sum(1 << a for a in range(g.sizes[0])
                       if g.has_ab(a, v)),
                2: g.bc[v]}
    return {0: sum(1 << a for a in range(g.sizes[0]) if g.has_ac(a, v)),
            1: sum(1 << b for b in range(g.sizes[1]) if g.has_bc(b, v))}


def _verify_tripartite(g: TripartiteGraph, a_set, b_set, c_set) -> bool:
    for a in a_set:
        for b in b_set:
            if not g.has_ab(a, b):
                return False
    for b in b_set:
        for c in c_set:
            if not g.has_bc(b, c):
                return False
    for a in a_set:
        for c in c_set:
            if not g.has_ac(a, c):
                return False
    return True


def _max_vertex_degree(g: TripartiteGraph, part: int, cand) -> int:
    best = 0
    for v in _bits(cand[part]):
        nb = _neighbor_masks(g, part, v)
        restricted = dict(cand)
        for q, m in nb.items():
            restricted[q] = cand[q] & m
        restricted[part] = 1 << v
        best = max(best, _restricted_triangles(
            g, restricted[0], restricted[1], restricted[2]))
    return best


def extract_tripartite(g: TripartiteGraph, t: int):
    """Greedy complete-K(t,t,t) finder; returns (A, B, C) or None.

    One vertex per round: the peel part is the unfinished one with the
    largest candidate pool (ties by restricted triangle degree, then index),
    and the pick maximizes triangles surviving the neighborhood restriction
    (ties by vertex rank).  A returned triple is re-verified edge by edge.
    """
    if t < 1:
        raise ValueError("need t >= 1")
    if min(g.sizes) < t:
        return None
    cand = {i: (1 << g.sizes[i]) - 1 for i in range(3)}
    chosen = {i: [] for i in range(3)}
    while any(len(chosen[i]) < t for i in range(3)):
        open_parts = [i for i in range(3) if len(chosen[i]) < t]
        for i in open_parts:
            avail = cand[i] & ~sum(1 << v for v in chosen[i])
            if avail.bit_count() < t - len(chosen[i]):
                return None
        part = max(
            open_parts,
            key=lambda i: (cand[i].bit_count(),
                           _max_vertex_degree(g, i, cand), -i),
        )
        avail = cand[part] & ~sum(1 << v for v in chosen[part])
        best_v, best_score = -1, -1
        for v in _bits(avail):
            nb = _neighbor_masks(g, part, v)
            m = {q: cand[q] & nb.get(q, cand[q]) for q in range(3)}
            m[part] = cand[part]
            score = _restricted_triangles(g, m[0], m[1], m[2])
            if score > best_score:
                best_v, best_score = v, score
        if best_v < 0:
            return None
        chosen[part].append(best_v)
        nb = _neighbor_masks(g, part, best_v)
        ok = True
        for q, mask in nb.items():
            cand[q] &= mask
            if any(not (cand[q] >> v) & 1 for v in chosen[q]):
                ok = False
        if not ok:
            return None
    a_set, b_set, c_set = (tuple(sorted(chosen[i])) for i in range(3))
    if not _verify_tripartite(g, a_set, b_set, c_set):
        return None
    return a_set, b_set, c_set


def triangle_hypergraph(g: TripartiteGraph) -> "PartiteHypergraph":
    tuples = set()
    for a in range(g.sizes[0]):
        for b in _bits(g.ab[a]):
            for c in _bits(g.bc[b] & g.ac[a]):
                tuples.add((a, b, c))
    return PartiteHypergraph(g.sizes, frozenset(tuples))


def brute_max_complete_tripartite(g: TripartiteGraph,
                                  limit: int = BRUTE_PART_LIMIT):
    """Exact maximum t with a complete K(t,t,t); returns (t, witness).

    A complete box in the triangle hypergraph is the same subgraph, so this
    delegates to the box oracle.
    """
    return brute_max_box(triangle_hypergraph(g), limit=limit)


@dataclass(frozen=True)
class PartiteHypergraph:
    """Transversal-tuple family over d+1 parts, one index per part."""

    sizes: tuple[int, ...]
    tuples: frozenset

    def __post_init__(self):
        if any(s < 0 for s in self.sizes):
            raise ValueError("part sizes must be nonnegative")
        for tup in self.tuples:
            if len(tup) != len(self.sizes) or any(
                    not 0 <= v < s for v, s in zip(tup, self.sizes)):
                raise ValueError(f"tuple {tup} out of range")

    @property
    def density(self) -> Fraction:
        total = prod(self.sizes)
        return Fraction(len(self.tuples), total) if total else Fraction(0)

    def contains(self, tup) -> bool:
        return tuple(tup) in self.tuples


def extract_box(h: PartiteHypergraph, t: int):
    """Greedy complete-box finder: per part, keep the t busiest vertices.

    Parts are processed by descending size (ties by index); each step keeps
    the t vertices of the part supporting the most surviving tuples (ties by
    rank) and drops the rest.  The result is returned only if the final
    tuple set is the full t^(d+1) box.
    """
    if t < 1:
        raise ValueError("need t >= 1")
    k = len(h.sizes)
    if min(h.sizes) < t:
        return None
    alive = list(h.tuples)
    chosen = {}
    order = sorted(range(k), key=lambda i: (-h.sizes[i], i))
    for part in order:
        score = {}
        for tup in alive:
            score[tup[part]] = score.get(tup[part], 0) + 1
        ranked = sorted(score, key=lambda v: (-score[v], v))
        if len(ranked) < t:
            return None
        keep = set(ranked[:t])
        chosen[part] = tuple(sorted(keep))
        alive = [tup for tup in alive if tup[part] in keep]
    parts = tuple(chosen[i] for i in range(k))
    for tup in itertools.product(*parts):
        if not h.contains(tup):
            return None
    return parts


def brute_max_box(h: PartiteHypergraph, limit: int = BRUTE_PART_LIMIT):
    """Exact maximum box size by descending-t subset enumeration.

    Returns (t, parts) with parts a tuple of sorted vertex tuples; (0, empty
    parts) when the hypergraph has no tuple at all.
    """
    if max(h.sizes, default=0) > limit:
        raise SizeLimitError(
            f"part size above the brute-force limit {limit}"
        )
    k = len(h.sizes)
    if not h.tuples:
        return 0, tuple(() for _ in range(k))
    for t in range(min(h.sizes), 0, -1):
        found = _box_search(h, t, 0, [], list(h.tuples))
        if found is not None:
            return t, found
    return 0, tuple(() for _ in range(k))


def _box_search(h: PartiteHypergraph, t: int, part: int, chosen, alive):
    # every tuple of a completing box survives the filters so far
    k = len(h.sizes)
    if len(alive) < t ** k:
        return None
    if part == k:
        return tuple(tuple(sorted(c)) for c in chosen)
    support = sorted({tup[part] for tup in alive})
    if len(support) < t:
        return None
    for subset in itertools.combinations(support, t):
        keep = set(subset)
        rest = [tup for tup in alive if tup[part] in keep]
        res = _box_search(h, t, part + 1, chosen + [subset], rest)
        if res is not None:
            return res
    return None


def graph_to_json(g: TripartiteGraph) -> dict:
    return {
        "type": "tripartite-graph",
        "sizes": list(g.sizes),
        "ab": [sorted(_bits(r)) for r in g.ab],
        "bc": [sorted(_bits(r)) for r in g.bc],
        "ac": [sorted(_bits(r)) for r in g.ac],
    }


def graph_from_json(obj: dict) -> TripartiteGraph:
    if obj.get("type") != "tripartite-graph":
        raise ValueError("not a serialized tripartite graph")
    sizes = tuple(obj["sizes"])
    g = TripartiteGraph(sizes)
    for a, row in enumerate(obj["ab"]):
        for b in row:
            g.add_ab(a, b)
    for b, row in enumerate(obj["bc"]):
        for c in row:
            g.add_bc(b, c)
    for a, row in enumerate(obj["ac"]):
        for c in row:
            g.add_ac(a, c)
    return g


def hypergraph_to_json(h: PartiteHypergraph) -> dict:
    return {
        "type": "partite-hypergraph",
        "sizes": list(h.sizes),
        "tuples": sorted(list(t) for t in h.tuples),
    }


def hypergraph_from_json(obj: dict) -> PartiteHypergraph:
    if obj.get("type") != "partite-hypergraph":
        raise ValueError("not a serialized hypergraph")
    return PartiteHypergraph(tuple(obj["sizes"]),
                             frozenset(tuple(t) for t in obj["tuples"]))
