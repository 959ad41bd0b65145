"""F2 chains and cochains on a join complex.

Bit i of a (co)chain's integer corresponds to the face of rank i, so
boundary and coboundary reduce to XORs and masked popcounts against cached
facet masks.  Norms are exact rationals: support size over face count.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from . import f2linalg
from .complexes import JoinComplex
from .errors import BudgetExceededError, NotACoboundaryError, SizeLimitError

DEFAULT_COSET_BUDGET = 1 << 24
DEFAULT_MAX_CELLS = 1 << 26


@lru_cache(maxsize=None)
def _facet_masks(d: int, n: int, k: int) -> tuple[int, ...]:
    """For each k-face rank, the bit mask of its (k-1)-face facets.

    Row r read as a functional on C^(k-1) is the coboundary matrix row of
    the k-face of rank r; read as a chain it is the boundary of that face.
    """
    if k < 1:
        raise ValueError("facet masks need k >= 1")
    x = JoinComplex(d, n)
    masks = []
    for face in x.faces(k):
        m = 0
        for j in range(len(face)):
            m |= 1 << x.rank_face(face[:j] + face[j + 1:])
        masks.append(m)
    return tuple(masks)


def _check_bits(bits: int, length: int, what: str) -> None:
    if bits < 0 or bits >> length:
        raise ValueError(f"{what} bit-vector does not fit length {length}")


@dataclass(frozen=True)
class F2Chain:
    """Formal F2 sum of k-faces, stored as a bit-vector over face ranks."""

    complex: JoinComplex
    k: int
    bits: int

    def __post_init__(self):
        if self.k == -1:
            _check_bits(self.bits, 1, "chain")
            return
        _check_bits(self.bits, self.complex.face_count(self.k), "chain")

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self):
        return _support_faces(self.complex, self.k, self.bits)

    def __xor__(self, other: "F2Chain") -> "F2Chain":
        if self.complex != other.complex or self.k != other.k:
            raise ValueError("chain mismatch")
        return F2Chain(self.complex, self.k, self.bits ^ other.bits)

    def boundary(self) -> "F2Chain":
        """Sum of facets of every supported face.

        At k = 0 the facets are copies of the empty face; the convention
        here is to drop them and return the zero (-1)-chain.
        """
        if self.k == 0:
            return F2Chain(self.complex, -1, 0)
        if self.k < 1:
            raise ValueError("boundary needs k >= 0")
        masks = _facet_masks(self.complex.d, self.complex.n, self.k)
        out = 0
        bits = self.bits
        while bits:
            low = bits & -bits
            out ^= masks[low.bit_length() - 1]
            bits ^= low
        return F2Chain(self.complex, self.k - 1, out)


@dataclass(frozen=True)
class F2Cochain:
    """F2-valued function on k-faces, identified with its support."""

    complex: JoinComplex
    k: int
    bits: int

    def __post_init__(self):
        _check_bits(self.bits, self.complex.face_count(self.k), "cochain")

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self):
        return _support_faces(self.complex, self.k, self.bits)

    def norm(self) -> Fraction:
        return Fraction(self.weight, self.complex.face_count(self.k))

    def value(self, face) -> int:
        if self.complex.check_face(face) != self.k:
            raise ValueError("face dimension mismatch")
        return (self.bits >> self.complex.rank_face(face)) & 1

    def __xor__(self, other: "F2Cochain") -> "F2Cochain":
        if self.complex != other.complex or self.k != other.k:
            raise ValueError("cochain mismatch")
        return F2Cochain(self.complex, self.k, self.bits ^ other.bits)

    def coboundary(self) -> "F2Cochain":
        """(k+1)-cochain sending each face to the sum over its facets."""
        x = self.complex
        if self.k >= x.d:
            raise ValueError("coboundary needs k <= d - 1")
        masks = _facet_masks(x.d, x.n, self.k + 1)
        out = 0
        for r, m in enumerate(masks):
            if (m & self.bits).bit_count() & 1:
                out |= 1 << r
        return F2Cochain(x, self.k + 1, out)


def _support_faces(x: JoinComplex, k: int, bits: int):
    while bits:
        low = bits & -bits
        yield x.unrank_face(k, low.bit_length() - 1)
        bits ^= low


def pairing(a: F2Cochain, c: F2Chain) -> int:
    """Evaluation <a, c> in F2."""
    if a.complex != c.complex or a.k != c.k:
        raise ValueError("pairing needs matching complex and dimension")
    return (a.bits & c.bits).bit_count() & 1


def _guard_size(x: JoinComplex, k_lo: int, k_hi: int, max_cells: int) -> None:
    cells = x.face_count(k_lo) * x.face_count(k_hi)
    if cells > max_cells:
        raise SizeLimitError(
            f"delta matrix has {cells} cells, over the {max_cells} limit"
        )


def cohomology_rank(x: JoinComplex, k: int,
                    max_cells: int = DEFAULT_MAX_CELLS) -> int:
    """Dimension of the reduced k-th F2 cohomology group.

    Computed by rank-nullity from the coboundary matrices; the reduced
    variant subtracts the rank-1 image of the augmentation at k = 0.
    """
    if not 0 <= k <= x.d:
        raise ValueError("need 0 <= k <= d")
    nk = x.face_count(k)
    if k < x.d:
        _guard_size(x, k, k + 1, max_cells)
        rank_up = f2linalg.rank(list(_facet_masks(x.d, x.n, k + 1)))
    else:
        rank_up = 0
    if k >= 1:
        _guard_size(x, k - 1, k, max_cells)
        rank_down = f2linalg.rank(list(_facet_masks(x.d, x.n, k)))
    else:
        rank_down = 1
    return nk - rank_up - rank_down


@dataclass(frozen=True)
class CofillingReport:
    """Outcome of a cofilling search for delta(a) = b."""

    b: F2Cochain
    a: F2Cochain
    ratio: Fraction
    exact: bool


def minimal_cofilling(x: JoinComplex, b: F2Cochain, mode: str = "exact",
                      budget: int = DEFAULT_COSET_BUDGET,
                      max_cells: int = DEFAULT_MAX_CELLS) -> CofillingReport:
    """Find a (k-1)-cochain a with coboundary b and small norm.

    exact mode walks the whole solution coset and returns the true minimum
    (ties broken toward the smaller bit-vector); greedy mode descends from
    one solution by kernel-basis moves and makes no optimality claim.
    """
    if mode not in ("exact", "greedy"):
        raise ValueError(f"unknown mode {mode!r}")
    if b.complex != x:
        raise ValueError("cochain belongs to a different complex")
    if b.k < 1:
        raise ValueError("cofilling needs k >= 1")
    _guard_size(x, b.k - 1, b.k, max_cells)
    rows = list(_facet_masks(x.d, x.n, b.k))
    ncols = x.face_count(b.k - 1)
    solved = f2linalg.solve(rows, b.bits, ncols)
    if solved is None:
        raise NotACoboundaryError(
            f"no (k-1)-cochain has this {b.k}-cochain as coboundary"
        )
    particular, kernel = solved
    if mode == "exact":
        if len(kernel) >= budget.bit_length():
            raise BudgetExceededError(
                "coset too large for exhaustive search",
                required=1 << len(kernel), budget=budget,
            )
        _, bits = f2linalg.coset_min_weight(particular, kernel, ncols)
    else:
        bits = f2linalg.greedy_min_weight(particular, kernel)
    a = F2Cochain(x, b.k - 1, bits)
    if a.coboundary().bits != b.bits:
        raise AssertionError("cofilling failed verification")
    ratio = Fraction(0) if b.bits == 0 else a.norm() / b.norm()
    return CofillingReport(b=b, a=a, ratio=ratio, exact=(mode == "exact"))


def cofilling_constant(d: int, n: int, k: int) -> Fraction:
    """Crude cofilling bound from face-count ratios; at most 2**k."""
    if not 1 <= k <= d:
        raise ValueError("need 1 <= k <= d")
    x = JoinComplex(d, n)
    return (Fraction(x.face_count(k), x.face_count(k - 1))
            * Fraction((1 << k) - 1, n))


def gromov_bound(d: int) -> Fraction:
    """Constant in the heavy-face lower bound for d-dimensional maps."""
    if d < 1:
        raise ValueError("need d >= 1")
    return Fraction(1, factorial(d + 1) * (1 << (d * d + 1)))


def cochain_to_json(a: F2Cochain) -> dict:
    x = a.complex
    nbytes = (x.face_count(a.k) + 7) // 8
    return {
        "type": "f2cochain",
        "d": x.d,
        "n": x.n,
        "k": a.k,
        "hex": a.bits.to_bytes(nbytes, "little").hex(),
    }


def cochain_from_json(obj: dict) -> F2Cochain:
    if obj.get("type") != "f2cochain":
        raise ValueError("not a serialized cochain")
    x = JoinComplex(int(obj["d"]), int(obj["n"]))
    bits = int.from_bytes(bytes.fromhex(obj["hex"]), "little")
    return F2Cochain(x, int(obj["k"]), bits)
