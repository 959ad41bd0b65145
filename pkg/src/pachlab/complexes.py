"""Join complexes of d+1 disjoint n-point vertex sets.

A face takes at most one vertex from each part; the k-faces are exactly the
transversal (k+1)-subsets using k+1 distinct parts, so there are
C(d+1, k+1) * n^(k+1) of them.  Faces are written as sorted tuples of
(part, index) pairs and carry a stable lexicographic rank used to index
bit-vectors elsewhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import InvalidFaceError

Vertex = tuple[int, int]
Face = tuple[Vertex, ...]


def _comb_rank(parts: tuple[int, ...], m: int) -> int:
    """Rank of a sorted combination among combinations(range(m), len(parts))."""
    r = 0
    prev = -1
    k = len(parts)
    for pos, v in enumerate(parts):
        for u in range(prev + 1, v):
            r += comb(m - u - 1, k - pos - 1)
        prev = v
    return r


def _comb_unrank(r: int, m: int, k: int) -> tuple[int, ...]:
    out = []
    v = 0
    for pos in range(k):
        while True:
            block = comb(m - v - 1, k - pos - 1)
            if r < block:
                out.append(v)
                v += 1
                break
            r -= block
            v += 1
    return tuple(out)


@dataclass(frozen=True)
class JoinComplex:
    """The join of d+1 disjoint vertex sets of size n each."""

    d: int
    n: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")

    # -- faces ---------------------------------------------------------

    def face_count(self, k: int) -> int:
        if not 0 <= k <= self.d:
            raise ValueError(f"dimension k={k} outside [0, {self.d}]")
        return comb(self.d + 1, k + 1) * self.n ** (k + 1)

    def check_face(self, face) -> int:
        """Validate a face and return its dimension."""
        face = tuple(face)
        if not face:
            raise InvalidFaceError("empty face")
        parts = [p for p, _ in face]
        if any(not (0 <= p <= self.d) for p in parts):
            raise InvalidFaceError(f"part index outside [0, {self.d}]: {face}")
        if any(not (0 <= a < self.n) for _, a in face):
            raise InvalidFaceError(f"vertex index outside [0, {self.n}): {face}")
        if sorted(set(parts)) != parts:
            raise InvalidFaceError(f"parts must be strictly increasing: {face}")
        return len(face) - 1

    def vertices(self):
        for i in range(self.d + 1):
            for a in range(self.n):
                yield (i, a)

    def faces(self, k: int):
        """All k-faces in rank order."""
        self.face_count(k)  # range check
        for parts in itertools.combinations(range(self.d + 1), k + 1):
            for idx in itertools.product(range(self.n), repeat=k + 1):
                yield tuple(zip(parts, idx))

    def rank_face(self, face) -> int:
        k = self.check_face(face)
        parts = tuple(p for p, _ in face)
        within = 0
        for _, a in face:
            within = within * self.n + a
        return _comb_rank(parts, self.d + 1) * self.n ** (k + 1) + within

    def unrank_face(self, k: int, r: int) -> Face:
        total = self.face_count(k)
        if not 0 <= r < total:
            raise ValueError(f"rank {r} outside [0, {total}) for k={k}")
        block = self.n ** (k + 1)
        parts = _comb_unrank(r // block, self.d + 1, k + 1)
        within = r % block
        idx = []
        for _ in range(k + 1):
            within, a = divmod(within, self.n)
            idx.append(a)
        idx.reverse()
        return tuple(zip(parts, idx))

    def opposite_face(self, sigma, i: int) -> Face:
        """The facet of a top face obtained by dropping its part-i vertex."""
        k = self.check_face(sigma)
        if k != self.d:
            raise InvalidFaceError(f"opposite_face needs a {self.d}-face, got dimension {k}")
        if not 0 <= i <= self.d:
            raise ValueError(f"part {i} outside [0, {self.d}]")
        return tuple(v for v in sigma if v[0] != i)

    # -- sparsity ------------------------------------------------------

    def sparsity(self) -> Fraction:
        """Largest fraction of k-faces meeting a fixed face, over all k and faces.

        By symmetry the fraction depends only on how many parts the fixed
        face touches, so the maximum is over t = 1..d+1 and k = 0..d.
        """
        d, n = self.d, self.n
        best = Fraction(0)
        for t in range(1, d + 2):
            for k in range(d + 1):
                total = comb(d + 1, k + 1) * n ** (k + 1)
                avoid = 0
                for j in range(0, min(t, k + 1) + 1):
                    avoid += (
                        comb(t, j)
                        * comb(d + 1 - t, k + 1 - j)
                        * (n - 1) ** j
                        * n ** (k + 1 - j)
                    )
                frac = 1 - Fraction(avoid, total)
                if frac > best:
                    best = frac
        return best
