"""Small shared helpers: rational parsing, seeded sub-streams, parallel map."""

from __future__ import annotations

import random
from fractions import Fraction
from multiprocessing import get_context


def frac_str(q) -> str:
    """Serialize a rational as 'num/den' ('num' when integral)."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_frac(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(s)


def point_str(p) -> str:
    return f"{frac_str(p[0])},{frac_str(p[1])}"


def sub_rng(seed: int, tag: str) -> random.Random:
    """Independent deterministic stream for (seed, tag).

    String seeding is hashed with sha512 by the stdlib, stable across runs
    and Python versions.
    """
    return random.Random(f"{seed}:{tag}")


def parallel_map(fn, items, jobs: int = 1, chunksize: int = 1):
    """Order-preserving map, optionally over a process pool.

    Results are merged in input order regardless of jobs, so output is
    deterministic whenever fn is.
    """
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    ctx = get_context("fork")
    with ctx.Pool(processes=jobs) as pool:
        return pool.map(fn, items, chunksize=chunksize)


_PRIMES: list[int] = [2, 3, 5, 7, 11, 13]


def nth_prime(i: int) -> int:
    """The i-th prime, 1-indexed; the cache grows by trial division."""
    if i < 1:
        raise ValueError("primes are 1-indexed")
    while len(_PRIMES) < i:
        c = _PRIMES[-1] + 2
        while True:
            for p in _PRIMES:
                if p * p > c:
                    _PRIMES.append(c)
                    break
                if c % p == 0:
                    break
            else:
                _PRIMES.append(c)
            if _PRIMES[-1] == c:
                break
            c += 2
    return _PRIMES[i - 1]
