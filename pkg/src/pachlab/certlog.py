"""Certified natural-log arithmetic for union bounds and thresholds.

Float log values here are display values computed at 100-bit precision;
every sign decision and every ceiling that matters is certified separately
by exact integer comparison or by interval arithmetic, never by the float.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .errors import PachlabError

_PREC = 100


@dataclass(frozen=True)
class LogBound:
    """A natural-log value whose sign was certified exactly."""

    value: float
    sign: int

    def __float__(self) -> float:
        return self.value

    def __lt__(self, other) -> bool:
        return self.value < float(other)


def ln_int(x: int) -> float:
    """Natural log of a positive integer, evaluated at high precision."""
    if x <= 0:
        raise ValueError("ln_int needs a positive integer")
    with mpmath.workprec(_PREC):
        return float(mpmath.log(mpmath.mpf(x)))


def log_ratio(num: int, den: int) -> float:
    """ln(num/den) for positive integers, exact sign by construction."""
    if num <= 0 or den <= 0:
        raise ValueError("log_ratio needs positive integers")
    with mpmath.workprec(_PREC):
        return float(mpmath.log(mpmath.mpf(num)) - mpmath.log(mpmath.mpf(den)))


def certified_sign(num: int, den: int) -> int:
    """Exact sign of ln(num/den): integer comparison, no rounding."""
    if num <= 0 or den <= 0:
        raise ValueError("certified_sign needs positive integers")
    return (num > den) - (num < den)


def certified_ceil_ln_root(coeff: int, n: int, root: int,
                           max_prec: int = 4096) -> int:
    """ceil(coeff * (ln n)**(1/root)) certified by interval arithmetic.

    Raises if the interval cannot separate the value from an integer at
    any precision up to max_prec (which would mean the value is within
    interval noise of an exact integer).
    """
    if n < 2 or coeff < 1 or root < 1:
        raise ValueError("need n >= 2, coeff >= 1, root >= 1")
    prec = 64
    while prec <= max_prec:
        iv = mpmath.iv
        old = iv.prec
        try:
            iv.prec = prec
            ln_n = iv.log(iv.mpf(n))
            if root == 1:
                y = iv.mpf(coeff) * ln_n
            else:
                y = iv.mpf(coeff) * iv.exp(iv.log(ln_n) / root)
            lo = mpmath.mpf(y.a)
            hi = mpmath.mpf(y.b)
        finally:
            iv.prec = old
        clo = int(mpmath.ceil(lo))
        chi = int(mpmath.ceil(hi))
        if clo == chi:
            return clo
        prec *= 2
    raise PachlabError(
        f"ceiling of {coeff}*(ln {n})^(1/{root}) not separable from an integer"
    )
