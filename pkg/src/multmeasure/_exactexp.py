"""Exact comparisons between rationals and ``e**x`` for rational ``x``.

The only floating point here is in :func:`log_of`, which is used for
reporting and for log-domain accumulation, never for deciding an order.
"""

from __future__ import annotations

import math
from fractions import Fraction

_MAX_BITS = 1 << 20
_LN2_LO = Fraction(6931, 10000)
_LN2_HI = Fraction(6932, 10000)


def exp_enclosure(x: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Return dyadic rationals ``lo <= e**x <= hi`` for ``x >= 0``.

    The argument is halved until it is at most 1, a Taylor sum with a
    rigorous remainder bound encloses ``e**y``, and the enclosure is squared
    back up with outward rounding. The relative width shrinks like
    ``2**-bits``.
    """
    if x < 0:
        raise ValueError("exp_enclosure expects x >= 0")
    m = max(0, x.numerator.bit_length() - x.denominator.bit_length() + 1)
    y = x / (1 << m)
    work = bits + 2 * m + 16
    scale = 1 << work

    s = Fraction(0)
    term = Fraction(1)
    k = 0
    cutoff = Fraction(1, 1 << (work + 2))
    while True:
        s += term
        k += 1
        term = term * y / k
        if term < cutoff:
            break
    # y <= 1 and k >= 1, so the tail is at most twice its first term.
    lo_s, hi_s = s, s + 2 * term

    lo = (lo_s.numerator * scale) // lo_s.denominator
    hi = -((-hi_s.numerator * scale) // hi_s.denominator)
    for _ in range(m):
        lo = (lo * lo) >> work
        hi = -((-hi * hi) >> work)
    return Fraction(lo, scale), Fraction(hi, scale)


def compare_rational_exp(q: Fraction, x: Fraction) -> int:
    """Sign of ``q - e**x`` for rational ``q > 0`` and rational ``x``.

    Equality is only possible at ``x == 0`` (Lindemann), which is decided
    symbolically; every other case terminates by refinement.
    """
    q = Fraction(q)
    x = Fraction(x)
    if q <= 0:
        raise ValueError("q must be positive")
    if x == 0:
        return (q > 1) - (q < 1)
    if x < 0:
        return -compare_rational_exp(1 / q, -x)
    if q <= 1:
        return -1
    # 2**(k-1) < q < 2**(k+1) with k the bit-length difference, and
    # 0.6931 < log 2 < 0.6932, so far-apart magnitudes are settled cheaply.
    k = q.numerator.bit_length() - q.denominator.bit_length()
    if x > (k + 1) * _LN2_HI:
        return -1
    if x < (k - 1) * _LN2_LO:
        return 1
    bits = 32
    while bits <= _MAX_BITS:
        lo, hi = exp_enclosure(x, bits)
        if q < lo:
            return -1
        if q > hi:
            return 1
        bits *= 2
    raise ArithmeticError("refinement budget exhausted comparing q with e**x")


def log_of(q: Fraction) -> float:
    """Natural log of a positive rational, accurate near 1 and for huge terms."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("log of a non-positive rational")
    if Fraction(1, 2) <= q <= 2:
        return math.log1p(float(q - 1))
    return math.log(q.numerator) - math.log(q.denominator)


def to_float(q: Fraction) -> float:
    """``float(q)``, saturating to an infinity instead of overflowing."""
    try:
        return float(q)
    except OverflowError:
        return math.inf if q > 0 else -math.inf
