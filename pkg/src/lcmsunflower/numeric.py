"""Exact and compensated summation helpers."""

from __future__ import annotations

import math
import sys
from fractions import Fraction
from typing import Iterable, Sequence, Union

Number = Union[int, float, Fraction]


def _split_sum(values: Sequence[int], lo: int, hi: int) -> tuple[int, int]:
    # (numerator, denominator) of sum 1/v over values[lo:hi]; denominator is
    # the lcm of the values, numerator is not reduced.
    if hi - lo == 1:
        return 1, values[lo]
    mid = (lo + hi) // 2
    n1, d1 = _split_sum(values, lo, mid)
    n2, d2 = _split_sum(values, mid, hi)
    g = math.gcd(d1, d2)
    if g == 1:
        return n1 * d2 + n2 * d1, d1 * d2
    return n1 * (d2 // g) + n2 * (d1 // g), d1 // g * d2


def exact_reciprocal_sum(values: Iterable[int]) -> Fraction:
    """Sum of 1/v over positive integers, as a reduced Fraction.

    Balanced binary splitting keeps every intermediate denominator equal to an
    lcm of the terms, so a single final gcd does the reduction.
    """
    vals = list(values)
    if not vals:
        return Fraction(0)
    if min(vals) <= 0:
        raise ValueError("reciprocal sum needs positive integers")
    num, den = _split_sum(vals, 0, len(vals))
    return Fraction(num, den)


def fsum_reciprocals(values: Iterable[float]) -> float:
    """Correctly rounded float sum of 1/v."""
    return math.fsum(1.0 / v for v in values)


def tree_sum(values: Sequence[Fraction]) -> Fraction:
    """Pairwise sum of Fractions; keeps intermediate sizes balanced."""
    vals = list(values)
    if not vals:
        return Fraction(0)
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


def rational_str(x: Number) -> str:
    """Serialize a rational as "p/q" (or "p" for integers), however many digits."""
    f = Fraction(x)
    try:
        return str(f)
    except ValueError:
        old = sys.get_int_max_str_digits()
        sys.set_int_max_str_digits(0)
        try:
            return str(f)
        finally:
            sys.set_int_max_str_digits(old)


def parse_rational(text: str | int | float | Fraction) -> Fraction:
    """Inverse of rational_str; also accepts decimals such as "0.25"."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, (int, float)):
        return Fraction(text)
    return Fraction(text.strip())
