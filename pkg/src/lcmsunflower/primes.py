"""Prime tables and sums of 1/p and (log p)/p over half-open ranges (lo, hi]."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

import numpy as np

from .config import LIMITS
from .errors import InvalidInputError, OutOfRangeError, ResourceLimitError
from .numeric import exact_reciprocal_sum

Mode = Literal["exact", "float"]


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: tuple[int, ...]
    index: dict[int, int] = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.primes)

    def __contains__(self, p: object) -> bool:
        return p in self.index

    def between(self, lo: float, hi: float) -> tuple[int, ...]:
        """Primes p with lo < p <= hi."""
        self._check_hi(hi)
        i = bisect.bisect_right(self.primes, math.floor(lo)) if lo >= 0 else 0
        j = bisect.bisect_right(self.primes, math.floor(hi))
        return self.primes[i:j]

    def _check_hi(self, hi: float) -> None:
        if hi > self.limit:
            raise OutOfRangeError(f"hi={hi} exceeds table limit {self.limit}")


def _odd_sieve(limit: int) -> np.ndarray:
    # flags[i] describes the odd number 2*i + 1
    flags = np.ones((limit + 1) // 2, dtype=bool)
    if flags.size:
        flags[0] = False
    for i in range(1, (math.isqrt(limit) + 1) // 2):
        if flags[i]:
            p = 2 * i + 1
            flags[p * p // 2 :: p] = False
    return flags


def prime_array(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    odd = 2 * np.nonzero(_odd_sieve(limit))[0].astype(np.int64) + 1
    return np.concatenate([np.array([2], dtype=np.int64), odd])


def sieve_primes(limit: int, max_limit: int | None = None) -> PrimeTable:
    """Sieve of Eratosthenes over odd numbers up to ``limit`` inclusive."""
    if limit < 0:
        raise InvalidInputError("limit must be >= 0")
    cap = LIMITS.sieve_limit if max_limit is None else max_limit
    if limit > cap:
        raise ResourceLimitError(f"sieve limit {limit} exceeds configured cap {cap}")
    primes = tuple(int(p) for p in prime_array(limit))
    return PrimeTable(limit, primes, {p: i for i, p in enumerate(primes)})


def prime_harmonic_sum(table: PrimeTable, lo: float, hi: float, mode: Mode = "exact") -> Fraction | float:
    """Sum of 1/p over primes lo < p <= hi.

    Exact mode returns a Fraction; float mode is correctly rounded (fsum).
    """
    if lo > hi:
        raise InvalidInputError(f"empty interval needs lo <= hi, got ({lo}, {hi}]")
    ps = table.between(lo, hi)
    if mode == "exact":
        return exact_reciprocal_sum(ps)
    if mode == "float":
        return math.fsum(1.0 / p for p in ps)
    raise InvalidInputError(f"unknown mode {mode!r}")


def prime_log_sum(table: PrimeTable, hi: float) -> float:
    """Sum of (log p)/p over primes p <= hi."""
    return math.fsum(math.log(p) / p for p in table.between(0, hi))


def factorize(n: int, table: PrimeTable | None = None) -> list[tuple[int, int]]:
    """Trial-division factorization, ascending primes with exponents."""
    if n < 1:
        raise InvalidInputError(f"cannot factor {n}")
    out = []
    rest = n
    candidates = table.primes if table is not None else None
    if candidates is not None and candidates and candidates[-1] ** 2 >= n:
        for p in candidates:
            if p * p > rest:
                break
            if rest % p == 0:
                e = 0
                while rest % p == 0:
                    rest //= p
                    e += 1
                out.append((p, e))
    else:
        p = 2
        while p * p <= rest:
            if rest % p == 0:
                e = 0
                while rest % p == 0:
                    rest //= p
                    e += 1
                out.append((p, e))
            p += 1 if p == 2 else 2
    if rest > 1:
        out.append((rest, 1))
    return out
