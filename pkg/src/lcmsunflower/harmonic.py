"""Harmonic sums over squarefree almost primes and the Euler products they are compared with."""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .config import LIMITS, cache_dir
from .errors import DomainError, InvalidInputError, ResourceLimitError
from .numeric import exact_reciprocal_sum, rational_str
from .primes import prime_array


@dataclass(frozen=True)
class OmegaTable:
    """omega[n] = number of distinct prime factors, squarefree[n] flag, for 0 <= n <= X."""

    X: int
    omega: np.ndarray
    squarefree: np.ndarray

    def ell_mask(self, ell: int, upto: Optional[int] = None) -> np.ndarray:
        """Boolean mask over 1..upto of squarefree n with omega(n) == ell."""
        upto = self.X if upto is None else upto
        if upto > self.X:
            raise InvalidInputError(f"table covers n <= {self.X}, asked {upto}")
        return (self.omega[1 : upto + 1] == ell) & self.squarefree[1 : upto + 1]


def _cache_path(X: int) -> Optional[str]:
    d = cache_dir()
    return None if d is None else os.path.join(d, f"omega_{X}.npz")


def omega_sieve(X: int, cap: Optional[int] = None) -> OmegaTable:
    """omega(n) and squarefreeness for all n <= X by sieving with each prime."""
    cap = LIMITS.sieve_limit if cap is None else cap
    if X < 1:
        raise InvalidInputError("X must be >= 1")
    if X > cap:
        raise ResourceLimitError(f"omega sieve up to {X} exceeds cap {cap}")
    path = _cache_path(X)
    if path and os.path.exists(path):
        data = np.load(path)
        return OmegaTable(X, data["omega"], data["squarefree"])
    omega = np.zeros(X + 1, dtype=np.uint8)
    squarefree = np.ones(X + 1, dtype=bool)
    squarefree[0] = False
    for p in prime_array(X).tolist():
        omega[p::p] += 1
        if p * p <= X:
            squarefree[p * p :: p * p] = False
    table = OmegaTable(X, omega, squarefree)
    if path:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        np.savez(path, omega=omega, squarefree=squarefree)
    return table


_TABLES: dict[int, OmegaTable] = {}


def _table(X: int, table: Optional[OmegaTable]) -> OmegaTable:
    if table is not None and table.X >= X:
        return table
    for size, cached in _TABLES.items():
        if size >= X:
            return cached
    t = omega_sieve(X)
    _TABLES.clear()
    _TABLES[X] = t
    return t


@dataclass
class HarmonicLedger:
    bound: int
    param: float
    value_float: float
    terms: int
    value_exact: Optional[Fraction] = None
    kind: str = "H_ell"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "bound": self.bound,
            "param": self.param,
            "exact": None if self.value_exact is None else rational_str(self.value_exact),
            "float": self.value_float,
            "terms": self.terms,
        }


def almost_primes(N: int, ell: int, table: Optional[OmegaTable] = None) -> np.ndarray:
    """Squarefree n <= N with exactly ell prime factors, ascending."""
    if N < 1:
        raise InvalidInputError("N must be >= 1")
    if ell < 0:
        raise InvalidInputError("ell must be >= 0")
    if ell == 0:
        return np.array([1], dtype=np.int64)
    t = _table(N, table)
    return np.nonzero(t.ell_mask(ell, N))[0].astype(np.int64) + 1


def H_ell(N: int, ell: int, mode: str = "auto", table: Optional[OmegaTable] = None) -> HarmonicLedger:
    """Sum of 1/n over squarefree n <= N with omega(n) = ell.

    ``mode``: "float" (fsum), "exact" (also a Fraction; N <= 10^5), or
    "auto" (exact whenever N is within the exact limit).
    """
    if mode not in ("auto", "float", "exact"):
        raise InvalidInputError(f"unknown mode {mode!r}")
    if mode == "exact" and N > LIMITS.exact_harmonic_limit:
        raise ResourceLimitError(f"exact H_ell limited to N <= {LIMITS.exact_harmonic_limit}")
    vals = almost_primes(N, ell, table)
    value = math.fsum((1.0 / vals).tolist())
    exact = None
    if mode == "exact" or (mode == "auto" and N <= LIMITS.exact_harmonic_limit):
        exact = exact_reciprocal_sum(vals.tolist())
    return HarmonicLedger(N, ell, value, int(vals.size), exact)


def A_ell(x: int, ell: int, table: Optional[OmegaTable] = None) -> int:
    """Number of squarefree n <= x with exactly ell prime factors."""
    return int(almost_primes(x, ell, table).size)


def squarefree_reciprocal_sum(N: int, table: Optional[OmegaTable] = None) -> Fraction:
    t = _table(N, table)
    vals = np.nonzero(t.squarefree[1 : N + 1])[0] + 1
    return exact_reciprocal_sum(vals.tolist())


def z_omega_sum(X: int, z: float, table: Optional[OmegaTable] = None) -> float:
    """Sum over m <= X of z^omega(m) / m."""
    if z <= 0:
        raise DomainError("z must be positive")
    t = _table(X, table)
    m = np.arange(1, X + 1, dtype=np.float64)
    terms = np.power(float(z), t.omega[1 : X + 1].astype(np.float64)) / m
    return math.fsum(terms.tolist())


def euler_majorant(X: int, z: float) -> float:
    """prod over p <= X of (1 + z/(p-1)): the sum of z^omega(m)/m over all X-smooth m."""
    if z <= 0:
        raise DomainError("z must be positive")
    ps = prime_array(X).astype(np.float64)
    return math.exp(math.fsum(np.log1p(z / (ps - 1)).tolist()))


@dataclass(frozen=True)
class GValue:
    value: float
    cutoff: int
    log_tail_bound: float
    abs_error_bound: float

    def interval(self) -> tuple[float, float]:
        """Bracket for the infinite product: every omitted log-factor lies in [-tail, 0]."""
        return self.value * math.exp(-self.log_tail_bound), self.value


def G_constant(z: float, prime_cutoff: int = 10**6) -> GValue:
    """(1/Gamma(1+z)) prod_{p <= cutoff} (1 + z/p)(1 - 1/p)^z with a truncation bound.

    For p > cutoff each log-factor f(p) = log(1 + z/p) + z log(1 - 1/p) satisfies
    -z(z+1)/p^2 <= f(p) <= 0, so the omitted tail of log G lies in
    [-z(z+1)/cutoff, 0] (sum over n > cutoff of 1/n^2 < 1/cutoff).
    """
    if not 0 <= z < 2:
        raise DomainError(f"G(z) needs 0 <= z < 2, got {z}")
    if z == 0:
        return GValue(1.0, prime_cutoff, 0.0, 0.0)
    ps = prime_array(prime_cutoff).astype(np.float64)
    logs = np.log1p(z / ps) + z * np.log1p(-1.0 / ps)
    log_g = math.fsum(logs.tolist()) - math.lgamma(1 + z)
    value = math.exp(log_g)
    tail = z * (z + 1) / prime_cutoff
    return GValue(value, prime_cutoff, tail, value * -math.expm1(-tail))


def sathe_selberg_main_term(x: int, ell: int, cutoff: int = 10**6) -> float:
    """G((ell-1)/log log x) * x/log x * (log log x)^(ell-1) / (ell-1)!."""
    if ell < 1:
        raise InvalidInputError("ell must be >= 1")
    if x < 16:
        raise DomainError("x must be large enough that log log x > 1")
    ll = math.log(math.log(x))
    z = (ell - 1) / ll
    if z >= 2:
        raise DomainError(f"(ell-1)/log log x = {z:.4f} is outside [0, 2)")
    g = G_constant(z, cutoff).value
    return g * x / math.log(x) * ll ** (ell - 1) / math.factorial(ell - 1)


def trend_rows(Ns: Iterable[int], ells: Iterable[int], exact_limit: Optional[int] = None) -> list[dict]:
    """Rows (N, ell, exact?, H float, (log log N)^ell / ell!, ratio) for the lower-envelope check.

    Exact values are not written out (they run to thousands of digits); the
    row records whether the exact sum was computed and rounds to the float.
    """
    Ns = list(Ns)
    ells = list(ells)
    table = _table(max(Ns), None)
    limit = LIMITS.exact_harmonic_limit if exact_limit is None else exact_limit
    rows = []
    for N in Ns:
        for ell in ells:
            led = H_ell(N, ell, "auto" if N <= limit else "float", table)
            scale = math.log(math.log(N)) ** ell / math.factorial(ell)
            rows.append(
                {
                    "N": N,
                    "ell": ell,
                    "exact_checked": led.value_exact is not None,
                    "exact_agrees": "" if led.value_exact is None else float(led.value_exact) == led.value_float,
                    "H_float": led.value_float,
                    "scale": scale,
                    "ratio": led.value_float / scale,
                }
            )
    return rows


def rows_to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()
