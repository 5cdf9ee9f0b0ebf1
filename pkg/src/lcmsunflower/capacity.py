"""Exact F_k(n) by branch-and-bound, capacity estimates, and known bounds."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

from .config import LIMITS
from .errors import InvalidInputError
from .setfam import SetFamily, bits, find_k_cosunflower, find_k_sunflower, popcount


@dataclass
class CapacityResult:
    n: int
    k: int
    F_value: int
    witness: SetFamily
    nodes_explored: int
    elapsed: float
    exact: bool
    co: bool = False

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "F": self.F_value,
            "witness": self.witness.as_sets(),
            "exact": self.exact,
            "nodes": self.nodes_explored,
            "cosunflower": self.co,
        }


class _Budget(Exception):
    pass


def candidate_order(n: int) -> list[int]:
    """All subsets of [n] ordered by (size, numeric value)."""
    return sorted(range(1 << n), key=lambda m: (popcount(m), m))


def _completes(s: int, chosen: list[int], k: int, co: bool) -> bool:
    """Would adding s create a k-(co)sunflower with k-1 chosen sets?"""
    groups: dict[int, list[int]] = {}
    for b in chosen:
        key = (s | b) if co else (s & b)
        part = (key & ~b) if co else (b & ~key)
        groups.setdefault(key, []).append(part)
    need = k - 1
    for parts in groups.values():
        if len(parts) >= need and _disjoint_parts(parts, need):
            return True
    return False


def _disjoint_parts(parts: list[int], need: int) -> bool:
    def rec(start: int, used: int, depth: int) -> bool:
        if depth == need:
            return True
        for i in range(start, len(parts) - (need - depth) + 1):
            if not parts[i] & used and rec(i + 1, used | parts[i], depth + 1):
                return True
        return False

    return rec(0, 0, 0)


def _layer_caps(n: int, k: int, co: bool) -> dict[int, int]:
    # any k singletons form a sunflower (empty kernel); dually for co-singletons
    caps = {0: 1, n: 1}
    low = n - 1 if co else 1
    if 0 < low < n:
        caps[low] = k - 1
    return caps


class _Search:
    def __init__(self, n: int, k: int, co: bool, budget: Optional[int], layer_bound: bool):
        self.n, self.k, self.co = n, k, co
        self.cands = candidate_order(n)
        self.layer = [popcount(c) for c in self.cands]
        self.budget = budget
        self.layer_bound = layer_bound
        self.caps = _layer_caps(n, k, co) if layer_bound else {}
        self.nodes = 0
        self.best = 0
        self.best_family: list[int] = []

    def remaining_bound(self, pos: int, chosen: list[int]) -> int:
        rest = len(self.cands) - pos
        if not self.caps:
            return rest
        bound = 0
        used: dict[int, int] = {}
        for c in chosen:
            used[popcount(c)] = used.get(popcount(c), 0) + 1
        left: dict[int, int] = {}
        for r in self.layer[pos:]:
            left[r] = left.get(r, 0) + 1
        for r, cnt in left.items():
            cap = self.caps.get(r)
            bound += cnt if cap is None else max(0, min(cnt, cap - used.get(r, 0)))
        return bound

    def tick(self) -> None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise _Budget

    def run(self, pos: int, chosen: list[int], target: Optional[int] = None) -> bool:
        """Include-first DFS. With ``target`` set, stop at the first family of that size."""
        self.tick()
        if target is None and len(chosen) > self.best:
            self.best = len(chosen)
            self.best_family = list(chosen)
        if target is not None and len(chosen) == target:
            self.best_family = list(chosen)
            return True
        if pos == len(self.cands):
            return False
        bound = len(chosen) + self.remaining_bound(pos, chosen)
        if (target is None and bound <= self.best) or (target is not None and bound < target):
            return False
        s = self.cands[pos]
        if not _completes(s, chosen, self.k, self.co):
            chosen.append(s)
            done = self.run(pos + 1, chosen, target)
            chosen.pop()
            if done:
                return True
        return self.run(pos + 1, chosen, target)


def max_sunflower_free(
    n: int,
    k: int,
    budget: Optional[int] = None,
    *,
    co: bool = False,
    symmetry: bool = True,
    layer_bound: bool = False,
    exact_ceiling: Optional[int] = None,
) -> CapacityResult:
    """Largest k-sunflower-free (``co=True``: k-cosunflower-free) family on [n].

    Subsets are branched on in (size, value) order. When ``symmetry`` is on the
    root only tries, per layer, the smallest-valued set as the first member,
    since a permutation of [n] maps any family to one with that first member.
    A second include-first sweep at the optimal size returns the witness whose
    candidate positions are lexicographically smallest.
    """
    if k < 3:
        raise InvalidInputError("k must be >= 3")
    if n < 0:
        raise InvalidInputError("n must be >= 0")
    ceiling = LIMITS.exact_capacity_n if exact_ceiling is None else exact_ceiling
    start = time.perf_counter()
    search = _Search(n, k, co, budget, layer_bound)
    completed = True
    try:
        if symmetry:
            search.tick()
            for r in range(n + 1):
                rep = (1 << r) - 1
                pos = search.cands.index(rep)
                search.run(pos + 1, [rep])
        else:
            search.run(0, [])
    except _Budget:
        completed = False
    family = search.best_family
    if completed:
        sweep = _Search(n, k, co, budget, layer_bound)
        try:
            sweep.run(0, [], target=search.best)
            family = sweep.best_family
        except _Budget:
            completed = False
        search.nodes += sweep.nodes
    witness = SetFamily(n, tuple(family))
    return CapacityResult(
        n=n,
        k=k,
        F_value=len(family),
        witness=witness,
        nodes_explored=search.nodes,
        elapsed=time.perf_counter() - start,
        exact=completed and n <= ceiling,
        co=co,
    )


def verify_witness(result: CapacityResult) -> bool:
    """The witness has F_value members and contains no forbidden k-tuple."""
    fam = result.witness
    finder = find_k_cosunflower if result.co else find_k_sunflower
    return len(fam) == result.F_value and fam.ground_size == result.n and finder(fam, result.k) is None


def capacity_lower_estimate(result: CapacityResult) -> float:
    """(F_k(n)/(n+1))^(1/n): the bound on mu_k^S certified by the tensor-power construction."""
    if result.n == 0:
        raise InvalidInputError("capacity estimate undefined for n = 0")
    if not result.exact:
        raise InvalidInputError("capacity estimate needs an exact result")
    return (result.F_value / (result.n + 1)) ** (1.0 / result.n)


# ---------------------------------------------------------------- registry


@dataclass(frozen=True)
class BoundsRecord:
    k: int
    lower: float
    upper: float
    lower_source: str
    upper_source: str
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "lower": self.lower,
            "upper": self.upper,
            "lower_source": self.lower_source,
            "upper_source": self.upper_source,
        }


NASLUND_SAWIN_K3 = 3 / 2 ** (2 / 3)

_REGISTRY = {
    3: BoundsRecord(
        3,
        1.551,
        NASLUND_SAWIN_K3,
        "Deuber-Erdos-Gunderson-Kostochka-Meyer construction (mu_3 > 1.551)",
        "Naslund-Sawin slice-rank bound 3/2^(2/3)",
    ),
}


def known_bounds(k: int) -> BoundsRecord:
    """Published bounds on the k-sunflower-free capacity; trivial [1, 2] otherwise."""
    if k < 3:
        raise InvalidInputError("k must be >= 3")
    if k in _REGISTRY:
        return _REGISTRY[k]
    return BoundsRecord(k, 1.0, 2.0, "trivial (F_k(n) >= 1)", "trivial (F_k(n) <= 2^n)")


def registry_consistent() -> bool:
    return all(r.lower <= r.upper <= 2.0 for r in _REGISTRY.values()) and math.isclose(
        NASLUND_SAWIN_K3, 1.889881574, abs_tol=1e-9
    )
