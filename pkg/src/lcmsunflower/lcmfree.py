"""LCM-k-tuple detection, the exact f_k(N) solver, and representation families."""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Optional, Sequence

import numpy as np

from .cliques import keyed_clique, mask_keys
from .config import LIMITS
from .errors import InvalidInputError
from .primes import PrimeTable, factorize, sieve_primes
from .setfam import SetFamily, mask_of

# products of two int64 values below this stay below 2**63
_INT64_SAFE = 3_037_000_499
# larger elements are not factored; detection then works on raw lcm values
_FACTOR_LIMIT = 10**12


@dataclass(frozen=True)
class LcmInstance:
    elements: tuple[int, ...]
    factorizations: Optional[tuple[tuple[tuple[int, int], ...], ...]]
    table: Optional[PrimeTable]

    @classmethod
    def from_elements(
        cls, elements: Iterable[int], table: Optional[PrimeTable] = None, factor: Optional[bool] = None
    ) -> "LcmInstance":
        """``factor=None`` factors only when every element is at most 10^12."""
        elems = tuple(sorted(set(int(e) for e in elements)))
        if elems and elems[0] < 1:
            raise InvalidInputError("elements must be positive integers")
        if factor is None:
            factor = not elems or elems[-1] <= _FACTOR_LIMIT
        if not factor:
            return cls(elems, None, table)
        if table is None:
            table = sieve_primes(math.isqrt(elems[-1]) + 1 if elems else 1)
        facs = tuple(tuple(factorize(e, table)) for e in elems)
        return cls(elems, facs, table)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def squarefree(self) -> bool:
        """False when unknown (elements were not factored)."""
        if self.factorizations is None:
            return False
        return all(e == 1 for f in self.factorizations for _, e in f)

    def _facs(self):
        if self.factorizations is None:
            raise InvalidInputError("instance was built without factorizations")
        return self.factorizations

    def support_primes(self) -> tuple[int, ...]:
        """Distinct primes dividing some element, ascending."""
        return tuple(sorted({p for f in self._facs() for p, _ in f}))

    def support_masks(self) -> tuple[int, ...]:
        """Per element, bitmask over :meth:`support_primes` of the primes dividing it."""
        pos = {p: i for i, p in enumerate(self.support_primes())}
        return tuple(mask_of(pos[p] for p, _ in f) for f in self._facs())


def _as_instance(instance) -> LcmInstance:
    return instance if isinstance(instance, LcmInstance) else LcmInstance.from_elements(instance)


def _lcm_keys(elements: Sequence[int]):
    if elements and elements[-1] < _INT64_SAFE:
        arr = np.array(elements, dtype=np.int64)
        return lambda iu, ju: np.lcm(arr[iu], arr[ju])
    objs = list(elements)

    def keys(iu, ju):
        return np.array([math.lcm(objs[a], objs[b]) for a, b in zip(iu.tolist(), ju.tolist())], dtype=object)

    return keys


def find_lcm_k_tuple(instance, k: int, method: str = "buckets") -> Optional[tuple[int, ...]]:
    """Smallest (lexicographic) k distinct elements with one common pairwise lcm.

    "buckets" groups all pairs by lcm and searches each group for a k-clique;
    squarefree inputs use prime-support bitmasks, where lcm is bitwise or.
    "naive" enumerates k-subsets and is kept as an oracle.
    """
    if k < 3:
        raise InvalidInputError("k must be >= 3")
    inst = _as_instance(instance)
    elems = inst.elements
    if len(elems) < k:
        return None
    if method == "naive":
        return _naive_tuple(elems, k)
    if method != "buckets":
        raise InvalidInputError(f"unknown method {method!r}")
    if inst.squarefree and len(inst.support_primes()) <= 64:
        keys = mask_keys(inst.support_masks(), "or")
    else:
        keys = _lcm_keys(elems)
    idx = keyed_clique(len(elems), k, keys)
    return None if idx is None else tuple(elems[i] for i in idx)


def _naive_tuple(elems: Sequence[int], k: int) -> Optional[tuple[int, ...]]:
    for combo in itertools.combinations(elems, k):
        m = math.lcm(combo[0], combo[1])
        if all(math.lcm(a, b) == m for a, b in itertools.combinations(combo, 2)):
            return combo
    return None


def is_lcm_k_free(instance, k: int, method: str = "buckets") -> bool:
    return find_lcm_k_tuple(instance, k, method) is None


# ---------------------------------------------------------------- exact f_k(N)


@dataclass
class FkResult:
    N: int
    k: int
    value: Fraction
    optimal_set: tuple[int, ...]
    nodes: int
    exact: bool
    elapsed: float = 0.0

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "k": self.k,
            "value": str(self.value),
            "set": list(self.optimal_set),
            "exact": self.exact,
            "nodes": self.nodes,
        }


class _Budget(Exception):
    pass


def completes_tuple(a: int, chosen: Sequence[int], k: int) -> bool:
    """Does adding ``a`` create an LCM-k-tuple using k-1 members of ``chosen``?"""
    groups: dict[int, list[int]] = {}
    for b in chosen:
        groups.setdefault(math.lcm(a, b), []).append(b)
    need = k - 1
    for m, grp in groups.items():
        if len(grp) < need:
            continue
        if need == 2:
            for b, c in itertools.combinations(grp, 2):
                if math.lcm(b, c) == m:
                    return True
            continue
        adj = {b: {c for c in grp if c != b and math.lcm(b, c) == m} for b in grp}
        if _has_clique(adj, need):
            return True
    return False


def _has_clique(adj: dict[int, set[int]], size: int) -> bool:
    def rec(cands: list[int], depth: int) -> bool:
        if depth == size:
            return True
        for i, v in enumerate(cands):
            if depth + len(cands) - i < size:
                return False
            if rec([u for u in cands[i + 1 :] if u in adj[v]], depth + 1):
                return True
        return False

    return rec(sorted(v for v in adj if len(adj[v]) >= size - 1), 0)


def exact_fk(N: int, k: int, budget: Optional[int] = None, ceiling: Optional[int] = None) -> FkResult:
    """Maximum of sum 1/a over LCM-k-free A in [N], with the lexicographically smallest optimal A.

    Branch-and-bound over 1, 2, ..., N, include first; a branch is cut when its
    weight plus all remaining reciprocals cannot beat the incumbent. Weights
    are integers lcm(1..N)/a so comparisons are exact.
    """
    if k < 3:
        raise InvalidInputError("k must be >= 3")
    if N < 0:
        raise InvalidInputError("N must be >= 0")
    ceiling = LIMITS.exact_fk_ceiling if ceiling is None else ceiling
    start = time.perf_counter()
    scale = reduce(math.lcm, range(1, N + 1), 1)
    weight = [0] + [scale // a for a in range(1, N + 1)]
    suffix = [0] * (N + 2)
    for a in range(N, 0, -1):
        suffix[a] = suffix[a + 1] + weight[a]

    best = [-1, ()]
    nodes = [0]
    chosen: list[int] = []

    def dfs(a: int, w: int) -> None:
        nodes[0] += 1
        if budget is not None and nodes[0] > budget:
            raise _Budget
        if w > best[0]:
            best[0], best[1] = w, tuple(chosen)
        if a > N or w + suffix[a] <= best[0]:
            return
        if not completes_tuple(a, chosen, k):
            chosen.append(a)
            dfs(a + 1, w + weight[a])
            chosen.pop()
        dfs(a + 1, w)

    completed = True
    try:
        dfs(1, 0)
    except _Budget:
        completed = False
    value = Fraction(best[0], scale)
    return FkResult(
        N=N,
        k=k,
        value=value,
        optimal_set=best[1],
        nodes=nodes[0],
        exact=completed and N <= ceiling,
        elapsed=time.perf_counter() - start,
    )


# ---------------------------------------------------------------- representations


def prime_divisors(m: int) -> tuple[int, ...]:
    return tuple(p for p, _ in factorize(m))


def representation_masks(m: int, primes_of_m: Sequence[int], members: set, ell: int) -> list[int]:
    """Masks over ``primes_of_m`` of the ell-sets S with m / prod(S) in ``members``."""
    out = []
    for combo in itertools.combinations(range(len(primes_of_m)), ell):
        d = 1
        for i in combo:
            d *= primes_of_m[i]
        if m // d in members:
            out.append(mask_of(combo))
    return out


def representation_family(m: int, instance, ell: int) -> SetFamily:
    """The family of ell-element prime sets S of divisors of m with m = a * prod(S), a in A.

    The ground set is the prime divisors of m (as labels); r_ell(m) is its size.
    """
    if m < 1:
        raise InvalidInputError("m must be >= 1")
    if ell < 0:
        raise InvalidInputError("ell must be >= 0")
    inst = _as_instance(instance)
    ps = prime_divisors(m)
    masks = representation_masks(m, ps, set(inst.elements), ell)
    return SetFamily(len(ps), tuple(masks), ps)


def representation_count(m: int, instance, ell: int) -> int:
    return len(representation_family(m, instance, ell))


def support_family(instance) -> SetFamily:
    """Prime supports of a squarefree set, over the primes that occur (as labels)."""
    inst = _as_instance(instance)
    for e, f in zip(inst.elements, inst._facs()):
        if any(x > 1 for _, x in f):
            raise InvalidInputError(f"element {e} is not squarefree")
    ps = inst.support_primes()
    return SetFamily(len(ps), inst.support_masks(), ps)


def parse_instance_text(text: str) -> list[int]:
    """Newline/whitespace separated integers, or a JSON list."""
    import json

    stripped = text.strip()
    if stripped.startswith("["):
        data = json.loads(stripped)
        if not all(isinstance(x, int) for x in data):
            raise InvalidInputError("JSON instance must be a list of integers")
        return list(data)
    try:
        return [int(tok) for tok in stripped.split()]
    except ValueError as exc:
        raise InvalidInputError(f"bad instance token: {exc}") from None
