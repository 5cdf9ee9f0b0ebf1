"""Set families over ground sets of at most 64 elements, stored as bitmasks.

Bit ``i`` of a mask stands for ground element ``i + 1`` of ``[n]``. Members of a
:class:`SetFamily` are kept sorted as unsigned integers, so witnesses (tuples of
member indices) are deterministic.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .cliques import keyed_clique, mask_keys
from .config import LIMITS
from .errors import GroundSetOverflowError, InvalidInputError, ResourceLimitError

MAX_GROUND = 64


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(mask: int) -> list[int]:
    """Positions of the set bits, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(elements: Iterable[int]) -> int:
    """Bitmask of 0-based positions."""
    m = 0
    for e in elements:
        m |= 1 << e
    return m


@dataclass(frozen=True)
class SetFamily:
    ground_size: int
    members: tuple[int, ...]
    labels: Optional[tuple] = None

    def __post_init__(self) -> None:
        if not 0 <= self.ground_size <= MAX_GROUND:
            raise GroundSetOverflowError(f"ground size {self.ground_size} outside [0, {MAX_GROUND}]")
        members = tuple(sorted(self.members))
        if len(set(members)) != len(members):
            raise InvalidInputError("family members must be distinct")
        full = (1 << self.ground_size) - 1
        for m in members:
            if m < 0 or m & ~full:
                raise InvalidInputError(f"member {m:#x} uses elements outside [{self.ground_size}]")
        object.__setattr__(self, "members", members)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != self.ground_size:
                raise InvalidInputError("need exactly one label per ground element")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_sets(cls, ground_size: int, sets: Iterable[Iterable[int]], labels=None) -> "SetFamily":
        """Build from 1-based element lists (the ``[n] = {1..n}`` convention)."""
        masks = []
        for s in sets:
            s = list(s)
            if any(e < 1 or e > ground_size for e in s):
                raise InvalidInputError(f"set {s} not inside [{ground_size}]")
            masks.append(mask_of(e - 1 for e in s))
        return cls(ground_size, tuple(masks), labels)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @property
    def full(self) -> int:
        return (1 << self.ground_size) - 1

    def as_sets(self) -> list[list[int]]:
        """Members as sorted 1-based element lists."""
        return [[b + 1 for b in bits(m)] for m in self.members]

    def label_sets(self) -> list[list]:
        if self.labels is None:
            return self.as_sets()
        return [[self.labels[b] for b in bits(m)] for m in self.members]


@dataclass(frozen=True)
class Blocks:
    """Partition U_1 ⊔ ... ⊔ U_t ⊔ remainder of a ground set of ``ground_size`` elements."""

    ground_size: int
    blocks: tuple[int, ...]
    remainder: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.ground_size <= MAX_GROUND:
            raise GroundSetOverflowError(f"ground size {self.ground_size} outside [0, {MAX_GROUND}]")
        object.__setattr__(self, "blocks", tuple(self.blocks))
        seen = self.remainder
        for b in self.blocks:
            if b & seen:
                raise InvalidInputError("blocks and remainder must be pairwise disjoint")
            seen |= b
        if seen != (1 << self.ground_size) - 1:
            raise InvalidInputError("blocks and remainder must cover the ground set exactly")

    @classmethod
    def from_sets(cls, ground_size: int, blocks: Sequence[Iterable[int]], remainder: Iterable[int] = ()) -> "Blocks":
        """1-based element lists, as in :meth:`SetFamily.from_sets`."""
        return cls(ground_size, tuple(mask_of(e - 1 for e in b) for b in blocks), mask_of(e - 1 for e in remainder))


# ---------------------------------------------------------------- predicates


def _check_distinct(sets: Sequence[int]) -> None:
    if len(set(sets)) != len(sets):
        raise InvalidInputError("sets must be distinct")


def is_sunflower(sets: Sequence[int]) -> bool:
    """True iff all pairwise intersections of the (distinct) sets coincide."""
    if len(sets) < 2:
        raise InvalidInputError("a sunflower needs at least 2 sets")
    _check_distinct(sets)
    kernel = sets[0] & sets[1]
    return all(a & b == kernel for a, b in itertools.combinations(sets, 2))


def is_cosunflower(sets: Sequence[int]) -> bool:
    """True iff all pairwise unions of the (distinct) sets coincide."""
    if len(sets) < 2:
        raise InvalidInputError("a cosunflower needs at least 2 sets")
    _check_distinct(sets)
    union = sets[0] | sets[1]
    return all(a | b == union for a, b in itertools.combinations(sets, 2))


def pairwise_unions_equal(sets: Sequence[int]) -> bool:
    """Pairwise unions coincide; repeated sets allowed."""
    if len(sets) < 2:
        return True
    union = sets[0] | sets[1]
    return all(a | b == union for a, b in itertools.combinations(sets, 2))


def zero_or_many_check(sets: Sequence[int], k: Optional[int] = None) -> bool:
    """Every element lies in 0 or at least k-1 of the sets (k defaults to len(sets)).

    For k >= 3 this is equivalent to all pairwise unions being equal.
    """
    k = len(sets) if k is None else k
    if k < 3:
        raise InvalidInputError("the multiplicity criterion needs k >= 3")
    counts: Counter = Counter()
    for s in sets:
        for b in bits(s):
            counts[b] += 1
    return all(c >= k - 1 for c in counts.values())


# ---------------------------------------------------------------- searches


def _dfs_sunflower(masks: Sequence[int], k: int) -> Optional[tuple[int, ...]]:
    # petals outside the kernel must be pairwise disjoint
    n = len(masks)
    for i in range(n - k + 1):
        a = masks[i]
        for j in range(i + 1, n - k + 2):
            b = masks[j]
            kernel = a & b
            found = _extend_sunflower(masks, k, [i, j], kernel, (a | b) & ~kernel, j + 1)
            if found is not None:
                return found
    return None


def _extend_sunflower(masks, k, chosen, kernel, petals, start):
    if len(chosen) == k:
        return tuple(chosen)
    need = k - len(chosen)
    for idx in range(start, len(masks) - need + 1):
        s = masks[idx]
        if s & kernel == kernel and not (s & ~kernel) & petals:
            found = _extend_sunflower(masks, k, chosen + [idx], kernel, petals | (s & ~kernel), idx + 1)
            if found is not None:
                return found
    return None


def _dfs_cosunflower(masks: Sequence[int], k: int) -> Optional[tuple[int, ...]]:
    # every element of the union may be missed by at most one set, so the
    # missing parts U \ S_j are pairwise disjoint
    n = len(masks)
    for i in range(n - k + 1):
        a = masks[i]
        for j in range(i + 1, n - k + 2):
            b = masks[j]
            union = a | b
            found = _extend_cosunflower(masks, k, [i, j], union, (union & ~a) | (union & ~b), j + 1)
            if found is not None:
                return found
    return None


def _extend_cosunflower(masks, k, chosen, union, missed, start):
    if len(chosen) == k:
        sets = [masks[c] for c in chosen]
        assert zero_or_many_check(sets, k)
        return tuple(chosen)
    need = k - len(chosen)
    for idx in range(start, len(masks) - need + 1):
        s = masks[idx]
        if s | union == union and not (union & ~s) & missed:
            found = _extend_cosunflower(masks, k, chosen + [idx], union, missed | (union & ~s), idx + 1)
            if found is not None:
                return found
    return None


def sunflower_in(masks: Sequence[int], k: int, method: str = "auto") -> Optional[tuple[int, ...]]:
    """Lexicographically smallest k-sunflower among distinct masks, in their given order."""
    if k < 3:
        raise InvalidInputError("k must be >= 3")
    if len(masks) < k:
        return None
    if method == "auto":
        method = "buckets" if k == 3 else "enumerate"
    if method == "buckets":
        return keyed_clique(len(masks), k, mask_keys(masks, "and"))
    if method == "enumerate":
        return _dfs_sunflower(masks, k)
    raise InvalidInputError(f"unknown method {method!r}")


def cosunflower_in(masks: Sequence[int], k: int, method: str = "direct") -> Optional[tuple[int, ...]]:
    """Lexicographically smallest k-cosunflower among distinct masks, in their given order."""
    if k < 3:
        raise InvalidInputError("k must be >= 3")
    if len(masks) < k:
        return None
    if method == "direct":
        return _dfs_cosunflower(masks, k)
    if method == "buckets":
        return keyed_clique(len(masks), k, mask_keys(masks, "or"))
    raise InvalidInputError(f"unknown method {method!r}")


def find_k_sunflower(family: SetFamily, k: int, method: str = "auto") -> Optional[tuple[int, ...]]:
    """Member indices of the lexicographically smallest k-sunflower, or None.

    ``method`` is "buckets" (pairs grouped by intersection, then a clique
    search per group), "enumerate" (pruned k-subset search) or "auto"
    (buckets for k = 3, enumeration otherwise).
    """
    return sunflower_in(family.members, k, method)


def find_k_cosunflower(family: SetFamily, k: int, method: str = "dual") -> Optional[tuple[int, ...]]:
    """Member indices of the lexicographically smallest k-cosunflower, or None.

    "dual" complements every member in place and runs the sunflower search;
    "direct" and "buckets" search pairwise unions without complementing.
    """
    if method == "dual":
        full = family.full
        return sunflower_in([full ^ m for m in family.members], k, "auto")
    return cosunflower_in(family.members, k, method)


def complement_family(family: SetFamily) -> SetFamily:
    full = family.full
    return SetFamily(family.ground_size, tuple(full ^ m for m in family.members), family.labels)


# ---------------------------------------------------------------- constructions


def blow_up(family: SetFamily, blocks: Blocks, labels=None, cap: Optional[int] = None) -> SetFamily:
    """All transversals choosing one element of U_i for each i in F, for each member F."""
    t = family.ground_size
    if len(blocks.blocks) != t:
        raise InvalidInputError(f"family lives on [{t}] but {len(blocks.blocks)} blocks were given")
    cap = LIMITS.enumeration_cap if cap is None else cap
    singletons = [[1 << b for b in bits(u)] for u in blocks.blocks]
    total = 0
    for f in family.members:
        size = 1
        for i in bits(f):
            if not singletons[i]:
                raise InvalidInputError(f"member {[b + 1 for b in bits(f)]} selects empty block U_{i + 1}")
            size *= len(singletons[i])
        total += size
    if total > cap:
        raise ResourceLimitError(f"blow-up has {total} members, above cap {cap}")
    out = []
    for f in family.members:
        for choice in itertools.product(*(singletons[i] for i in bits(f))):
            m = 0
            for c in choice:
                m |= c
            out.append(m)
    return SetFamily(blocks.ground_size, tuple(out), labels)


def blow_up_size(family: SetFamily, blocks: Blocks) -> int:
    """Sum over members F of prod_{i in F} |U_i|."""
    sizes = [popcount(u) for u in blocks.blocks]
    total = 0
    for f in family.members:
        p = 1
        for i in bits(f):
            p *= sizes[i]
        total += p
    return total


def largest_layer(family: SetFamily) -> tuple[int, SetFamily]:
    """The most populous uniform layer, smallest size r on ties."""
    by_size: dict[int, list[int]] = {}
    for m in family.members:
        by_size.setdefault(popcount(m), []).append(m)
    if not by_size:
        return 0, family
    r = min(by_size, key=lambda s: (-len(by_size[s]), s))
    return r, SetFamily(family.ground_size, tuple(by_size[r]), family.labels)


def tensor_power(family: SetFamily, t: int, k: int, check: bool = True, cap: Optional[int] = None) -> SetFamily:
    """t disjoint copies of the largest layer, glued by disjoint union.

    The result lives on ``[t * n]`` (copy i uses elements i*n+1 .. (i+1)*n) and
    has exactly |layer|^t members.
    """
    if t < 1:
        raise InvalidInputError("t must be >= 1")
    n = family.ground_size
    if t * n > MAX_GROUND:
        raise GroundSetOverflowError(f"t*n = {t * n} exceeds {MAX_GROUND} ground elements")
    if check and find_k_sunflower(family, k) is not None:
        raise InvalidInputError(f"input family is not {k}-sunflower-free")
    _, layer = largest_layer(family)
    cap = LIMITS.enumeration_cap if cap is None else cap
    if len(layer) ** t > cap:
        raise ResourceLimitError(f"tensor power has {len(layer) ** t} members, above cap {cap}")
    out = []
    for combo in itertools.product(layer.members, repeat=t):
        m = 0
        for i, part in enumerate(combo):
            m |= part << (i * n)
        out.append(m)
    return SetFamily(t * n, tuple(out))
