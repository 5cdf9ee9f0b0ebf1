"""Brute-force reference implementations, written independently of the package."""

import itertools
import math


def inter_all(sets):
    out = None
    for s in sets:
        out = set(s) if out is None else out & set(s)
    return out


def brute_sunflower(members, k):
    for combo in itertools.combinations(range(len(members)), k):
        sets = [members[i] for i in combo]
        cores = {a & b for a, b in itertools.combinations(sets, 2)}
        if len(cores) == 1:
            return combo
    return None


def brute_cosunflower(members, k):
    for combo in itertools.combinations(range(len(members)), k):
        sets = [members[i] for i in combo]
        unions = {a | b for a, b in itertools.combinations(sets, 2)}
        if len(unions) == 1:
            return combo
    return None


def brute_lcm_tuple(elements, k):
    for combo in itertools.combinations(sorted(elements), k):
        if len({math.lcm(a, b) for a, b in itertools.combinations(combo, 2)}) == 1:
            return combo
    return None


def brute_blow_up(members, blocks, remainder):
    """Every set meeting the chosen blocks in one element each and nothing else."""
    n_ground = max([b.bit_length() for b in blocks] + [remainder.bit_length(), 0])
    out = set()
    for f in members:
        chosen = [i for i in range(len(blocks)) if f >> i & 1]
        pools = [[e for e in range(n_ground) if blocks[i] >> e & 1] for i in chosen]
        for pick in itertools.product(*pools):
            out.add(sum(1 << e for e in pick))
    return sorted(out)


def brute_fk(N, k):
    """Max sum of 1/a over LCM-k-free A in [N] by scanning all 2^N subsets.

    Bad k-subsets are precomputed as bitmasks; ties go to the lexicographically
    smallest sorted element list.
    """
    from fractions import Fraction

    bad = []
    for combo in itertools.combinations(range(1, N + 1), k):
        if len({math.lcm(a, b) for a, b in itertools.combinations(combo, 2)}) == 1:
            bad.append(sum(1 << (a - 1) for a in combo))
    scale = math.lcm(*range(1, N + 1)) if N else 1
    weights = [scale // a for a in range(1, N + 1)]
    best_w, best_set = -1, None
    for mask in range(1 << N):
        if any(mask & b == b for b in bad):
            continue
        w = sum(weights[i] for i in range(N) if mask >> i & 1)
        elems = [i + 1 for i in range(N) if mask >> i & 1]
        if w > best_w or (w == best_w and elems < best_set):
            best_w, best_set = w, elems
    return Fraction(best_w, scale), tuple(best_set)


def brute_capacity(n, k):
    """Largest k-sunflower-free family of subsets of [n] by scanning all families."""
    subsets = list(range(1 << n))
    best = 0
    for fam in range(1 << len(subsets)):
        members = [s for s in subsets if fam >> s & 1]
        if len(members) <= best:
            continue
        if brute_sunflower(members, k) is None:
            best = len(members)
    return best
