"""Lower-bound constructions for f_k(N) and the product-measure machinery.

Three constructions are covered:

* bucket products: pick exactly r = k-2 primes from each greedy prime block
  (the polylogarithmic bound with exponent c_k);
* family encoding: pick one prime per block for each member of a
  cosunflower-free family on [t] (the capacity-driven bound);
* weighted blow-up: blow a cosunflower-free base family up over a partition
  of a weighted ground set and measure it under the product measure.

All constructions work on synthetic prime pools; :func:`asymptotic_parameters`
reports what the asymptotic parameter choices would be for a given N.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .config import LIMITS
from .errors import InvalidInputError, ResourceLimitError, ShortfallError
from .lcmfree import find_lcm_k_tuple
from .numeric import exact_reciprocal_sum
from .primes import PrimeTable
from .setfam import Blocks, SetFamily, bits, blow_up, blow_up_size, find_k_cosunflower, mask_of

Weight = Union[Fraction, float]


# ---------------------------------------------------------------- bucketing


@dataclass(frozen=True)
class BlockPartition:
    blocks: tuple[tuple[int, ...], ...]
    sums: tuple[Fraction, ...]
    leftovers: tuple[int, ...]
    threshold: Fraction
    cap: Fraction
    mode: str = "thm12"

    @property
    def t(self) -> int:
        return len(self.blocks)

    def to_json(self) -> dict:
        return {
            "blocks": [list(b) for b in self.blocks],
            "sums": [str(s) for s in self.sums],
            "leftovers": list(self.leftovers),
            "threshold": float(self.threshold),
            "cap": str(self.cap),
            "mode": self.mode,
        }


def greedy_buckets(
    primes: Sequence[int],
    threshold: Weight,
    count_target: int = 1,
    max_blocks: Optional[int] = None,
    mode: str = "thm12",
) -> BlockPartition:
    """Fill blocks left to right, closing a block once its sum of 1/p reaches ``threshold``.

    Every closed block has threshold <= J < threshold + 1/min(primes). Primes
    after the last closed block (or after ``max_blocks`` blocks) are leftovers.
    """
    ps = list(primes)
    if any(b <= a for a, b in zip(ps, ps[1:])):
        raise InvalidInputError("primes must be strictly ascending")
    B = Fraction(threshold)
    if B <= 0:
        raise InvalidInputError("threshold must be positive")
    cap = Fraction(1, ps[0]) if ps else Fraction(0)
    blocks: list[tuple[int, ...]] = []
    sums: list[Fraction] = []
    current: list[int] = []
    acc = Fraction(0)
    pos = 0
    while pos < len(ps) and (max_blocks is None or len(blocks) < max_blocks):
        p = ps[pos]
        pos += 1
        current.append(p)
        acc += Fraction(1, p)
        if acc >= B:
            blocks.append(tuple(current))
            sums.append(acc)
            current, acc = [], Fraction(0)
    leftovers = tuple(current) + tuple(ps[pos:])
    if len(blocks) < count_target:
        raise ShortfallError(
            f"only {len(blocks)} blocks reach threshold {float(B):.6g}, {count_target} requested", len(blocks)
        )
    return BlockPartition(tuple(blocks), tuple(sums), leftovers, B, cap, mode)


# ---------------------------------------------------------------- elementary symmetric sums


def esym(weights: Sequence[Weight], r: int) -> Weight:
    """Degree-r elementary symmetric polynomial via the column recurrence e_j += w * e_{j-1}."""
    if r < 0:
        raise InvalidInputError("r must be >= 0")
    e = [Fraction(1)] + [Fraction(0)] * r if all(isinstance(w, (int, Fraction)) for w in weights) else [1.0] + [0.0] * r
    for w in weights:
        for j in range(min(r, len(weights)), 0, -1):
            e[j] += w * e[j - 1]
    return e[r]


def esym_bruteforce(weights: Sequence[Weight], r: int) -> Weight:
    total = Fraction(0)
    for combo in itertools.combinations(weights, r):
        total += math.prod(combo)
    return total


# ---------------------------------------------------------------- exponent optimisation


def optimal_B(k: int) -> float:
    """Threshold e * (r!)^(1/r), r = k - 2, maximizing the per-block exponent."""
    if k < 3:
        raise InvalidInputError("k must be >= 3")
    r = k - 2
    return math.e * math.factorial(r) ** (1.0 / r)


def ck(k: int) -> float:
    """Exponent (k-2) / (e ((k-2)!)^(1/(k-2)))."""
    if k < 3:
        raise InvalidInputError("k must be >= 3")
    r = k - 2
    return r / (math.e * math.factorial(r) ** (1.0 / r))


def exponent_g(B: float, k: int) -> float:
    """(r log B - log r!) / B: exponent gained per block of harmonic mass B."""
    r = k - 2
    return (r * math.log(B) - math.lgamma(r + 1)) / B


def golden_max(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    """Golden-section search for the maximizer of a unimodal f on [lo, hi]."""
    inv = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - inv * (b - a), a + inv * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    return (a + b) / 2


# ---------------------------------------------------------------- reports


@dataclass
class ConstructionReport:
    kind: str
    params: dict
    harmonic_sum: Weight
    predicted_exponent: Optional[float] = None
    sampled_elements: Optional[list[int]] = None
    freeness_checks: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        hs = self.harmonic_sum
        return {
            "kind": self.kind,
            "paper_params": self.params,
            "harmonic_sum": str(hs) if isinstance(hs, Fraction) else hs,
            "harmonic_sum_float": float(hs),
            "predicted_exponent": self.predicted_exponent,
            "sampled_elements": self.sampled_elements,
            "freeness_checks": self.freeness_checks,
            "extras": self.extras,
            "warnings": self.warnings,
        }


def _block_reciprocals(block: Sequence[int]) -> list[Fraction]:
    return [Fraction(1, p) for p in block]


def thm12_construction(
    k: int,
    buckets: BlockPartition,
    enumerate: bool = False,
    cap: Optional[int] = None,
    allow_truncate: bool = False,
) -> ConstructionReport:
    """Harmonic sum of {prod of r primes from each block}, r = k - 2.

    The sum factorizes as the product of per-block elementary symmetric sums;
    with ``enumerate`` the set is materialized (when below ``cap``), its sum of
    reciprocals is compared with the product, and LCM-k-freeness is checked.
    """
    if k < 3:
        raise InvalidInputError("k must be >= 3")
    r = k - 2
    for i in range(buckets.t):
        if len(buckets.blocks[i]) < r:
            raise InvalidInputError(f"block {i + 1} has {len(buckets.blocks[i])} primes, fewer than r = {r}")
    factors = [esym(_block_reciprocals(b), r) for b in buckets.blocks]
    total = math.prod(factors, start=Fraction(1))
    B = float(buckets.threshold)
    report = ConstructionReport(
        kind="thm12",
        params={
            "k": k,
            "r": r,
            "t": buckets.t,
            "B": B,
            "delta": float(buckets.cap),
            "exponent": exponent_g(B, k),
            "c_k": ck(k),
            "synthetic": True,
        },
        harmonic_sum=total,
        predicted_exponent=exponent_g(B, k),
        extras={"block_esym": [str(f) for f in factors], "block_sums": [str(s) for s in buckets.sums]},
    )
    if buckets.t == 0:
        report.warnings.append("no completed blocks; the set is {1}")
    if enumerate:
        cap = LIMITS.enumeration_cap if cap is None else cap
        count = math.prod((math.comb(len(b), r) for b in buckets.blocks), start=1)
        report.extras["element_count"] = count
        if count > cap:
            if not allow_truncate:
                raise ResourceLimitError(f"construction has {count} elements, above cap {cap}")
            report.warnings.append(f"enumeration skipped: {count} elements above cap {cap}")
            return report
        elements = materialize_thm12(buckets, r)
        enumerated = exact_reciprocal_sum(elements)
        witness = find_lcm_k_tuple(elements, k)
        report.sampled_elements = elements
        report.freeness_checks = {
            "sum_matches_product": enumerated == total,
            "lcm_k_free": witness is None,
            "elements_checked": len(elements),
        }
    return report


def materialize_thm12(buckets: BlockPartition, r: int) -> list[int]:
    per_block = [[math.prod(c) for c in itertools.combinations(b, r)] for b in buckets.blocks]
    return sorted(math.prod(choice) for choice in itertools.product(*per_block))


def thm15_construction(
    family: SetFamily,
    buckets: BlockPartition,
    k: int = 3,
    sample: int = 0,
    check_family: bool = True,
    materialize_cap: Optional[int] = None,
) -> ConstructionReport:
    """Harmonic sum of {prod_{i in F} p_i : p_i in P_i, F in family}.

    Each member F contributes prod_{i in F} J_i, which is at least 1 when all
    block sums J_i are >= 1. ``sample`` elements (the smallest prime from each
    block for the first members) are spot-checked for LCM-k-freeness; when the
    whole set has at most ``materialize_cap`` elements it is checked in full.
    """
    t = family.ground_size
    if buckets.t < t:
        raise InvalidInputError(f"family on [{t}] needs {t} blocks, only {buckets.t} available")
    J = buckets.sums[:t]
    low = [i + 1 for i, j in enumerate(J) if j < 1]
    if low:
        raise InvalidInputError(f"block sums J_i < 1 for blocks {low}")
    report = ConstructionReport(
        kind="thm15",
        params={"k": k, "t": t, "B": 1.0, "delta": float(buckets.cap), "family_size": len(family), "synthetic": True},
        harmonic_sum=Fraction(0),
    )
    if check_family and t <= 20:
        report.freeness_checks["family_cosunflower_free"] = find_k_cosunflower(family, k) is None
    total = Fraction(0)
    for f in family.members:
        total += math.prod((J[i] for i in bits(f)), start=Fraction(1))
    report.harmonic_sum = total
    report.freeness_checks["sum_at_least_family_size"] = total >= len(family)
    blocks_used = buckets.blocks[:t]
    size = sum(math.prod((len(blocks_used[i]) for i in bits(f)), start=1) for f in family.members)
    report.extras["element_count"] = size
    cap = 5000 if materialize_cap is None else materialize_cap
    if size <= cap:
        elements = materialize_thm15(family, blocks_used)
        report.freeness_checks["materialized_sum_matches"] = exact_reciprocal_sum(elements) == total
        report.freeness_checks["lcm_k_free"] = find_lcm_k_tuple(elements, k) is None
        report.freeness_checks["elements_checked"] = len(elements)
    if sample:
        picks = sorted(math.prod((blocks_used[i][0] for i in bits(f)), start=1) for f in family.members[:sample])
        report.sampled_elements = picks
        report.freeness_checks["sample_lcm_k_free"] = find_lcm_k_tuple(picks, k) is None
    return report


def materialize_thm15(family: SetFamily, blocks: Sequence[Sequence[int]]) -> list[int]:
    out = []
    for f in family.members:
        for choice in itertools.product(*(blocks[i] for i in bits(f))):
            out.append(math.prod(choice, start=1))
    return sorted(out)


# ---------------------------------------------------------------- product measure


@dataclass(frozen=True)
class WeightedGroundSet:
    elements: tuple
    weights: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "weights", tuple(self.weights))
        if len(self.elements) != len(self.weights):
            raise InvalidInputError("one weight per element")
        for a, w in zip(self.elements, self.weights):
            if not 0 <= w <= 1:
                raise InvalidInputError(f"weight of {a} is {w}, outside [0, 1]")

    @property
    def total(self) -> Weight:
        return sum(self.weights, Fraction(0)) if self._exact else math.fsum(self.weights)

    @property
    def _exact(self) -> bool:
        return all(isinstance(w, (int, Fraction)) for w in self.weights)

    def __len__(self) -> int:
        return len(self.elements)

    @classmethod
    def prime_weights(cls, primes: Sequence[int]) -> "WeightedGroundSet":
        """Weights 1/(p+1), for which w/(1-w) = 1/p."""
        return cls(tuple(primes), tuple(Fraction(1, p + 1) for p in primes))


def subset_measure(mask: int, weights: Sequence[Weight]) -> Weight:
    one = Fraction(1) if all(isinstance(w, (int, Fraction)) for w in weights) else 1.0
    out = one
    for i, w in enumerate(weights):
        out *= w if mask >> i & 1 else one - w
    return out


def product_measure(family: SetFamily, wgs: WeightedGroundSet) -> Weight:
    """mu_w(family) = sum over members B of prod_{a in B} w_a prod_{a not in B} (1 - w_a)."""
    if family.ground_size != len(wgs):
        raise InvalidInputError(f"family on {family.ground_size} elements, weights on {len(wgs)}")
    exact = wgs._exact
    total = Fraction(0) if exact else 0.0
    for m in family.members:
        total += subset_measure(m, wgs.weights)
    return total


@dataclass(frozen=True)
class WeightedPartition:
    blocks: tuple[tuple[int, ...], ...]
    remainder: tuple[int, ...]
    block_weights: tuple
    remainder_weight: Weight
    c: Weight

    @property
    def n(self) -> int:
        return len(self.blocks)

    def as_blocks(self, ground_size: int) -> Blocks:
        return Blocks(ground_size, tuple(mask_of(b) for b in self.blocks), mask_of(self.remainder))


def weighted_partition(wgs: WeightedGroundSet, c: Weight) -> WeightedPartition:
    """Peel off inclusion-minimal blocks of weight >= c while the rest still weighs >= c.

    Each block is a greedy prefix of the remaining elements, then pruned of any
    element whose removal keeps the weight >= c (pruned elements return to the
    pool). Blocks weigh in [c, c + max weight]; the remainder weighs < c.
    Blocks and remainder hold element positions (0-based).
    """
    c = Fraction(c) if isinstance(c, (int, Fraction)) and wgs._exact else c
    if not 0 < c < 1:
        raise InvalidInputError("c must lie in (0, 1)")
    w = wgs.weights
    pool = list(range(len(w)))
    blocks, weights = [], []
    zero = Fraction(0) if wgs._exact else 0.0

    def weight_of(idx):
        return sum((w[i] for i in idx), zero)

    while pool and weight_of(pool) >= c:
        block, acc = [], zero
        for i in pool:
            block.append(i)
            acc += w[i]
            if acc >= c:
                break
        for i in list(block[:-1]):
            if acc - w[i] >= c:
                block.remove(i)
                acc -= w[i]
        chosen = set(block)
        pool = [i for i in pool if i not in chosen]
        blocks.append(tuple(block))
        weights.append(acc)
    return WeightedPartition(tuple(blocks), tuple(pool), tuple(weights), weight_of(pool), c)


def block_statistics(part: WeightedPartition, wgs: WeightedGroundSet) -> dict:
    """r_i = P(no element of A_i), q_i = P(exactly one), s = P(nothing from the remainder)."""
    w = wgs.weights
    one = Fraction(1) if wgs._exact else 1.0
    r_list, q_list = [], []
    for blk in part.blocks:
        r_i = math.prod((one - w[a] for a in blk), start=one)
        q_i = sum(
            (w[a] * math.prod((one - w[b] for b in blk if b != a), start=one) for a in blk), one - one
        )
        r_list.append(r_i)
        q_list.append(q_i)
    s = math.prod((one - w[b] for b in part.remainder), start=one)
    return {"r": r_list, "q": q_list, "s": s}


@dataclass
class PipelineResult:
    family: SetFamily
    measure: Weight
    report: ConstructionReport


def weighted_cosunflower_pipeline(
    wgs: WeightedGroundSet,
    c: Weight,
    base: SetFamily,
    k: int = 3,
    cap: Optional[int] = None,
    check_output: bool = True,
) -> PipelineResult:
    """Partition, blow the caller's cosunflower-free base family up, and measure it.

    The measure is computed twice: directly from the blown-up family, and as
    sum over F of s * prod_{i in F} q_i * prod_{i not in F} r_i.
    """
    if len(wgs) > 64:
        raise InvalidInputError("weighted ground sets are limited to 64 elements")
    part = weighted_partition(wgs, c)
    n = part.n
    if base.ground_size != n:
        raise InvalidInputError(f"base family lives on [{base.ground_size}] but the partition has {n} blocks")
    report = ConstructionReport(
        kind="weighted",
        params={"k": k, "c": str(c) if isinstance(c, Fraction) else c, "n_blocks": n, "W": str(wgs.total)},
        harmonic_sum=Fraction(0),
    )
    if n <= 20:
        report.freeness_checks["base_cosunflower_free"] = find_k_cosunflower(base, k) is None
        if not report.freeness_checks["base_cosunflower_free"]:
            raise InvalidInputError(f"base family is not {k}-cosunflower-free")
    blocks = part.as_blocks(len(wgs))
    size = blow_up_size(base, blocks)
    cap = LIMITS.enumeration_cap if cap is None else cap
    if size > cap:
        raise ResourceLimitError(f"blow-up has {size} members, above cap {cap}")
    fam = blow_up(base, blocks, labels=wgs.elements, cap=cap)
    direct = product_measure(fam, wgs)
    stats = block_statistics(part, wgs)
    one = Fraction(1) if wgs._exact else 1.0
    decomposed = one - one
    for f in base.members:
        term = stats["s"]
        for i in range(n):
            term *= stats["q"][i] if f >> i & 1 else stats["r"][i]
        decomposed += term
    ratio_ok = True
    for blk, r_i, q_i in zip(part.blocks, stats["r"], stats["q"]):
        ws = [wgs.weights[a] for a in blk]
        odds = sum((x / (one - x) for x in ws), one - one) if all(x < 1 for x in ws) else None
        if odds is not None and r_i:
            ratio_ok &= _close(q_i / r_i, odds) and odds >= sum(ws, one - one)
    report.harmonic_sum = direct
    report.extras.update(
        {
            "measure_direct": _fmt(direct),
            "measure_decomposed": _fmt(decomposed),
            "block_weights": [_fmt(x) for x in part.block_weights],
            "remainder_weight": _fmt(part.remainder_weight),
            "r": [_fmt(x) for x in stats["r"]],
            "q": [_fmt(x) for x in stats["q"]],
            "s": _fmt(stats["s"]),
            "family_size": len(fam),
        }
    )
    report.freeness_checks["measure_routes_agree"] = _close(direct, decomposed)
    report.freeness_checks["odds_identity"] = ratio_ok
    if check_output and len(fam) <= 3000:
        report.freeness_checks["output_cosunflower_free"] = find_k_cosunflower(fam, k, "buckets") is None
    return PipelineResult(fam, direct, report)


def harmonic_measure_identity(family: SetFamily, primes: Sequence[int]) -> tuple[Fraction, Fraction]:
    """(sum over Q of 1/prod Q, mu_w(family) / mu_w({empty})) with w_p = 1/(p+1)."""
    wgs = WeightedGroundSet.prime_weights(primes)
    left = sum((Fraction(1, math.prod((primes[b] for b in bits(m)), start=1)) for m in family.members), Fraction(0))
    empty = subset_measure(0, wgs.weights)
    right = product_measure(family, wgs) / empty
    return left, right


def _close(a, b) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return math.isclose(float(a), float(b), rel_tol=1e-12, abs_tol=1e-300)


def _fmt(x):
    return str(x) if isinstance(x, Fraction) else x


# ---------------------------------------------------------------- tail bound


@dataclass(frozen=True)
class TailBound:
    majorant: float
    exact_tail: Optional[Fraction]
    holds: Optional[bool]


def tail_harmonic_bound(table: PrimeTable, P: Sequence[int], N: int, cap: int = 1 << 20) -> TailBound:
    """(1/log N) * prod_{q in P}(1 + 1/q) * sum_{p in P} (log p)/p, and the exact tail it bounds.

    The tail is the sum of 1/prod(Q) over subsets Q of P with prod(Q) > N,
    enumerated when 2^|P| <= cap.
    """
    if N < 3:
        raise InvalidInputError("N must be >= 3 so that log N > 1")
    ps = sorted(P)
    for p in ps:
        if p not in table:
            raise InvalidInputError(f"{p} is not a prime of the table")
    if not ps:
        return TailBound(0.0, Fraction(0), True)
    euler = math.prod(1 + 1 / q for q in ps)
    logs = math.fsum(math.log(p) / p for p in ps)
    majorant = euler * logs / math.log(N)
    if (1 << len(ps)) > cap:
        return TailBound(majorant, None, None)
    tail = []
    for mask in range(1, 1 << len(ps)):
        prod = math.prod((ps[b] for b in bits(mask)), start=1)
        if prod > N:
            tail.append(prod)
    exact = exact_reciprocal_sum(tail)
    return TailBound(majorant, exact, float(exact) <= majorant)


# ---------------------------------------------------------------- parameter helper


def asymptotic_parameters(N_log10: float, k: int = 3, kind: str = "thm12", B: Optional[float] = None) -> dict:
    """Asymptotic parameter choices for a given N, reported in log form.

    Nothing is sieved: x is astronomically large for any N where t >= 1.
    thm12: L = log log N, delta = L^(-1/2), t = floor((1-delta) L / B),
    log x = log N / (r t), y = exp(L^(1/3)).
    thm15: delta = 1/L, y = L^2, t = floor(L - 2 log L), log x = log N / t.
    """
    logN = N_log10 * math.log(10)
    L = math.log(logN)
    out: dict = {"log_N": logN, "L": L, "kind": kind, "k": k}
    if kind == "thm12":
        B = optimal_B(k) if B is None else B
        r = k - 2
        delta = L ** -0.5
        t = math.floor((1 - delta) * L / B)
        out.update(
            {
                "B": B,
                "r": r,
                "delta": delta,
                "t": t,
                "log_x": logN / (r * t) if t >= 1 else None,
                "y": math.exp(L ** (1 / 3)),
                "exponent": exponent_g(B, k),
                "needed_mass": t * (B + delta),
            }
        )
    elif kind == "thm15":
        t = math.floor(L - 2 * math.log(L)) if L > 1 else 0
        out.update(
            {
                "B": 1.0,
                "delta": 1 / L,
                "t": t,
                "log_x": logN / t if t >= 1 else None,
                "y": L**2,
                "needed_mass": t * (1 + 1 / L),
            }
        )
    else:
        raise InvalidInputError(f"unknown construction {kind!r}")
    return out


def prime_pool(table: PrimeTable, lo: int, hi: int, closed_lower: bool = True) -> tuple[int, ...]:
    """Primes in [lo, hi] (closed_lower) or (lo, hi]."""
    return table.between(lo - 1 if closed_lower else lo, hi)
