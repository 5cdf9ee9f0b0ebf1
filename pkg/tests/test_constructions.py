import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lcmsunflower.constructions import (
    WeightedGroundSet,
    block_statistics,
    ck,
    esym,
    esym_bruteforce,
    exponent_g,
    golden_max,
    greedy_buckets,
    harmonic_measure_identity,
    materialize_thm12,
    optimal_B,
    asymptotic_parameters,
    prime_pool,
    product_measure,
    tail_harmonic_bound,
    thm12_construction,
    thm15_construction,
    weighted_cosunflower_pipeline,
    weighted_partition,
)
from lcmsunflower.errors import InvalidInputError, ResourceLimitError, ShortfallError
from lcmsunflower.lcmfree import is_lcm_k_free
from lcmsunflower.primes import sieve_primes
from lcmsunflower.setfam import SetFamily, find_k_cosunflower

PRIMES = sieve_primes(5000)


def test_greedy_examples():
    b = greedy_buckets([2, 3, 5, 7], Fraction(1, 2))
    assert b.blocks == ((2,), (3, 5))
    assert b.sums == (Fraction(1, 2), Fraction(8, 15))
    assert b.leftovers == (7,)
    with pytest.raises(ShortfallError) as info:
        greedy_buckets([3], Fraction(1, 2))
    assert info.value.achieved == 0
    b = greedy_buckets([2, 3, 5, 7, 11, 13], Fraction(1, 10))
    assert b.blocks == ((2,), (3,), (5,), (7,), (11, 13))


@given(st.integers(2, 400), st.integers(1, 30))
def test_greedy_block_bounds(lo, b10):
    pool = prime_pool(PRIMES, lo, 5000)
    B = Fraction(b10, 40)
    b = greedy_buckets(pool, B, count_target=0)
    used = [p for blk in b.blocks for p in blk]
    assert len(used) == len(set(used))
    assert used + list(b.leftovers) == list(pool)
    for J in b.sums:
        assert B <= J < B + b.cap


def test_esym_examples():
    assert esym([Fraction(1, 2), Fraction(1, 3)], 1) == Fraction(5, 6)
    assert esym([Fraction(1, 2), Fraction(1, 3), Fraction(1, 5)], 2) == Fraction(1, 3)
    assert esym([Fraction(1, 7)], 0) == 1
    assert esym([Fraction(1, 7)], 3) == 0


@given(st.lists(st.fractions(min_value=0, max_value=1), max_size=12), st.integers(0, 6))
def test_esym_matches_enumeration(ws, r):
    assert esym(ws, r) == esym_bruteforce(ws, r)


def test_optimal_B_and_ck():
    assert optimal_B(3) == pytest.approx(math.e)
    assert abs(ck(3) - 1 / math.e) < 1e-12
    assert abs(ck(4) - 2 / (math.e * math.sqrt(2))) < 1e-12
    for k in range(3, 11):
        Bstar = optimal_B(k)
        assert abs(golden_max(lambda B: exponent_g(B, k), 1.0, 100.0) - Bstar) < 1e-6
        assert abs(exponent_g(Bstar, k) - ck(k)) < 1e-12
        for B in (1.5, 2.0, 5.0, 20.0, 80.0):
            assert exponent_g(B, k) <= exponent_g(Bstar, k) + 1e-12


def _blocks(*blocks):
    from lcmsunflower.constructions import BlockPartition

    sums = tuple(sum((Fraction(1, p) for p in b), Fraction(0)) for b in blocks)
    return BlockPartition(tuple(blocks), sums, (), Fraction(1, 100), Fraction(1, 2))


def test_thm12_examples():
    b = _blocks((2, 3, 5), (7, 11))
    assert thm12_construction(3, b).harmonic_sum == b.sums[0] * b.sums[1]
    rep = thm12_construction(4, _blocks((2, 3), (5, 7)), enumerate=True)
    assert rep.harmonic_sum == Fraction(1, 210)
    assert rep.sampled_elements == [210]
    assert rep.freeness_checks["lcm_k_free"]
    rep = thm12_construction(4, _blocks((2, 3, 5), (7, 11, 13)), enumerate=True)
    assert rep.freeness_checks["sum_matches_product"] and rep.freeness_checks["lcm_k_free"]
    with pytest.raises(InvalidInputError):
        thm12_construction(5, _blocks((2, 3)))


def test_thm12_cap():
    big = _blocks(tuple(PRIMES.between(0, 200)), tuple(PRIMES.between(200, 400)))
    with pytest.raises(ResourceLimitError):
        thm12_construction(4, big, enumerate=True, cap=100)
    rep = thm12_construction(4, big, enumerate=True, cap=100, allow_truncate=True)
    assert rep.warnings and rep.sampled_elements is None


@given(st.randoms(use_true_random=False), st.integers(3, 5))
def test_thm12_random_pools(rnd, k):
    r = k - 2
    pool = list(PRIMES.between(0, 300))
    rnd.shuffle(pool)
    t = rnd.randint(1, 3)
    blocks, pos = [], 0
    for _ in range(t):
        size = rnd.randint(r, r + 3)
        blocks.append(tuple(sorted(pool[pos : pos + size])))
        pos += size
    rep = thm12_construction(k, _blocks(*blocks), enumerate=True)
    assert rep.freeness_checks["sum_matches_product"]
    assert rep.freeness_checks["lcm_k_free"]


def test_thm15_examples():
    b = _blocks((2, 3, 5), (7, 11))
    from lcmsunflower.constructions import BlockPartition

    one = BlockPartition(((2, 3, 5), (7,)), (Fraction(1), Fraction(1)), (), Fraction(1), Fraction(1, 2))
    assert thm15_construction(SetFamily.from_sets(2, [[]]), one).harmonic_sum == 1
    assert thm15_construction(SetFamily.from_sets(2, [[1], [2]]), one).harmonic_sum == 2
    custom = BlockPartition(((2, 3), (5, 7)), (Fraction(3, 2), Fraction(1)), (), Fraction(1), Fraction(1, 2))
    rep = thm15_construction(SetFamily.from_sets(2, [[1], [1, 2]]), custom, materialize_cap=0)
    assert rep.harmonic_sum == 3 and rep.freeness_checks["sum_at_least_family_size"]
    with pytest.raises(InvalidInputError):
        thm15_construction(SetFamily.from_sets(2, [[1]]), b)


def test_thm15_materialized():
    fam = SetFamily.from_sets(2, [[], [1], [1, 2]])
    b = greedy_buckets(PRIMES.between(1, 500), 1, count_target=2, max_blocks=2, mode="thm15")
    rep = thm15_construction(fam, b, sample=3)
    checks = rep.freeness_checks
    assert checks["family_cosunflower_free"] and checks["lcm_k_free"] and checks["materialized_sum_matches"]
    assert checks["sample_lcm_k_free"]
    assert rep.harmonic_sum >= len(fam)


def test_product_measure_examples():
    half = WeightedGroundSet((1, 2, 3), (Fraction(1, 2),) * 3)
    fam = SetFamily.from_sets(3, [[1], [1, 2]])
    assert product_measure(fam, half) == Fraction(2, 8)
    full = SetFamily(3, tuple(range(8)))
    w = WeightedGroundSet((1, 2, 3), (Fraction(1, 3), Fraction(2, 7), Fraction(9, 10)))
    assert product_measure(full, w) == 1
    one = WeightedGroundSet(("a",), (Fraction(1, 3),))
    assert product_measure(SetFamily.from_sets(1, [[1]]), one) == Fraction(1, 3)
    assert product_measure(SetFamily.from_sets(1, [[]]), one) == Fraction(2, 3)
    with pytest.raises(InvalidInputError):
        WeightedGroundSet((1,), (Fraction(3, 2),))


@given(st.lists(st.fractions(0, 1), min_size=1, max_size=6), st.data())
def test_measure_additive(ws, data):
    n = len(ws)
    wgs = WeightedGroundSet(tuple(range(n)), tuple(ws))
    a = data.draw(st.sets(st.integers(0, (1 << n) - 1)))
    b = data.draw(st.sets(st.integers(0, (1 << n) - 1)))
    b -= a
    fa, fb = SetFamily(n, tuple(sorted(a))), SetFamily(n, tuple(sorted(b)))
    union = SetFamily(n, tuple(sorted(a | b)))
    assert product_measure(union, wgs) == product_measure(fa, wgs) + product_measure(fb, wgs)


def test_partition_examples():
    p = weighted_partition(WeightedGroundSet((1, 2, 3), (0.3, 0.3, 0.3)), 0.5)
    assert p.blocks == ((0, 1),) and p.remainder == (2,)
    p = weighted_partition(WeightedGroundSet((1,), (0.6,)), 0.5)
    assert p.blocks == ((0,),) and p.remainder == ()
    p = weighted_partition(WeightedGroundSet((1, 2), (Fraction(1, 10),) * 2), Fraction(1, 2))
    assert p.blocks == () and p.remainder == (0, 1)


@given(st.lists(st.fractions(0, 1, max_denominator=30), max_size=20), st.fractions(Fraction(1, 20), Fraction(19, 20)))
def test_partition_properties(ws, c):
    wgs = WeightedGroundSet(tuple(range(len(ws))), tuple(ws))
    p = weighted_partition(wgs, c)
    wmax = max(ws, default=Fraction(0))
    seen = [i for b in p.blocks for i in b] + list(p.remainder)
    assert sorted(seen) == list(range(len(ws)))
    for blk, bw in zip(p.blocks, p.block_weights):
        assert c <= bw <= c + wmax
        assert all(bw - ws[i] < c for i in blk)  # inclusion-minimal
    assert p.remainder_weight < c
    W = sum(ws, Fraction(0))
    assert p.n <= W / c
    if wmax + c > 0:
        assert p.n >= (W - c) / (c + wmax)


def test_pipeline_examples():
    wgs = WeightedGroundSet.prime_weights((2, 3, 5, 7, 11))
    res = weighted_cosunflower_pipeline(wgs, Fraction(1, 4), SetFamily.from_sets(3, [[]]))
    assert res.family.members == (0,)
    assert res.measure == math.prod((1 - w for w in wgs.weights), start=Fraction(1))
    half = WeightedGroundSet(("a", "b"), (Fraction(1, 2), Fraction(1, 2)))
    res = weighted_cosunflower_pipeline(half, Fraction(1, 2), SetFamily.from_sets(2, [[1]]))
    st_ = block_statistics(weighted_partition(half, Fraction(1, 2)), half)
    assert res.measure == st_["q"][0] * st_["r"][1] * st_["s"]
    assert res.report.freeness_checks["measure_routes_agree"]


def test_pipeline_rejects_mismatch():
    wgs = WeightedGroundSet.prime_weights((2, 3, 5))
    with pytest.raises(InvalidInputError):
        weighted_cosunflower_pipeline(wgs, Fraction(1, 4), SetFamily.from_sets(5, [[]]))


def test_harmonic_identity_example():
    left, right = harmonic_measure_identity(SetFamily.from_sets(2, [[1]]), (2, 3))
    assert left == right == Fraction(1, 2)


def test_pipeline_random_cosunflower_free_bases():
    rng = random.Random(5)
    ps = PRIMES.between(4, 200)
    wgs = WeightedGroundSet.prime_weights(ps)
    n = weighted_partition(wgs, Fraction(1, 4)).n
    for _ in range(20):
        members = []
        for s in rng.sample(range(1 << n), 1 << n):
            if find_k_cosunflower(SetFamily(n, tuple(sorted(members + [s]))), 3) is None:
                members.append(s)
        base = SetFamily(n, tuple(sorted(members)))
        res = weighted_cosunflower_pipeline(wgs, Fraction(1, 4), base)
        checks = res.report.freeness_checks
        assert checks["measure_routes_agree"] and checks["odds_identity"]
        assert checks.get("output_cosunflower_free", True)
        left, right = harmonic_measure_identity(res.family, ps)
        assert left == right


def test_tail_bound_examples():
    assert tail_harmonic_bound(PRIMES, [], 10).majorant == 0
    tb = tail_harmonic_bound(PRIMES, [2], 3)
    assert tb.exact_tail == 0 and tb.holds
    tb = tail_harmonic_bound(PRIMES, [2, 3, 5], 5)
    assert tb.exact_tail == Fraction(11, 30)
    assert tb.holds
    with pytest.raises(InvalidInputError):
        tail_harmonic_bound(PRIMES, [2], 1)
    with pytest.raises(InvalidInputError):
        tail_harmonic_bound(PRIMES, [4], 10)


def test_tail_oracle():
    rng = random.Random(3)
    for _ in range(30):
        P = sorted(rng.sample(PRIMES.between(0, 100), rng.randint(1, 8)))
        N = rng.randint(3, 5000)
        tail = sum(
            (Fraction(1, math.prod(Q)) for r in range(1, len(P) + 1) for Q in itertools.combinations(P, r) if math.prod(Q) > N),
            Fraction(0),
        )
        tb = tail_harmonic_bound(PRIMES, P, N)
        assert tb.exact_tail == tail and tb.holds


def test_asymptotic_parameters():
    out = asymptotic_parameters(1e6, 3)
    assert out["B"] == pytest.approx(math.e)
    assert out["t"] >= 1 and out["log_x"] > 0
    out15 = asymptotic_parameters(1e6, kind="thm15")
    assert out15["B"] == 1.0 and out15["delta"] == pytest.approx(1 / out15["L"])
    with pytest.raises(InvalidInputError):
        asymptotic_parameters(10, kind="other")


def test_prime_pool_interval_flag():
    assert prime_pool(PRIMES, 5, 13) == (5, 7, 11, 13)
    assert prime_pool(PRIMES, 5, 13, closed_lower=False) == (7, 11, 13)


def test_materialize_thm12_counts():
    b = _blocks((2, 3, 5, 7), (11, 13, 17))
    assert len(materialize_thm12(b, 2)) == math.comb(4, 2) * math.comb(3, 2)
    assert is_lcm_k_free(materialize_thm12(b, 2), 4)
