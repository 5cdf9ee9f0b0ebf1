import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from lcmsunflower.errors import DomainError, ResourceLimitError
from lcmsunflower.harmonic import (
    A_ell,
    G_constant,
    H_ell,
    almost_primes,
    euler_majorant,
    omega_sieve,
    rows_to_csv,
    sathe_selberg_main_term,
    squarefree_reciprocal_sum,
    trend_rows,
    z_omega_sum,
)


def test_omega_examples():
    t = omega_sieve(100)
    assert (t.omega[12], bool(t.squarefree[12])) == (2, False)
    assert (t.omega[1], bool(t.squarefree[1])) == (0, True)
    assert (t.omega[30], bool(t.squarefree[30])) == (3, True)


def test_omega_matches_sympy():
    t = omega_sieve(5000)
    for n in range(1, 5001):
        f = sympy.factorint(n)
        assert t.omega[n] == len(f)
        assert bool(t.squarefree[n]) == all(e == 1 for e in f.values())


def test_omega_cap():
    with pytest.raises(ResourceLimitError):
        omega_sieve(10**4, cap=10**3)


def test_omega_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("LCMSUN_CACHE_DIR", str(tmp_path))
    a = omega_sieve(1000)
    assert (tmp_path / "omega_1000.npz").exists()
    b = omega_sieve(1000)
    assert np.array_equal(a.omega, b.omega) and np.array_equal(a.squarefree, b.squarefree)


def test_H_examples():
    for N in (1, 10, 1000):
        assert H_ell(N, 0).value_exact == 1
    assert H_ell(10, 1).value_exact == Fraction(247, 210)
    assert H_ell(10, 2).value_exact == Fraction(4, 15)


def test_A_examples():
    assert A_ell(10, 1) == 4
    assert A_ell(10, 2) == 2
    assert A_ell(500, 0) == 1


def test_exact_mode_limit():
    with pytest.raises(ResourceLimitError):
        H_ell(10**5 + 1, 1, "exact")


def test_exact_and_float_agree():
    for ell in (1, 2, 3, 4):
        led = H_ell(50000, ell)
        assert abs(float(led.value_exact) - led.value_float) <= 1e-10 * led.value_float


def test_partition_identity():
    N = 3000
    total = sum((H_ell(N, ell).value_exact for ell in range(0, 8)), Fraction(0))
    assert total == squarefree_reciprocal_sum(N)


@given(st.integers(2, 3000), st.integers(1, 4))
def test_increment_consistency(N, ell):
    dA = A_ell(N, ell) - A_ell(N - 1, ell)
    dH = H_ell(N, ell, "exact").value_exact - H_ell(N - 1, ell, "exact").value_exact
    assert dA in (0, 1)
    assert dH == (Fraction(1, N) if dA else 0)


def test_almost_primes_oracle():
    got = almost_primes(400, 2).tolist()
    want = [n for n in range(1, 401) if len(sympy.factorint(n)) == 2 and all(e == 1 for e in sympy.factorint(n).values())]
    assert got == want


def test_zomega_examples():
    assert z_omega_sum(1, 0.7) == 1
    assert z_omega_sum(2, 2) == 2
    assert z_omega_sum(10, 1) == pytest.approx(7381 / 2520, rel=1e-15)
    with pytest.raises(DomainError):
        z_omega_sum(10, 0)


@given(st.integers(1, 20000), st.floats(0.05, 1.99))
def test_zomega_below_majorant(X, z):
    assert z_omega_sum(X, z) <= euler_majorant(X, z) * (1 + 1e-12)


def test_G_examples():
    assert G_constant(0).value == 1.0
    g = G_constant(1.0)
    assert abs(g.value - 6 / math.pi**2) <= g.abs_error_bound + 1e-12
    lo, hi = g.interval()
    assert lo <= 6 / math.pi**2 <= hi + 1e-12
    for i in range(8):
        assert G_constant(i / 4).value > 0
    with pytest.raises(DomainError):
        G_constant(2.0)


def test_sathe_examples():
    x = 10**6
    assert sathe_selberg_main_term(x, 1) == pytest.approx(x / math.log(x))
    ratio = 78498 / sathe_selberg_main_term(x, 1)
    assert 0.9 <= ratio <= 1.2
    assert A_ell(x, 1) == 78498
    ll = math.log(math.log(x))
    bad = math.floor(2 * ll) + 1
    with pytest.raises(DomainError):
        sathe_selberg_main_term(x, bad + 1)


@pytest.mark.slow
def test_sathe_band_1e7():
    x = 10**7
    ratio = A_ell(x, 2) / sathe_selberg_main_term(x, 2)
    assert 0.5 <= ratio <= 2


def test_trend_rows_and_csv():
    rows = trend_rows([10**4, 10**5], [1, 2])
    assert [(r["N"], r["ell"]) for r in rows] == [(10**4, 1), (10**4, 2), (10**5, 1), (10**5, 2)]
    assert all(r["exact_checked"] and r["exact_agrees"] for r in rows)
    text = rows_to_csv(rows)
    assert text.splitlines()[0] == "N,ell,exact_checked,exact_agrees,H_float,scale,ratio"
    assert rows_to_csv(rows) == text
