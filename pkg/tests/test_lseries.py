"""Dirichlet coefficients and the two evaluation modes for L(E,2)."""

import math
import random

import pytest

from elldilog.curves import Curve
from elldilog.lseries import (an_table, conductor, l_value, l_value_afe,
                              l_value_naive, ratio_report)


def test_conductor(C37):
    assert conductor(C37) == 37


def test_conductor_rejects_additive():
    with pytest.raises(NotImplementedError):
        conductor(Curve(0, 0, 0, 0, 1))


# frozen initial coefficients a_1..a_20, checked against a direct point
# count over F_p and the Hecke recursion by hand
FROZEN_AN = [1, -2, -3, 2, -2, 6, -1, 0, 6, 4,
             -5, -6, -2, 2, 6, -4, 0, -12, 0, -4]


def test_initial_coefficients(table_2k):
    assert [table_2k[n] for n in range(1, 21)] == FROZEN_AN


def test_bad_prime_coefficients(table_2k):
    # nonsplit multiplicative at 37: a_{37^k} = (-1)^k
    assert table_2k.ap[37] == -1
    assert table_2k[37 * 37] == 1


def test_hasse_bound(table_2k):
    for p, a in table_2k.ap.items():
        if p == 37:
            continue
        assert a * a <= 4 * p, (p, a)


def test_multiplicativity_spot_checks(table_2k):
    rng = random.Random(11)
    done = 0
    while done < 100:
        m = rng.randint(2, 60)
        n = rng.randint(2, 33)
        if math.gcd(m, n) != 1 or m * n > 2000:
            continue
        assert table_2k[m * n] == table_2k[m] * table_2k[n], (m, n)
        done += 1


def test_euler_factor_recursion(table_2k):
    # a_{p^(k+1)} = a_p a_{p^k} - p a_{p^(k-1)} at good p
    for p in (2, 3, 5, 7, 11, 13):
        for k in range(1, 4):
            if p ** (k + 1) > 2000:
                break
            assert (table_2k[p ** (k + 1)]
                    == table_2k.ap[p] * table_2k[p ** k]
                    - p * table_2k[p ** (k - 1)])


def test_big_prime_counting_agrees_with_direct_count(C37):
    # primes above the direct-sum threshold exercise the group-order path
    t = an_table(C37, 1100)
    for p in (601, 607, 613, 997, 1009, 1093):
        assert t.ap[p] == C37.count_ap(p), p


def test_afe_value_and_sign(C37):
    lv = l_value_afe(C37, terms=80)
    assert lv.epsilon == -1
    assert abs(lv.value - 0.3815754082607113) < 1e-12


def test_afe_self_consistent_under_doubling(C37):
    t = an_table(C37, 512)
    a = l_value_afe(C37, terms=80, table=t).value
    b = l_value_afe(C37, terms=160, table=t).value
    assert abs(a - b) < 1e-13


def test_naive_converges_from_below_bound(C37):
    t = an_table(C37, 200000)
    lv = l_value_naive(C37, 200000, table=t)
    ref = l_value_afe(C37, terms=80, table=t).value
    assert abs(lv.value - ref) < 1e-6
    assert lv.mode == "naive"


def test_l_value_mode_dispatch(C37):
    with pytest.raises(ValueError):
        l_value(C37, mode="exact")
    lv = l_value(C37, mode="afe", terms=80)
    assert lv.mode == "afe"


def test_an_table_rejects_bad_bound(C37):
    with pytest.raises(ValueError):
        an_table(C37, 0)


def test_ratio_report_rows(C37, G37, L37):
    from elldilog.divisors import build_Pk
    rows = ratio_report([("P3", build_Pk(3, G37, C37))], C37, L37,
                        lvalue=0.3815754082607113)
    assert len(rows) == 1
    assert rows[0].label == "P3"
    assert abs(rows[0].ratio + 8.0) < 1e-9
