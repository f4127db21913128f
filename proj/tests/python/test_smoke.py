"""Smoke tests for the python bindings; the heavy verification lives in the
C++ suites."""

from fractions import Fraction

import pytest

cbm = pytest.importorskip("cbmoments")


def test_partitions():
    assert cbm.enumerate_partitions(2) == [(2,), (1, 1)]
    assert len(cbm.enumerate_partitions(12)) == 77
    assert cbm.conjugate((2, 1, 1)) == (3, 1)
    assert cbm.z((2, 1, 1)) == 4
    assert cbm.dominance((2, 2), (3, 1)) == "less"
    assert cbm.dominance((3, 1, 1, 1), (2, 2, 2)) == "incomparable"


def test_partition_validation():
    with pytest.raises(Exception):
        cbm.conjugate((1, 2))  # increasing


def test_jack_table():
    t = cbm.jack_table(2, Fraction(1))
    assert t["order"] == [(2,), (1, 1)]
    assert t["theta"] == [[1, 1], [-1, 1]]
    assert cbm.theta((3,), (2, 1), Fraction(5, 3)) == Fraction(5)  # 3 * alpha
    assert cbm.big_theta((2,), (2,), Fraction(5, 3)) == Fraction(3, 8)  # 1/(alpha+1)
    assert cbm.c_lambda((1,), "7/3") == Fraction(7, 3)
    assert cbm.verify_orthogonality(4, Fraction(5, 3)) == []


def test_exact_moments():
    assert cbm.exact_moment((1,), (1,), n=3, beta=1) == Fraction(3, 2)
    assert cbm.exact_moment((1,), (1,), n=3, beta=4) == Fraction(3, 5)
    assert cbm.exact_moment((2,), (1, 1), n=4, beta=2) == 0
    assert cbm.exact_moment((3,), (3,), n=2, beta=2) == 2  # min(m, n)
    cf = cbm.closed_forms(n=3, beta=4)
    assert cf["p2_sq"] == Fraction(23, 15)
    assert cf["p2_p11"] == Fraction(-1, 15)
    assert cbm.cue_expected((5,), (5,), 3) == 3
    assert cbm.cue_expected((1, 1), (1, 1), 1) is None
    assert cbm.i_of(1, n=3, beta=2) == Fraction(-1, 3)


def test_bounds_and_reports():
    r = cbm.sandwich_check((2,), n=3, beta=1)
    assert r["normalized"] == Fraction(7, 12)
    assert r["A"] == Fraction(4, 9) and r["B"] == 1
    assert r["holds"]
    A, B = cbm.ab_bounds(2, n=4, alpha=Fraction(1, 2))
    assert (A, B) == (1, Fraction(36, 25))
    coe = cbm.coe_trace_second_moment(5)
    assert coe["consistent"] and coe["jack"] == Fraction(5, 3)
    assert cbm.dirichlet_moment([2], 4) == Fraction(3, 24)


def test_capacity_error():
    with pytest.raises(Exception):
        cbm.jack_table(cbm.k_max() + 1, Fraction(1))


def test_sampler_determinism_and_agreement():
    a = cbm.run_chain(n=2, beta=2.0, steps=30000, seed=42)
    b = cbm.run_chain(n=2, beta=2.0, steps=30000, seed=42)
    assert a.draws == b.draws
    assert len(a) == (30000 - 20000) // 2
    est = cbm.estimate_moment(a, (1,), (1,))
    exact = float(cbm.exact_moment((1,), (1,), n=2, beta=2))
    assert abs(est["mean"] - exact) <= 5 * est["stderr"]
    assert abs(cbm.power_sum_eval([0.0, 3.141592653589793], (2,)) - 2) < 1e-12
