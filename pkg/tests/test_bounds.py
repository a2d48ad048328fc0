import csv
import io
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from listlab import (BoundParams, InputError, binary_entropy,
                     binomial_entropy_bounds, capacity_check, chernoff_tail,
                     generalized_singleton_radius, q_ary_entropy,
                     theorem_bound_table)
from listlab.bounds import TABLE_COLUMNS


def test_radius_examples():
    R = Fraction(2, 5)
    assert generalized_singleton_radius(1, R) == (1 - R) / 2
    assert generalized_singleton_radius(2, R) == Fraction(2, 3) * (1 - R)
    assert generalized_singleton_radius(2, Fraction(1, 3), Fraction(1, 6)) == Fraction(1, 3)


def test_radius_monotone_in_L():
    R, eps = Fraction(1, 4), Fraction(1, 10)
    values = [generalized_singleton_radius(L, R, eps) for L in range(1, 101)]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert values[-1] < 1 - R - eps
    assert 1 - R - eps - values[-1] < Fraction(1, 100)


def test_radius_range_errors():
    with pytest.raises(InputError):
        generalized_singleton_radius(0, 0.5)
    with pytest.raises(InputError):
        generalized_singleton_radius(2, 0.8, 0.3)
    with pytest.raises(InputError):
        generalized_singleton_radius(2, -0.1)


def test_entropy_examples():
    assert q_ary_entropy(2, 0.5) == pytest.approx(1.0, abs=1e-12)
    assert q_ary_entropy(5, 0.0) == 0.0
    assert q_ary_entropy(4, 0.75) == pytest.approx(1.0, abs=1e-12)
    assert q_ary_entropy(3, 1.0) == pytest.approx(math.log(2) / math.log(3), abs=1e-12)


def test_binary_entropy_quarter():
    # independent evaluation of -x log x - (1-x) log(1-x)
    x = 0.25
    direct = -x * math.log2(x) - (1 - x) * math.log2(1 - x)
    assert binary_entropy(0.25) == pytest.approx(direct, abs=1e-12)
    assert binary_entropy(0.25) == pytest.approx(0.8112781244591328, abs=1e-12)
    assert binary_entropy(0.5) == pytest.approx(1.0, abs=1e-12)
    assert binary_entropy(0.0) == 0.0


def test_entropy_domain_errors():
    with pytest.raises(InputError):
        q_ary_entropy(2, 1.5)
    with pytest.raises(InputError):
        q_ary_entropy(1, 0.5)


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1),
       st.integers(2, 16))
@settings(max_examples=300)
def test_entropy_concavity(x, y, lam, q):
    mix = lam * x + (1 - lam) * y
    mix = min(max(mix, 0.0), 1.0)
    lhs = q_ary_entropy(q, mix)
    rhs = lam * q_ary_entropy(q, x) + (1 - lam) * q_ary_entropy(q, y)
    assert lhs >= rhs - 1e-12


def test_capacity_check_examples():
    binary = capacity_check(BoundParams(L=2, R=0.5, eps=0.0, q=2))
    assert binary.verdict == "violates_capacity"
    assert binary.radius == pytest.approx(1 / 3)
    assert binary.entropy_at_radius == pytest.approx(0.9182958340544896, abs=1e-12)

    # zero-radius limit: at R = 1 the radius collapses and h_q(0) = 0 <= 1 - R
    at_one = capacity_check(BoundParams(L=1, R=1.0, eps=0.0, q=7))
    assert at_one.verdict == "consistent"
    assert at_one.radius == 0.0

    big_alphabet = capacity_check(BoundParams(L=2, R=0.5, eps=0.0, q=64))
    assert big_alphabet.verdict == "consistent"
    assert big_alphabet.entropy_at_radius < 0.5
    assert "min(L, 1/eps)" in big_alphabet.note


def test_chernoff_examples():
    assert chernoff_tail(0.5, 100, 1.0) == pytest.approx(math.exp(-100 / 6))
    with pytest.raises(InputError):
        chernoff_tail(0.5, 0, 1.0)
    bound = chernoff_tail(1.0, 12, 1.0)
    assert bound == pytest.approx(math.exp(-4))
    # Binomial(12, 1.0) never exceeds 24, so the empirical tail is zero
    rng = np.random.default_rng(0)
    hits = (rng.binomial(12, 1.0, size=100_000) > 24).mean()
    assert hits == 0.0 <= bound


def test_chernoff_dominates_empirical_tails():
    rng = np.random.default_rng(42)
    trials = 100_000
    for alpha in (0.3, 0.5):
        for m in (50, 200):
            for delta in (0.5, 1.0):
                cutoff = (1 + delta) * alpha * m
                freq = (rng.binomial(m, alpha, size=trials) > cutoff).mean()
                bound = chernoff_tail(alpha, m, delta)
                sigma = math.sqrt(bound * (1 - bound) / trials)
                assert freq <= bound + 3 * sigma + 1e-12


def test_binomial_bounds_examples():
    lower, exact, upper = binomial_entropy_bounds(10, 0.5)
    assert (lower, exact) == (252, 638)
    assert upper == pytest.approx(1024.0)
    assert binomial_entropy_bounds(7, 0.0)[1] == 1
    assert binomial_entropy_bounds(4, 1.0)[1] == 16


def test_binomial_sandwich_small_n():
    # entropy upper bound is valid for alpha <= 1/2
    for n in range(1, 31):
        for i in range(0, n // 2 + 1):
            alpha = Fraction(i, n)
            lower, exact, upper = binomial_entropy_bounds(n, alpha)
            assert lower <= exact
            assert exact <= upper * (1 + 1e-12)


def test_binomial_bounds_cap():
    with pytest.raises(InputError):
        binomial_entropy_bounds(1_000_000, 0.5)


def test_table_rows():
    rows = theorem_bound_table([(2, 0.5, 0.1), (3, 0.5, 0.5)])
    assert rows[0]["inv_eps"] == pytest.approx(10.0)
    assert rows[1]["min_L_inv_eps"] == pytest.approx(2.0)
    grid = [(2, 0.25, 0.1), (2, 0.25, 0.05), (3, 0.5, 0.1), (3, 0.5, 0.2)]
    rows = theorem_bound_table(grid)
    assert len(rows) == 4

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=TABLE_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    parsed = list(csv.DictReader(io.StringIO(buf.getvalue())))
    assert len(parsed) == 4
    for row, back in zip(rows, parsed):
        for col in TABLE_COLUMNS:
            assert float(back[col]) == pytest.approx(float(row[col]))


def test_table_rejects_zero_eps():
    with pytest.raises(InputError):
        theorem_bound_table([(2, 0.5, 0.0)])


def test_bound_params_validation():
    with pytest.raises(InputError):
        BoundParams(L=0, R=0.5, eps=0.0, q=2)
    with pytest.raises(InputError):
        BoundParams(L=2, R=0.9, eps=0.3, q=2)
