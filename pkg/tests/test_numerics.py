import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from dioph.errors import BudgetExceeded, ParamError, RankDeficient
from conftest import modular_rank as _modular_rank
from dioph.numerics import (
    IntegerMatrix,
    PrecisionContext,
    bounded_integer_relation,
    gcd_of_2x2_minors,
    integer_matrix_rank,
    nearest_integer_ratio,
    nearest_integer_residual,
)


@pytest.mark.parametrize("v, res, k", [
    (0, 0, 0),
    (Fraction(11, 4), Fraction(1, 4), 3),
    (Fraction(3, 2), Fraction(1, 2), 1),
    (Fraction(-1, 2), Fraction(1, 2), -1),
])
def test_residual_examples(v, res, k):
    assert nearest_integer_residual(v) == (res, k)


def test_residual_mpf_and_float():
    r, k = nearest_integer_residual(mpmath.mpf("2.75"))
    assert (r, k) == (mpmath.mpf("0.25"), 3)
    assert nearest_integer_residual(1.5) == (0.5, 1)
    with pytest.raises(ParamError):
        nearest_integer_residual(mpmath.inf)


@given(st.fractions(min_value=-1000, max_value=1000), st.integers(-10**6, 10**6))
def test_residual_period_one(v, k):
    r1, n1 = nearest_integer_residual(v)
    r2, n2 = nearest_integer_residual(v + k)
    assert r1 == r2 and n2 == n1 + k
    assert 0 <= r1 <= Fraction(1, 2)


@given(st.integers(-10**9, 10**9), st.integers(1, 10**6))
def test_nearest_integer_ratio_matches_fraction(num, den):
    assert nearest_integer_ratio(num, den) == nearest_integer_residual(Fraction(num, den))[1]


def test_precision_context_rules():
    with pytest.raises(ParamError):
        PrecisionContext(32)
    ctx = PrecisionContext(128)
    assert ctx.comparison_epsilon == mpmath.ldexp(1, 16 - 128)
    with mpmath.mp.workprec(400):
        err = abs(ctx.to_mpf(Fraction(1, 3)) - mpmath.mpf(1) / 3)
    assert 0 < err <= mpmath.ldexp(1, -129)


@pytest.mark.parametrize("rows, rank", [
    ([[0] * 4] * 3, 0),
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3),
    ([[1, 2, 3], [2, 4, 6]], 1),
])
def test_rank_examples(rows, rank):
    assert integer_matrix_rank(IntegerMatrix.from_rows(rows)) == rank


def test_rank_against_modular_oracle():
    rng = random.Random(2024)
    for trial in range(100):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        rows = [[rng.randint(-10**4, 10**4) for _ in range(c)] for _ in range(r)]
        if trial % 3 == 0 and r > 1:
            # force a dependency
            rows[-1] = [a * 3 - b for a, b in zip(rows[0], rows[1 % r])]
        assert integer_matrix_rank(rows) == _modular_rank(rows)


@pytest.mark.parametrize("rows, g", [
    ([[1, 0, 0], [0, 1, 0]], 1),
    ([[2, 0, 0], [0, 2, 0]], 4),
    ([[1, 2, 3], [4, 5, 6]], 3),
])
def test_minor_gcd_examples(rows, g):
    assert gcd_of_2x2_minors(IntegerMatrix.from_rows(rows)) == g


def test_minor_gcd_rank_deficient():
    with pytest.raises(RankDeficient):
        gcd_of_2x2_minors(IntegerMatrix.from_rows([[1, 2, 3], [2, 4, 6]]))


@settings(max_examples=60)
@given(st.lists(st.integers(-50, 50), min_size=8, max_size=8),
       st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-5, 5)), max_size=12))
def test_minor_gcd_unimodular_invariance(flat, ops):
    rows = [flat[:4], flat[4:]]
    if integer_matrix_rank(rows) < 2:
        return
    g = gcd_of_2x2_minors(rows)
    for i, j, k in ops:
        if i == j:
            continue
        # column op: col_i += k * col_j (unimodular)
        rows = [[a + (k * r[j] if idx == i else 0) for idx, a in enumerate(r)] for r in rows]
    assert gcd_of_2x2_minors(rows) == g


def test_relation_examples():
    assert bounded_integer_relation([1, Fraction(1, 2)], 2) == (1, -2)
    ctx = PrecisionContext(256)
    with ctx.workprec():
        s2 = mpmath.sqrt(2)
        phi = (1 + mpmath.sqrt(5)) / 2
        phi2 = phi * phi
    assert bounded_integer_relation([1, s2], 10, ctx=ctx) is None
    assert bounded_integer_relation([1, phi, phi2], 2, ctx=ctx) == (1, 1, -1)


def test_relation_limits():
    with pytest.raises(ParamError):
        bounded_integer_relation([1, 2], 51)
    with pytest.raises(BudgetExceeded):
        bounded_integer_relation([1, mpmath.sqrt(2), mpmath.sqrt(3), mpmath.sqrt(5), mpmath.pi],
                                 40, node_limit=1000)
