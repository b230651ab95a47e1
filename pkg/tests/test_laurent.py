from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvdamp.laurent import InexactDivision, LaurentPoly

coeff_lists = st.lists(st.integers(-10**30, 10**30), min_size=1, max_size=12)
polys = st.builds(LaurentPoly, coeff_lists, st.integers(-8, 8))


def naive_mul(a: LaurentPoly, b: LaurentPoly) -> dict:
    out = {}
    for ea, ca in a.terms().items():
        for eb, cb in b.terms().items():
            out[ea + eb] = out.get(ea + eb, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def test_canonical_form_strips_zeros():
    p = LaurentPoly([0, 0, 3, 0, 5, 0], min_exp=-2)
    assert p.min_exp == 0 and p.max_exp == 2
    assert p == LaurentPoly.from_terms({0: 3, 2: 5})
    assert LaurentPoly([0, 0]).is_zero()


def test_evaluation_exact_and_float():
    p = LaurentPoly([1, -2, 1], min_exp=-1)  # d^-1 - 2 + d
    assert p(Fraction(1, 2)) == Fraction(1, 2)
    assert p(2.0) == pytest.approx(0.5)
    assert p(1) == 0


@given(polys, polys)
@settings(max_examples=60, deadline=None)
def test_kronecker_product_matches_schoolbook(a, b):
    assert (a * b).terms() == naive_mul(a, b)


@given(polys, polys)
@settings(max_examples=60, deadline=None)
def test_exact_division_inverts_multiplication(a, b):
    if b.is_zero():
        return
    assert (a * b).exact_div(b) == a


def test_inexact_division_raises():
    with pytest.raises(InexactDivision):
        LaurentPoly([1, 0, 1]).exact_div(LaurentPoly([1, 1]))


def test_synthetic_division_by_d_minus_one():
    cube = LaurentPoly([-1, 1]) ** 3
    q, rem = (cube * LaurentPoly([2, 0, 7])).div_linear(1)
    assert rem == 0
    assert q == LaurentPoly([-1, 1]) ** 2 * LaurentPoly([2, 0, 7])
    _, rem = LaurentPoly([3, 4]).div_linear(1)
    assert rem == 7


@given(polys, st.integers(-5, 5))
@settings(max_examples=30, deadline=None)
def test_shift_moves_exponents(p, k):
    assert p.shift(k).terms() == {e + k: c for e, c in p.terms().items()}


def test_sum_and_difference():
    a = LaurentPoly([1, 2], min_exp=-1)
    b = LaurentPoly([5], min_exp=3)
    assert (a + b) - b == a
    assert (a - a).is_zero()
    assert LaurentPoly.one() * a == a
