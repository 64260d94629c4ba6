from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from psapprox.errors import AmbiguityError, InputError
from psapprox.exact.ball import Ball, decimal_str
from psapprox.exact.numberfield import NumberField, field_join, minpoly_of
from psapprox.exact.padic import abs_at, padic_val, product_formula, support
from psapprox.exact.poly import UniPoly, factor_rational, resultant
from psapprox.exact.roots import isolate_real_roots, refine_root

from oracles import mp, to_sympy_number

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=1000)
nonzero = rationals.filter(lambda x: x != 0)
positive = st.fractions(min_value=Fraction(1, 1000), max_value=50, max_denominator=1000)


def wide(x, r):
    return Ball.from_center(x, r, prec=64)


# -- Ball ------------------------------------------------------------------------------------

@given(rationals, rationals, st.fractions(min_value=0, max_value=1, max_denominator=100),
       st.fractions(min_value=0, max_value=1, max_denominator=100))
def test_ball_arithmetic_encloses_exact_results(a, b, ra, rb):
    A, B = wide(a, ra), wide(b, rb)
    assert (A + B).contains(a + b)
    assert (A - B).contains(a - b)
    assert (A * B).contains(a * b)
    if not B.contains_zero():
        assert (A / B).contains(a / b)
    assert (A ** 3).contains(a ** 3)
    assert abs(A).contains(abs(a))


@settings(max_examples=60)
@given(st.fractions(min_value=-30, max_value=30, max_denominator=50), st.sampled_from([32, 64, 200]))
def test_exp_encloses_high_precision_value(x, bits):
    B = Ball.exact(x).exp(bits)
    ref = mpmath.exp(mp(x))
    assert mp(B.lo) <= ref <= mp(B.hi)
    assert B.rel_radius() <= Fraction(1, 1 << (bits - 4))


@settings(max_examples=60)
@given(positive, st.sampled_from([32, 64, 200]))
def test_log_and_root_enclose_high_precision_values(x, bits):
    L = Ball.exact(x).log(bits)
    assert mp(L.lo) <= mpmath.log(mp(x)) <= mp(L.hi)
    R = Ball.exact(x).root(3, bits)
    assert mp(R.lo) <= mpmath.cbrt(mp(x)) <= mp(R.hi)


def test_ball_comparisons_and_decimal_rounding():
    a, b = Ball(1, 2), Ball(3, 4)
    assert a.certainly_lt(b) and b.certainly_gt(a) and a.compare(b) == -1
    assert Ball(1, 3).compare(Ball(2, 4)) is None
    assert decimal_str(Fraction(1, 3), 5, "down") == "3.3333e-1"
    assert decimal_str(Fraction(1, 3), 5, "up") == "3.3334e-1"
    assert decimal_str(Fraction(-1, 3), 5, "down") == "-3.3334e-1"
    with pytest.raises(ZeroDivisionError):
        Ball(-1, 1).inverse()


# -- roots -------------------------------------------------------------------------------------

def test_isolate_examples():
    ivs = isolate_real_roots(UniPoly([-2, 0, 1]))
    assert len(ivs) == 2
    neg, pos = sorted(ivs)
    assert -2 <= neg.lo and neg.hi <= -1 and 1 <= pos.lo and pos.hi <= 2
    assert isolate_real_roots(UniPoly([1, 0, 1])) == []
    (iv,) = isolate_real_roots(UniPoly([-2, 0, 0, 1]))
    assert iv.lo <= Fraction(12599, 10000) <= iv.hi
    with pytest.raises(InputError, match="undefined root set"):
        isolate_real_roots(UniPoly([]))


def test_refine_examples():
    p = UniPoly([-2, 0, 1])
    b = refine_root(p, (1, 2), 64)
    assert mp(b.lo) <= mpmath.sqrt(2) <= mp(b.hi)
    assert b.radius <= Fraction(2, 1 << 64)
    assert refine_root(UniPoly([-3, 1]), (2, 4), 10) == Ball.exact(3)
    b = refine_root(p, (-2, -1), 32)
    assert mp(b.lo) <= -mpmath.sqrt(2) <= mp(b.hi)
    with pytest.raises(AmbiguityError, match="ambiguous refinement"):
        refine_root(UniPoly([1, -2, 1]), (0, 2), 10)


int_coeffs = st.lists(st.integers(-20, 20), min_size=2, max_size=6).filter(lambda c: c[-1] != 0)


@settings(max_examples=60, deadline=None)
@given(int_coeffs)
def test_isolation_matches_sympy_and_refinement_is_monotone(cs):
    p = UniPoly(cs)
    x = sympy.Symbol("x")
    ref = sorted(set(sympy.Poly(list(reversed(cs)), x).real_roots()))
    ivs = sorted(isolate_real_roots(p))
    assert len(ivs) == len(ref)
    for iv, r in zip(ivs, ref):
        assert iv.lo <= r <= iv.hi
        prev = None
        for bits in (16, 32, 64, 128):
            b = refine_root(p, iv, bits)
            assert b.lo <= r <= b.hi
            assert b.radius <= Fraction(1, 1 << bits) * max(1, abs(b.center))
            if prev is not None:
                assert b.radius <= prev.radius
            prev = b


# -- polynomials & number fields --------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(int_coeffs, int_coeffs)
def test_resultant_matches_sylvester_determinant(a, b):
    # sympy.resultant uses another sign convention; the Sylvester determinant is the reference
    n, m = len(a) - 1, len(b) - 1
    rows = [[0] * i + list(reversed(a)) + [0] * (m - 1 - i) for i in range(m)]
    rows += [[0] * i + list(reversed(b)) + [0] * (n - 1 - i) for i in range(n)]
    ref = sympy.Matrix(rows).det()
    assert resultant(UniPoly(a), UniPoly(b)) == Fraction(int(ref))


def sqrt_field(n):
    return NumberField(UniPoly([-n, 0, 1]), (1, n))


def test_number_field_arithmetic():
    K = sqrt_field(2)
    r2 = K.gen()
    assert r2 * r2 == 2
    assert (1 + r2) * (r2 - 1) == 1
    assert (1 / (1 + r2)) == r2 - 1
    assert (r2 - 1).sign() == 1 and (1 - r2).sign() == -1
    with pytest.raises(InputError):
        NumberField(UniPoly([-4, 0, 1]), (1, 3))
    with pytest.raises(AmbiguityError):
        NumberField(UniPoly([-2, 0, 1]), (-2, 2))


def test_field_join_examples():
    K2, K3 = sqrt_field(2), sqrt_field(3)
    L, a, b = field_join(K2.gen(), K2.gen())
    assert L.degree == 2 and a == b
    L, a, b = field_join(K2.gen(), K3.gen())
    assert L.degree == 4
    assert L.minpoly == UniPoly([1, 0, -10, 0, 1])
    assert a * a == 2 and b * b == 3
    assert (a + b) == L.gen()
    L, a, b = field_join(Fraction(5, 3), K2.gen())
    assert L.degree == 2 and a == Fraction(5, 3) and b * b == 2


def test_joined_images_agree_with_sympy():
    K2 = sqrt_field(2)
    K5 = NumberField(UniPoly([-5, 0, 0, 1]), (1, 2))
    L, a, b = field_join(K2.gen() + 1, K5.gen())
    assert sympy.simplify(to_sympy_number(a) - (sympy.sqrt(2) + 1)) == 0
    assert sympy.simplify(to_sympy_number(b) - sympy.root(5, 3)) == 0
    assert minpoly_of(b) == UniPoly([-5, 0, 0, 1])


def test_factor_rational_matches_sympy():
    p = UniPoly([-2, 0, 1]) * UniPoly([-1, 1]) ** 2 * UniPoly([1, 0, 1])
    fs = sorted((f.degree, m) for f, m in factor_rational(p))
    assert fs == [(1, 2), (2, 1), (2, 1)]


# -- p-adic -----------------------------------------------------------------------------------

def test_padic_examples():
    assert padic_val(12, 2) == 2
    assert padic_val(Fraction(3, 8), 2) == -3
    assert padic_val(0, 5) == float("inf")
    with pytest.raises(InputError):
        padic_val(12, 4)
    assert abs_at(Fraction(3, 8), 2) == 8
    assert abs_at(Fraction(-3, 8), None) == Fraction(3, 8)


primes = st.sampled_from([2, 3, 5, 7, 11, 13])


@given(nonzero, nonzero, primes)
def test_padic_additivity(x, y, p):
    assert padic_val(x * y, p) == padic_val(x, p) + padic_val(y, p)


@given(nonzero)
def test_product_formula_over_support(x):
    assert product_formula(x) == 1
    prod = abs_at(x, None)
    for p in support(x):
        prod *= abs_at(x, p)
    assert prod == 1
