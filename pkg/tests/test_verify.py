import math
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from psapprox.errors import HypothesisError, InputError
from psapprox.eta import build_eta_multi, build_eta_single
from psapprox.exact.ball import Ball
from psapprox.exact.numberfield import NumberField
from psapprox.exact.padic import abs_at
from psapprox.exact.poly import UniPoly
from psapprox.exact.roots import refine_root
from psapprox.implicit import ImplicitInstance, build_F, solve_series, zero_in_interval
from psapprox.powersum import PowerSum as PS
from psapprox.puiseux import BiPoly
from psapprox.verify import (HOLDS, VIOLATED, MultiProblem, SingleProblem, best_approximations,
                             check_multi_bound, check_single_bound, eval_alpha, q_limit, scan,
                             subspace_instrument, subspace_product)

from oracles import brute_min_gap, mp

SQRT_F = BiPoly({(1, 0): 1, (0, 2): -1})


def single(G, r=0):
    app = build_eta_single(SQRT_F, G, F(1, 9), r)
    return SingleProblem(SQRT_F, G, app)


def quadratic_problem():
    inst = build_F([PS([(-2, 2), (1, 1)]), PS([(1, 1)]), PS([(1, 2)])])
    s = solve_series(inst, zero_in_interval(inst, 0, 2), 3)
    return MultiProblem(inst, build_eta_multi(inst, s, F(1, 9)))


# -- alpha ----------------------------------------------------------------------------------

def test_eval_alpha_examples():
    # index m stands for n = 2m: alpha(6) = sqrt(4^6) = 64 at m = 3
    assert eval_alpha(single(PS([(1, 4)])), 3, 64) == Ball.exact(64)
    b = eval_alpha(single(PS([(1, 4), (1, 2)])), 2, 80)
    assert mp(b.lo) <= mpmath.sqrt(272) <= mp(b.hi)
    b = eval_alpha(quadratic_problem(), 10, 80)
    ref = refine_root(UniPoly([-2 + F(1, 1024), F(1, 1024), 1]), (1, 2), 80)
    assert b.overlaps(ref) and abs(mp(b.center) - mpmath.sqrt(2)) < 0.01


# -- best approximations ----------------------------------------------------------------------

def golden(bits):
    return refine_root(UniPoly([-1, -1, 1]), (1, 2), bits)


def test_best_approximation_examples():
    cands = best_approximations(golden(128), 13)
    for pq in [(1, 1), (2, 1), (3, 2), (5, 3), (8, 5), (13, 8), (21, 13)]:
        assert pq in cands
    assert best_approximations(Ball.exact(64), 1000) == [(64, 1)]
    assert (33, 2) in best_approximations(refine_root(UniPoly([-272, 0, 1]), (16, 17), 128), 50)


@settings(max_examples=200)
@given(st.fractions(min_value=-50, max_value=50, max_denominator=500), st.integers(1, 60))
def test_best_approximations_attain_brute_force_minimum(alpha, Qmax):
    cands = best_approximations(Ball.exact(alpha), Qmax)
    assert all(1 <= q <= Qmax for _, q in cands)
    got = min(abs(alpha - F(p, q)) for p, q in cands)
    assert got == brute_min_gap(alpha, Qmax)


def test_q_limit_is_strict():
    for n in range(0, 80):
        Q = q_limit(n, F(1, 20))
        assert Q < mpmath.exp(mpmath.mpf(n) / 20) or (n == 0 and Q == 0)
        assert Q + 1 >= mpmath.exp(mpmath.mpf(n) / 20)


# -- bound checks -------------------------------------------------------------------------------

def test_single_bound_persistent_violations_for_rational_truncation():
    pb = single(PS([(1, 4), (1, 2)]))
    eps = F(1, 20)
    hits = check_single_bound(pb, eps, range(2, 16))
    assert all(h.verdict == VIOLATED for h in hits)
    for m in range(2, 16):
        if 2 < math.exp(2 * m * eps):
            assert any((h.index, h.p, h.q) == (m, 2 * 4 ** m + 1, 2) for h in hits)


def test_single_bound_precondition():
    pb = single(PS([(1, 2), (1, 1)]), r=1)
    with pytest.raises(InputError, match="epsilon outside the admissible range"):
        check_single_bound(pb, F(1, 2), range(2, 4))


def test_exact_integer_alpha_is_hit_by_itself():
    # alpha(2m) = 4^m: p/q = 4^m / 1 has gap zero and is reported
    hits = check_single_bound(single(PS([(1, 4)])), F(1, 20), range(2, 8))
    assert [(h.index, h.p, h.q) for h in hits] == [(m, 4 ** m, 1) for m in range(2, 8)]
    assert all(h.gap == Ball.exact(0) for h in hits)


def test_verdicts_are_sound_and_bounds_decrease():
    pb = single(PS([(1, 2), (1, 1)]), r=1)
    rows = scan(pb, F(1, 20), range(2, 12))
    for h in rows:
        assert h.q < mpmath.exp(mpmath.mpf(h.n) / 20)
        if h.verdict == HOLDS:
            assert h.gap.lo > h.bound.hi
        elif h.verdict == VIOLATED:
            assert h.gap.hi < h.bound.lo
    by_q = {}
    for h in rows:
        by_q.setdefault(h.q, []).append(h)
    for hs in by_q.values():
        hs.sort(key=lambda h: h.index)
        for a, b in zip(hs, hs[1:]):
            if a.index < b.index:
                assert b.bound.hi < a.bound.lo


def test_multi_bound_rejects_failed_hypotheses():
    inst = ImplicitInstance(((-1, 1), (0, 0), (1, 0)), (F(1, 2),))      # F(0, y) = y^2 - 1
    s = solve_series(inst, F(1), 3)
    app = build_eta_multi(inst, s, F(1, 9))
    with pytest.raises(HypothesisError, match="multi-sum bound inapplicable"):
        check_multi_bound(MultiProblem(inst, app), F(1, 20), range(5, 8))
    const = build_F([PS([(-1, 3)]), PS([(1, 3)])])
    app = build_eta_multi(const, solve_series(const, F(1), 2), F(1, 9))
    with pytest.raises(HypothesisError):
        check_multi_bound(MultiProblem(const, app), F(1, 20), range(5, 8))


def test_multi_bound_quadratic_hits_are_small_q_only():
    hits = check_multi_bound(quadratic_problem(), F(1, 20), range(5, 61))
    assert all(h.q == 1 and h.verdict == VIOLATED for h in hits)
    # a q = 1 hit needs |alpha - p| < e^(-n/20); with alpha near sqrt 2 that stops after n = 17
    assert max(h.index for h in hits) == 17


# -- subspace product ----------------------------------------------------------------------------

def test_subspace_examples():
    instr = subspace_instrument(PS([(1, 1)]))
    prod, rhs = subspace_product(instr, 0, 2, 3)
    assert prod == Ball.exact(3) and rhs == Ball.exact(3)
    prod, rhs = subspace_product(instr, 4, 5, 5)
    assert prod == Ball.exact(0) and rhs == Ball.exact(0)
    instr = subspace_instrument(PS([(1, F(1, 2))]), [2])
    assert (instr.d, instr.e_list) == (2, (1,))
    prod, rhs = subspace_product(instr, 1, 1, 1)
    # x = (1*2, 1*1): |2 - 1|*|1| at infinity, |2|_2 * |1|_2 at 2
    assert prod == Ball.exact(F(1, 2)) and rhs == Ball.exact(F(1, 2))
    assert prod.hi <= rhs.lo
    with pytest.raises(InputError, match="S too small"):
        subspace_instrument(PS([(1, F(1, 3))]), [2])


K2 = NumberField(UniPoly([-2, 0, 1]), (1, 2))
coeff = st.one_of(st.fractions(min_value=-5, max_value=5, max_denominator=6),
                  st.tuples(st.integers(-3, 3), st.integers(-3, 3)).map(lambda t: K2.gen() * t[0] + t[1]))
eta_terms = st.lists(st.tuples(coeff, st.sampled_from([F(1), F(2), F(3), F(1, 2), F(3, 4), F(6)])),
                     min_size=1, max_size=3)


@settings(max_examples=100, deadline=None)
@given(eta_terms, st.integers(0, 6), st.integers(-200, 200), st.integers(1, 50))
def test_subspace_product_bound(terms, m, p, q):
    eta = PS(terms)
    if eta.is_zero():
        return
    instr = subspace_instrument(eta, [2, 3])
    prod, rhs = subspace_product(instr, m, p, q)
    assert prod.lo <= rhs.hi


@given(st.lists(st.sampled_from([2, 3, 5, 7]), max_size=6), st.lists(st.sampled_from([2, 3, 5, 7]), max_size=6),
       st.sampled_from([1, -1]))
def test_product_formula_for_s_units(num, den, sign):
    x = F(sign * math.prod(num), math.prod(den))
    prod = abs_at(x, None)
    for p in (2, 3, 5, 7):
        prod *= abs_at(x, p)
    assert prod == 1
