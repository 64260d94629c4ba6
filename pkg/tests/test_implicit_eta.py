from fractions import Fraction as F

import mpmath
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from psapprox.errors import HypothesisError, InputError
from psapprox.eta import (LIKELY_FAILS, LIKELY_HOLDS, binom, build_eta_multi, build_eta_single,
                          certify_error, choose_cutoffs, hypothesis_scan, multi_cutoff)
from psapprox.exact.numberfield import NumberField, coeff_ball
from psapprox.exact.poly import UniPoly
from psapprox.implicit import (ImplicitInstance, build_F, count_multiindices, series_residual,
                               solve_series, validate_hypotheses, zero_in_interval)
from psapprox.powersum import PowerSum as PS
from psapprox.puiseux import BiPoly
from psapprox.verify import MultiProblem, SingleProblem, error_ball

from oracles import binom_oracle, mp, to_sympy_number

X1 = sympy.Symbol("x1")


def quadratic():
    return build_F([PS([(-2, 2), (1, 1)]), PS([(1, 1)]), PS([(1, 2)])])


# -- implicit series -------------------------------------------------------------------------

def test_build_F_examples():
    inst = quadratic()
    assert inst.g == (F(1, 2),)
    assert inst.l == ((-2, 1), (0, 1), (1, 0))
    for n in range(11):
        G = [PS([(-2, 2), (1, 1)]), PS([(1, 1)]), PS([(1, 2)])]
        for i in range(3):
            assert inst.l_at(i, [F(1, 2) ** n]) == G[i].eval(n) / 2 ** n
    lin = build_F([PS([(-1, 3)]), PS([(1, 3)])])
    assert lin.g == (F(1, 3),) and lin.l == ((-1, 0), (1, 0))
    with pytest.raises(InputError, match="no decaying variables"):
        build_F([PS([(-2, 1)]), PS(), PS([(1, 1)])])
    with pytest.raises(HypothesisError):
        build_F([PS(), PS([(1, 2)])])


def test_validate_hypotheses_examples():
    assert tuple(validate_hypotheses(quadratic())) == (True, True, True)
    rational = ImplicitInstance(((-1, 1), (0, 0), (1, 0)), (F(1, 2),))
    assert validate_hypotheses(rational).no_rational_zero is False
    double = ImplicitInstance(((0, 1), (0, 0), (1, 0)), (F(1, 2),))
    assert validate_hypotheses(double).squarefree is False


def test_solve_series_matches_quadratic_formula():
    inst = quadratic()
    y0 = zero_in_interval(inst, 0, 2)
    s = solve_series(inst, y0, 4)
    # y = (-x1 + sqrt(x1^2 - 4 x1 + 8)) / 2
    ref = sympy.series((-X1 + sympy.sqrt(X1 ** 2 - 4 * X1 + 8)) / 2, X1, 0, 5).removeO()
    for k in range(5):
        want = ref.coeff(X1, k)
        assert sympy.simplify(to_sympy_number(s.coeff((k,))) - want) == 0
    assert sympy.simplify(to_sympy_number(s.coeff((1,))) - (-2 - sympy.sqrt(2)) / 4) == 0
    assert series_residual(inst, s) == {}


def test_solve_series_small_examples():
    lin = ImplicitInstance(((0, -1, -1), (1, 0, 0)), (F(1, 2), F(1, 3)))
    s = solve_series(lin, F(0), 1)
    assert s.coeff((1, 0)) == 1 and s.coeff((0, 1)) == 1
    const = ImplicitInstance(((-2, 0), (0, 0), (1, 0)), (F(1, 2),))
    K = NumberField(UniPoly([-2, 0, 1]), (1, 2))
    s = solve_series(const, K.gen(), 5)
    assert all(sum(t) == 0 for t in s.A)
    assert s.lam.hi == F(5, 4)
    double = ImplicitInstance(((0, 1), (0, 0), (1, 0)), (F(1, 2),))
    with pytest.raises(HypothesisError, match="multiple zero"):
        solve_series(double, F(0), 2)


def test_lambda_of_single_coefficient():
    inst = ImplicitInstance(((0, -4), (1, 0)), (F(1, 2),))      # y = 4 x1
    s = solve_series(inst, F(0), 1)
    assert s.coeff((1,)) == 4 and s.lam == s.lam.__class__.exact(5)


def test_zero_in_interval_refuses_ambiguity():
    with pytest.raises(Exception, match="need exactly one"):
        zero_in_interval(quadratic(), -2, 2)


@given(st.integers(1, 5), st.integers(0, 8))
def test_count_multiindices(h, k):
    n = count_multiindices(h, k)
    assert n == sympy.binomial(k + h - 1, k)
    if k >= 1:
        assert n <= h ** k
    assert (count_multiindices(2, 3), count_multiindices(1, 5), count_multiindices(3, 2)) == (4, 1, 6)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.integers(1, 3))
def test_residual_vanishes_for_random_linear_perturbations(shifts, K):
    # F = y^2 + a x1 y + b x1 - 2 + c x2 around y0 = sqrt 2
    a, b, c = shifts
    inst = ImplicitInstance(((-2, b, c), (0, a, 0), (1, 0, 0)), (F(1, 2), F(1, 3)))
    y0 = zero_in_interval(inst, 0, 2)
    s = solve_series(inst, y0, K)
    assert series_residual(inst, s) == {}


# -- cut-offs and the binomial bound ---------------------------------------------------------

def test_cutoff_examples():
    assert choose_cutoffs(4, None, 2, -1, F(1, 9)).K == 3
    c = choose_cutoffs(4, 2, 2, -1, F(1, 9))
    assert (c.K, c.L) == (3, 4)
    assert choose_cutoffs(9, None, 1, -1, F(1, 9)).K == 1
    with pytest.raises(InputError):
        choose_cutoffs(4, 2, 2, -1, F(1))


@given(st.fractions(min_value=-6, max_value=6, max_denominator=4), st.integers(0, 12))
def test_binom_matches_oracle(a, l):
    assert binom(a, l) == binom_oracle(a, l)


@given(st.integers(2, 9), st.integers(1, 3), st.integers(-2, 0))
def test_binomial_bound(c1, s, v):
    cut = choose_cutoffs(c1, None, s, v, F(1, 9))
    for k in range(v, cut.K + 1):
        for l in range(10):
            assert abs(binom(F(-k, s), l)) <= cut.B.hi ** l


# -- approximants ----------------------------------------------------------------------------

def sqrt_problem(G, r=0):
    f = BiPoly({(1, 0): 1, (0, 2): -1})
    app = build_eta_single(f, G, F(1, 9), r)
    return SingleProblem(f, G, app), app


def test_single_eta_for_4n_plus_2n():
    G = PS([(1, 4), (1, 2)])
    pb, app = sqrt_problem(G)
    assert (app.s, app.K, app.L) == (2, 3, 4)
    assert app.eta.terms[:2] == ((1, 4), (F(1, 2), 1))
    assert app.eta.terms[2] == (F(-1, 8), F(1, 4))
    assert app.k == app.H + 1
    assert hypothesis_scan(app) == LIKELY_FAILS
    # oracle: the double truncation computed directly from the branch series
    for mm in range(0, 8):
        direct = sum(sympy.binomial(sympy.Rational(1, 2), l) * sympy.Rational(1, 4) ** (mm * l) * 4 ** mm
                     for l in range(5))
        assert app.eta.eval(mm) == F(int(sympy.Rational(direct).p), int(sympy.Rational(direct).q))


def test_single_eta_exact_cases():
    G = PS([(1, 4)])
    pb, app = sqrt_problem(G)
    # alpha(2m) = sqrt(4^(2m)) = 4^m exactly
    assert all(app.eta.eval(m) == sympy.sqrt(4 ** (2 * m)) for m in range(8))
    assert app.eta == PS([(1, 4)]) and app.H == 1 and app.k == 2
    cert = certify_error(app, lambda m: error_ball(pb, m), range(1, 10))
    assert cert.C.hi == 0


def test_single_eta_irrational_leading_coefficient():
    pb, app = sqrt_problem(PS([(1, 2), (1, 1)]), r=1)
    lead = app.eta.terms[0][0]
    assert sympy.simplify(to_sympy_number(lead) - sympy.sqrt(2)) == 0
    assert hypothesis_scan(app) == LIKELY_HOLDS


def test_single_eta_rejections():
    f = BiPoly({(1, 0): 1, (0, 2): -1})
    with pytest.raises(InputError, match="real branch undefined"):
        build_eta_single(f, PS([(-1, 4), (1, 2)]), F(1, 9), 0)
    with pytest.raises(InputError):
        build_eta_single(f, PS([(1, 1)]), F(1, 9), 0)
    with pytest.raises(InputError):
        build_eta_single(f, PS([(1, 4)]), F(1, 9), 2)


def test_multi_eta_quadratic():
    inst = quadratic()
    assert multi_cutoff(F(1, 2), F(1, 9)) == 3
    s = solve_series(inst, zero_in_interval(inst, 0, 2), 3)
    app = build_eta_multi(inst, s, F(1, 9))
    assert app.K == 3 and app.eta.roots == [1, F(1, 2), F(1, 4), F(1, 8)]
    assert hypothesis_scan(app) == LIKELY_HOLDS
    with pytest.raises(InputError, match="insufficient series depth K_needed=3"):
        build_eta_multi(inst, solve_series(inst, s.y0, 2), F(1, 9))
    pb = MultiProblem(inst, app)
    cert = certify_error(app, lambda n: error_ball(pb, n), range(5, 41))
    for n in range(5, 41):
        assert error_ball(pb, n).hi <= cert.C.hi * F(1, 9) ** n


def test_multi_eta_constant_solution():
    inst = build_F([PS([(-1, 3)]), PS([(1, 3)])])
    s = solve_series(inst, F(1), 2)
    app = build_eta_multi(inst, s, F(1, 9))
    assert app.eta == PS([(1, 1)]) and app.H == 1
    assert hypothesis_scan(app) == LIKELY_FAILS


def test_decay_slope_matches_next_term():
    pb, app = sqrt_problem(PS([(1, 4), (1, 2)]))
    ms = range(14, 26)
    logs = [mpmath.log(mp(error_ball(pb, m).center)) for m in ms]
    slope = (logs[-1] - logs[0]) / (ms[-1] - ms[0])
    assert slope <= 2 * mpmath.log(mpmath.mpf(1) / 9) + mpmath.mpf(1) / 10
    assert coeff_ball(app.eta.terms[0][0], 64).contains(1)
