import random
from fractions import Fraction as F

import mpmath
import pytest
import sympy
from hypothesis import HealthCheck, given, settings, strategies as st

from psapprox.errors import InputError
from psapprox.exact.numberfield import coeff_ball
from psapprox.puiseux import (BiPoly, branch_residual_order, coates_log_bound, expand_at_infinity,
                              is_squarefree_in_y, residual_profile)

from oracles import mp, puiseux_coeffs, to_sympy_number

u = sympy.Symbol("u")


def square_root_f():
    return BiPoly({(1, 0): 1, (0, 2): -1})          # x - y^2


def hyperbola_f():
    return BiPoly({(0, 2): 1, (2, 0): -1, (1, 0): -1})   # y^2 - x^2 - x


def test_square_root_branch_is_exact():
    (b,) = expand_at_infinity(square_root_f(), 4)
    assert (b.e, b.v) == (2, -1)
    assert b.a(-1) == 1 and all(b.a(k) == 0 for k in range(0, 5))
    assert branch_residual_order(square_root_f(), b) is None


def test_hyperbola_matches_binomial_series():
    branches = expand_at_infinity(hyperbola_f(), 6)
    assert len(branches) == 2
    top = branches[0]
    assert (top.e, top.v) == (1, -1)
    # y = u^-1 sqrt(1 + u) with u = 1/x, so a_k = [u^(k+1)] sqrt(1 + u)
    ref = puiseux_coeffs(sympy.sqrt(1 + u), u, 8)
    for k in range(-1, 7):
        assert top.a(k) == F(int(ref[k + 1].p), int(ref[k + 1].q))
    assert [top.a(k) for k in range(-1, 3)] == [1, F(1, 2), F(-1, 8), F(1, 16)]
    assert all(branches[1].a(k) == -top.a(k) for k in range(-1, 7))
    assert branch_residual_order(hyperbola_f(), top, 2) <= -1


def test_cube_root_branch():
    f = BiPoly({(0, 3): 1, (1, 0): -1})
    (b,) = expand_at_infinity(f, 3)
    assert (b.e, b.v, b.a(-1)) == (3, -1, 1)
    assert all(b.a(k) == 0 for k in range(0, 4))
    assert branch_residual_order(f, b) is None


def test_irrational_leading_coefficient():
    f = BiPoly({(0, 2): 1, (2, 0): -2, (0, 0): -1})      # y^2 = 2x^2 + 1
    top = expand_at_infinity(f, 4)[0]
    assert (top.e, top.v) == (1, -1)
    ref = puiseux_coeffs(sympy.sqrt(2 + u ** 2), u, 6)
    for k in range(-1, 5):
        assert sympy.simplify(to_sympy_number(top.a(k)) - ref[k + 1]) == 0


def test_errors():
    with pytest.raises(InputError, match="multiple branches collide"):
        expand_at_infinity(BiPoly({(0, 2): 1, (1, 1): -2, (2, 0): 1}), 3)     # (y - x)^2
    with pytest.raises(InputError):
        expand_at_infinity(square_root_f(), -3)
    assert not is_squarefree_in_y(BiPoly({(0, 2): 1, (1, 1): -2, (2, 0): 1}))
    assert is_squarefree_in_y(hyperbola_f())


def test_branch_json_export():
    b = expand_at_infinity(hyperbola_f(), 3)[0]
    data = b.to_json()
    assert {"e", "v", "field_minpoly", "coeffs"} <= data.keys()
    assert data["coeffs"][1] == {"k": 0, "coords": [{"num": 1, "den": 2}]}
    assert data["lambda"]["estimate"] is True


def test_coates_examples():
    cp = coates_log_bound(BiPoly({(1, 0): 1, (0, 2): -1, (0, 0): 2}))
    assert (cp.N, cp.f0, cp.mu) == (3, 2, 162 ** 243)
    with mpmath.workprec(2000):
        ref = mpmath.mpf(162) ** 243 * mpmath.log(2)
        assert mp(cp.log_lambda.lo) <= ref <= mp(cp.log_lambda.hi)
    cp = coates_log_bound(BiPoly({(3, 3): 1, (0, 0): 1, (1, 0): F(1, 2)}))
    assert (cp.N, cp.f0, cp.mu) == (3, 2, 243 ** 243)


def random_f(rng):
    while True:
        terms = {}
        for i in range(4):
            for j in range(4):
                if rng.random() < 0.35:
                    c = rng.randint(-5, 5)
                    if c:
                        terms[(i, j)] = c
        f = BiPoly(terms)
        if not f.is_zero() and f.deg_y >= 1 and is_squarefree_in_y(f):
            return f


@settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10 ** 6))
def test_random_polynomials_branch_invariants(seed):
    f = random_f(random.Random(seed))
    branches, stats = expand_at_infinity(f, 8, with_stats=True)
    assert stats["real"] + stats["complex"] == f.deg_y
    for b in branches:
        assert b.a(b.v) != 0 or b.coeffs == {}
        steps = residual_profile(f, b)
        for st_ in steps:
            assert st_.order is None or st_.order <= st_.envelope
        envs = [s.envelope for s in steps]
        assert all(b2 <= b1 - F(1, b.e) for b1, b2 in zip(envs, envs[1:]))
        # coefficient growth stays below the stored lambda estimate
        for k, a in b.coeffs.items():
            if k >= 1 and a != 0:
                assert abs(coeff_ball(a, 64)).hi <= b.lam.hi ** k


def test_branch_value_tracks_a_root():
    f = BiPoly({(0, 3): 1, (1, 1): -1, (2, 0): -1})   # y^3 - x y - x^2
    x0 = mpmath.mpf(10) ** 6
    roots = [r.real for r in mpmath.polyroots([1, 0, -x0, -x0 ** 2], maxsteps=200, extraprec=200)
             if abs(r.imag) < 1e-20]
    branches = expand_at_infinity(f, 10)
    assert branches
    for b in branches:
        val = sum(mp(coeff_ball(b.a(k), 80).center) * x0 ** (mpmath.mpf(-k) / b.e)
                  for k in range(b.v, 11))
        assert min(abs(val - r) for r in roots) < mpmath.mpf(10) ** -3
