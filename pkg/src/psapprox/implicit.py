"""Polynomials in several power sums and their implicit-function series.

Given power sums G^(0..d), dividing ``sum_i G^(i)(n) y^i`` by ``c1^n`` (c1 the
largest root) turns each coefficient into an affine form ``l_i`` evaluated at
``(g_1^n, ..., g_h^n)`` with ``1 > g_1 > ... > g_h > 0``.  The zero y(x) of
F(x, y) = sum_i l_i(x) y^i through a simple zero y0 of F(0, y) is solved as a
power series degree by degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .errors import AmbiguityError, HypothesisError, InputError
from .exact.ball import Ball
from .exact.numberfield import NumberField, coeff_ball, field_of
from .exact.poly import UniPoly, factor_rational, is_squarefree
from .exact.roots import isolate_real_roots
from .jsonio import coeff_to_json, field_to_json, rat_to_json
from .powersum import PowerSum

LAMBDA_SAFETY = Fraction(5, 4)
MultiIndex = Tuple[int, ...]


@dataclass(frozen=True)
class ImplicitInstance:
    """F(x, y) = sum_i l_i(x) y^i; l[i] = (constant, coeff of x_1, ..., coeff of x_h)."""
    l: Tuple[Tuple[Fraction, ...], ...]
    g: Tuple[Fraction, ...]
    c1: Fraction = Fraction(1)

    @property
    def d(self) -> int:
        return len(self.l) - 1

    @property
    def h(self) -> int:
        return len(self.g)

    def l_at(self, i: int, x: Sequence) -> object:
        row = self.l[i]
        return row[0] + sum((row[j + 1] * x[j] for j in range(self.h)), Fraction(0))

    def poly_at(self, x: Sequence) -> UniPoly:
        """F(x, y) as a polynomial in y."""
        return UniPoly(self.l_at(i, x) for i in range(self.d + 1))

    def poly_at_n(self, n: int) -> UniPoly:
        return self.poly_at([gi ** n for gi in self.g])

    def base_poly(self) -> UniPoly:
        """F(0, ..., 0, y)."""
        return UniPoly(row[0] for row in self.l)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "h": self.h,
            "c1": rat_to_json(self.c1),
            "g": [rat_to_json(x) for x in self.g],
            "l": [[rat_to_json(c) for c in row] for row in self.l],
        }


def build_F(G_list: Sequence[PowerSum]) -> ImplicitInstance:
    """Instance from the coefficient power sums G^(0), ..., G^(d) (index = power of y)."""
    if len(G_list) < 2:
        raise InputError("need at least two power sums (degree d >= 1)")
    if G_list[0].is_zero():
        raise HypothesisError("constant coefficient G^(0) is the zero power sum")
    roots = set()
    for i, G in enumerate(G_list):
        if not G.is_rational():
            raise InputError(f"G^({i}) must have rational coefficients")
        for c in G.roots:
            if c.denominator != 1 or c < 0:
                raise InputError(f"G^({i}) has root {c}; non-negative integer roots are required")
            if c == 0:
                raise InputError(f"G^({i}) has the degenerate root 0")
            roots.add(c)
    big = sorted((c for c in roots if c > 1), reverse=True)
    if not big:
        raise InputError("no decaying variables: every characteristic root is at most 1")
    c1 = big[0]
    g = tuple([c / c1 for c in big[1:]] + [1 / c1])
    slot = {c: k + 1 for k, c in enumerate(big[1:])}
    slot[Fraction(1)] = len(g)
    slot[c1] = 0
    rows = []
    for G in G_list:
        row = [Fraction(0)] * (len(g) + 1)
        for b, c in G.terms:
            row[slot[c]] += b
        rows.append(tuple(row))
    while len(rows) > 1 and not any(rows[-1]):
        rows.pop()
    return ImplicitInstance(tuple(rows), g, c1)


class HypothesisReport(NamedTuple):
    leading_nonzero: bool
    squarefree: bool
    no_rational_zero: bool

    def all_true(self) -> bool:
        return self.leading_nonzero and self.squarefree and self.no_rational_zero


def validate_hypotheses(inst: ImplicitInstance) -> HypothesisReport:
    p = inst.base_poly()
    lead = inst.l[-1][0] != 0
    if p.degree < 1:
        return HypothesisReport(lead, p.degree == 0, True)
    sqf = is_squarefree(p)
    no_rat = all(f.degree > 1 for f, _ in factor_rational(p))
    return HypothesisReport(lead, sqf, no_rat)


def real_zeros(inst: ImplicitInstance) -> List:
    """Real zeros of F(0, y) as exact rationals or number-field generators, ascending."""
    p = inst.base_poly()
    if p.is_zero():
        raise InputError("F(0, y) vanishes identically")
    out = []
    for f, _ in factor_rational(p):
        for iv in isolate_real_roots(f):
            if f.degree == 1:
                out.append(iv.lo)
            else:
                out.append(NumberField(f, iv, check=False).gen())
    out.sort(key=lambda z: coeff_ball(z, 64).center)
    return out


def zero_in_interval(inst: ImplicitInstance, lo, hi):
    """The unique real zero of F(0, y) in [lo, hi]; refuses when there are none or several."""
    lo, hi = Fraction(lo), Fraction(hi)
    hits = []
    for z in real_zeros(inst):
        b = coeff_ball(z, 64)
        if b.certainly_lt(lo) or b.certainly_gt(hi):
            continue
        hits.append(z)
    if len(hits) != 1:
        raise AmbiguityError(f"interval [{lo}, {hi}] holds {len(hits)} zeros of F(0, y); need exactly one")
    return hits[0]


# -- multivariate truncated series ---------------------------------------------------

def _indices(h: int, deg: int) -> List[MultiIndex]:
    """All multi-indices of total degree ``deg`` in lexicographically decreasing order."""
    out = []
    for combo in combinations_with_replacement(range(h), deg):
        t = [0] * h
        for v in combo:
            t[v] += 1
        out.append(tuple(t))
    return sorted(out, reverse=True)


def count_multiindices(h: int, k: int) -> int:
    """Number of tau in N^h with |tau| = k."""
    if h < 1 or k < 0:
        raise InputError("need h >= 1 and k >= 0")
    return comb(k + h - 1, k)


def _mul_trunc(a: Dict[MultiIndex, object], b: Dict[MultiIndex, object], D: int):
    out: Dict[MultiIndex, object] = {}
    for ta, x in a.items():
        da = sum(ta)
        for tb, y in b.items():
            if da + sum(tb) > D:
                continue
            t = tuple(i + j for i, j in zip(ta, tb))
            out[t] = out[t] + x * y if t in out else x * y
    return {k: v for k, v in out.items() if v != 0}


def _add(a: Dict, b: Dict) -> Dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out[k] + v if k in out else v
    return {k: v for k, v in out.items() if v != 0}


def _l_series(inst: ImplicitInstance, i: int) -> Dict[MultiIndex, Fraction]:
    h = inst.h
    row = inst.l[i]
    out = {}
    if row[0]:
        out[(0,) * h] = row[0]
    for j in range(h):
        if row[j + 1]:
            t = [0] * h
            t[j] = 1
            out[tuple(t)] = row[j + 1]
    return out


def substitute(inst: ImplicitInstance, Y: Dict[MultiIndex, object], D: int) -> Dict[MultiIndex, object]:
    """F(x, Y(x)) truncated at total degree D (Horner in y)."""
    acc: Dict[MultiIndex, object] = {}
    for i in range(inst.d, -1, -1):
        acc = _add(_mul_trunc(acc, Y, D), _l_series(inst, i))
    return acc


@dataclass
class TruncatedMultiSeries:
    y0: object
    A: Dict[MultiIndex, object]
    K: int
    h: int
    lam: Ball

    @property
    def field(self) -> Optional[NumberField]:
        return field_of(self.y0)

    def coeff(self, tau: MultiIndex):
        return self.A.get(tuple(tau), Fraction(0))

    def eval_ball(self, x: Sequence[Fraction], rel_bits: int = 64) -> Ball:
        total = Ball.exact(0)
        for tau, a in self.A.items():
            mono = Fraction(1)
            for xi, ti in zip(x, tau):
                mono *= Fraction(xi) ** ti
            total = total + coeff_ball(a, rel_bits) * mono
        return total

    def to_json(self) -> dict:
        return {
            "K": self.K,
            "h": self.h,
            "field": field_to_json(self.field),
            "y0": coeff_to_json(self.y0),
            "A": [{"tau": list(t), "coeff": coeff_to_json(a)} for t, a in sorted(self.A.items())],
            "lambda": {"lo": rat_to_json(self.lam.lo), "hi": rat_to_json(self.lam.hi), "estimate": True},
        }


def solve_series(inst: ImplicitInstance, y0, K: int) -> TruncatedMultiSeries:
    """Coefficients A_tau, |tau| <= K, of the zero y(x) of F with y(0) = y0."""
    if K < 0:
        raise InputError("series depth K must be non-negative")
    p = inst.base_poly()
    if p(y0) != 0:
        raise InputError("y0 is not a zero of F(0, y)")
    dF = p.derivative()(y0)
    if dF == 0:
        raise HypothesisError("multiple zero; implicit solve impossible")
    h = inst.h
    A: Dict[MultiIndex, object] = {(0,) * h: y0}
    for j in range(1, K + 1):
        R = substitute(inst, A, j)
        for tau in _indices(h, j):
            r = R.get(tau)
            if r is not None and r != 0:
                A[tau] = -r / dF
    A = {t: a for t, a in A.items() if a != 0 or sum(t) == 0}
    series = TruncatedMultiSeries(y0, A, K, h, Ball.exact(LAMBDA_SAFETY))
    series.lam = estimate_lambda(series)
    return series


def series_residual(inst: ImplicitInstance, series: TruncatedMultiSeries) -> Dict[MultiIndex, object]:
    """Terms of F(x, series) of total degree <= K (empty for a correct solve)."""
    return substitute(inst, series.A, series.K)


def estimate_lambda(series: TruncatedMultiSeries) -> Ball:
    """max(1, max_{1 <= |tau| <= K} |A_tau|^(1/|tau|)) * 1.25; an empirical estimate."""
    best = Ball.exact(1)
    for tau, a in series.A.items():
        k = sum(tau)
        if k >= 1 and a != 0:
            r = abs(coeff_ball(a, 64)).root(k, 64)
            if r.hi > best.hi:
                best = Ball(max(best.lo, r.lo), r.hi, 64)
    return best * LAMBDA_SAFETY
