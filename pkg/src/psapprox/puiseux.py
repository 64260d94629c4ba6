"""Puiseux expansions at x = infinity via the Newton polygon.

With ``u = 1/x`` and ``g(u, y) = u^deg_x f(1/u, y)``, every branch is a germ
``y = sum_k a_k w^k`` with ``u = w^e``, i.e. ``y = sum_k a_k x^(-k/e)``.
Coefficients live in real number fields; only germs with real coefficients are
followed, the rest are counted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cmp_to_key
from math import comb, gcd
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .errors import BranchInconsistentError, InputError
from .exact.ball import Ball
from .exact.numberfield import (NFElement, NumberField, coeff_ball, coeff_sign,
                                join_fields, norm_poly, rational_of)
from .exact.poly import UniPoly, factor_rational, is_squarefree
from .exact.roots import isolate_real_roots, refine_root
from .jsonio import field_to_json, rat_from_json, rat_to_json

LAMBDA_SAFETY = Fraction(5, 4)


# -- bivariate polynomials ----------------------------------------------------------

class BiPoly:
    """Polynomial in x and y over Q, stored as {(i, j): coeff} for coeff * x^i * y^j."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        acc: Dict[Tuple[int, int], Fraction] = {}
        for (i, j), c in items:
            if i < 0 or j < 0:
                raise InputError("negative exponent in bivariate polynomial")
            acc[(i, j)] = acc.get((i, j), Fraction(0)) + Fraction(c)
        self.terms = {k: v for k, v in sorted(acc.items()) if v != 0}

    @property
    def deg_x(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    @property
    def deg_y(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, BiPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __repr__(self) -> str:
        return "BiPoly(" + " + ".join(f"{c}*x^{i}*y^{j}" for (i, j), c in self.terms.items()) + ")"

    def y_coeff(self, j: int) -> UniPoly:
        """Coefficient of y^j as a polynomial in x."""
        cs = [Fraction(0)] * (self.deg_x + 1)
        for (i, jj), c in self.terms.items():
            if jj == j:
                cs[i] = c
        return UniPoly(cs)

    def at_x(self, x0) -> UniPoly:
        """f(x0, y) as a polynomial in y."""
        cs = [0] * (self.deg_y + 1)
        for (i, j), c in self.terms.items():
            cs[j] = cs[j] + c * x0 ** i
        return UniPoly(cs)

    def height(self) -> Fraction:
        return max((abs(c) for c in self.terms.values()), default=Fraction(0))

    def to_json(self) -> list:
        return [{"x": i, "y": j, **rat_to_json(c)} for (i, j), c in self.terms.items()]

    @classmethod
    def from_json(cls, obj, where: str = "f") -> "BiPoly":
        if not isinstance(obj, list):
            raise InputError(f"{where}: expected a list of {{x, y, num, den}} terms")
        terms = []
        for n, t in enumerate(obj):
            w = f"{where}[{n}]"
            if not isinstance(t, dict) or "x" not in t or "y" not in t:
                raise InputError(f"{w}: expected {{x, y, num, den}}")
            i, j = t["x"], t["y"]
            if isinstance(i, bool) or isinstance(j, bool) or not isinstance(i, int) or not isinstance(j, int) \
                    or i < 0 or j < 0:
                raise InputError(f"{w}: exponents must be non-negative integers")
            terms.append(((i, j), rat_from_json({k: t[k] for k in ("num", "den") if k in t}, w)))
        return cls(terms)


def is_squarefree_in_y(f: BiPoly) -> bool:
    """Squarefreeness of f in Q(x)[y], decided by specialization.

    The discriminant has degree at most (2n-1)m in x, so among that many plus one
    points where lc_y does not vanish, some specialization stays squarefree.
    """
    n, m = f.deg_y, f.deg_x
    if n <= 1:
        return n == 1
    lc = f.y_coeff(n)
    need = (2 * n - 1) * max(m, 0) + 1
    x0, tried = 0, 0
    while tried < need:
        if lc(Fraction(x0)) != 0:
            tried += 1
            if is_squarefree(f.at_x(Fraction(x0))):
                return True
        x0 += 1
    return False


# -- branch records -----------------------------------------------------------------

@dataclass
class PuiseuxBranch:
    """y = sum_{k >= v} a_k x^(-k/e).  ``exact`` marks a series known to terminate."""
    e: int
    v: int
    coeffs: Dict[int, object]
    field: Optional[NumberField]
    k_max: int
    lam: Ball = dc_field(default_factory=lambda: Ball.exact(LAMBDA_SAFETY))
    exact: bool = False

    def a(self, k: int):
        if k < self.v:
            return Fraction(0)
        if k > self.k_max:
            if self.exact:
                return Fraction(0)
            raise InputError(f"coefficient a_{k} beyond computed range k_max={self.k_max}")
        return self.coeffs.get(k, Fraction(0))

    def to_json(self) -> dict:
        return {
            "e": self.e,
            "v": self.v,
            "k_max": self.k_max,
            "exact": self.exact,
            "field_minpoly": [rat_to_json(c) for c in self.field.minpoly.coeffs] if self.field else [
                rat_to_json(0), rat_to_json(1)],
            "field": field_to_json(self.field),
            "coeffs": [{"k": k, "coords": _coords(self.coeffs.get(k, Fraction(0)), self.field)}
                       for k in range(self.v, self.k_max + 1)],
            "lambda": {"lo": rat_to_json(self.lam.lo), "hi": rat_to_json(self.lam.hi), "estimate": True},
        }


def _coords(c, K) -> list:
    if isinstance(c, NFElement):
        return [rat_to_json(x) for x in c.coords]
    deg = K.degree if K is not None else 1
    return [rat_to_json(c)] + [rat_to_json(0)] * (deg - 1)


# -- Newton polygon -----------------------------------------------------------------

def _lower_hull(points: Sequence[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Lower convex hull of (j, i) points, left to right."""
    best: Dict[int, int] = {}
    for j, i in points:
        best[j] = min(i, best.get(j, i))
    pts = sorted(best.items())
    hull: List[Tuple[int, int]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _edges(P: Dict[Tuple[int, int], object], positive_only: bool):
    """(p, q, j_lo, j_hi) per hull edge, where the edge valuation is gamma = p/q."""
    hull = _lower_hull([(j, i) for (i, j) in P])
    out = []
    for (j1, i1), (j2, i2) in zip(hull, hull[1:]):
        num, den = i1 - i2, j2 - j1
        g = gcd(num, den)
        p, q = num // g, den // g
        if positive_only and p <= 0:
            continue
        out.append((p, q, j1, j2))
    return out


# -- root finding for face polynomials ----------------------------------------------

def _zero_of(K):
    return K(0) if K is not None else Fraction(0)


def _poly_eval(coeffs: Sequence, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _multiplicity(coeffs: list, c) -> int:
    r = 0
    cur = list(coeffs)
    while cur and _poly_eval(cur, c) == 0:
        r += 1
        cur = [k * a for k, a in enumerate(cur)][1:]
    return r


def _real_roots_over(K: Optional[NumberField], coeffs: list):
    """Nonzero real roots of sum coeffs[j] c^j with coefficients in K.

    Returns (roots, nonreal_count) where roots are (L, emb, c, mult): L is the
    field holding c, emb maps K into L.
    """
    lo = next(j for j, a in enumerate(coeffs) if a != 0)
    coeffs = coeffs[lo:]
    deg = len(coeffs) - 1
    found = []
    if K is None:
        p = UniPoly([rational_of(a) for a in coeffs])
        for h, mult in factor_rational(p):
            for iv in isolate_real_roots(h):
                if h.degree == 1:
                    found.append((None, _ident, iv.lo, mult))
                else:
                    L = NumberField(h, iv, check=False)
                    found.append((L, _ident, L.gen(), mult))
    else:
        N = norm_poly(K, coeffs)
        for h, _ in factor_rational(N):
            for iv in isolate_real_roots(h):
                hit = _root_in_field(K, coeffs, h, iv)
                if hit is not None:
                    L, emb, c = hit
                    lifted = [emb(a) for a in coeffs]
                    found.append((L, emb, c, _multiplicity(lifted, c)))
    real = sum(m for *_, m in found)
    return found, deg - real


def _ident(x):
    return x


def _root_in_field(K: NumberField, coeffs, h: UniPoly, iv):
    # cheap exclusion before any exact work
    rb = refine_root(h, iv, 64)
    val = Ball.exact(0)
    for a in reversed(coeffs):
        val = val * rb + coeff_ball(a, 80)
    if not val.contains_zero():
        return None
    if h.degree == 1:
        c = K(iv.lo)
        return (K, _ident, c) if _poly_eval(coeffs, c) == 0 else None
    M = NumberField(h, iv, check=False)
    L, eK, eM = join_fields(K, M)
    c = eM(M.gen())
    lifted = [eK(a) for a in coeffs]
    if _poly_eval(lifted, c) != 0:
        return None
    return L, eK, c


# -- the expansion ------------------------------------------------------------------

@dataclass
class _Germ:
    E: int
    S: Dict[int, object]
    field: Optional[NumberField]
    exact: bool


def _substitute(P, p: int, q: int, M: int, c, emb):
    """w'^-M * P(w'^q, w'^p (c + Y'))."""
    out: Dict[Tuple[int, int], object] = {}
    for (i, j), a in P.items():
        a = emb(a)
        base = q * i + p * j - M
        # (c + Y)^j = sum_l C(j, l) c^(j-l) Y^l
        powers = [1]
        for _ in range(j):
            powers.append(powers[-1] * c)
        for l in range(j + 1):
            term = a * comb(j, l) * powers[j - l]
            key = (base, l)
            out[key] = out[key] + term if key in out else term
    return {k: v for k, v in out.items() if v != 0}


def _regular_solve(P, N: int) -> List[object]:
    """Coefficients b_1..b_N of the unique Y = sum b_k w^k with P(w, Y) = 0, Y(0) = 0."""
    deriv = P.get((0, 1))
    if deriv is None or deriv == 0:
        raise BranchInconsistentError("regular solve reached a non-simple root")
    dy = max(j for _, j in P)
    rows: List[List] = [[0] * (N + 1) for _ in range(dy + 1)]
    for (i, j), a in P.items():
        if i <= N:
            rows[j][i] = rows[j][i] + a
    Y = [0] * (N + 1)
    b = []
    for k in range(1, N + 1):
        val = _series_value_at(rows, Y, k)
        bk = -val / deriv
        b.append(bk)
        Y[k] = bk
    return b


def _series_value_at(rows, Y, k: int):
    """[w^k] of sum_j rows[j](w) Y(w)^j, using Y truncated below degree k."""
    acc = list(rows[-1][:k + 1])
    for j in range(len(rows) - 2, -1, -1):
        nxt = [0] * (k + 1)
        for a_i, a in enumerate(acc):
            if a == 0:
                continue
            for y_i in range(1, k + 1 - a_i):
                y = Y[y_i]
                if y_i < k and y != 0:
                    nxt[a_i + y_i] = nxt[a_i + y_i] + a * y
        for i in range(k + 1):
            r = rows[j][i]
            if r != 0:
                nxt[i] = nxt[i] + r
        acc = nxt
    return acc[k]


def _expand(P, E: int, S: Dict[int, object], beta: int, K, k_max: int,
            level0: bool, out: List[_Germ], stats: Dict[str, int]):
    if all(j > 0 for (_, j) in P):
        out.append(_Germ(E, dict(S), K, True))
        stats["real"] += 1
    for p, q, j1, j2 in _edges(P, positive_only=not level0):
        M = q * min(i for (i, j) in P if j == j1) + p * j1
        face = [_zero_of(K)] * (j2 + 1)
        for (i, j), a in P.items():
            if q * i + p * j == M:
                face[j] = face[j] + a
        roots, nonreal = _real_roots_over(K, face)
        stats["complex"] += nonreal
        for L, emb, c, mult in roots:
            S2 = {q * k: emb(a) for k, a in S.items()}
            b2 = q * beta + p
            S2[b2] = c
            P2 = _substitute(P, p, q, M, c, emb)
            E2 = E * q
            if mult == 1:
                need = k_max - b2
                if need > 0:
                    if all(j > 0 for (_, j) in P2):
                        out.append(_Germ(E2, S2, L, True))
                        stats["real"] += 1
                        continue
                    for n, bk in enumerate(_regular_solve(P2, need), start=1):
                        if bk != 0:
                            S2[b2 + n] = bk
                out.append(_Germ(E2, S2, L, all(j > 0 for (_, j) in P2)))
                stats["real"] += 1
            else:
                _expand(P2, E2, S2, b2, L, k_max, False, out, stats)


def _to_field(x, K):
    if K is None:
        return rational_of(x) if isinstance(x, NFElement) else x
    return x if isinstance(x, NFElement) else K(x)


def expand_at_infinity(f: BiPoly, k_max: int, with_stats: bool = False):
    """Real Puiseux branches of f(x, y) = 0 at x = infinity, coefficients up to index k_max.

    Branches are sorted by decreasing value for large x.  Germs of one place that
    differ by w -> -w are reported once, with the first odd-index nonzero
    coefficient positive.  With ``with_stats`` the germ counts (real, complex)
    are returned as well; they add up to deg_y f.
    """
    if f.is_zero() or f.deg_y < 1:
        raise InputError("expansion needs a polynomial of positive degree in y")
    if not is_squarefree_in_y(f):
        raise InputError("multiple branches collide: f is not squarefree in y")
    dx = f.deg_x
    P = {(dx - i, j): c for (i, j), c in f.terms.items()}
    germs: List[_Germ] = []
    stats = {"real": 0, "complex": 0}
    _expand(P, 1, {}, 0, None, k_max, True, germs, stats)
    branches = _pair_and_build(germs, k_max)
    branches.sort(key=cmp_to_key(_branch_cmp), reverse=True)
    if with_stats:
        return branches, stats
    return branches


def _germ_coeffs(g: _Germ, k_max: int):
    return {k: _to_field(a, g.field) for k, a in g.S.items() if k <= k_max and a != 0}


def _pair_and_build(germs: List[_Germ], k_max: int) -> List[PuiseuxBranch]:
    branches = []
    for g in germs:
        if g.E % 2 == 0 and not _is_representative(g):
            continue
        nz = [k for k, a in g.S.items() if a != 0]
        if nz and k_max < min(nz):
            raise InputError(f"k_max={k_max} is below the starting index v={min(nz)}")
        coeffs = _germ_coeffs(g, k_max)
        v = min(coeffs) if coeffs else 0
        br = PuiseuxBranch(g.E, v, coeffs, g.field, k_max, exact=g.exact)
        br.lam = estimate_lambda(br)
        branches.append(br)
    return branches


def _is_representative(g: _Germ) -> bool:
    for k in sorted(g.S):
        if k % 2 and g.S[k] != 0:
            return coeff_sign(g.S[k]) > 0
    # no odd-index term at all: the germ is its own partner
    return True


def _branch_cmp(b1: PuiseuxBranch, b2: PuiseuxBranch) -> int:
    t1 = {Fraction(-k, b1.e): a for k, a in b1.coeffs.items()}
    t2 = {Fraction(-k, b2.e): a for k, a in b2.coeffs.items()}
    for ex in sorted(set(t1) | set(t2), reverse=True):
        a, b = t1.get(ex, Fraction(0)), t2.get(ex, Fraction(0))
        ba, bb = coeff_ball(a, 64), coeff_ball(b, 64)
        c = ba.compare(bb)
        if c:
            return c
        if c is None and not _alg_eq(a, b):
            return _refined_compare(a, b)
    return 0


def _alg_eq(a, b) -> bool:
    from .exact.numberfield import algebraic_equal
    return algebraic_equal(a, b)


def _refined_compare(a, b) -> int:
    bits = 128
    while True:
        c = coeff_ball(a, bits).compare(coeff_ball(b, bits))
        if c is not None:
            return c
        bits *= 2


# -- instruments --------------------------------------------------------------------

def estimate_lambda(branch: PuiseuxBranch) -> Ball:
    """max(1, max_{k >= 1} |a_k|^(1/k)) * 1.25 on the computed range (an estimate)."""
    best = Ball.exact(1)
    for k, a in branch.coeffs.items():
        if k >= 1 and a != 0:
            r = abs(coeff_ball(a, 64)).root(k, 64)
            if r.hi > best.hi:
                best = Ball(max(best.lo, r.lo), r.hi, 64)
    return best * LAMBDA_SAFETY


def _laurent_sub(f: BiPoly, branch: PuiseuxBranch, K: int):
    """f(w^-e, sum_{k<=K} a_k w^k) as {w-exponent: coeff}."""
    ys = {k: branch.a(k) for k in range(branch.v, K + 1) if branch.a(k) != 0}
    return _laurent_eval(f, ys, branch.e)


def _laurent_mul(a: Dict[int, object], b: Dict[int, object]) -> Dict[int, object]:
    out: Dict[int, object] = {}
    for i, x in a.items():
        for j, y in b.items():
            t = x * y
            out[i + j] = out[i + j] + t if i + j in out else t
    return {k: v for k, v in out.items() if v != 0}


def _laurent_eval(f: BiPoly, ys: Dict[int, object], e: int, deriv: int = 0) -> Dict[int, object]:
    # sum_j (d^deriv/dy^deriv coeff_j(x)) y^(j - deriv)
    acc: Dict[int, object] = {}
    dy = f.deg_y
    for j in range(dy, deriv - 1, -1):
        acc = _laurent_mul(acc, ys) if acc else {}
        factor = math.perm(j, deriv)
        for (i, jj), c in f.terms.items():
            if jj == j:
                key = -e * i
                t = c * factor
                acc[key] = acc[key] + t if key in acc else t
        acc = {k: v for k, v in acc.items() if v != 0}
    return acc


class ResidualStep(NamedTuple):
    K: int
    order: Optional[Fraction]      # x-order of f(x, sum_{k<=K} a_k x^(-k/e)); None if zero
    envelope: Optional[Fraction]   # x-order bound min_j (ord d^j f/dy^j - j(K+1)/e)


def residual_profile(f: BiPoly, branch: PuiseuxBranch, k_max: Optional[int] = None) -> List[ResidualStep]:
    """Residual and Taylor-envelope orders (in x) for every truncation K = v..k_max.

    In w = x^(-1/e): ord_w R_K >= min_j (ord_w d^j f/dy^j + j (K+1)), so the
    envelope grows by at least one w-unit, i.e. drops by 1/e in x, per coefficient.
    """
    k_max = branch.k_max if k_max is None else k_max
    out = []
    for K in range(branch.v, k_max + 1):
        ys = {k: branch.a(k) for k in range(branch.v, K + 1) if branch.a(k) != 0}
        R = _laurent_eval(f, ys, branch.e)
        env = None
        for j in range(1, f.deg_y + 1):
            D = _laurent_eval(f, ys, branch.e, deriv=j)
            if D:
                cand = min(D) + j * (K + 1)
                env = cand if env is None else min(env, cand)
        out.append(ResidualStep(K, Fraction(-min(R), branch.e) if R else None,
                                Fraction(-env, branch.e) if env is not None else None))
    return out


def branch_residual_order(f: BiPoly, branch: PuiseuxBranch, k_max: Optional[int] = None) -> Optional[Fraction]:
    """x-order of f(x, truncated branch) at k_max; ``None`` when the residual vanishes identically.

    Raises BranchInconsistentError if some truncation's residual is larger than
    its envelope (see residual_profile).
    """
    last = None
    for st in residual_profile(f, branch, k_max):
        if st.order is not None and (st.envelope is None or st.order > st.envelope):
            raise BranchInconsistentError(
                f"branch inconsistent: residual order {st.order} above envelope {st.envelope} at K={st.K}")
        last = st.order
    return last


@dataclass(frozen=True)
class CoatesParams:
    N: int
    f0: int
    mu: int
    log_lambda: Ball


def coates_log_bound(f: BiPoly, bits: int = 128) -> CoatesParams:
    """N = max(n, m, 3), f0 >= 2 a height bound, mu = (N^4 n)^(3 N^4), log Lambda = mu log f0."""
    n, m = f.deg_y, f.deg_x
    N = max(n, m, 3)
    f0 = max(2, math.ceil(f.height()))
    mu = (N ** 4 * n) ** (3 * N ** 4)
    log_f0 = Ball.exact(f0).log(bits)
    return CoatesParams(N, f0, mu, log_f0 * mu)
