"""Certified evaluation of alpha and the rational-approximation scans.

An index ``m`` of a problem stands for ``n = s*m + r``.  alpha at that index is
the real root of an explicit rational polynomial, anchored to the approximant
eta (the root nearest eta(m)), so the enclosure can be refined at will.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, NamedTuple, Optional, Tuple

from .errors import AmbiguityError, HypothesisError, InputError, PrecisionCapError
from .eta import Approximant
from .exact.ball import DEFAULT_MAX_BITS, Ball, decimal_str
from .exact.numberfield import NFElement, coeff_ball
from .exact.padic import abs_at, is_s_unit
from .exact.poly import UniPoly
from .exact.roots import isolate_real_roots, refine_root
from .implicit import ImplicitInstance, validate_hypotheses
from .powersum import PowerSum
from .puiseux import BiPoly

START_BITS = 64

HOLDS, VIOLATED, UNDECIDED = "holds", "violated", "undecided"


# -- problems ---------------------------------------------------------------------------

class Problem:
    """alpha at index m is a root of ``poly(m)``; ``app`` anchors the branch."""

    app: Approximant

    def poly(self, m: int) -> UniPoly:
        raise NotImplementedError

    def n_of(self, m: int) -> int:
        return self.app.s * m + self.app.r


@dataclass
class SingleProblem(Problem):
    f: BiPoly
    G: PowerSum
    app: Approximant

    def poly(self, m: int) -> UniPoly:
        return self.f.at_x(self.G.eval(self.n_of(m)))


@dataclass
class MultiProblem(Problem):
    inst: ImplicitInstance
    app: Approximant

    def poly(self, m: int) -> UniPoly:
        return self.inst.poly_at_n(m)


class _Anchor(NamedTuple):
    poly: UniPoly
    iv: object


def _anchor(problem: Problem, m: int, max_bits: int) -> _Anchor:
    cache = problem.__dict__.setdefault("_anchors", {})
    hit = cache.get(m)
    if hit is not None:
        return hit
    p = problem.poly(m)
    ivs = isolate_real_roots(p)
    if not ivs:
        raise AmbiguityError(f"branch not separable at n={problem.n_of(m)}: no real root")
    eta = problem.app.eta
    bits = START_BITS
    while True:
        target = eta.ball(m, bits)
        balls = [refine_root(p, iv, bits) for iv in ivs]
        dists = [_dist(b, target) for b in balls]
        best = min(range(len(ivs)), key=lambda i: dists[i].lo)
        if all(i == best or dists[best].hi < dists[i].lo for i in range(len(ivs))):
            break
        if bits >= max_bits:
            raise AmbiguityError(f"branch not separable at n={problem.n_of(m)}")
        bits = min(2 * bits, max_bits)
    anchor = _Anchor(p, ivs[best])
    cache[m] = anchor
    return anchor


def _dist(a: Ball, b: Ball) -> Ball:
    return abs(a - b)


def eval_alpha(problem: Problem, m: int, bits: int, max_bits: int = DEFAULT_MAX_BITS) -> Ball:
    """Enclosure of alpha at index m with relative radius <= 2^-bits.

    The root is the one of ``problem.poly(m)`` nearest eta(m); its isolating
    interval separates it from every other root.
    """
    a = _anchor(problem, m, max_bits)
    return refine_root(a.poly, a.iv, bits)


def alpha_equals_eta(problem: Problem, m: int, max_bits: int = DEFAULT_MAX_BITS) -> bool:
    """Exact test alpha(m) == eta(m)."""
    a = _anchor(problem, m, max_bits)
    val = problem.app.eta.eval(m)
    if a.poly(val) != 0:
        return False
    vb = coeff_ball(val, 64)
    return not (vb.certainly_lt(a.iv.lo) or vb.certainly_gt(a.iv.hi)) or a.iv.lo == a.iv.hi == val


def error_ball(problem: Problem, m: int, rel_bits: int = 64, max_bits: int = DEFAULT_MAX_BITS) -> Ball:
    """Certified |alpha(m) - eta(m)| with relative accuracy 2^-rel_bits (0 exactly when equal)."""
    if alpha_equals_eta(problem, m, max_bits):
        return Ball.exact(0)
    bits = rel_bits + 32
    while True:
        d = abs(eval_alpha(problem, m, bits, max_bits) - problem.app.eta.ball(m, bits))
        rr = d.rel_radius()
        if rr is not None and rr <= Fraction(1, 1 << rel_bits):
            return d
        if bits >= max_bits:
            raise PrecisionCapError(f"error |alpha - eta| unresolved at index {m}")
        bits = min(2 * bits, max_bits)


# -- best approximations ----------------------------------------------------------------

def _cf(x: Fraction) -> List[int]:
    out = []
    while True:
        a = x.numerator // x.denominator
        out.append(a)
        frac = x - a
        if frac == 0:
            return out
        x = 1 / frac


def best_approximations(alpha, Qmax: int) -> List[Tuple[int, int]]:
    """Convergents and intermediate fractions p/q with q <= Qmax.

    Partial quotients are read off both endpoints of the ball.  Numbers with a
    common prefix form an interval on which the next quotient is monotone, so
    when the endpoints disagree every alpha inside has a quotient between the
    two; if that leaves a candidate with q <= Qmax undetermined, AmbiguityError
    asks for more precision.
    """
    if Qmax < 1:
        return []
    alpha = Ball.coerce(alpha)
    lo_cf, hi_cf = _cf(alpha.lo), _cf(alpha.hi)
    if lo_cf[0] != hi_cf[0]:
        raise AmbiguityError("insufficient precision: integer part undetermined")
    p0, q0 = 1, 0
    p1, q1 = lo_cf[0], 1
    out = [(p1, q1)]
    i = 1
    while True:
        a_lo = lo_cf[i] if i < len(lo_cf) else None
        a_hi = hi_cf[i] if i < len(hi_cf) else None
        if a_lo is None and a_hi is None:
            return out
        agree = a_lo == a_hi
        a = min(x for x in (a_lo, a_hi) if x is not None)
        for j in range(1, a + 1):
            q = j * q1 + q0
            if q > Qmax:
                return out
            out.append((j * p1 + p0, q))
        if not agree:
            if (a + 1) * q1 + q0 <= Qmax:
                raise AmbiguityError("insufficient precision for the requested denominators")
            return out
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        i += 1


# -- scans -------------------------------------------------------------------------------

@dataclass
class AdversaryHit:
    index: int
    n: int
    p: int
    q: int
    gap: Ball
    bound: Ball
    verdict: str

    def row(self, digits: int = 17) -> dict:
        return {
            "index": self.index,
            "p": self.p,
            "q": self.q,
            "gap_lo": decimal_str(self.gap.lo, digits, "down"),
            "gap_hi": decimal_str(self.gap.hi, digits, "up"),
            "bound_lo": decimal_str(self.bound.lo, digits, "down"),
            "bound_hi": decimal_str(self.bound.hi, digits, "up"),
            "verdict": self.verdict,
        }


CSV_COLUMNS = ("index", "p", "q", "gap_lo", "gap_hi", "bound_lo", "bound_hi", "verdict")


def q_limit(n: int, eps: Fraction, max_bits: int = DEFAULT_MAX_BITS) -> int:
    """Largest integer q with q < e^(n eps)."""
    if n * eps == 0:
        return 0
    bits = START_BITS
    while True:
        X = Ball.exact(n * eps).exp(bits)
        lo, hi = math.floor(X.lo), math.floor(X.hi)
        if lo == hi:
            return lo
        if bits >= max_bits:
            raise PrecisionCapError(f"floor of e^(n eps) undecided at n={n}")
        bits = min(2 * bits, max_bits)


def _bound(q: int, k: int, n: int, eps: Fraction, bits: int) -> Ball:
    return Ball.exact(-n * eps).exp(bits) / (q ** k)


def scan_index(problem: Problem, m: int, eps: Fraction, max_bits: int = DEFAULT_MAX_BITS) -> List[AdversaryHit]:
    """Every best approximation p/q with q < e^(n eps), tested against q^-k e^(-n eps)."""
    n = problem.n_of(m)
    k = problem.app.k
    Q = q_limit(n, eps, max_bits)
    bits = START_BITS
    while True:
        alpha = eval_alpha(problem, m, bits, max_bits)
        try:
            cands = best_approximations(alpha, Q)
            break
        except AmbiguityError:
            if bits >= max_bits:
                raise PrecisionCapError(f"best approximations undetermined at index {m}")
            bits = min(2 * bits, max_bits)
    hits = []
    for p, q in cands:
        hits.append(_judge(problem, m, n, p, q, k, eps, bits, max_bits))
    return hits


def _judge(problem, m, n, p, q, k, eps, bits, max_bits) -> AdversaryHit:
    pq = Fraction(p, q)
    a = _anchor(problem, m, max_bits)
    if a.iv.lo == a.iv.hi == pq:
        gap = Ball.exact(0)
        return AdversaryHit(m, n, p, q, gap, _bound(q, k, n, eps, bits), VIOLATED)
    while True:
        gap = abs(eval_alpha(problem, m, bits, max_bits) - pq)
        bound = _bound(q, k, n, eps, bits)
        if gap.certainly_gt(bound):
            return AdversaryHit(m, n, p, q, gap, bound, HOLDS)
        if gap.certainly_lt(bound):
            return AdversaryHit(m, n, p, q, gap, bound, VIOLATED)
        if bits >= max_bits:
            return AdversaryHit(m, n, p, q, gap, bound, UNDECIDED)
        bits = min(2 * bits, max_bits)


def scan(problem: Problem, eps, index_range: Iterable[int],
         max_bits: int = DEFAULT_MAX_BITS) -> List[AdversaryHit]:
    eps = Fraction(eps)
    rows: List[AdversaryHit] = []
    for m in index_range:
        rows.extend(scan_index(problem, m, eps, max_bits))
    return rows


def check_single_bound(problem: SingleProblem, eps, m_range: Iterable[int],
                       max_bits: int = DEFAULT_MAX_BITS, all_rows: bool = False) -> List[AdversaryHit]:
    """Rows with verdict other than ``holds`` for |alpha(sm+r) - p/q| > q^-k e^-(sm+r)eps."""
    eps = Fraction(eps)
    s, k = problem.app.s, problem.app.k
    limit = min(Fraction(1, 2 * (s + 2)), Fraction(1, 2 * k))
    if not 0 < eps < limit:
        raise InputError(f"epsilon outside the admissible range: need 0 < eps < {limit}")
    rows = scan(problem, eps, m_range, max_bits)
    return rows if all_rows else [h for h in rows if h.verdict != HOLDS]


def check_multi_bound(problem: MultiProblem, eps, n_range: Iterable[int],
                      max_bits: int = DEFAULT_MAX_BITS, all_rows: bool = False) -> List[AdversaryHit]:
    """As check_single_bound with s = 1, r = 0, after the hypothesis report passes."""
    eps = Fraction(eps)
    rep = validate_hypotheses(problem.inst)
    if not rep.all_true():
        raise HypothesisError(f"multi-sum bound inapplicable: hypotheses fail ({rep})")
    limit = Fraction(1, 2 * problem.app.k)
    if not 0 < eps < limit:
        raise InputError(f"epsilon outside the admissible range: need 0 < eps < {limit}")
    rows = scan(problem, eps, n_range, max_bits)
    return rows if all_rows else [h for h in rows if h.verdict != HOLDS]


# -- the S-adic product -------------------------------------------------------------------

@dataclass
class SubspaceInstrument:
    """Linear forms for eta(m) = sum_i w_i d_i^m at the places S (None = infinity)."""
    S: Tuple[Optional[int], ...]
    d: int
    e_list: Tuple[int, ...]
    w_list: Tuple[object, ...]
    eta: PowerSum

    @property
    def H(self) -> int:
        return len(self.w_list)


def subspace_instrument(eta: PowerSum, primes: Iterable[int] = ()) -> SubspaceInstrument:
    if eta.is_zero():
        raise InputError("eta must have at least one term")
    roots = eta.roots
    if any(c <= 0 for c in roots):
        raise InputError("roots of eta must be positive")
    d = math.lcm(*(c.denominator for c in roots))
    e_list = tuple(int(c * d) for c in roots)
    primes = sorted(set(primes))
    for x in (d,) + e_list:
        if not is_s_unit(Fraction(x), primes):
            raise InputError(f"S too small: {x} is not an S-unit")
    return SubspaceInstrument((None,) + tuple(primes), d, e_list, tuple(eta.coeffs), eta)


def subspace_product(instr: SubspaceInstrument, m: int, p: int, q: int,
                     bits: int = 128) -> Tuple[Ball, Ball]:
    """(prod over S and i of |L_{i,v}(x)|_v, q^(H+1) |eta(m) - p/q|) for x = (p d^m, q e_1^m, ...)."""
    if q <= 0:
        raise InputError("q must be positive")
    x = [p * instr.d ** m] + [q * e ** m for e in instr.e_list]
    prod = Ball.exact(1)
    for v in instr.S:
        if v is None:
            L0 = Ball.exact(x[0])
            for w, xi in zip(instr.w_list, x[1:]):
                L0 = L0 - coeff_ball(w, bits) * xi
            prod = prod * abs(L0)
            for xi in x[1:]:
                prod = prod * abs(xi)
        else:
            for xi in x:
                prod = prod * abs_at(xi, v)
    eta_m = instr.eta.eval(m)
    diff = eta_m - Fraction(p, q)
    if isinstance(diff, NFElement) and not diff.is_zero():
        rhs = abs(diff.ball(bits)) * q ** (instr.H + 1)
    elif isinstance(diff, NFElement):
        rhs = Ball.exact(0)
    else:
        rhs = Ball.exact(abs(diff) * q ** (instr.H + 1))
    return prod, rhs
