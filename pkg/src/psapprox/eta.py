"""Approximating power sums for algebraic functions of power sums.

Single case: alpha(n) is a Puiseux branch of f(G(n), y) = 0 and, on the
progression n = s*m + r, the truncated series is re-expanded into a power sum
eta_r(m).  Multi case: alpha(n) = y(g_1^n, ..., g_h^n) for the implicit series
y, truncated at total degree K.  Both come with an empirical error certificate.
"""

from __future__ import annotations

import sympy
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Dict, Iterable, NamedTuple, Optional

from .errors import HypothesisError, InputError
from .exact.ball import Ball
from .exact.numberfield import NumberField, field_of, is_rational, join_fields
from .exact.poly import UniPoly, factor_rational
from .exact.roots import isolate_real_roots
from .implicit import ImplicitInstance, TruncatedMultiSeries
from .jsonio import field_to_json, rat_to_json
from .powersum import PowerSum
from .puiseux import BiPoly, PuiseuxBranch, expand_at_infinity

DEFAULT_T = Fraction(1, 9)
LIKELY_FAILS = "LIKELY FAILS"
LIKELY_HOLDS = "LIKELY HOLDS"


class CutoffChoice(NamedTuple):
    K: int
    L: int
    B: Ball


def _check_t(t) -> Fraction:
    t = Fraction(t)
    if not 0 < t < 1:
        raise InputError("t must lie in (0, 1)")
    return t


def choose_cutoffs(c1, c2, s: int, v: int, t, K_min: int = 1) -> CutoffChoice:
    """Minimal K >= 1 with c1^-(K+1) < t^s and minimal L >= 0 with c1^-v (c2/c1)^(s(L+1)) < t^s.

    ``c2=None`` means a single-term power sum: L = 0.  B = max(1, |k|/s) over
    k in [v, K] bounds |binom(-k/s, l)| <= B^l.
    """
    c1 = Fraction(c1)
    t = _check_t(t)
    if c1 <= 1:
        raise InputError("the dominant root must exceed 1")
    ts = t ** s
    K = max(K_min, 1)
    while c1 ** -(K + 1) >= ts:
        K += 1
    L = 0
    if c2 is not None:
        c2 = Fraction(c2)
        if not 0 < c2 < c1:
            raise InputError("need c1 > c2 > 0")
        ratio = c2 / c1
        while c1 ** (-v) * ratio ** (s * (L + 1)) >= ts:
            L += 1
    B = max(Fraction(1), Fraction(max(abs(v), abs(K)), s))
    return CutoffChoice(K, L, Ball.exact(B))


def binom(a: Fraction, l: int) -> Fraction:
    out = Fraction(1)
    for i in range(l):
        out = out * (a - i) / (i + 1)
    return out


def positive_root(beta: Fraction, s: int):
    """The positive real s-th root of a positive rational, exact or as a field generator."""
    beta = Fraction(beta)
    if beta <= 0:
        raise InputError("root of a non-positive number")
    num = _int_root(beta.numerator, s)
    den = _int_root(beta.denominator, s)
    if num is not None and den is not None:
        return Fraction(num, den)
    p = UniPoly([-beta] + [0] * (s - 1) + [1])
    for h, _ in factor_rational(p):
        for iv in isolate_real_roots(h):
            if iv.lo >= 0 and h(Fraction(0)) != 0:
                if h.degree == 1:
                    return iv.lo
                return NumberField(h, iv, check=False).gen()
    raise InputError("no positive root found")


def _int_root(n: int, s: int) -> Optional[int]:
    root, exact = sympy.integer_nthroot(n, s)
    return int(root) if exact else None


@dataclass
class Approximant:
    eta: PowerSum
    t: Fraction
    s: int = 1
    r: int = 0
    K: int = 0
    L: int = 0
    B: Optional[Ball] = None
    C: Optional[Ball] = None
    n0: Optional[int] = None
    classification: Optional[str] = None
    mode: str = "single"
    source: dict = dc_field(default_factory=dict, repr=False)

    @property
    def H(self) -> int:
        return len(self.eta)

    @property
    def k(self) -> int:
        return self.H + 1

    @property
    def field(self) -> Optional[NumberField]:
        return self.eta.field

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "field": field_to_json(self.field),
            "terms": self.eta.to_json(),
            "H": self.H,
            "k": self.k,
            "t": rat_to_json(self.t),
            "s": self.s,
            "r": self.r,
            "K": self.K,
            "L": self.L,
            "B": rat_to_json(self.B.hi) if self.B is not None else None,
            "C": {"lo": rat_to_json(self.C.lo), "hi": rat_to_json(self.C.hi), "estimate": True}
            if self.C is not None else None,
            "n0": self.n0,
            "classification": self.classification,
            "classification_is_heuristic": True,
        }


# -- single power sum -----------------------------------------------------------------

def select_branch(f: BiPoly, k_max: int, branch_index: int = 0) -> PuiseuxBranch:
    branches = expand_at_infinity(f, k_max)
    if not branches:
        raise InputError("f has no real branch at infinity")
    if not 0 <= branch_index < len(branches):
        raise InputError(f"branch index {branch_index} out of range (have {len(branches)})")
    return branches[branch_index]


def build_eta_single(f: BiPoly, G: PowerSum, t=DEFAULT_T, r: int = 0, branch_index: int = 0,
                     K: Optional[int] = None, L: Optional[int] = None) -> Approximant:
    """eta_r(m) = sum_{k=v}^K a_k rho^-k c1^(-k m) sum_{l<=L} binom(-k/s, l) sigma(s m + r)^l.

    rho is the positive s-th root of b1 c1^r.  Explicit K, L override the
    minimal cut-offs (only used to build deeper comparison sums).
    """
    t = _check_t(t)
    dom = G.dominant_decompose()
    if dom.c1 <= 1:
        raise InputError("the dominant root c1 must exceed 1")
    if not G.is_rational():
        raise InputError("G must have rational coefficients")
    br = select_branch(f, 0, branch_index)
    s, v = br.e, br.v
    if not 0 <= r < s:
        raise InputError(f"residue r={r} out of range [0, {s})")
    c2 = G.roots[1] if len(G) > 1 else None
    cut = choose_cutoffs(dom.c1, c2, s, v, t)
    K = cut.K if K is None else K
    L = cut.L if L is None else L
    if K > br.k_max:
        br = select_branch(f, K, branch_index)
    beta = Fraction(dom.b1) * dom.c1 ** r
    if beta <= 0:
        raise InputError("real branch undefined on progression: b1 * c1^r is not positive")
    rho = positive_root(beta, s)
    F, e_branch, e_rho = join_fields(br.field, field_of(rho))
    rho = e_rho(rho)
    rho_inv = 1 / rho
    sigma_r = dom.sigma.restrict(s, r) if not dom.sigma.is_zero() else PowerSum()
    powers = [PowerSum.const(1)]
    for _ in range(L):
        powers.append(powers[-1] * sigma_r)
    eta = PowerSum()
    for k in range(v, K + 1):
        a = br.a(k)
        if a == 0:
            continue
        inner = PowerSum()
        for l in range(L + 1):
            bc = binom(Fraction(-k, s), l)
            if bc:
                inner = inner + powers[l].scale(bc)
        lead = e_branch(a) * rho_inv ** k if k >= 0 else e_branch(a) * rho ** (-k)
        eta = eta + PowerSum.term(lead, dom.c1 ** (-k)) * inner
    app = Approximant(eta, t, s=s, r=r, K=K, L=L, B=cut.B, mode="single",
                      source={"f": f, "G": G, "branch_index": branch_index, "branch": br})
    app.classification = hypothesis_scan(app)
    return app


# -- several power sums -----------------------------------------------------------------

def multi_cutoff(g1, t) -> int:
    """Minimal K >= 0 with g1^(K+1) < t."""
    g1, t = Fraction(g1), _check_t(t)
    K = 0
    while g1 ** (K + 1) >= t:
        K += 1
    return K


def build_eta_multi(inst: ImplicitInstance, series: TruncatedMultiSeries, t=DEFAULT_T,
                    K: Optional[int] = None) -> Approximant:
    """eta(n) = sum_{|tau| <= K} A_tau (g^tau)^n with K minimal such that g1^(K+1) < t."""
    t = _check_t(t)
    if inst.h < 1:
        raise InputError("no decaying variables")
    need = multi_cutoff(inst.g[0], t) if K is None else K
    if series.K < need:
        raise InputError(f"insufficient series depth K_needed={need} (have K={series.K})")
    terms = []
    for tau, a in series.A.items():
        if sum(tau) <= need:
            root = Fraction(1)
            for gi, ti in zip(inst.g, tau):
                root *= gi ** ti
            terms.append((a, root))
    eta = PowerSum(terms, series.field)
    app = Approximant(eta, t, s=1, r=0, K=need, L=0, mode="multi",
                      source={"inst": inst, "series": series})
    app.classification = hypothesis_scan(app)
    return app


# -- diagnostics ------------------------------------------------------------------------

def hypothesis_scan(app: Approximant) -> str:
    """Heuristic: does a rational, integer-root power sum already approximate alpha?

    LIKELY FAILS when every term with root >= 1 has a rational coefficient and an
    integer root; LIKELY HOLDS otherwise.  Never a proof.
    """
    for b, c in app.eta.terms:
        if c >= 1 and (not is_rational(b) or c.denominator != 1):
            return LIKELY_HOLDS
    return LIKELY_FAILS


class ErrorCertificate(NamedTuple):
    C: Ball
    n0: int
    ratios: Dict[int, Ball]


def certify_error(app: Approximant, diff_eval: Callable[[int], Ball], m_range: Iterable[int]) -> ErrorCertificate:
    """C = max |alpha - eta| / t^(s m) over the sample, n0 where the ratio turns monotone.

    ``diff_eval(m)`` must return a certified Ball for |alpha(s m + r) - eta(m)|
    (exactly 0 when the two agree).
    """
    ms = list(m_range)
    if not ms:
        raise InputError("empty sample range")
    ratios: Dict[int, Ball] = {}
    for m in ms:
        ratios[m] = abs(diff_eval(m)) / (app.t ** (app.s * m))
    # monotone tail: walk back from the top while the next ratio is not larger
    n0_pos = len(ms) - 1
    while n0_pos > 0 and ratios[ms[n0_pos - 1]].hi >= ratios[ms[n0_pos]].lo:
        n0_pos -= 1
    if len(ms) >= 2 and ratios[ms[-1]].certainly_gt(ratios[ms[-2]]):
        raise HypothesisError("t too large or construction inconsistent: error ratio still rising")
    C = Ball.exact(max(b.hi for b in ratios.values()))
    app.C, app.n0 = C, ms[n0_pos]
    return ErrorCertificate(C, ms[n0_pos], ratios)


def deeper(app: Approximant, extra: int = 2) -> Approximant:
    """The same construction with larger cut-offs."""
    src = app.source
    if app.mode == "single":
        return build_eta_single(src["f"], src["G"], app.t, app.r, src["branch_index"],
                                K=app.K + app.s * extra, L=app.L + extra)
    from .implicit import solve_series
    inst, series = src["inst"], src["series"]
    K2 = app.K + extra
    if series.K < K2:
        series = solve_series(inst, series.y0, K2)
    return build_eta_multi(inst, series, app.t, K=K2)


def predicted_decay_root(app: Approximant) -> Optional[Fraction]:
    """Root of the leading term of (deeper eta - eta): the predicted per-index decay of the error."""
    diff = deeper(app).eta - app.eta
    if diff.is_zero():
        return None
    return diff.terms[0][1]
