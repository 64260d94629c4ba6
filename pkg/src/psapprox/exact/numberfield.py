"""Real number fields Q(theta) with a chosen real embedding.

A field is given by the monic irreducible minimal polynomial of ``theta`` and
an isolating interval selecting one real root.  Elements are coordinate vectors
in the power basis ``1, theta, ..., theta^(d-1)``.  Exact equality and sign are
decidable: equality by coordinates, sign by adaptive ball evaluation of a
nonzero element.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

from ..errors import AmbiguityError, InputError, PrecisionCapError
from .ball import DEFAULT_MAX_BITS, Ball
from .poly import (UniPoly, factor_rational, interpolate, is_irreducible_rational,
                   is_squarefree, poly_gcd, poly_xgcd, resultant)
from .roots import RootInterval, count_roots_in, isolate_real_roots, refine_root


class NumberField:
    """Q(theta) where theta is the real root of ``minpoly`` inside ``interval``."""

    def __init__(self, minpoly: UniPoly, interval: Sequence, check: bool = True):
        minpoly = minpoly.monic()
        iv = RootInterval(Fraction(interval[0]), Fraction(interval[1]))
        if check:
            if not is_irreducible_rational(minpoly):
                raise InputError(f"minimal polynomial {minpoly} is not irreducible over Q")
            if count_roots_in(minpoly, iv.lo, iv.hi) != 1:
                raise AmbiguityError("embedding interval does not isolate exactly one root")
        self.minpoly = minpoly
        self.interval = iv
        self.degree = minpoly.degree
        self._table: Optional[List[List[Fraction]]] = None

    # -- identity ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, NumberField):
            return NotImplemented
        if self.minpoly != other.minpoly:
            return False
        lo = max(self.interval.lo, other.interval.lo)
        hi = min(self.interval.hi, other.interval.hi)
        return lo <= hi and count_roots_in(self.minpoly, lo, hi) == 1

    def __hash__(self) -> int:
        return hash(self.minpoly)

    def __repr__(self) -> str:
        return f"NumberField({self.minpoly}, root in [{float(self.interval.lo):.6g}, {float(self.interval.hi):.6g}])"

    # -- elements ---------------------------------------------------------
    def gen(self) -> "NFElement":
        if self.degree == 1:
            return NFElement(self, (-self.minpoly.coeffs[0],))
        return NFElement(self, [0, 1] + [0] * (self.degree - 2))

    def __call__(self, x) -> "NFElement":
        if isinstance(x, NFElement):
            if x.field != self:
                raise InputError("element belongs to a different field")
            return x
        return NFElement(self, [Fraction(x)] + [0] * (self.degree - 1))

    def from_poly(self, p: UniPoly) -> "NFElement":
        r = p % self.minpoly
        return NFElement(self, list(r.coeffs) + [0] * (self.degree - len(r.coeffs)))

    def theta_ball(self, bits: int) -> Ball:
        return refine_root(self.minpoly, self.interval, bits)

    def _reduction_table(self) -> List[List[Fraction]]:
        # theta^(d+i) in the power basis, i = 0..d-2
        if self._table is None:
            d = self.degree
            tab = []
            cur = [-c for c in self.minpoly.coeffs[:d]]
            for _ in range(max(d - 1, 0)):
                tab.append(cur)
                top = cur[-1]
                nxt = [Fraction(0)] + cur[:-1]
                cur = [nxt[i] + top * (-self.minpoly.coeffs[i]) for i in range(d)]
            self._table = tab
        return self._table


Scalar = Union[int, Fraction]


class NFElement:
    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: Iterable):
        cs = tuple(Fraction(c) for c in coords)
        if len(cs) != field.degree:
            raise InputError("coordinate vector has the wrong length")
        self.field = field
        self.coords = cs

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise InputError("element is irrational")
        return self.coords[0]

    def as_poly(self) -> UniPoly:
        return UniPoly(self.coords)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> Optional["NFElement"]:
        if isinstance(other, NFElement):
            if other.field is not self.field and other.field != self.field:
                raise InputError("mixing elements of different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NFElement(self.field, (a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return NFElement(self.field, (-a for a in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NFElement(self.field, (a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NFElement(self.field, (a * other for a in self.coords))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self.field.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(o.coords):
                    if b:
                        prod[i + j] += a * b
        out = prod[:d]
        tab = self.field._reduction_table()
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                row = tab[k - d]
                for i in range(d):
                    out[i] += c * row[i]
        return NFElement(self.field, out)

    __rmul__ = __mul__

    def inverse(self) -> "NFElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in number field")
        if self.is_rational():
            return self.field(1 / self.coords[0])
        g, s, _ = poly_xgcd(self.as_poly(), self.field.minpoly)
        return self.field.from_poly(s)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.field(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison -------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, NFElement):
            if other.field is not self.field and other.field != self.field:
                return algebraic_equal(self, other)
            return self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coords[0])
        return hash(self.coords)

    def __repr__(self) -> str:
        if self.is_rational():
            return f"NF({self.coords[0]})"
        terms = [f"{c}*t^{i}" if i else f"{c}" for i, c in enumerate(self.coords) if c]
        return "NF(" + " + ".join(terms) + f" | ~{float(self.ball(40).center):.12g})"

    # -- numerics ---------------------------------------------------------
    def to_ball(self, bits: int) -> Ball:
        """Enclosure computed with theta known to ``bits`` bits (no output guarantee)."""
        if self.is_rational():
            return Ball.exact(self.coords[0])
        th = self.field.theta_ball(bits).with_prec(bits + 16)
        acc = Ball(0, 0, bits + 16)
        for c in reversed(self.coords):
            acc = acc * th + c
        return acc

    def ball(self, rel_bits: int = 64, max_bits: int = DEFAULT_MAX_BITS) -> Ball:
        """Enclosure with relative radius <= 2^-rel_bits (nonzero elements)."""
        if self.is_rational():
            return Ball.exact(self.coords[0])
        target = Fraction(1, 1 << rel_bits)
        bits = rel_bits + 32
        while True:
            b = self.to_ball(bits)
            rr = b.rel_radius()
            if rr is not None and rr <= target:
                return b
            if bits >= max_bits:
                raise PrecisionCapError(f"number field element not resolved at {bits} bits")
            bits = min(bits * 2, max_bits)

    def sign(self) -> int:
        if self.is_zero():
            return 0
        return self.ball(8).sign()


Coeff = Union[Fraction, NFElement]


# -- helpers over the coefficient union ------------------------------------------

def is_rational(c) -> bool:
    return not isinstance(c, NFElement) or c.is_rational()


def rational_of(c) -> Fraction:
    return c.rational_value() if isinstance(c, NFElement) else Fraction(c)


def coeff_ball(c, rel_bits: int = 64, max_bits: int = DEFAULT_MAX_BITS) -> Ball:
    if isinstance(c, NFElement):
        if c.is_zero():
            return Ball.exact(0)
        return c.ball(rel_bits, max_bits)
    return Ball.exact(c)


def coeff_sign(c) -> int:
    if isinstance(c, NFElement):
        return c.sign()
    return (c > 0) - (c < 0)


def field_of(c) -> Optional[NumberField]:
    return c.field if isinstance(c, NFElement) and c.field.degree > 1 else None


# -- norms, minimal polynomials, compositum -----------------------------------------

def norm_poly(field: NumberField, coeffs: Sequence) -> UniPoly:
    """Res_t(minpoly(t), P(t, z)) for P(z) = sum coeffs[j] z^j with coefficients in ``field``.

    The result is a polynomial over Q vanishing at every conjugate root of P.
    """
    polys = [c.as_poly() if isinstance(c, NFElement) else UniPoly([c]) for c in coeffs]
    n = len(polys) - 1
    deg = field.degree * n
    xs, ys = [], []
    for z0 in range(deg + 1):
        z = Fraction(z0)
        g = UniPoly()
        zp = Fraction(1)
        for p in polys:
            g = g + p * zp
            zp *= z
        xs.append(z)
        ys.append(resultant(field.minpoly, g) if not g.is_zero() else Fraction(0))
    return interpolate(xs, ys)


def minpoly_of(a) -> UniPoly:
    """Minimal polynomial over Q of a rational or number-field element."""
    if is_rational(a):
        return UniPoly([-rational_of(a), 1])
    charpoly = norm_poly(a.field, [-a, Fraction(1)])
    return _select_factor(charpoly, lambda bits: a.to_ball(bits))[0]


def _select_factor(p: UniPoly, ball_at: Callable[[int], Ball],
                   max_bits: int = 4096) -> Tuple[UniPoly, RootInterval]:
    """The irreducible factor of p (and its root interval) with a real root inside ball_at(bits)."""
    cands = []
    for q, _ in factor_rational(p):
        for iv in isolate_real_roots(q):
            cands.append((q, iv))
    bits = 64
    while True:
        target = ball_at(bits)
        hits = []
        for q, iv in cands:
            rb = refine_root(q, iv, bits)
            if rb.overlaps(target):
                hits.append((q, iv, rb))
        if len(hits) == 1:
            q, iv, _ = hits[0]
            return q, iv
        if not hits:
            raise AmbiguityError("no factor root matches the embedding")
        if bits >= max_bits:
            raise AmbiguityError("embedding ambiguity: primitive-element candidates not separated")
        bits *= 2
        cands = [(q, iv) for q, iv, _ in hits]


def subfield_of(a) -> Tuple[Optional[NumberField], Optional[NFElement]]:
    """Q(a) as its own field together with the generator standing for ``a``."""
    if is_rational(a):
        return None, None
    q = minpoly_of(a)
    iv = _select_factor(q, lambda bits: a.to_ball(bits))[1]
    K = NumberField(q, iv, check=False)
    return K, K.gen()


def embedding(src: Optional[NumberField], image) -> Callable:
    """Map elements of ``src`` into the field of ``image`` (the image of src's generator)."""
    if src is None:
        return lambda x: x

    def emb(x):
        if not isinstance(x, NFElement):
            return x
        acc = image.field(0)
        for c in reversed(x.coords):
            acc = acc * image + c
        return acc
    return emb


_SHIFTS = (1, -1, 2, -2, 3, -3, 5, -5, 7, -7, 11, -11)


def join_fields(K1: Optional[NumberField], K2: Optional[NumberField]):
    """Compositum L of two real fields with embeddings K1 -> L and K2 -> L.

    Fields are ``None`` for Q.  Returns ``(L, emb1, emb2)``.
    """
    if K1 is None or K1.degree == 1:
        if K2 is None or K2.degree == 1:
            return None, _rat_map(K1), _rat_map(K2)
        return K2, _rat_map(K1), (lambda x: x)
    if K2 is None or K2.degree == 1:
        return K1, (lambda x: x), _rat_map(K2)
    if K1 == K2:
        return K1, _same_field_map(K1), _same_field_map(K1)
    return _compositum(K1, K2)


@lru_cache(maxsize=256)
def _compositum(K1: NumberField, K2: NumberField):
    for k in _SHIFTS:
        # characteristic polynomial of gamma = theta1 + k*theta2
        # m1(z - k*theta2) as a polynomial in z over K2
        zpoly = UniPoly([-k * K2.gen(), K2(1)])
        m1z = UniPoly([K2(c) for c in K1.minpoly.coeffs]).compose(zpoly)
        R = norm_poly(K2, list(m1z.coeffs))
        if not is_squarefree(R):
            continue

        def gamma_ball(bits, k=k):
            return K1.theta_ball(bits) + K2.theta_ball(bits) * k

        q, iv = _select_factor(R, gamma_ball)
        L = NumberField(q, iv, check=False)
        g = L.gen()
        # theta2 is the unique common root of m2(y) and m1(gamma - k*y) over L
        m2 = UniPoly([L(c) for c in K2.minpoly.coeffs])
        m1g = UniPoly([L(c) for c in K1.minpoly.coeffs]).compose(UniPoly([g, L(-k)]))
        h = poly_gcd(m2, m1g)
        if h.degree != 1:
            continue
        img2 = -h.coeffs[0]
        img1 = g - img2 * k
        return L, embedding(K1, img1), embedding(K2, img2)
    raise AmbiguityError("no primitive element found among the tried shifts")


def _rat_map(K: Optional[NumberField]):
    def f(x):
        if isinstance(x, NFElement):
            return x.rational_value()
        return x
    return f


def _same_field_map(K: NumberField):
    def f(x):
        if isinstance(x, NFElement) and x.field is not K:
            return NFElement(K, x.coords)
        return x
    return f


def field_join(a, b):
    """Common field containing ``a`` and ``b``; returns (field, image of a, image of b).

    Rational inputs are absorbed; the field is ``None`` when both are rational.
    """
    Ka, ga = subfield_of(a)
    Kb, gb = subfield_of(b)
    L, ea, eb = join_fields(Ka, Kb)
    ia = ea(ga) if Ka is not None else rational_of(a)
    ib = eb(gb) if Kb is not None else rational_of(b)
    return L, ia, ib


def algebraic_equal(a, b) -> bool:
    """Exact equality of two real algebraic numbers, possibly from different fields."""
    fa, fb = field_of(a), field_of(b)
    if fa is None and fb is None:
        return rational_of(a) == rational_of(b)
    if fa is None or fb is None:
        return False
    if fa is fb or fa == fb:
        return a.coords == b.coords
    if not coeff_ball(a, 32).overlaps(coeff_ball(b, 32)):
        return False
    _, e1, e2 = join_fields(fa, fb)
    return e1(a) == e2(b)
