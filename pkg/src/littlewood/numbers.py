"""Exact arithmetic kernel: rationals, canonical quadratic surds, dyadic enclosures.

Every decision in this module is made by integer arithmetic; floats appear
only in display helpers.  Rationals are ``fractions.Fraction`` (gcd-reduced,
positive denominator, zero is 0/1), re-exported as ``Rational``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import PerfectSquare, StreamExhausted, ZeroDenominator

Rational = Fraction


def frac_to_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def frac_from_str(s: str) -> Fraction:
    num, _, den = s.partition("/")
    return Fraction(int(num), int(den) if den else 1)


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


@lru_cache(maxsize=None)
def squarefree_core(n: int) -> tuple[int, int]:
    """Split n > 0 as f*f*core with core squarefree; returns (core, f)."""
    if n <= 0:
        raise ValueError("need a positive integer")
    core, f, m, d = 1, 1, n, 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            f *= d ** (e // 2)
            if e % 2:
                core *= d
        d += 1 if d == 2 else 2
    core *= m
    return core, f


def _sign_pair(u: int, v: int, d: int) -> int:
    """Sign of u + v*sqrt(d) for non-square d > 0 (never 0 when v != 0)."""
    if v == 0:
        return (u > 0) - (u < 0)
    if u == 0:
        return 1 if v > 0 else -1
    if u > 0 and v > 0:
        return 1
    if u < 0 and v < 0:
        return -1
    uu, vv = u * u, v * v * d
    if u > 0:  # v < 0
        return 1 if uu > vv else -1
    return 1 if uu < vv else -1


def _elem_floor(a: int, b: int, c: int, d: int) -> int:
    """floor((a + b*sqrt(d))/c) with c > 0 and d > 0 non-square."""
    if b == 0:
        return a // c
    s = math.isqrt(b * b * d)
    num = a + s if b > 0 else a - s - 1
    return num // c


class QuadraticSurd:
    """Exact real quadratic irrational (p + sqrt(d)) / q.

    Canonical form: d > 0 non-square, q != 0, q | d - p*p (CF-ready), and the
    triple is minimal: writing d = f*f*core with core squarefree, the triple
    (p, f, q) carries no common factor beyond what the divisibility forces.
    Equal values always canonicalize to identical triples, so __eq__ and
    __hash__ work structurally.

    Mixed arithmetic with int/Fraction is exact.  Arithmetic between two
    surds requires the same squarefree core (degree > 2 is out of scope);
    products and inverses that happen to be rational return Fraction.
    """

    __slots__ = ("p", "d", "q", "core", "f")

    def __init__(self, p: int, d: int, q: int, _parts: tuple = None):
        if q == 0:
            raise ZeroDenominator("surd denominator q must be nonzero")
        if _parts is not None:
            core, f = _parts  # caller guarantees d == f*f*core, core squarefree
            if core <= 1 or f <= 0:
                raise PerfectSquare(f"d={d} is not a positive non-square")
        else:
            if d <= 0 or is_square(d):
                raise PerfectSquare(f"d={d} is not a positive non-square")
            core, f = squarefree_core(d)
        g = math.gcd(math.gcd(p, f), q)
        p, f, q = p // g, f // g, q // g
        if f < 0:  # keep the sqrt coefficient positive
            p, f, q = -p, -f, -q
        dd = f * f * core
        rem = (dd - p * p) % q
        if rem:
            t = abs(q) // math.gcd(abs(q), abs(dd - p * p))
            p, f, q = p * t, f * t, q * t
            dd = f * f * core
        self.p, self.d, self.q = p, dd, q
        self.core, self.f = core, f

    # -- internal element form ------------------------------------------------

    def _abc(self) -> tuple[int, int, int]:
        """(a, b, c) with value (a + b*sqrt(core))/c and c > 0."""
        if self.q > 0:
            return self.p, self.f, self.q
        return -self.p, -self.f, -self.q

    @staticmethod
    def from_parts(a: int, b: int, c: int, core: int):
        """Build (a + b*sqrt(core))/c; returns Fraction when b == 0.

        core must be squarefree > 1 (callers propagate it), so no factoring
        happens here even for very large coefficients.
        """
        if c == 0:
            raise ZeroDenominator("zero denominator")
        if b == 0:
            return Fraction(a, c)
        if b < 0:
            a, b, c = -a, -b, -c
        return QuadraticSurd(a, b * b * core, c, _parts=(core, b))

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, int):
            return Fraction(other)
        if isinstance(other, Fraction):
            return other
        return None

    def __add__(self, other):
        a, b, c = self._abc()
        if isinstance(other, QuadraticSurd):
            if other.core != self.core:
                raise ValueError("surds from different quadratic fields")
            a2, b2, c2 = other._abc()
            return QuadraticSurd.from_parts(a * c2 + a2 * c, b * c2 + b2 * c, c * c2, self.core)
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        return QuadraticSurd.from_parts(a * r.denominator + r.numerator * c,
                                        b * r.denominator, c * r.denominator, self.core)

    __radd__ = __add__

    def __neg__(self):
        a, b, c = self._abc()
        return QuadraticSurd.from_parts(-a, -b, c, self.core)

    def __sub__(self, other):
        if isinstance(other, QuadraticSurd):
            return self + (-other)
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        return self + (-r)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b, c = self._abc()
        if isinstance(other, QuadraticSurd):
            if other.core != self.core:
                raise ValueError("surds from different quadratic fields")
            a2, b2, c2 = other._abc()
            return QuadraticSurd.from_parts(a * a2 + b * b2 * self.core,
                                            a * b2 + a2 * b, c * c2, self.core)
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        if r == 0:
            return Fraction(0)
        return QuadraticSurd.from_parts(a * r.numerator, b * r.numerator,
                                        c * r.denominator, self.core)

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticSurd":
        a, b, c = self._abc()
        norm = a * a - b * b * self.core  # nonzero: the value is irrational
        return QuadraticSurd.from_parts(c * a, -c * b, norm, self.core)

    def __truediv__(self, other):
        if isinstance(other, QuadraticSurd):
            return self * other.inverse()
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        if r == 0:
            raise ZeroDivisionError("division by zero")
        return self * Fraction(r.denominator, r.numerator)

    def __rtruediv__(self, other):
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        return self.inverse() * r

    def conjugate(self) -> "QuadraticSurd":
        a, b, c = self._abc()
        return QuadraticSurd.from_parts(a, -b, c, self.core)

    # -- order ----------------------------------------------------------------

    def sign(self) -> int:
        a, b, _ = self._abc()
        return _sign_pair(a, b, self.core)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def _cmp(self, other) -> int:
        """Exact sign of self - other; other is int/Fraction/same-field surd."""
        if isinstance(other, QuadraticSurd):
            if other.core != self.core:
                raise ValueError("surds from different quadratic fields")
            a, b, c = self._abc()
            a2, b2, c2 = other._abc()
            return _sign_pair(a * c2 - a2 * c, b * c2 - b2 * c, self.core)
        r = self._coerce(other)
        if r is None:
            raise TypeError(f"cannot compare with {type(other).__name__}")
        a, b, c = self._abc()
        return _sign_pair(a * r.denominator - r.numerator * c, b * r.denominator, self.core)

    def __eq__(self, other):
        if isinstance(other, QuadraticSurd):
            return (self.p, self.d, self.q) == (other.p, other.d, other.q)
        if isinstance(other, (int, Fraction)):
            return False  # irrational
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.d, self.q))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def floor(self) -> int:
        a, b, c = self._abc()
        return _elem_floor(a, b, c, self.core)

    # -- enclosures and display -------------------------------------------------

    def enclosure(self, bits: int) -> "DyadicInterval":
        """Dyadic interval of width 2**-bits containing the value."""
        if bits < 1:
            raise ValueError("bits must be >= 1")
        a, b, c = self._abc()
        scale = 1 << bits
        n = _elem_floor(a * scale, b * scale, c, self.core)
        return DyadicInterval(Fraction(n, scale), Fraction(n + 1, scale))

    def __float__(self) -> float:
        iv = self.enclosure(64)
        return float((iv.lo + iv.hi) / 2)

    def __repr__(self):
        return f"QuadraticSurd({self.p}, {self.d}, {self.q})"

    def __str__(self):
        return f"({self.p}+sqrt({self.d}))/{self.q}"

    def to_json(self) -> dict:
        return {"P": self.p, "D": self.d, "Q": self.q}

    @staticmethod
    def from_json(obj: dict) -> "QuadraticSurd":
        return QuadraticSurd(int(obj["P"]), int(obj["D"]), int(obj["Q"]))


def surd_canonicalize(p: int, d: int, q: int) -> QuadraticSurd:
    """Canonical CF-ready surd (p + sqrt(d))/q; see QuadraticSurd."""
    return QuadraticSurd(p, d, q)


def surd_compare(x: QuadraticSurd, r) -> int:
    """Exact sign of x - r as -1/0/+1 (0 is unreachable for rational r)."""
    return x._cmp(r)


def surd_floor(x: QuadraticSurd) -> int:
    return x.floor()


class DyadicInterval:
    """Closed interval with exact dyadic endpoints (denominators are powers of 2)."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Fraction, hi: Fraction):
        lo, hi = Fraction(lo), Fraction(hi)
        for end in (lo, hi):
            den = end.denominator
            if den & (den - 1):
                raise ValueError("endpoints must be dyadic rationals")
        if lo > hi:
            raise ValueError("lo must not exceed hi")
        self.lo, self.hi = lo, hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def intersects(self, other: "DyadicInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __repr__(self):
        return f"DyadicInterval({self.lo}, {self.hi})"

    def __float__(self):
        return float(self.midpoint)


def dyadic_bounds(lo: Fraction, hi: Fraction, bits: int) -> DyadicInterval:
    """Round an exact rational interval outward to the 2**-bits grid."""
    scale = 1 << bits
    n_lo = math.floor(lo * scale)
    n_hi = math.ceil(hi * scale)
    return DyadicInterval(Fraction(n_lo, scale), Fraction(n_hi, scale))


def interval_refine(x, bits: int) -> DyadicInterval:
    """Certified enclosure of width <= 2**-bits.

    x may be a QuadraticSurd, or a partial-quotient source for [a0; a1 a2 ...]:
    either a WordStream (a0 = 0) or a tuple (a0, WordStream).  Stream sources
    consume only as many quotients as the target width requires and raise
    StreamExhausted if a finite word ends first.
    """
    if bits < 1:
        raise ValueError("bits must be >= 1")
    if isinstance(x, QuadraticSurd):
        return x.enclosure(bits)
    from .cf import convergent_iter  # late import: cf depends on this module

    if isinstance(x, tuple):
        a0, stream = x
    else:
        a0, stream = 0, x
    target = Fraction(1, 1 << (bits + 2))
    prev = None
    for conv in convergent_iter(a0, stream):
        if prev is not None and conv.q * prev.q:
            gap = Fraction(1, conv.q * prev.q)
            if gap <= target:
                lo = min(Fraction(prev.p, prev.q), Fraction(conv.p, conv.q))
                hi = max(Fraction(prev.p, prev.q), Fraction(conv.p, conv.q))
                return dyadic_bounds(lo, hi, bits + 2)
        prev = conv
    raise StreamExhausted("finite word ended before the width was certified")


def exp_enclosure(t: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Certified rational bounds on exp(t) for rational t, width 2**-bits relative.

    Argument reduction by halving to |t| <= 1/2, exact Taylor partial sums
    with the alternating-free tail bound term * x/(1-x), then exact squaring.
    """
    t = Fraction(t)
    if t < 0:
        lo, hi = exp_enclosure(-t, bits)
        return 1 / hi, 1 / lo
    halvings = 0
    while t > Fraction(1, 2):
        t /= 2
        halvings += 1
    # partial sum with remainder bound
    tol = Fraction(1, 1 << (bits + 4 + 2 * halvings))
    term = Fraction(1)
    total = Fraction(1)
    k = 0
    while True:
        k += 1
        term = term * t / k
        total += term
        tail = term * t / (1 - t) if t else Fraction(0)
        if tail < tol * total:
            break
    lo, hi = total, total + 2 * (term * t / (1 - t) if t else Fraction(0))
    if t == 0:
        lo = hi = Fraction(1)
    for _ in range(halvings):
        lo, hi = lo * lo, hi * hi
    return lo, hi
