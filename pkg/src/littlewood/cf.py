"""Continued fractions: expansions, convergents, continuants, q*||q*alpha||.

Conventions (used throughout the package): p_{-1} = q_0 = 1, p_0 = q_{-1} = 0
shifted by the integer part, i.e. p_0/q_0 = a0/1 and p_n = a_n p_{n-1} + p_{n-2}.
The determinant identity p_n q_{n-1} - p_{n-1} q_n = (-1)^(n-1) holds for all n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

from .config import check_int
from .errors import StreamExhausted
from .numbers import (DyadicInterval, QuadraticSurd, _elem_floor, _sign_pair,
                      dyadic_bounds, squarefree_core)
from .words import ExplicitStream, PeriodicStream, WordStream


@dataclass(frozen=True)
class Convergent:
    n: int
    p: int
    q: int


@dataclass(frozen=True)
class CFExpansion:
    """a0 plus a finite word, optionally followed by a repeating period.

    Finite canonical expansions have last quotient >= 2 (unless the expansion
    is just [a0]); period is nonempty exactly when the source was a quadratic
    irrational.
    """

    a0: int
    preperiod: tuple
    period: tuple = ()

    @property
    def is_finite(self) -> bool:
        return not self.period

    def quotient_stream(self) -> WordStream:
        """The word a1 a2 ... as a stream."""
        if self.period:
            return PeriodicStream(self.preperiod, self.period)
        return ExplicitStream(self.preperiod)

    def value(self):
        """Exact value: Fraction if finite, QuadraticSurd if periodic."""
        if self.is_finite:
            x = Fraction(0)
            for a in reversed(self.preperiod):
                x = Fraction(1, a + x)
            return self.a0 + x
        y = purely_periodic_value(self.period)
        # Moebius fold of [a0; preperiod..., y]
        m00, m01, m10, m11 = 1, 0, 0, 1
        for a in (self.a0,) + self.preperiod:
            m00, m01, m10, m11 = m00 * a + m01, m00, m10 * a + m11, m10
        return (y * m00 + m01) / (y * m10 + m11)

    def to_json(self) -> dict:
        return {"a0": self.a0, "preperiod": list(self.preperiod),
                "period": list(self.period)}

    @staticmethod
    def from_json(obj: dict) -> "CFExpansion":
        return CFExpansion(int(obj["a0"]), tuple(obj["preperiod"]),
                           tuple(obj.get("period", ())))


def purely_periodic_value(word: Sequence[int], core_hint: Optional[int] = None) -> QuadraticSurd:
    """Value of [w0; w1, ..., w_{s-1}, w0, w1, ...] as an exact surd.

    Solves the Moebius fixed point of one period block.  core_hint, when
    given, must be the squarefree core of the discriminant (it is verified);
    it avoids factoring large discriminants.
    """
    word = [int(a) for a in word]
    if not word or any(a < 1 for a in word):
        raise ValueError("need a nonempty positive word")
    m00, m01, m10, m11 = 1, 0, 0, 1
    for a in word:
        m00, m01, m10, m11 = m00 * a + m01, m00, m10 * a + m11, m10
    # y = (m00*y + m01)/(m10*y + m11), take the root larger than any integer part
    disc = (m00 - m11) ** 2 + 4 * m01 * m10
    if core_hint is None:
        core, _ = squarefree_core(disc)
    else:
        core = core_hint
        f2, rem = divmod(disc, core)
        if rem or not f2 or math.isqrt(f2) ** 2 != f2:
            raise ValueError("core_hint does not match the discriminant")
    return QuadraticSurd.from_parts(m00 - m11, math.isqrt(disc // core), 2 * m10, core)


def cf_of_rational(x: Fraction) -> CFExpansion:
    """Euclidean expansion; canonical (last quotient >= 2) and exactly invertible."""
    x = Fraction(x)
    a0 = x.numerator // x.denominator
    rem = x - a0
    quotients = []
    num, den = rem.numerator, rem.denominator  # 0 <= num < den
    while num:
        a, r = divmod(den, num)
        quotients.append(a)
        den, num = num, r
    return CFExpansion(a0, tuple(quotients))


def cf_of_surd(x: QuadraticSurd) -> CFExpansion:
    """Expansion of a quadratic irrational; always ends in a nonempty period.

    Iterates the CF-ready state (P, Q) with fixed D and stops at the first
    repeated state, which exists by Lagrange's theorem.
    """
    d = x.d
    p, q = x.p, x.q  # state update below is valid for either sign of q
    a0 = x.floor()
    # state before extracting a_{i+1}
    p_i = a0 * q - p
    q_i = (d - p_i * p_i) // q
    seen: dict[tuple, int] = {}
    quotients: list[int] = []
    i = 0
    while (p_i, q_i) not in seen:
        seen[(p_i, q_i)] = i
        a = _elem_floor(p_i, 1, q_i, d) if q_i > 0 else _elem_floor(-p_i, -1, -q_i, d)
        quotients.append(a)
        p_next = a * q_i - p_i
        q_next = (d - p_next * p_next) // q_i
        p_i, q_i = p_next, q_next
        i += 1
    start = seen[(p_i, q_i)]
    return CFExpansion(a0, tuple(quotients[:start]), tuple(quotients[start:]))


def convergent_iter(a0: int, s: WordStream) -> Iterator[Convergent]:
    """Yield Convergent(n, p_n, q_n) for n = 0, 1, 2, ... (digit-capped)."""
    p_prev, q_prev = 1, 0
    p, q = a0, 1
    yield Convergent(0, p, q)
    n = 0
    while True:
        n += 1
        try:
            a = s.letter(n)
        except StreamExhausted:
            return
        p, p_prev = check_int(a * p + p_prev), p
        q, q_prev = check_int(a * q + q_prev), q
        yield Convergent(n, p, q)


def convergents(a0: int, s: WordStream, N: int) -> list[Convergent]:
    """Convergents n = 0..N; raises StreamExhausted if the word is too short."""
    if N < 0:
        raise ValueError("N must be >= 0")
    out = []
    for conv in convergent_iter(a0, s):
        out.append(conv)
        if conv.n == N:
            return out
    raise StreamExhausted(f"word ended before convergent {N}")


def continuant(word: Sequence[int]) -> int:
    """K(a_1..a_n): denominator of [0; a_1, ..., a_n].  K() = 1."""
    k_prev, k = 0, 1
    for a in word:
        k_prev, k = k, check_int(a * k + k_prev)
    return k


def continuant_table(word: Sequence[int]) -> list[int]:
    """Prefix continuants K(), K(a_1), K(a_1 a_2), ... in one pass."""
    out = [1]
    k_prev, k = 0, 1
    for a in word:
        k_prev, k = k, check_int(a * k + k_prev)
        out.append(k)
    return out


@dataclass(frozen=True)
class NormProduct:
    """q * ||q*alpha|| with certification data.

    exact is a QuadraticSurd (surd alpha), a Fraction (rational alpha) or None
    (stream alpha, interval only).  lower/upper are certified rational bounds.
    nearest is the integer closest to q*alpha; tie marks the exact half-integer
    case, which only rational alpha can produce.
    """

    q: int
    lower: Fraction
    upper: Fraction
    exact: object = None
    nearest: int = 0
    tie: bool = False

    def interval(self, bits: int = 60) -> DyadicInterval:
        return dyadic_bounds(self.lower, self.upper, bits)

    def __float__(self):
        return float((self.lower + self.upper) / 2)


AlphaLike = Union[QuadraticSurd, Fraction, WordStream, tuple]


def _norm_product_surd(q: int, alpha: QuadraticSurd, bits: int) -> NormProduct:
    a, b, c = alpha._abc()
    core = alpha.core
    A, B = q * a, q * b
    # nearest integer to (A + B*sqrt(core))/c  ==  floor((2A + c + 2B*sqrt)/2c)
    m = _elem_floor(2 * A + c, 2 * B, 2 * c, core)
    u = A - m * c
    sgn = _sign_pair(u, B, core)
    exact = QuadraticSurd.from_parts(sgn * u * q, sgn * B * q, c, core)
    iv = exact.enclosure(bits)
    return NormProduct(q, iv.lo, iv.hi, exact=exact, nearest=m)


def _norm_product_rational(q: int, alpha: Fraction) -> NormProduct:
    x = q * alpha
    fl = x.numerator // x.denominator
    down, up = x - fl, fl + 1 - x
    tie = down == up
    if tie:
        dist, m = down, fl  # value 1/2 either side; report the lower neighbour
    elif down < up:
        dist, m = down, fl
    else:
        dist, m = up, fl + 1
    val = q * dist
    return NormProduct(q, val, val, exact=val, nearest=m, tie=tie)


def _norm_product_stream(q: int, a0: int, s: WordStream, rel_bits: int) -> NormProduct:
    """Adaptive bracket: consume quotients until the nearest integer is
    certain and the enclosure of q*||q*alpha|| is relatively tight."""
    prev: Optional[Convergent] = None
    half = Fraction(1, 2)
    for conv in convergent_iter(a0, s):
        if prev is None or conv.q == 0:
            prev = conv
            continue
        lo = min(Fraction(prev.p, prev.q), Fraction(conv.p, conv.q)) * q
        hi = max(Fraction(prev.p, prev.q), Fraction(conv.p, conv.q)) * q
        prev = conv
        m = math.floor((lo + hi) / 2 + half)
        if not (m - half < lo and hi < m + half):
            continue  # nearest integer not yet certain
        d_lo, d_hi = sorted((abs(lo - m), abs(hi - m)))
        if lo <= m <= hi:
            d_lo = Fraction(0)
        if d_lo > 0 and (d_hi - d_lo) <= d_lo / (1 << rel_bits):
            return NormProduct(q, q * d_lo, q * d_hi, nearest=m)
    raise StreamExhausted("word ended before q*||q*alpha|| was certified")


def q_norm_product(q: int, alpha: AlphaLike, rel_bits: int = 40) -> NormProduct:
    """q * ||q*alpha||, exact for surds and rationals, enclosed for streams.

    Surd results carry a 60-bit certified enclosure next to the exact value.
    A TieAtHalf situation is impossible for irrational alpha; for rational
    alpha it is reported via the tie flag (the value 1/2 is unambiguous).
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if isinstance(alpha, QuadraticSurd):
        return _norm_product_surd(q, alpha, 60)
    if isinstance(alpha, (int, Fraction)):
        return _norm_product_rational(q, Fraction(alpha))
    if isinstance(alpha, tuple):
        a0, s = alpha
        return _norm_product_stream(q, a0, s, rel_bits)
    if isinstance(alpha, WordStream):
        return _norm_product_stream(q, 0, alpha, rel_bits)
    raise TypeError(f"unsupported alpha type {type(alpha).__name__}")
