"""Combinatorics on words over positive-integer alphabets.

Streams are deterministic indexable sources of letters (1-indexed), used both
as combinatorial objects and as partial-quotient suppliers for continued
fractions.  All window counting is exact: rolling hashes are only a grouping
device and every collision is confirmed letter by letter.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import HorizonTooSmall, StreamExhausted
from .numbers import QuadraticSurd, frac_from_str, frac_to_str


@dataclass(frozen=True)
class Word:
    """Finite word with an explicit alphabet bound: 1 <= letter <= bound."""

    letters: tuple
    bound: int

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError("alphabet bound must be positive")
        for a in self.letters:
            if not 1 <= a <= self.bound:
                raise ValueError(f"letter {a} outside [1, {self.bound}]")

    @staticmethod
    def of(letters: Sequence[int]) -> "Word":
        letters = tuple(int(a) for a in letters)
        return Word(letters, max(letters) if letters else 1)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)


class WordStream:
    """Deterministic letter source; letter(i) is defined for i >= 1."""

    def __init__(self):
        self._cache: list[int] = []

    def _next(self, i: int) -> int:
        raise NotImplementedError

    def _ensure(self, n: int) -> None:
        while len(self._cache) < n:
            self._cache.append(self._next(len(self._cache) + 1))

    def letter(self, i: int) -> int:
        if i < 1:
            raise ValueError("letters are 1-indexed")
        self._ensure(i)
        return self._cache[i - 1]

    def prefix(self, n: int) -> list[int]:
        self._ensure(n)
        return self._cache[:n]

    @property
    def is_finite(self) -> bool:
        return False

    @property
    def sturmian_irrational(self) -> bool:
        return False

    def exact_complexity_horizon(self, n: int) -> Optional[int]:
        """Horizon from which the length-n factor count is provably complete."""
        return None

    def to_json(self) -> dict:
        raise NotImplementedError


class PeriodicStream(WordStream):
    """preperiod then period repeated forever; period must be nonempty."""

    def __init__(self, preperiod: Sequence[int], period: Sequence[int]):
        super().__init__()
        self.preperiod = tuple(int(a) for a in preperiod)
        self.period = tuple(int(a) for a in period)
        if not self.period:
            raise ValueError("period must be nonempty")
        if any(a < 1 for a in self.preperiod + self.period):
            raise ValueError("letters must be positive")

    def _next(self, i: int) -> int:
        if i <= len(self.preperiod):
            return self.preperiod[i - 1]
        return self.period[(i - 1 - len(self.preperiod)) % len(self.period)]

    def exact_complexity_horizon(self, n: int) -> Optional[int]:
        return len(self.preperiod) + 2 * len(self.period) * n

    def to_json(self) -> dict:
        return {"rule": "periodic", "preperiod": list(self.preperiod),
                "period": list(self.period)}


class SturmianStream(WordStream):
    """Mechanical word: letter i encodes floor((i+1)*slope+rho) - floor(i*slope+rho).

    The slope is an exact Fraction or QuadraticSurd in (0,1); floors are exact,
    which is what makes p(n) = n+1 actually hold for irrational slopes.
    """

    def __init__(self, slope, intercept: Fraction = Fraction(0), letters=(1, 2)):
        super().__init__()
        if isinstance(slope, int):
            slope = Fraction(slope)
        if isinstance(slope, Fraction):
            if not 0 < slope < 1:
                raise ValueError("slope must lie in (0,1)")
        elif isinstance(slope, QuadraticSurd):
            if not (slope > 0 and slope < 1):
                raise ValueError("slope must lie in (0,1)")
        else:
            raise TypeError("slope must be Fraction or QuadraticSurd")
        self.slope = slope
        self.intercept = Fraction(intercept)
        self.letters = (int(letters[0]), int(letters[1]))
        if min(self.letters) < 1:
            raise ValueError("letters must be positive")
        self._fprev = self._floor_at(1)

    def _floor_at(self, i: int) -> int:
        x = self.slope * i + self.intercept
        if isinstance(x, Fraction):
            return x.numerator // x.denominator
        return x.floor()

    def _next(self, i: int) -> int:
        # relies on letters being generated in order; _ensure guarantees that
        f_next = self._floor_at(i + 1)
        digit = f_next - self._fprev
        self._fprev = f_next
        return self.letters[digit]

    @property
    def sturmian_irrational(self) -> bool:
        return isinstance(self.slope, QuadraticSurd)

    def to_json(self) -> dict:
        slope = (self.slope.to_json() if isinstance(self.slope, QuadraticSurd)
                 else frac_to_str(self.slope))
        return {"rule": "sturmian", "slope": slope,
                "intercept": frac_to_str(self.intercept),
                "letters": list(self.letters)}


class ThueMorseStream(WordStream):
    def __init__(self, letters=(1, 2)):
        super().__init__()
        self.letters = (int(letters[0]), int(letters[1]))
        if min(self.letters) < 1:
            raise ValueError("letters must be positive")

    def _next(self, i: int) -> int:
        return self.letters[(i - 1).bit_count() & 1]

    def to_json(self) -> dict:
        return {"rule": "thue_morse", "letters": list(self.letters)}


class ExplicitStream(WordStream):
    def __init__(self, letters: Sequence[int]):
        super().__init__()
        self.word = tuple(int(a) for a in letters)
        if any(a < 1 for a in self.word):
            raise ValueError("letters must be positive")

    def _next(self, i: int) -> int:
        if i > len(self.word):
            raise StreamExhausted(f"explicit word has only {len(self.word)} letters")
        return self.word[i - 1]

    @property
    def is_finite(self) -> bool:
        return True

    def __len__(self):
        return len(self.word)

    def to_json(self) -> dict:
        return {"rule": "explicit", "letters": list(self.word)}


class ShiftedStream(WordStream):
    """View of another stream with the first `offset` letters dropped."""

    def __init__(self, base: WordStream, offset: int):
        super().__init__()
        if offset < 0:
            raise ValueError("offset must be >= 0")
        self.base = base
        self.offset = offset

    def _next(self, i: int) -> int:
        return self.base.letter(self.offset + i)

    @property
    def is_finite(self) -> bool:
        return self.base.is_finite


def stream_from_json(obj: dict) -> WordStream:
    rule = obj["rule"]
    if rule == "periodic":
        return PeriodicStream(obj.get("preperiod", []), obj["period"])
    if rule == "sturmian":
        slope = obj["slope"]
        slope = QuadraticSurd.from_json(slope) if isinstance(slope, dict) else frac_from_str(slope)
        return SturmianStream(slope, frac_from_str(obj.get("intercept", "0/1")),
                              tuple(obj.get("letters", (1, 2))))
    if rule == "thue_morse":
        return ThueMorseStream(tuple(obj.get("letters", (1, 2))))
    if rule == "explicit":
        return ExplicitStream(obj["letters"])
    raise ValueError(f"unknown word rule {rule!r}")


# -- factor counting ----------------------------------------------------------

_HB = 1_000_003
_HM = (1 << 61) - 1


def _distinct_factors(w: Sequence[int], n: int) -> int:
    """Exact number of distinct length-n windows of w (hash-grouped, verified)."""
    last = len(w) - n
    if last < 0:
        return 0
    h = 0
    for i in range(n):
        h = (h * _HB + w[i]) % _HM
    bn = pow(_HB, n, _HM)
    groups: dict[int, list[int]] = {h: [0]}
    count = 1
    for start in range(1, last + 1):
        h = (h * _HB - w[start - 1] * bn + w[start + n - 1]) % _HM
        reps = groups.get(h)
        if reps is None:
            groups[h] = [start]
            count += 1
            continue
        window = w[start:start + n]
        if not any(w[r:r + n] == window for r in reps):
            reps.append(start)
            count += 1
    return count


def complexity(s: WordStream, n: int, horizon: int) -> int:
    """Distinct length-n factors among the first `horizon` letters.

    Equals the true complexity p(n) when the rule certifies saturation at this
    horizon (see exact_complexity_horizon); otherwise it is a lower bound.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if horizon < n:
        raise HorizonTooSmall(f"horizon {horizon} < n {n}")
    return _distinct_factors(s.prefix(horizon), n)


def complexity_is_exact(s: WordStream, n: int, horizon: int) -> bool:
    need = s.exact_complexity_horizon(n)
    return need is not None and horizon >= need


@dataclass(frozen=True)
class ComplexityProfile:
    """Counts p(1..n_max) measured at one horizon, with certification flags."""

    n_max: int
    counts: tuple
    certified: bool
    sturmian_irrational: bool = False

    def __post_init__(self):
        if len(self.counts) != self.n_max:
            raise ValueError("counts length must equal n_max")
        if self.certified:
            # true complexity functions are nondecreasing
            for a, b in zip(self.counts, self.counts[1:]):
                if b < a:
                    raise ValueError("certified profile must be nondecreasing")


def complexity_profile(s: WordStream, n_max: int, horizon: int) -> ComplexityProfile:
    counts = tuple(complexity(s, n, horizon) for n in range(1, n_max + 1))
    certified = all(complexity_is_exact(s, n, horizon) for n in range(1, n_max + 1))
    return ComplexityProfile(n_max, counts, certified, s.sturmian_irrational)


class Classification(enum.Enum):
    ULTIMATELY_PERIODIC_CERTIFIED = "ultimately-periodic-certified"
    NOT_ULTIMATELY_PERIODIC = "not-ultimately-periodic"
    INCONCLUSIVE = "inconclusive"


def morse_hedlund_classify(profile: ComplexityProfile) -> Classification:
    """Apply the p(n) <= n periodicity criterion to a measured profile.

    The low branch needs certified counts (a lower bound below n proves
    nothing); the high branch is only conclusive when the rule itself
    guarantees Sturmian behaviour with irrational slope.
    """
    low = any(c <= n for n, c in enumerate(profile.counts, start=1))
    if low and profile.certified:
        return Classification.ULTIMATELY_PERIODIC_CERTIFIED
    if not low and profile.sturmian_irrational:
        return Classification.NOT_ULTIMATELY_PERIODIC
    return Classification.INCONCLUSIVE


# -- structure of prefixes ------------------------------------------------------

def z_array(w: Sequence[int]) -> list[int]:
    """z[i] = length of the longest common prefix of w and w[i:] (z[0] = len)."""
    n = len(w)
    z = [0] * n
    if n == 0:
        return z
    z[0] = n
    l = r = 0
    for i in range(1, n):
        if i < r:
            z[i] = min(r - i, z[i - l])
        while i + z[i] < n and w[z[i]] == w[i + z[i]]:
            z[i] += 1
        if i + z[i] > r:
            l, r = i, i + z[i]
    return z


def prefix_return_times(s: WordStream, m: int, horizon: int) -> list[int]:
    """Increasing chain n_1 < n_2 < ... of prefix return positions of the
    word shifted by m letters.

    The chain is built greedily: n is accepted when the previously accepted
    prefix reappears as a suffix of the length-n prefix, so for consecutive
    accepted values the length-n_j prefix is literally a suffix of the
    length-n_{j+1} prefix.  By transitivity the same holds for any pair
    i < j, which is exactly what the congruence-witness construction needs.
    Detection is one Z-array pass over the window.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if horizon <= m:
        raise HorizonTooSmall(f"horizon {horizon} must exceed m {m}")
    w = s.prefix(horizon)[m:]
    z = z_array(w)
    chain: list[int] = []
    p = 0
    for n in range(1, len(w) + 1):
        if p == 0 or z[n - p] >= p:
            chain.append(n)
            p = n
    return chain


def palindrome_prefixes(s: WordStream, horizon: int) -> list[int]:
    """All n <= horizon whose length-n prefix is a palindrome (exact, linear time)."""
    if horizon < 1:
        raise ValueError("horizon must be positive")
    w = s.prefix(horizon)
    h = len(w)
    rev = w[::-1]
    z = z_array(w + [0] + rev)  # 0 is not a valid letter, safe separator
    out = []
    for n in range(1, h + 1):
        # suffix of rev of length n == reversal of prefix(n); starts at h+1+(h-n)
        if z[2 * h + 1 - n] >= n:
            out.append(n)
    return out


def linear_recurrence_constant(s: WordStream, L: int, horizon: int) -> Fraction:
    """Largest (occurrence gap)/|W| over factors W of length <= L in the window.

    Gaps are start-to-start and include the gap to the first occurrence
    (a virtual occurrence at position 0); the gap after the last occurrence
    is not counted.  The result is a lower bound for any linear-recurrence
    constant of the infinite word.
    """
    if L < 1:
        raise ValueError("L must be positive")
    if horizon < 10 * L:
        raise HorizonTooSmall(f"horizon {horizon} < 10*L = {10 * L}")
    w = s.prefix(horizon)
    best = Fraction(0)
    for length in range(1, L + 1):
        last_seen: dict[tuple, int] = {}
        max_gap: dict[tuple, int] = {}
        for start in range(len(w) - length + 1):
            key = tuple(w[start:start + length])
            prev = last_seen.get(key, 0)  # position 0 = virtual start
            gap = (start + 1) - prev
            if gap > max_gap.get(key, 0):
                max_gap[key] = gap
            last_seen[key] = start + 1
        for key, gap in max_gap.items():
            cand = Fraction(gap, length)
            if cand > best:
                best = cand
    return best
