"""Pseudo-absolute values built from a sequence of integers d_k >= 2.

With e_0 = 1 and e_n = d_1 * ... * d_n, the order of q is the largest n with
e_n | q, and the value is the exact unit fraction 1 / e_order(q).  The
constant sequence d_k = p for a prime p gives the usual normalized p-adic value.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .config import check_int


class PseudoValuation:
    """Base rule; subclasses define d(k) for k >= 1 (each >= 2)."""

    bounded = False

    def d(self, k: int) -> int:
        raise NotImplementedError

    def e(self, n: int) -> int:
        """e_n = d_1 * ... * d_n; e_0 = 1."""
        if n < 0:
            raise ValueError("n must be >= 0")
        acc = 1
        for k in range(1, n + 1):
            acc = check_int(acc * self.d(k))
        return acc

    def order(self, q: int) -> int:
        """Largest n with e_n | q, by incremental division (no huge products)."""
        if q < 1:
            raise ValueError("q must be >= 1")
        w, x = 0, q
        while True:
            dn = self.d(w + 1)
            if x % dn:
                return w
            x //= dn
            w += 1

    def absval(self, q: int) -> Fraction:
        """|q| = 1 / e_order(q), an exact unit fraction <= 1."""
        return Fraction(1, self.e(self.order(q)))

    def to_json(self) -> dict:
        raise NotImplementedError


class Constant(PseudoValuation):
    bounded = True

    def __init__(self, d: int):
        if d < 2:
            raise ValueError("d must be >= 2")
        self._d = d

    def d(self, k: int) -> int:
        return self._d

    def e(self, n: int) -> int:
        if n < 0:
            raise ValueError("n must be >= 0")
        return check_int(self._d ** n)

    def to_json(self) -> dict:
        return {"rule": "constant", "d": self._d}


class Periodic(PseudoValuation):
    bounded = True

    def __init__(self, pattern: Sequence[int]):
        self.pattern = tuple(int(d) for d in pattern)
        if not self.pattern or any(d < 2 for d in self.pattern):
            raise ValueError("pattern must be nonempty with entries >= 2")

    def d(self, k: int) -> int:
        return self.pattern[(k - 1) % len(self.pattern)]

    def to_json(self) -> dict:
        return {"rule": "periodic", "pattern": list(self.pattern)}


class Explicit(PseudoValuation):
    """Finite list of ratios, extended by a constant beyond the list."""

    bounded = True

    def __init__(self, ds: Sequence[int], extend: int | None = None):
        self.ds = tuple(int(d) for d in ds)
        if not self.ds or any(d < 2 for d in self.ds):
            raise ValueError("need a nonempty list with entries >= 2")
        self.extend = int(extend) if extend is not None else self.ds[-1]
        if self.extend < 2:
            raise ValueError("extension ratio must be >= 2")

    def d(self, k: int) -> int:
        return self.ds[k - 1] if k <= len(self.ds) else self.extend

    def to_json(self) -> dict:
        return {"rule": "explicit", "pattern": list(self.ds), "extend": self.extend}


class ESequence(PseudoValuation):
    """Rule given by its e_n values directly; continues by squaring.

    Squaring continuation makes the single seed [4] reproduce the doubly
    exponential family e_n = 2**(2**n) exactly, while keeping every implied
    ratio d_n = e_n / e_{n-1} an integer >= 2.
    """

    bounded = False

    def __init__(self, e_values: Sequence[int]):
        es = [int(v) for v in e_values]
        if not es or es[0] < 2:
            raise ValueError("need e_1 >= 2")
        prev = 1
        for v in es:
            if v % prev or v // prev < 2:
                raise ValueError("each e must be a multiple of its predecessor, ratio >= 2")
            prev = v
        self._es = es

    def e(self, n: int) -> int:
        if n < 0:
            raise ValueError("n must be >= 0")
        if n == 0:
            return 1
        while len(self._es) < n:
            self._es.append(check_int(self._es[-1] ** 2))
        return self._es[n - 1]

    def d(self, k: int) -> int:
        return self.e(k) // self.e(k - 1)

    def to_json(self) -> dict:
        return {"rule": "e_sequence", "e": [str(v) for v in self._es]}


def doubly_exponential() -> ESequence:
    """e_n = 2**(2**n): the classical rapidly growing example."""
    return ESequence([4])


def valuation_from_json(obj: dict) -> PseudoValuation:
    rule = obj["rule"]
    if rule == "constant":
        return Constant(int(obj["d"]))
    if rule == "periodic":
        return Periodic(obj["pattern"])
    if rule == "explicit":
        return Explicit(obj["pattern"], obj.get("extend"))
    if rule == "e_sequence":
        return ESequence([int(v) for v in obj["e"]])
    raise ValueError(f"unknown valuation rule {rule!r}")


def padic_order(p: int, n: int) -> int:
    """Exponent of the exact power of p dividing n != 0."""
    if n == 0:
        raise ValueError("order of 0 is undefined")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_abs(p: int, n: int) -> Fraction:
    """|n|_p = p**-v for n != 0; |0|_p = 0."""
    if n == 0:
        return Fraction(0)
    return Fraction(1, p ** padic_order(p, n))
