"""Littlewood-type products, infimum scans, congruence witnesses, and
Lagrange constants.

The central quantity is q * ||q*alpha|| * |q|, where |.| is a pseudo-absolute
value.  For quadratic alpha every comparison here is exact integer arithmetic
in the corresponding quadratic field; for stream-backed alpha the module works
with certified rational enclosures that are refined until every comparison is
decided.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .cf import (Convergent, cf_of_rational, cf_of_surd, continuant,
                 convergent_iter, purely_periodic_value, q_norm_product)
from .config import check_int
from .dvalue import PseudoValuation, padic_abs
from .errors import (DegenerateQ, NotEnoughReturns, PAdicDenominator,
                     StreamExhausted, VerificationFailed)
from .numbers import QuadraticSurd, _sign_pair, exp_enclosure
from .words import WordStream, prefix_return_times

AlphaLike = Union[QuadraticSurd, Fraction, WordStream, tuple]


def _rel_enclosure(x: QuadraticSurd, rel_bits: int) -> tuple[Fraction, Fraction]:
    """Certified bounds on a positive surd with relative width <= 2**-rel_bits."""
    bits = rel_bits + 4
    while True:
        iv = x.enclosure(bits)
        if iv.lo > 0 and iv.width <= iv.lo / (1 << rel_bits):
            return iv.lo, iv.hi
        bits += 32


@dataclass(frozen=True)
class ProductValue:
    """A nonnegative product with certified rational bounds.

    exact is a QuadraticSurd or Fraction when the input admitted an exact
    evaluation, else None (bounds only).
    """

    lower: Fraction
    upper: Fraction
    exact: object = None
    q: Optional[int] = None

    def __float__(self):
        return float((self.lower + self.upper) / 2)


def _as_stream_pair(alpha) -> tuple[int, WordStream]:
    if isinstance(alpha, tuple):
        return int(alpha[0]), alpha[1]
    if isinstance(alpha, WordStream):
        return 0, alpha
    raise TypeError(f"not a stream-backed alpha: {type(alpha).__name__}")


def littlewood_product(q: int, alpha: AlphaLike, valuation: PseudoValuation,
                       rel_bits: int = 30) -> ProductValue:
    """q * ||q*alpha|| * |q|, enclosed to relative width <= 2**-rel_bits.

    Exact (with certified bounds on top) for surd and rational alpha;
    adaptive enclosure for stream alpha.
    """
    np = q_norm_product(q, alpha, rel_bits=rel_bits + 4)
    u = valuation.absval(q)
    if isinstance(np.exact, QuadraticSurd):
        ex = np.exact * u
        lo, hi = _rel_enclosure(ex, rel_bits)
        return ProductValue(lo, hi, exact=ex, q=q)
    if np.exact is not None:  # rational alpha, exact Fraction (possibly 0)
        val = np.exact * u
        return ProductValue(val, val, exact=val, q=q)
    return ProductValue(np.lower * u, np.upper * u, q=q)


# -- infimum scans --------------------------------------------------------------

@dataclass(frozen=True)
class ScanRecord:
    q: int
    lower: Fraction
    upper: Fraction
    exact: object = None

    def __float__(self):
        return float((self.lower + self.upper) / 2)


@dataclass(frozen=True)
class ScanResult:
    q_max: int
    best: ScanRecord
    trace: tuple  # record-setting ScanRecords, strictly decreasing in value

    @property
    def best_q(self) -> int:
        return self.best.q


def _valuation_tables(valuation: PseudoValuation, q_max: int):
    """ds[i] = d_{i+1} and es[w] = e_w, long enough to resolve any q <= q_max."""
    ds: list[int] = []
    es: list[int] = [1]
    while es[-1] <= q_max:
        ds.append(valuation.d(len(ds) + 1))
        es.append(es[-1] * ds[-1])
    return ds, es


def _surd_scan_chunk(a: int, b: int, c: int, core: int, q_lo: int, q_hi: int,
                     ds: Sequence[int], es: Sequence[int]):
    """Record-setting (q, na, nb, nc) with value (na + nb*sqrt(core))/nc for
    q in [q_lo, q_hi]; pure integer arithmetic, no floats."""
    isqrt = math.isqrt
    nds = len(ds)
    records = []
    ba = bb = bc = None  # current best
    for q in range(q_lo, q_hi + 1):
        w, x = 0, q
        while w < nds and x % ds[w] == 0:
            x //= ds[w]
            w += 1
        e = es[w]
        A = q * a
        B = q * b
        # nearest integer to (A + B*sqrt(core))/c
        y = 2 * B
        s = isqrt(y * y * core)
        num = 2 * A + c + (s if y >= 0 else -s - 1)
        m = num // (2 * c)
        u = A - m * c
        sgn = _sign_pair(u, B, core)
        na, nb, nc = sgn * u * q, sgn * B * q, c * e
        if ba is not None:
            t1 = na * bc - ba * nc
            t2 = nb * bc - bb * nc
            if _sign_pair(t1, t2, core) >= 0:
                continue
        ba, bb, bc = na, nb, nc
        records.append((q, na, nb, nc))
    return records


def _records_from_elems(raw, core, bits: int = 60) -> list[ScanRecord]:
    """Materialize raw (q, a, b, c) minima as ScanRecords whose enclosures are
    pairwise disjoint (so the reported trace is certified strictly decreasing).

    Consecutive exact values may be arbitrarily close, so both neighbours are
    refined together until their enclosures separate."""
    out: list[ScanRecord] = []
    prev = None
    for q, a, b, c in raw:
        ex = QuadraticSurd.from_parts(a, b, c, core)
        use = bits
        iv = ex.enclosure(use)
        while out and iv.hi >= out[-1].lower:
            use += 32
            iv = ex.enclosure(use)
            piv = prev.enclosure(use)
            out[-1] = ScanRecord(out[-1].q, piv.lo, piv.hi, exact=prev)
        out.append(ScanRecord(q, iv.lo, iv.hi, exact=ex))
        prev = ex
    return out


def infimum_scan(alpha: AlphaLike, valuation: PseudoValuation, q_max: int,
                 threads: int = 1) -> ScanResult:
    """Exhaustive certified minimum of q * ||q*alpha|| * |q| over 1 <= q <= q_max.

    This is the brute-force oracle: the trace lists every record-setting q in
    increasing order with strictly decreasing product values.
    """
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    if isinstance(alpha, QuadraticSurd):
        ds, es = _valuation_tables(valuation, q_max)
        a, b, c = alpha._abc()
        core = alpha.core
        if threads <= 1:
            raw = _surd_scan_chunk(a, b, c, core, 1, q_max, ds, es)
        else:
            step = max(1, (q_max + threads - 1) // threads)
            spans = [(lo, min(lo + step - 1, q_max))
                     for lo in range(1, q_max + 1, step)]
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(
                    lambda span: _surd_scan_chunk(a, b, c, core, span[0], span[1], ds, es),
                    spans))
            raw = []
            ba = bb = bc = None
            for part in parts:
                for q, na, nb, nc in part:
                    if ba is not None:
                        t1 = na * bc - ba * nc
                        t2 = nb * bc - bb * nc
                        if _sign_pair(t1, t2, core) >= 0:
                            continue
                    ba, bb, bc = na, nb, nc
                    raw.append((q, na, nb, nc))
        trace = _records_from_elems(raw, core)
        return ScanResult(q_max, trace[-1], tuple(trace))
    if isinstance(alpha, (int, Fraction)):
        alpha = Fraction(alpha)
        trace = []
        best = None
        for q in range(1, q_max + 1):
            pv = littlewood_product(q, alpha, valuation)
            val = pv.exact
            if best is None or val < best:
                best = val
                trace.append(ScanRecord(q, val, val, exact=val))
                if val == 0:
                    break
        return ScanResult(q_max, trace[-1], tuple(trace))
    # stream-backed alpha: certified enclosures, refined on contact
    trace = []
    best: Optional[ScanRecord] = None
    for q in range(1, q_max + 1):
        rec = _stream_record(q, alpha, valuation, 40)
        if best is None:
            best = rec
            trace.append(rec)
            continue
        bits = 40
        while not (rec.upper < best.lower or rec.lower > best.upper):
            bits += 24
            if bits > 400:
                raise VerificationFailed(
                    f"could not separate products at q={rec.q} and q={best.q}")
            rec = _stream_record(q, alpha, valuation, bits)
            best = _stream_record(best.q, alpha, valuation, bits)
        if rec.upper < best.lower:
            best = rec
            trace.append(rec)
    return ScanResult(q_max, best, tuple(trace))


def _stream_record(q: int, alpha, valuation: PseudoValuation, rel_bits: int) -> ScanRecord:
    pv = littlewood_product(q, alpha, valuation, rel_bits=rel_bits)
    return ScanRecord(q, pv.lower, pv.upper, exact=pv.exact)


def convergent_multiple_scan(alpha: AlphaLike, valuation: PseudoValuation,
                             depth: int, k_max: int,
                             q_cap: Optional[int] = None) -> ScanResult:
    """Minimum of the product over candidates q = e_k * q_n, n <= depth,
    0 <= k <= k_max (e_0 = 1, so plain convergent denominators are included).

    q_cap, when given, keeps only candidates <= q_cap so the result is
    comparable with an exhaustive scan over the same range.
    """
    if depth < 0 or k_max < 0:
        raise ValueError("depth and k_max must be >= 0")
    if isinstance(alpha, QuadraticSurd):
        stream = cf_of_surd(alpha).quotient_stream()
    elif isinstance(alpha, (int, Fraction)):
        stream = cf_of_rational(Fraction(alpha)).quotient_stream()
    else:
        _, stream = _as_stream_pair(alpha)
    qs = []
    for conv in convergent_iter(0, stream):
        qs.append(conv.q)
        if conv.n == depth:
            break
    cands = set()
    for k in range(0, k_max + 1):
        ek = valuation.e(k)
        for qn in qs:
            q = ek * qn
            if q_cap is None or q <= q_cap:
                cands.add(q)
    if not cands:
        raise ValueError("no candidates under the given cap")
    exact_mode = isinstance(alpha, (QuadraticSurd, int, Fraction))
    best_rec: Optional[ScanRecord] = None
    trace = []
    for q in sorted(cands):
        pv = littlewood_product(q, alpha, valuation)
        rec = ScanRecord(q, pv.lower, pv.upper, exact=pv.exact)
        if best_rec is None:
            best_rec = rec
            trace.append(rec)
            continue
        if exact_mode:
            smaller = rec.exact < best_rec.exact
        else:
            bits = 40
            while not (rec.upper < best_rec.lower or rec.lower > best_rec.upper):
                bits += 24
                if bits > 400:
                    raise VerificationFailed("could not separate candidate products")
                rec = _stream_record(q, alpha, valuation, bits)
                best_rec = _stream_record(best_rec.q, alpha, valuation, bits)
            smaller = rec.upper < best_rec.lower
        if smaller:
            best_rec = rec
            trace.append(rec)
    return ScanResult(max(cands), best_rec, tuple(trace))


# -- congruence witnesses --------------------------------------------------------

@dataclass(frozen=True)
class WitnessRecord:
    """Certified witness Q for the smallness of Q*||Q*alpha||*|Q|_ell.

    All bounds are exact rationals; qnorm_upper is a certified upper bound on
    Q*||Q*alpha|| and product_upper on the full product with the ell-adic
    weight ell**-a (a = exact power of ell dividing Q).  bound_rhs is the
    guarantee the construction promises (8*q_m^2/ell for the recurrent-word
    construction, 2*q_{m+1}^2/ell for the quadratic one).
    """

    kind: str
    Q: int
    ell: int
    indices: tuple
    m: int
    bound_base: int          # q_m (recurrent) or q_{m+1} (quadratic)
    qnorm_upper: Fraction
    qnorm_rhs: Fraction
    ell_power: int
    ell_adic: Fraction
    product_upper: Fraction
    bound_rhs: Fraction
    dvalue: Optional[Fraction] = None

    def selfcheck(self) -> bool:
        """Re-verify every recorded inequality from the stored numbers."""
        ok = self.Q > 0 and self.Q % self.ell == 0
        pw = self.ell ** self.ell_power
        ok = ok and self.Q % pw == 0 and self.Q % (pw * self.ell) != 0
        ok = ok and self.ell_adic == Fraction(1, pw)
        ok = ok and self.qnorm_upper <= self.qnorm_rhs
        ok = ok and self.product_upper <= self.bound_rhs
        if self.dvalue is not None:
            ok = ok and self.dvalue <= Fraction(1, self.ell)
        return bool(ok)

    def to_json(self) -> dict:
        from .numbers import frac_to_str
        out = {
            "kind": self.kind,
            "Q": str(self.Q),
            "ell": self.ell,
            "indices": list(self.indices),
            "m": self.m,
            "bound_base": str(self.bound_base),
            "qnorm_upper": frac_to_str(self.qnorm_upper),
            "qnorm_rhs": frac_to_str(self.qnorm_rhs),
            "ell_power": self.ell_power,
            "ell_adic": frac_to_str(self.ell_adic),
            "product_upper": frac_to_str(self.product_upper),
            "bound_rhs": frac_to_str(self.bound_rhs),
        }
        if self.dvalue is not None:
            out["dvalue"] = frac_to_str(self.dvalue)
        return out


def recurrent_word_witness(m: int, stream: WordStream, ell: int, horizon: int,
                           valuation: Optional[PseudoValuation] = None) -> WitnessRecord:
    """Witness from the pigeonhole over prefix return times.

    For alpha = [0; a_1 a_2 ...] whose shifted word a_{m+1} a_{m+2} ... is
    recurrent, find return times n_1 < n_2 < ... and the first pair i < j with

        q_{m+n_i} = q_{m+n_j} and q_{m+n_i-1} = q_{m+n_j-1}  (mod ell),

    scanning j upward with i minimal.  Then Q = |q_{m+n_i} q_{m+n_j-1} -
    q_{m+n_i-1} q_{m+n_j}| is positive, divisible by ell, and satisfies the
    certified chain Q*||Q*alpha|| <= 8 q_m^2, hence the product with the
    ell-adic weight is at most 8 q_m^2 / ell.  The q*||q*alpha|| bound is
    certified by pure rational arithmetic:

        ||Q*alpha|| <= q_a |q_{b-1} alpha - p_{b-1}| + q_{a-1} |q_b alpha - p_b|
                     < q_a / q_b + q_{a-1} / q_{b+1}.
    """
    if ell < 2:
        raise ValueError("ell must be >= 2")
    returns = prefix_return_times(stream, m, horizon)
    need = ell * ell + 1
    if len(returns) < need:
        raise NotEnoughReturns(
            f"need {need} return times for ell={ell}, found {len(returns)} "
            f"within horizon {horizon}")
    positions = {m + n: n for n in returns}
    pair_first: dict[tuple, tuple] = {}
    hit = None
    q_m = None
    q_prev, q_cur = 0, 1  # q_{-1}, q_0
    exact_at: dict[int, tuple] = {}
    k = 0
    if m == 0:
        q_m = 1
    last_pos = m + returns[-1]
    while k < last_pos and hit is None:
        k += 1
        a = stream.letter(k)
        q_prev, q_cur = q_cur, check_int(a * q_cur + q_prev)
        if k == m:
            q_m = q_cur
        n = positions.get(k)
        if n is None:
            continue
        pair = (q_cur % ell, q_prev % ell)
        found = pair_first.get(pair)
        if found is None:
            pair_first[pair] = (n, q_cur, q_prev)
            continue
        n_i, q_a, q_a1 = found
        hit = (n_i, n, q_a, q_a1, q_cur, q_prev)
    if hit is None:
        raise VerificationFailed("pigeonhole failed, which contradicts counting")
    n_i, n_j, q_a, q_a1, q_b, q_b1 = hit
    # one more convergent for the ||Q*alpha|| bound
    a_next = stream.letter(k + 1)
    q_b_next = check_int(a_next * q_cur + q_prev)
    Q = abs(q_a * q_b1 - q_a1 * q_b)
    if Q == 0:
        raise DegenerateQ("witness integer is zero")
    if Q % ell:
        raise VerificationFailed("ell does not divide Q")
    qnorm_upper = Q * (Fraction(q_a, q_b) + Fraction(q_a1, q_b_next))
    qnorm_rhs = Fraction(8 * q_m * q_m)
    if qnorm_upper > qnorm_rhs:
        raise VerificationFailed("certified q*||q*alpha|| bound exceeds 8*q_m^2")
    apow = 0
    x = Q
    while x % ell == 0:
        x //= ell
        apow += 1
    ell_adic = Fraction(1, ell ** apow)
    product_upper = qnorm_upper * ell_adic
    bound_rhs = qnorm_rhs / ell
    if product_upper > bound_rhs:
        raise VerificationFailed("product bound exceeds 8*q_m^2/ell")
    dval = valuation.absval(Q) if valuation is not None else None
    return WitnessRecord("recurrent", Q, ell, (n_i, n_j), m, q_m,
                         qnorm_upper, qnorm_rhs, apow, ell_adic,
                         product_upper, bound_rhs, dval)


def quadratic_witness(alpha: QuadraticSurd, valuation: PseudoValuation,
                      n: int) -> WitnessRecord:
    """Witness for quadratic alpha and bounded valuation at modulus ell = e_n.

    The convergent denominators of a quadratic irrational satisfy a linear
    recurrence, so the pair sequence (q_k, q_{k+1}) mod ell (tracked together
    with the position inside the quotient period) is eventually periodic with
    preperiod m and period d.  Then Q = |q_m q_{m+d+1} - q_{m+1} q_{m+d}| is
    divisible by ell and Q*||Q*alpha|| <= 2 q_{m+1}^2, checked exactly in
    surd arithmetic.
    """
    if not valuation.bounded:
        raise ValueError("need a bounded valuation rule (constant or periodic)")
    if n < 1:
        raise ValueError("n must be >= 1")
    ell = valuation.e(n)
    exp = cf_of_surd(alpha)
    r, s = len(exp.preperiod), len(exp.period)
    stream = exp.quotient_stream()
    qs = [1]  # qs[k] = q_k, starting at q_0 = 1
    q_prev, q_cur = 0, 1
    seen: dict[tuple, int] = {}
    k = 0
    m = d = None
    while m is None:
        # extend q_{k+1}
        a = stream.letter(k + 1)
        q_prev, q_cur = q_cur, check_int(a * q_cur + q_prev)
        qs.append(q_cur)
        if k >= r:
            state = ((k - r) % s, qs[k] % ell, qs[k + 1] % ell)
            first = seen.get(state)
            if first is not None:
                m, d = first, k - first
            else:
                seen[state] = k
        k += 1
    for _ in range(m + d + 1 - (len(qs) - 1)):
        a = stream.letter(len(qs))
        qs.append(check_int(a * qs[-1] + qs[-2]))
    Q = abs(qs[m] * qs[m + d + 1] - qs[m + 1] * qs[m + d])
    if Q == 0:
        raise DegenerateQ("witness integer is zero")
    if Q % ell:
        raise VerificationFailed("ell does not divide Q")
    np = q_norm_product(Q, alpha)
    rhs = Fraction(2 * qs[m + 1] ** 2)
    if not (np.exact <= rhs):
        raise VerificationFailed("exact Q*||Q*alpha|| exceeds 2*q_{m+1}^2")
    if np.upper > rhs:
        # widen the recorded rational bound only as far as the guarantee
        qnorm_upper = rhs
    else:
        qnorm_upper = np.upper
    apow = 0
    x = Q
    while x % ell == 0:
        x //= ell
        apow += 1
    dval = valuation.absval(Q)
    if dval > Fraction(1, ell):
        raise VerificationFailed("|Q| under the valuation exceeds 1/ell")
    product_upper = qnorm_upper * dval
    bound_rhs = rhs / ell
    if product_upper > bound_rhs:
        raise VerificationFailed("product bound exceeds 2*q_{m+1}^2/ell")
    return WitnessRecord("quadratic", Q, ell, (m, m + d), m, qs[m + 1],
                         qnorm_upper, rhs, apow, Fraction(1, ell ** apow),
                         product_upper, bound_rhs, dval)


# -- Lagrange constants ----------------------------------------------------------

@dataclass(frozen=True)
class LagrangeEstimate:
    """Bounds on liminf q*||q*alpha||; exact surd value when certified."""

    lower: Optional[Fraction]
    upper: Fraction
    certified: bool
    depth: int
    exact: object = None

    def __float__(self):
        return float(self.upper if self.lower is None else (self.lower + self.upper) / 2)


def lagrange_constant(alpha: QuadraticSurd) -> LagrangeEstimate:
    """Exact Lagrange constant of a quadratic irrational.

    Along each residue of the quotient period, q_n*||q_n*alpha|| converges to
    1/(y + z) where y is the purely periodic forward tail and z the purely
    periodic backward ratio limit; the constant is the minimum over residues,
    computed as explicit surds in the field of alpha.
    """
    exp = cf_of_surd(alpha)
    per = exp.period
    s = len(per)
    core = alpha.core
    best = None
    for c in range(s):
        fwd = [per[(c + t) % s] for t in range(s)]
        bwd = [per[(c - 1 - t) % s] for t in range(s)]
        y = purely_periodic_value(fwd, core_hint=core)
        z = purely_periodic_value(bwd, core_hint=core).inverse()
        cand = (y + z).inverse()
        if best is None or cand < best:
            best = cand
    lo, hi = _rel_enclosure(best, 42)
    return LagrangeEstimate(lo, hi, True, s, exact=best)


def lagrange_upper_bound(alpha, N: int, rel_bits: int = 40) -> LagrangeEstimate:
    """Certified upper bound min_{n <= N} q_n*||q_n*alpha|| for stream alpha.

    A finite prefix cannot lower-bound a liminf, so lower is None and
    certified is False.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    a0, stream = _as_stream_pair(alpha)
    it = convergent_iter(a0, stream)
    convs: list[Convergent] = []

    def ensure(k: int):
        while len(convs) <= k:
            try:
                convs.append(next(it))
            except StopIteration:
                raise StreamExhausted("word ended during Lagrange probe") from None

    ensure(N + 2)
    depth = N + 2
    best_upper = None
    for n in range(0, N + 1):
        pn, qn = convs[n].p, convs[n].q
        while True:
            ensure(depth + 1)
            v1 = Fraction(convs[depth].p, convs[depth].q)
            v2 = Fraction(convs[depth + 1].p, convs[depth + 1].q)
            lo_a, hi_a = (v1, v2) if v1 <= v2 else (v2, v1)
            e1 = abs(qn * lo_a - pn)
            e2 = abs(qn * hi_a - pn)
            d_lo, d_hi = (e1, e2) if e1 <= e2 else (e2, e1)
            val_lo, val_hi = qn * d_lo, qn * d_hi
            if val_lo > 0 and val_hi - val_lo <= val_lo / (1 << rel_bits):
                break
            depth += 4
        if best_upper is None or val_hi < best_upper:
            best_upper = val_hi
    return LagrangeEstimate(None, best_upper, False, N)


@dataclass(frozen=True)
class MultipleRow:
    n: int
    estimate: LagrangeEstimate
    bound: Fraction                # 8*q_m^2 / n
    two_sided_ok: bool             # c(alpha)/n <= c(n*alpha) <= n*c(alpha)
    bound_ok: bool                 # c(n*alpha) <= 8*q_m^2/n


def multiples_profile(alpha: QuadraticSurd, N: int, m: int = 0,
                      q_m: Optional[int] = None) -> list[MultipleRow]:
    """Exact c(n*alpha) for n = 1..N with the two-sided and 8*q_m^2/n checks."""
    if N < 1:
        raise ValueError("N must be >= 1")
    base = lagrange_constant(alpha)
    quotients = cf_of_surd(alpha).quotient_stream()
    computed_qm = continuant(quotients.prefix(m))
    if q_m is None:
        q_m = computed_qm
    elif q_m != computed_qm:
        raise ValueError(f"q_m mismatch: given {q_m}, expansion gives {computed_qm}")
    rows = []
    for n in range(1, N + 1):
        mult = alpha * n
        est = lagrange_constant(mult)
        two_sided = (base.exact / n <= est.exact) and (est.exact <= base.exact * n)
        bound = Fraction(8 * q_m * q_m, n)
        rows.append(MultipleRow(n, est, bound, bool(two_sided),
                                bool(est.exact <= bound)))
    return rows


# -- linear recurrences mod ell ----------------------------------------------------

def _prime_power(n: int) -> Optional[tuple[int, int]]:
    """(p, k) if n = p**k for a prime p, else None."""
    if n < 2:
        return None
    for p in range(2, math.isqrt(n) + 1):
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            return (p, k) if n == 1 else None
    return (n, 1)


def recurrence_period_mod(coeffs: Sequence[int], init: Sequence[int],
                          ell: int) -> tuple[int, int]:
    """Preperiod and period of u_{t+d} = v_{d-1} u_{t+d-1} + ... + v_0 u_t mod ell.

    coeffs = (v_0, ..., v_{d-1}).  For ell = p**k with v_0 invertible mod p the
    period is checked against the classical bound (p**d - 1) * p**(k-1).
    """
    d = len(coeffs)
    if d < 1 or len(init) != d:
        raise ValueError("need len(init) == len(coeffs) >= 1")
    if ell < 2:
        raise ValueError("ell must be >= 2")
    state = tuple(x % ell for x in init)
    seen = {state: 0}
    t = 0
    while True:
        t += 1
        nxt = sum(v * u for v, u in zip(coeffs, state)) % ell
        state = state[1:] + (nxt,)
        first = seen.get(state)
        if first is not None:
            pre, period = first, t - first
            break
        seen[state] = t
    pp = _prime_power(ell)
    if pp is not None and coeffs[0] % pp[0] != 0:
        p, k = pp
        bound = (p ** d - 1) * p ** (k - 1)
        if period > bound:
            raise VerificationFailed(
                f"period {period} exceeds ({p}^{d}-1)*{p}^{k - 1} = {bound}")
    return pre, period


def denominator_recurrence(alpha: QuadraticSurd) -> tuple[int, int, int]:
    """(r, s, t) with q_{n+2s} - t q_{n+s} + (-1)^s q_n = 0 for all n >= r.

    r and s are the preperiod and period lengths of the quotient word; t is
    determined at n = r and re-verified on at least 30 consecutive indices.
    """
    exp = cf_of_surd(alpha)
    r, s = len(exp.preperiod), len(exp.period)
    span = max(3 * s, 30)
    stream = exp.quotient_stream()
    need = r + span + 2 * s + 1
    qs = [1]
    q_prev, q_cur = 0, 1
    for k in range(1, need + 1):
        a = stream.letter(k)
        q_prev, q_cur = q_cur, check_int(a * q_cur + q_prev)
        qs.append(q_cur)
    sign = -1 if s % 2 else 1
    num = qs[r + 2 * s] + sign * qs[r]
    if num % qs[r + s]:
        raise VerificationFailed("recurrence coefficient is not an integer")
    t = num // qs[r + s]
    for n in range(r, r + span + 1):
        if qs[n + 2 * s] - t * qs[n + s] + sign * qs[n] != 0:
            raise VerificationFailed(f"recurrence fails at index {n}")
    return r, s, t


# -- generalized products (real x p-adic pairs) -----------------------------------

@dataclass(frozen=True)
class GLPPoint:
    """Pair (u, v) fed to the generalized product: u = ||q_n a||/||q_{n-1} a||
    in (0,1) and v = q_n/q_{n-1} carrying its p-adic data."""

    u: object              # QuadraticSurd, or (a0, WordStream) enclosure source
    v: Fraction
    p: int
    q_n: int
    q_n1: int


def glp_point(alpha: AlphaLike, n: int, p: int) -> GLPPoint:
    """Build the point for index n >= 1 from alpha's convergents."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(alpha, QuadraticSurd):
        exp = cf_of_surd(alpha)
        stream = exp.quotient_stream()
        convs = []
        for conv in convergent_iter(exp.a0, stream):
            convs.append(conv)
            if conv.n == n:
                break
        pn, qn = convs[n].p, convs[n].q
        pn1, qn1 = convs[n - 1].p, convs[n - 1].q
        e_n = abs(alpha * qn - pn)
        e_n1 = abs(alpha * qn1 - pn1)
        u = e_n / e_n1
        return GLPPoint(u, Fraction(qn, qn1), p, qn, qn1)
    a0, stream = _as_stream_pair(alpha)
    convs = []
    for conv in convergent_iter(a0, stream):
        convs.append(conv)
        if conv.n == n:
            break
    if len(convs) <= n:
        raise StreamExhausted("word too short for the requested index")
    from .words import ShiftedStream
    u = (0, ShiftedStream(stream, n))
    return GLPPoint(u, Fraction(convs[n].q, convs[n - 1].q), p,
                    convs[n].q, convs[n - 1].q)


def glp_product(point: GLPPoint, a: int, b: int, rel_bits: int = 40) -> ProductValue:
    """max(a,b) * |a*u - b| * |a*q_n + b*q_{n-1}|_p / |q_{n-1}|_p, exactly.

    The p-adic factor is computed on integers; the construction divides by
    |q_{n-1}|_p, so p | q_{n-1} is flagged instead of silently absorbed.
    """
    if a < 1 or b < 0:
        raise ValueError("need a >= 1 and b >= 0")
    if point.q_n1 % point.p == 0:
        raise PAdicDenominator(f"p={point.p} divides q_(n-1)={point.q_n1}")
    t = a * point.q_n + b * point.q_n1
    padic = padic_abs(point.p, t)
    scale = max(a, b) * padic
    if isinstance(point.u, QuadraticSurd):
        ex = abs(point.u * a - b) * scale
        if isinstance(ex, QuadraticSurd):
            lo, hi = _rel_enclosure(ex, rel_bits)
            return ProductValue(lo, hi, exact=ex)
        ex = Fraction(ex)
        return ProductValue(ex, ex, exact=ex)
    from .numbers import interval_refine
    bits = rel_bits + 8
    while True:
        iv = interval_refine(point.u, bits)
        lo = a * iv.lo - b
        hi = a * iv.hi - b
        if lo > 0 or hi < 0:
            d_lo, d_hi = (lo, hi) if lo > 0 else (-hi, -lo)
            v_lo, v_hi = d_lo * scale, d_hi * scale
            if v_lo > 0 and v_hi - v_lo <= v_lo / (1 << rel_bits):
                return ProductValue(v_lo, v_hi)
        bits += 32


@dataclass(frozen=True)
class GridScanResult:
    a: int
    b: int
    value: ProductValue
    eps_check: Optional[bool] = None   # minimum > eps^2/4 at this finite range


def glp_scan(alpha: AlphaLike, n: int, p: int, a_max: int, b_max: int,
             eps: Optional[Fraction] = None) -> GridScanResult:
    """Grid minimum of the generalized product over 1 <= a <= a_max,
    0 <= b <= b_max.

    A finite-grid value below eps^2/4 is recorded as data, never as a
    certified disproof of anything: the underlying infimum ranges over all
    pairs.
    """
    if a_max < 1 or b_max < 0:
        raise ValueError("need a_max >= 1 and b_max >= 0")
    point = glp_point(alpha, n, p)
    best = None
    arg = None
    for a in range(1, a_max + 1):
        for b in range(0, b_max + 1):
            pv = glp_product(point, a, b)
            if best is None:
                best, arg = pv, (a, b)
                continue
            if pv.exact is not None and best.exact is not None:
                smaller = pv.exact < best.exact
            else:
                bits = 40
                while not (pv.upper < best.lower or pv.lower > best.upper):
                    bits += 24
                    if bits > 400:
                        raise VerificationFailed("could not separate grid values")
                    pv = glp_product(point, a, b, rel_bits=bits)
                    best = glp_product(point, arg[0], arg[1], rel_bits=bits)
                smaller = pv.upper < best.lower
            if smaller:
                best, arg = pv, (a, b)
    check = None
    if eps is not None:
        threshold = Fraction(eps) ** 2 / 4
        if best.exact is not None:
            check = bool(best.exact > threshold)
        else:
            check = bool(best.lower > threshold)
    return GridScanResult(arg[0], arg[1], best, check)


# -- small-vector probe (compactness inequalities) ---------------------------------

def small_vector_probe(u, v: Fraction, p: int, t: Fraction, n: int,
                       delta: Fraction, search_bound: int,
                       exp_bits: int = 60) -> Optional[tuple]:
    """Search 0 <= a, b <= search_bound, (a, b) != (0, 0), for a pair with

        p^(2n) * |a*v - b|_p            < delta,
        e^t  * p^(-n) * |a*u - b|       < delta,
        e^(-t) * p^(-n) * max(a, b)     < 2*delta.

    e^t is handled as a certified 60-bit enclosure and every inequality must
    hold for the whole enclosure (conservative ties).  Requires the cone
    condition e^t * p^(-n) >= 1.  Returns the first satisfying pair in
    lexicographic order, or None.
    """
    t = Fraction(t)
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0,1)")
    if n < 0 or t < 0:
        raise ValueError("need n >= 0 and t >= 0")
    if v.denominator % p == 0:
        raise PAdicDenominator("v must be a p-adic integer: p cannot divide its denominator")
    if isinstance(u, QuadraticSurd):
        if not (u > 0 and u < 1):
            raise ValueError("u must lie in (0,1)")
    else:
        u = Fraction(u)
        if not 0 < u < 1:
            raise ValueError("u must lie in (0,1)")
    # cone: e^t >= p^n, decided by refining the enclosure (equality only at t=n=0,
    # where exp_enclosure returns exactly (1,1))
    pn = p ** n
    bits = exp_bits
    while True:
        e_lo, e_hi = exp_enclosure(t, bits)
        if e_lo >= pn:
            break
        if e_hi < pn:
            raise ValueError("cone condition e^t * p^-n >= 1 violated")
        bits += 32
    e_lo, e_hi = exp_enclosure(t, exp_bits)
    p2n = Fraction(p) ** (2 * n)
    for a in range(0, search_bound + 1):
        for b in range(0, search_bound + 1):
            if a == 0 and b == 0:
                continue
            x = a * v - b
            val_p = padic_abs(p, x.numerator) if x else Fraction(0)
            if not p2n * val_p < delta:
                continue
            du = u * a - b  # QuadraticSurd stays exact; a = 0 degrades to Fraction
            if isinstance(du, QuadraticSurd):
                diff_ub = _rel_enclosure(abs(du), 60)[1]
            else:
                diff_ub = abs(Fraction(du))
            if not e_hi * diff_ub / pn < delta:
                continue
            if not Fraction(max(a, b), pn) / e_lo < 2 * delta:
                continue
            return (a, b)
    return None
