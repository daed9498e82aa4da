"""Numerical probes: Dini quotients, Hoelder fits, box-counting dimension, bi-Hoelder bounds."""
from __future__ import annotations

import enum
import itertools
import math
import random
import statistics
from dataclasses import dataclass, field
from fractions import Fraction

from .basechange import a_pq, b_pq, jump_magnitude
from .cantor import StaircaseConfig, gap_images, gap_of, staircase_eval
from .errors import CaseMismatch, DegeneratePairs, DomainError, InadmissiblePrefix
from .evaluation import pi_eval, pi_word
from .expansions import (
    Kind,
    Membership,
    admissible_in_base,
    alpha_one,
    greedy_digits,
    is_admissible,
    membership,
    quasi_greedy_digits,
    separation_bound,
)
from .precision import ApproxReal, Ordering, Regime, as_base, as_real, decide
from .sequences import DigitSeq, as_seq, first_difference


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


class Construction(enum.Enum):
    NAIVE = "naive"
    WITNESS = "witness_truncation"


class DiniCase(enum.Enum):
    ZERO = "a"          # x = 0
    RIGHT_END = "b"     # x = 1/(p-1)
    INFINITE = "c"      # interior point, greedy expansion infinite
    FINITE = "d"        # greedy expansion ends 10^inf


@dataclass
class DiniSample:
    """Difference quotients (f(x) - f(y))/(x - y) along a sequence y -> x."""

    kind: str
    x: ApproxReal
    side: Side
    case: DiniCase
    construction: Construction
    points: list = field(default_factory=list)     # (index, y, quotient)
    bounds: list = field(default_factory=list)     # predicted value or lower bound per point
    exact: bool = True

    @property
    def quotients(self):
        return [q for _, _, q in self.points]


def _map_value(kind, p, q, y, N):
    fn = b_pq if kind == "b" else a_pq
    return fn(p, q, y, N).value


def _quotient(fx, fy, x, y):
    return (fx - fy) / (x - y)


def _classify(p, x, N):
    if decide(x, 0) is Ordering.EQUAL:
        return DiniCase.ZERO
    if decide(x, p.limit()) is Ordering.EQUAL:
        return DiniCase.RIGHT_END
    report = greedy_digits(p, x, N, detect_period=True)
    if report.sequence is not None and report.sequence.is_finite:
        return DiniCase.FINITE
    return DiniCase.INFINITE


def _default_side(kind, case):
    if case is DiniCase.ZERO:
        return Side.RIGHT
    if case in (DiniCase.RIGHT_END, DiniCase.INFINITE):
        return Side.LEFT
    return Side.RIGHT if kind == "b" else Side.LEFT


def slow_alpha(q):
    """(10^j)^inf for the least j with pi_q((10^j)^inf) < 1.

    It is the quasi-greedy expansion of 1 in some base r < q, which is
    what the left witnesses of a_{p,q} need.
    """
    q = as_base(q)
    for j in range(1, 4096):
        seq = DigitSeq("", "1" + "0" * j)
        if decide(pi_eval(q, seq), 1) is Ordering.LESS:
            return seq
    raise DomainError("no slow alpha found")


def dini_witness_quotients(kind, p, q, x, count=12, *, side=None, case=None, N=512):
    """Difference quotients of b_{p,q} or a_{p,q} at x along the blow-up witnesses.

    For 1 < q < p <= 2.  The case is detected from x unless given; asking for
    a case x does not satisfy raises :class:`CaseMismatch`.

    * x = 0, right: y_n = p^-n.
    * x = 1/(p-1), left: y_m = pi_p(1^m 0^inf).
    * infinite expansion, left: truncations at the indices of the 1 digits
      (for ``a`` the tail after each such 1 is replaced by a slow alpha).
    * finite expansion with last 1 at n: for ``b`` on the right
      y_j = x + p^-j with quotient (p/q)^j exactly; the opposite side of
      the jump is sampled naively at y = x - p^-j (``b``) or x + p^-j (``a``)
      and the quotients fall to minus infinity.
    """
    if kind not in ("a", "b"):
        raise ValueError("kind must be 'a' or 'b'")
    p, q, x = as_base(p), as_base(q), as_real(x)
    if p.regime is Regime.LARGE or decide(q.value, p.value) is not Ordering.LESS:
        raise DomainError("Dini witnesses need 1 < q < p <= 2")
    actual = _classify(p, x, N)
    case = actual if case is None else DiniCase(case) if not isinstance(case, DiniCase) else case
    if case is not actual:
        raise CaseMismatch(f"x={x} falls under case ({actual.value}), not ({case.value})")
    side = _default_side(kind, case) if side is None else Side(side)
    fx = _map_value(kind, p, q, x, N)
    pv, qv = p.value, q.value
    ratio = pv / qv
    sample = DiniSample(kind, x, side, case, Construction.WITNESS)

    def add(idx, y, bound):
        fy = _map_value(kind, p, q, y, N)
        quot = _quotient(fx, fy, x, y)
        sample.points.append((idx, y, quot))
        sample.bounds.append(bound)
        if not quot.exact:
            sample.exact = False

    if case is DiniCase.ZERO:
        if side is not Side.RIGHT:
            raise CaseMismatch("x = 0 only has a right side")
        for n in range(1, count + 1):
            add(n, 1 / pv ** n, ratio ** n)
    elif case is DiniCase.RIGHT_END:
        if side is not Side.LEFT:
            raise CaseMismatch("x = 1/(p-1) only has a left side")
        for m in range(1, count + 1):
            y = pi_word(p, "1" * m)
            add(m, y, (pv - 1) / pv * ratio ** (m + 1))
    elif case is DiniCase.INFINITE or (case is DiniCase.FINITE and kind == "a" and side is Side.LEFT):
        if side is not Side.LEFT:
            raise CaseMismatch("the blow-up witnesses of this case approach from the left")
        _left_truncations(sample, kind, p, q, x, count, N, add)
    else:  # finite expansion
        seq = greedy_digits(p, x, N, detect_period=True).sequence
        n = seq.last_one
        if kind == "b" and side is Side.RIGHT:
            j = n + 1
            while len(sample.points) < count:
                word = seq.prefix + "0" * (j - 1 - len(seq.prefix)) + "1"
                if admissible_in_base(p, word, Kind.GREEDY):
                    add(j, pi_word(p, word), ratio ** j)
                j += 1
                if j > n + 64 * count:
                    raise InadmissiblePrefix("not enough admissible right witnesses")
        else:
            sample.construction = Construction.NAIVE
            magnitude = jump_magnitude(p, q, n)
            sign = -1 if side is Side.LEFT else 1
            for j in range(n + 1, n + 1 + count):
                y = x + sign / pv ** j
                # the jump over the offset dominates the quotient
                add(j, y, magnitude * pv ** j)
    return sample


def _left_truncations(sample, kind, p, q, x, count, N, add):
    pv, qv = p.value, q.value
    ratio = pv / qv
    if kind == "b":
        digits = greedy_digits(p, x, N).digits
        ones = [i + 1 for i, d in enumerate(digits) if d == "1"]
        for n in ones[:count]:
            add(n, pi_word(p, digits[:n - 1]), (pv - 1) / pv * ratio ** n)
        return
    slow = slow_alpha(q)
    alpha = alpha_one(p)
    digits = quasi_greedy_digits(p, x, N).digits
    ones = [i + 1 for i, d in enumerate(digits) if d == "1"]
    factor = (pv - 1) / qv * (1 - pi_eval(q, slow))
    used = 0
    for n in ones:
        cand = slow.cons(digits[:n - 1] + "0")
        if isinstance(alpha, DigitSeq) and not is_admissible(cand, alpha, Kind.QUASI_GREEDY):
            continue
        add(n, pi_eval(p, cand), ratio ** (n - 1) * factor)
        used += 1
        if used == count:
            return
    if used < 2:
        raise InadmissiblePrefix("too few admissible left witnesses")


def crossing_index(values, threshold):
    """First 1-based index with value above ``threshold``, else None."""
    for i, v in enumerate(values, 1):
        if decide(v, threshold) is Ordering.GREATER:
            return i
    return None


# ---------------------------------------------------------------------------
# Hoelder exponent fits
# ---------------------------------------------------------------------------

@dataclass
class HolderFit:
    exponent: float
    intercept: float
    pair_count: int
    residual: float
    bins: list = field(default_factory=list)      # (log2 |dx| bin, log2 max |df|)


def _log2(v):
    v = Fraction(v)
    if v <= 0:
        raise ValueError("log of a nonpositive value")
    # shift to keep floats in range for very small dyadic-scale values
    e = v.numerator.bit_length() - v.denominator.bit_length()
    return e + math.log2(float(v / Fraction(2) ** e))


def _random_seq(rng, length, periodic=True):
    w = "".join(rng.choice("01") for _ in range(length))
    if periodic and rng.random() < 0.5:
        per = "".join(rng.choice("01") for _ in range(rng.randint(1, 4)))
        return DigitSeq(w, per)
    return DigitSeq.finite(w)


SCALE_RANGE = (3, 60)   # dyadic scales 2^-k probed by the Hoelder fits


def _cylinder_pairs(p, rng, count):
    """Sequence pairs w0^inf, w1^inf with |dx| = p^-|w|/(p-1) inside the probed scales."""
    lp = math.log2(float(_rational(as_base(p).value)))
    top = max(1, int(SCALE_RANGE[1] / lp) - 1)
    out = []
    for _ in range(count):
        n = rng.randint(1, top)
        w = "".join(rng.choice("01") for _ in range(n))
        out.append((DigitSeq(w + "0", "0"), DigitSeq(w + "1", "1")))
    return out


def _gap_pairs(p, rng, count):
    """Pairs (left end, left end + 2^-k) inside one gap.

    Scales are swept in turn.  The slope on level-m gaps is monotone in m,
    so for each scale the shallowest and the deepest gap long enough for
    the offset bound the envelope; one random level in between is added.
    """
    pv = float(_rational(as_base(p).value))
    lo_k, hi_k = SCALE_RANGE
    out = []
    sweep = itertools.cycle(range(lo_k, hi_k + 1))
    while len(out) < count:
        k = next(sweep)
        # deepest m with (p-2)/(p^(m+1)(p-1)) >= 2^-k
        deepest = math.floor((k + math.log2((pv - 2) / (pv - 1))) / math.log2(pv) - 1)
        if deepest < 0:
            continue
        for m in {0, deepest, rng.randint(0, deepest)}:
            w = "".join(rng.choice("01") for _ in range(m))
            out.append((w, Fraction(1, 1 << k)))
    return out[:count]


def _staircase_pairs(cfg, rng, count, source):
    pairs = []
    want_cyl = count if source == "cylinder" else 0 if source == "gap" else count // 2
    for c, d in _cylinder_pairs(cfg.p, rng, want_cyl):
        x, y = pi_eval(cfg.p, c), pi_eval(cfg.p, d)
        pairs.append((x, y, staircase_eval(cfg, x), staircase_eval(cfg, y)))
    for w, h in _gap_pairs(cfg.p, rng, count - want_cyl):
        g = gap_of(cfg.p, w)
        if decide(g.right - g.left, h) is Ordering.LESS:
            continue
        fl, fr = gap_images(cfg, g)
        t = h / (g.right - g.left)
        pairs.append((g.left, g.left + h, fl, fl + (fr - fl) * t))
    return pairs


def _sequence_pairs(p, q, rng, count):
    pairs = []
    for c, d in _cylinder_pairs(p, rng, count):
        pairs.append((pi_eval(p, c), pi_eval(p, d), pi_eval(q, c), pi_eval(q, d)))
    return pairs


def holder_fit(f_tag, p, q, pair_source="mixed", count=400, seed=0):
    """Least-squares slope of log2 max|df| against log2 |dx| over dyadic |dx| bins.

    ``f_tag`` is ``staircase`` (B_{p,q}), ``basechange`` (b_{p,q} on J_p) or
    ``pi`` (pi_q against pi_p on common sequences).  ``pair_source`` is
    ``cylinder``, ``gap`` or ``mixed``.  Taking the largest |df| in each bin
    estimates the Hoelder envelope rather than an average behaviour.
    """
    if count < 16:
        raise ValueError("count must be at least 16")
    rng = random.Random(seed)
    p, q = as_base(p), as_base(q)
    if f_tag == "staircase":
        pairs = _staircase_pairs(StaircaseConfig(p, q), rng, count, pair_source)
    elif f_tag == "pi":
        pairs = _sequence_pairs(p, q, rng, count)
    elif f_tag == "basechange":
        pairs = []
        for c, d in _cylinder_pairs(p, rng, count):
            x, y = pi_eval(p, c), pi_eval(p, d)
            pairs.append((x, y, b_pq(p, q, x).value, b_pq(p, q, y).value))
    else:
        raise ValueError(f"unknown function tag {f_tag!r}")
    envelope = {}
    used = 0
    for x, y, fx, fy in pairs:
        dx, df = abs(x - y), abs(fx - fy)
        noise = dx.radius + df.radius
        if decide(dx.center if dx.exact else dx.lo, 10 * noise) is not Ordering.GREATER:
            continue
        if decide(df if df.exact else ApproxReal(df.lo), 0) is not Ordering.GREATER:
            continue
        lx = _log2(dx.center)
        ly = _log2(df.center)
        b = math.floor(lx)
        used += 1
        if b not in envelope or ly - lx > envelope[b][1] - envelope[b][0]:
            envelope[b] = (lx, ly)
    if len(envelope) < 2:
        raise DegeneratePairs("fewer than two distinct |dx| scales among the sampled pairs")
    pts = sorted(envelope.values())
    xs, ys = [a for a, _ in pts], [b for _, b in pts]
    slope, intercept = statistics.linear_regression(xs, ys)
    resid = math.sqrt(sum((y - (slope * x + intercept)) ** 2 for x, y in pts) / len(pts))
    return HolderFit(slope, intercept, used, resid, [(math.floor(a), b) for a, b in pts])


# ---------------------------------------------------------------------------
# box-counting dimension
# ---------------------------------------------------------------------------

@dataclass
class DimensionEstimate:
    levels: list          # (m, N(m), eps(m))
    slope: float
    residual: float


def box_dimension(p, max_level):
    """Regression of log2 N(m) = m on -log2 eps(m), eps(m) = 1/(p^m (p-1)), m = 2..M."""
    p = as_base(p)
    if p.regime is not Regime.LARGE:
        raise DomainError("box dimension of J_p is probed for p > 2")
    if max_level < 3:
        raise ValueError("max_level must be at least 3 so two levels enter the fit")
    pv = p.value
    levels = [(m, 1 << m, 1 / (pv ** m * (pv - 1))) for m in range(max_level + 1)]
    log_p = _log2(pv.center if not pv.exact else _rational(pv))
    log_pm1 = _log2(_rational(pv - 1))
    fit = [(m * log_p + log_pm1, float(m)) for m, _, _ in levels if m >= 2]
    xs, ys = zip(*fit)
    slope, intercept = statistics.linear_regression(xs, ys)
    resid = math.sqrt(sum((y - (slope * x + intercept)) ** 2 for x, y in fit) / len(fit))
    return DimensionEstimate(levels, slope, resid)


def _rational(v):
    v = as_real(v)
    if v.exact and isinstance(v.value, Fraction):
        return v.value
    lo, hi = v.interval(128)
    return (lo + hi) / 2


# ---------------------------------------------------------------------------
# bi-Hoelder bounds of the unique expansion
# ---------------------------------------------------------------------------

@dataclass
class BiHolderReport:
    ok: bool
    pair_count: int
    worst_lower: float     # min over pairs of rho / (c1 |dx|^(1/log2 p)), minus 1
    worst_upper: float     # min over pairs of (c2 |dx|^(1/log2 p)) / rho, minus 1
    failures: list = field(default_factory=list)


def bi_holder_constants(p):
    """c1 = ((p-1)/p)^(1/log2 p) and c2 = ((p-1)/(p-2))^(1/log2 p) as floats."""
    pv = _rational(as_base(p).value)
    e = 1 / math.log2(pv)
    return ((pv - 1) / pv) ** e, ((pv - 1) / (pv - 2)) ** e


def bi_holder_check(p, pairs):
    """Check c1 |x-y|^(1/log2 p) <= rho(c, d) <= c2 |x-y|^(1/log2 p) for x = pi_p(c), y = pi_p(d).

    Raising both sides to the power log2 p turns rho = 2^-n into p^-n, so the
    test runs exactly: (p-1)/p |x-y| <= p^-n <= (p-1)/(p-2) |x-y|.
    """
    p = as_base(p)
    if p.regime is not Regime.LARGE:
        raise DomainError("the bi-Hoelder bounds need p > 2")
    pv = p.value
    e = 1 / math.log2(_rational(pv))
    worst_lo = worst_hi = math.inf
    failures = []
    count = 0
    for c, d in pairs:
        count += 1
        n = first_difference(c, d)
        if n is None:
            continue
        dx = abs(pi_eval(p, c) - pi_eval(p, d))
        target = 1 / pv ** n
        low = (pv - 1) / pv * dx
        high = (pv - 1) / (pv - 2) * dx
        ok_lo = decide(low, target) in (Ordering.LESS, Ordering.EQUAL)
        ok_hi = decide(target, high) in (Ordering.LESS, Ordering.EQUAL)
        if not (ok_lo and ok_hi):
            failures.append((c, d))
        r_lo = float(_rational(target / low)) ** e - 1
        r_hi = float(_rational(high / target)) ** e - 1
        worst_lo, worst_hi = min(worst_lo, r_lo), min(worst_hi, r_hi)
    return BiHolderReport(not failures, count, worst_lo, worst_hi, failures)


def random_pairs(rng, count, max_len=24):
    """Pairs of distinct eventually periodic sequences, often sharing long prefixes."""
    out = []
    while len(out) < count:
        k = rng.randint(0, max_len)
        w = "".join(rng.choice("01") for _ in range(k))
        c = _random_seq(rng, rng.randint(0, 8)).cons(w)
        d = _random_seq(rng, rng.randint(0, 8)).cons(w)
        if c != d:
            out.append((c, d))
    return out


def random_word_pairs(rng, count, max_len=24, p=None):
    """Pairs (u0^inf, v0^inf) of distinct finite words sharing a random prefix.

    With ``p`` <= 2 given, only greedy-admissible words are kept.
    """
    out = []
    while len(out) < count:
        k = rng.randint(0, max_len)
        w = "".join(rng.choice("01") for _ in range(k))
        u = w + "".join(rng.choice("01") for _ in range(rng.randint(1, 8)))
        v = w + "".join(rng.choice("01") for _ in range(rng.randint(1, 8)))
        c, d = DigitSeq.finite(u), DigitSeq.finite(v)
        if c == d:
            continue
        if p is not None and not (admissible_in_base(p, u) and admissible_in_base(p, v)):
            continue
        out.append((c, d))
    return out


# ---------------------------------------------------------------------------
# accumulation points of J_p
# ---------------------------------------------------------------------------

@dataclass
class AccumulationProbe:
    sequence: DigitSeq
    right_isolated: bool
    probes: list        # (point, verdict status)


def right_accumulation_probe(p, seq, count=8, depth=64):
    """Probe J_p just to the right of pi_p(seq), p > 2.

    If seq ends in 1^inf the whole stretch of length separation_bound to the
    right lies in a gap.  Otherwise x_n = pi_p(seq_1..seq_(n-1) 1 0^inf) at
    the zero digits seq_n = 0 are points of J_p that decrease to x.
    """
    p = as_base(p)
    if p.regime is not Regime.LARGE:
        raise DomainError("accumulation probes need p > 2")
    seq = as_seq(seq)
    x = pi_eval(p, seq)
    probes = []
    if seq.period == "1":
        n = len(seq.prefix)
        bound = separation_bound(p, n + 1)
        for k in range(1, count + 1):
            y = x + bound / (1 << k)
            v = membership(p, y, depth)
            probes.append((y, v.status))
        isolated = all(s is Membership.OUTSIDE_IN_GAP for _, s in probes)
        return AccumulationProbe(seq, isolated, probes)
    horizon = len(seq.prefix) + len(seq.period) * (count + 1)
    for i in range(1, horizon + 1):
        if seq.digit(i) == 0:
            y = pi_word(p, seq.take(i - 1) + "1")
            v = membership(p, y, depth, detect_cycles=True)
            probes.append((y, v.status))
            if len(probes) == count:
                break
    return AccumulationProbe(seq, False, probes)


__all__ = [
    "Side", "Construction", "DiniCase", "DiniSample", "dini_witness_quotients", "slow_alpha",
    "crossing_index", "HolderFit", "holder_fit", "DimensionEstimate", "box_dimension",
    "BiHolderReport", "bi_holder_constants", "bi_holder_check", "random_pairs", "random_word_pairs",
    "AccumulationProbe", "right_accumulation_probe",
]
