"""The acceptance suite: one check per quantitative claim, each returning a verdict line.

Shared by ``betacantor report --selftest`` and ``tests/test_acceptance.py``.
"""
from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from . import analysis, basechange, cantor, expansions
from .evaluation import pi_eval, pi_word
from .expansions import Kind
from .precision import GOLDEN_RATIO, ApproxReal, Ordering, as_base, decide
from .sequences import DigitSeq, first_difference, rho

TOL_ARC = Fraction(1, 10 ** 9)
TOL_INTEGRAL = Fraction(1, 10 ** 9)
DIVERGENCE_FLOOR = -10 ** 4
ROUNDTRIP_SAMPLES = 1000
ROUNDTRIP_DIGITS = 64
SANDWICH_PAIRS = 10 ** 4
JUMP_K = range(4, 13)
JUMP_SLACK = 10
WITNESS_INTERVALS = 100
DINI_THRESHOLD = 10 ** 3
DIM_TOL = 0.02
MONOTONE_PAIRS = 10 ** 3
BIHOLDER_PAIRS = 10 ** 3
VARIATION_TARGET = 10 ** 3
VARIATION_MAX_N = 60
SEED = 20240601

Q = Fraction(3, 2)


@dataclass
class Verdict:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number:2d} {self.title}: {self.detail} ({self.seconds:.2f}s)"


def _timed(fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - t0


def _fmt(v):
    return f"{float(v):.6g}"


# ---------------------------------------------------------------------------

def arc_length():
    worst = []
    ok = True
    for p in (3, 4):
        seq = [cantor.arc_length_polygonal(p, n) for n in range(1, 31)]
        limit = cantor.arc_length_limit(p)
        for a, b in zip(seq, seq[1:]):
            if decide(a, b) is Ordering.GREATER:
                ok = False
        gap = abs(seq[-1] - limit)
        close = decide(gap, TOL_ARC) is Ordering.LESS
        ok = ok and close
        worst.append(f"p={p}: |L_30 - {limit.value}| = {_fmt(gap.center)}")
    return ok, "; ".join(worst) + " (tolerance 1e-9)"


def gap_integral_trichotomy():
    conv = cantor.total_gap_integral(cantor.StaircaseConfig(4, 3), 60)
    c_ok = decide(abs(conv.last - Fraction(1, 2)), TOL_INTEGRAL) is Ordering.LESS
    zero = cantor.total_gap_integral(cantor.StaircaseConfig(4, 2), 60)
    z_ok = all(s.exact and s.value == 0 for s in zero.partial_sums)
    div = cantor.total_gap_integral(cantor.StaircaseConfig(4, Q), 50)
    d_ok = decide(div.last, DIVERGENCE_FLOOR) is Ordering.LESS
    tags = conv.trend is cantor.IntegralTrend.CONVERGES and zero.trend is cantor.IntegralTrend.ZERO \
        and div.trend is cantor.IntegralTrend.DIVERGES
    detail = (f"q=3 sum_60={_fmt(conv.last.center)}, q=2 all zero={z_ok}, "
              f"q=1.5 sum_50={_fmt(div.last.center)}")
    return c_ok and z_ok and d_ok and tags, detail


def slope_length_identity():
    bad = []
    for p, q in ((3, 4), (5, 3), (4, 2)):
        cfg = cantor.StaircaseConfig(p, q)
        for m in range(21):
            lhs = cantor.gap_derivative(cfg, m) * cantor.gap_length(p, m)
            rhs = cantor.gap_integral(cfg, m)
            if not (lhs.exact and rhs.exact and lhs.value == rhs.value):
                bad.append((p, q, m))
    return not bad, f"{63 - len(bad)}/63 exact identities" + (f", failures {bad[:3]}" if bad else "")


def _sample_x(p, rng, kind):
    """A random rational point where the expansion of ``kind`` exists."""
    if p.large:
        # points of the Cantor set: images of random eventually periodic sequences
        while True:
            seq = _random_periodic(rng, 12)
            if kind is Kind.QUASI_GREEDY and seq.is_finite:
                continue
            return pi_eval(p, seq).value
    top = p.limit().value
    if not isinstance(top, Fraction):
        top = Fraction(16180, 10000)       # a rational just below 1/(phi-1)
    den = rng.randint(1, 10 ** 6)
    return top * Fraction(rng.randint(0, den), den)


def _roundtrip_runs(rng):
    runs = []
    for p_text in ("3/2", "2", "phi", "3"):
        p = as_base(p_text)
        for kind in (Kind.GREEDY, Kind.QUASI_GREEDY):
            for _ in range(ROUNDTRIP_SAMPLES):
                x = _sample_x(p, rng, kind)
                report = expansions.expand(p, x, ROUNDTRIP_DIGITS, kind)
                runs.append((p, kind, x, report.digits))
    return runs


_ROUNDTRIP_CACHE = {}


def _roundtrip_data():
    if "runs" not in _ROUNDTRIP_CACHE:
        t0 = time.perf_counter()
        _ROUNDTRIP_CACHE["runs"] = _roundtrip_runs(random.Random(SEED))
        _ROUNDTRIP_CACHE["seconds"] = time.perf_counter() - t0
    return _ROUNDTRIP_CACHE["runs"], _ROUNDTRIP_CACHE["seconds"]


def roundtrip():
    t0 = time.perf_counter()
    _ROUNDTRIP_CACHE.clear()
    runs, _ = _roundtrip_data()
    worst = 0.0
    bad = 0
    for p, kind, x, digits in runs:
        pv = p.value
        err = abs(pi_word(p, digits) - x)
        bound = pv / (pv ** ROUNDTRIP_DIGITS * (pv - 1))
        if decide(err, bound) is Ordering.GREATER:
            bad += 1
        worst = max(worst, float((err / bound).center))
    seconds = time.perf_counter() - t0
    ok = bad == 0 and seconds < 5
    return ok, f"{len(runs) - bad}/{len(runs)} within p^-64 p/(p-1), worst ratio {worst:.3g}, {seconds:.2f}s of 5s"


def parry_conformance():
    runs, _ = _roundtrip_data()
    bad = 0
    for p, kind, _, digits in runs:
        for n in (8, 16, 32, ROUNDTRIP_DIGITS):
            if not expansions.admissible_in_base(p, digits[:n], kind):
                bad += 1
    phi = as_base("phi")
    alpha = expansions.alpha_one(phi)
    mismatches = []
    counts = []
    for n in range(1, 13):
        words = ["".join(b) for b in itertools.product("01", repeat=n)]
        by_parry = {w for w in words if expansions.is_admissible(w, alpha, Kind.GREEDY)}
        by_truncation = {w for w in words
                         if expansions.greedy_digits(phi, pi_word(phi, w), n).digits == w}
        c = expansions.count_admissible(phi, n)
        counts.append(c)
        phi_n = ApproxReal(GOLDEN_RATIO) ** n
        if by_parry != by_truncation or c != len(by_parry) or decide(ApproxReal(c), phi_n) is Ordering.LESS:
            mismatches.append(n)
    ok = bad == 0 and not mismatches and counts[2] == 7
    return ok, (f"{bad} inadmissible prefixes; phi counts n=1..12 {counts}; "
                f"set mismatches at {mismatches or 'none'}")


def _random_periodic(rng, k):
    w = "".join(rng.choice("01") for _ in range(rng.randint(0, k)))
    per = "".join(rng.choice("01") for _ in range(rng.randint(1, 5)))
    return DigitSeq(w, per)


def holder_sandwich():
    rng = random.Random(SEED + 6)
    bad = 0
    for _ in range(SANDWICH_PAIRS):
        c, shared = _random_periodic(rng, 10), "".join(rng.choice("01") for _ in range(rng.randint(0, 10)))
        c = c.cons(shared)
        d = _random_periodic(rng, 10).cons(shared)
        n = first_difference(c, d)
        if n is None:
            continue
        diff = abs(pi_eval(3, c).value - pi_eval(3, d).value)
        scale = Fraction(1, 3 ** n)   # rho^(log2 3) with rho = 2^-n
        if not (scale / 2 <= diff <= 3 * scale / 2):
            bad += 1
    top = abs(pi_eval(3, DigitSeq("", "1")).value - pi_eval(3, DigitSeq()).value)
    r = rho(DigitSeq("", "1"), DigitSeq())
    saturated = r == Fraction(1, 2) and top == Fraction(3, 2) * Fraction(1, 3)
    return bad == 0 and saturated, f"{SANDWICH_PAIRS - bad}/{SANDWICH_PAIRS} pairs inside, (1^inf, 0^inf) gives |d pi| = {top} = upper bound: {saturated}"


def jump_formula():
    x = Fraction(1, 2)
    jb = basechange.jump_left_b(2, Q, x)
    ja = basechange.jump_right_a(2, Q, x)
    ok = jb.magnitude.value == Fraction(-2, 3) and jb.limit.value == Fraction(4, 3)
    ok = ok and ja.limit.value == Fraction(2, 3) and (ja.value - ja.limit).value == Fraction(2, 3)
    worst_b = worst_a = 0.0
    left_limit_seq = DigitSeq("0", "1")      # b_2 of points just below 1/2 agree with 01^inf
    right_seq = DigitSeq.finite("1")         # a_2 of points just above 1/2 agree with 10^inf
    for k in JUMP_K:
        h = Fraction(1, 10 ** k)
        y = x - h
        rep = expansions.greedy_digits(2, y, 128)
        n_k = (first_difference(DigitSeq.finite(rep.digits), left_limit_seq) or 129) - 1
        val = basechange.b_pq(2, Q, y, 128)
        tol = JUMP_SLACK * Q ** -n_k
        gap = abs(val.value - jb.limit) + val.truncation
        if decide(gap, tol) is not Ordering.LESS:
            ok = False
        worst_b = max(worst_b, float((gap / tol).center))
        y = x + h
        rep = expansions.quasi_greedy_digits(2, y, 128)
        n_k = (first_difference(DigitSeq.finite(rep.digits), right_seq) or 129) - 1
        val = basechange.a_pq(2, Q, y, 128)
        tol = JUMP_SLACK * Q ** -n_k
        gap = abs(val.value - ja.limit) + val.truncation
        if decide(gap, tol) is not Ordering.LESS:
            ok = False
        worst_a = max(worst_a, float((gap / tol).center))
    return ok, (f"b: value-limit={jb.magnitude.value}, limit={jb.limit.value}; a: value-limit="
                f"{(ja.value - ja.limit).value}; worst gap/tolerance b {worst_b:.3g}, a {worst_a:.3g}")


def _random_subintervals(rng, count, hi=Fraction(1)):
    out = []
    while len(out) < count:
        a, b = sorted(hi * Fraction(rng.randint(0, 10 ** 6), 10 ** 6) for _ in range(2))
        if a < b:
            out.append((a, b))
    return out


def nowhere_monotone():
    rng = random.Random(SEED + 8)
    found_b = found_a = 0
    for lo, hi in _random_subintervals(rng, WITNESS_INTERVALS):
        for fn, tally in ((basechange.monotonicity_witness_b, "b"), (basechange.monotonicity_witness_a, "a")):
            w = fn(2, Q, (lo, hi))
            vals = (w.x, w.y, w.z, w.fx, w.fy, w.fz)
            exact = all(v.exact and isinstance(v.value, Fraction) for v in vals)
            inside = lo <= w.x.value < w.y.value < w.z.value <= hi
            # recompute the images independently of the construction
            mapper = basechange.b_pq if tally == "b" else basechange.a_pq
            f = [mapper(2, Q, v.value, 256).value.value for v in (w.x, w.y, w.z)]
            peaked = f[1] > f[0] and f[1] > f[2]
            if exact and inside and peaked:
                if tally == "b":
                    found_b += 1
                else:
                    found_a += 1
    ok = found_b == WITNESS_INTERVALS and found_a == WITNESS_INTERVALS
    return ok, f"b witnesses {found_b}/{WITNESS_INTERVALS}, a witnesses {found_a}/{WITNESS_INTERVALS}"


def dini_blowup():
    s = analysis.dini_witness_quotients("b", 2, Q, 0, 30)
    exact = all(qv.value == Fraction(4, 3) ** n for n, _, qv in s.points)
    first = analysis.crossing_index(s.quotients, DINI_THRESHOLD)
    predicted = math.ceil(math.log(DINI_THRESHOLD) / math.log(4 / 3))
    crossing_ok = first is not None and abs(first - predicted) <= 1
    d = analysis.dini_witness_quotients("b", 2, Q, Fraction(1, 2), 30, side="left")
    tail = d.quotients[-5:]
    falling = all(decide(b, a) is Ordering.LESS for a, b in zip(tail, tail[1:]))
    below = decide(d.quotients[-1], -DINI_THRESHOLD) is Ordering.LESS
    ok = exact and crossing_ok and falling and below
    return ok, (f"case (a) exact (4/3)^n: {exact}; first index above 1e3: {first} "
                f"(predicted {predicted} +/- 1); case (d) left last quotient {_fmt(d.quotients[-1].center)}")


def box_dimension():
    t0 = time.perf_counter()
    e3 = analysis.box_dimension(3, 40)
    e4 = analysis.box_dimension(4, 40)
    seconds = time.perf_counter() - t0
    t3 = 1 / math.log2(3)
    ok = abs(e3.slope - t3) < DIM_TOL and abs(e4.slope - 0.5) < DIM_TOL and seconds < 1
    return ok, f"p=3 slope {e3.slope:.6f} (target {t3:.6f}), p=4 slope {e4.slope:.6f} (target 0.5)"


def _sorted_pairs(rng, count, hi):
    out = []
    while len(out) < count:
        a, b = sorted(hi * Fraction(rng.randint(0, 10 ** 6), 10 ** 6) for _ in range(2))
        if a < b:
            out.append((a, b))
    return out


def _strictly_increasing_b(p, q, a, b):
    for N in (64, 256, 1024):
        fa, fb = basechange.b_pq(p, q, a, N), basechange.b_pq(p, q, b, N)
        lo_a, hi_a = fa.enclosure()
        lo_b, hi_b = fb.enclosure()
        if lo_b > hi_a:
            return True
        if hi_b < lo_a:
            return False
    return False


def monotone_classes():
    rng = random.Random(SEED + 11)
    # (3, 4): points of J_3 as images of random sequences
    inc34 = 0
    for _ in range(MONOTONE_PAIRS):
        c = d = None
        while c == d:
            c, d = _random_periodic(rng, 12), _random_periodic(rng, 12)
        a, b = pi_eval(3, c).value, pi_eval(3, d).value
        if a > b:
            a, b = b, a
        if _strictly_increasing_b(3, 4, a, b):
            inc34 += 1
    inc = 0
    for a, b in _sorted_pairs(rng, MONOTONE_PAIRS, Fraction(2)):
        if _strictly_increasing_b(Q, Fraction(9, 5), a, b):
            inc += 1
    cfg = cantor.StaircaseConfig(3, 2)
    nondec, ties = 0, 0
    for a, b in _sorted_pairs(rng, MONOTONE_PAIRS, Fraction(1, 2)):
        fa, fb = cantor.staircase_eval(cfg, a), cantor.staircase_eval(cfg, b)
        if fa.exact and fb.exact and fa.value <= fb.value:
            nondec += 1
            if fa.value == fb.value and cantor.locate(3, a).kind is cantor.Where.IN_GAP:
                ties += 1
    violations = 0
    for _ in range(10):
        # neighbourhoods of points of J_3; a random interval could sit inside one gap
        centre = pi_eval(3, _random_periodic(rng, 12)).value
        eps = Fraction(1, 10 ** rng.randint(2, 8))
        w = basechange.monotonicity_witness_b(3, Q, (max(centre - eps, 0), centre + eps))
        f = [basechange.b_pq(3, Q, v.value).value for v in (w.x, w.y, w.z)]
        if decide(f[1], f[0]) is Ordering.GREATER and decide(f[1], f[2]) is Ordering.GREATER:
            violations += 1
    ok = inc34 == MONOTONE_PAIRS and inc == MONOTONE_PAIRS and nondec == MONOTONE_PAIRS \
        and ties >= 1 and violations == 10
    return ok, (f"b_(3,4) increasing {inc34}/{MONOTONE_PAIRS}, b_(1.5,1.8) increasing {inc}/{MONOTONE_PAIRS}, "
                f"B_(3,2) nondecreasing {nondec}/{MONOTONE_PAIRS} with {ties} gap ties, "
                f"(3,1.5) violations {violations}/10")


def bi_holder():
    rng = random.Random(SEED + 12)
    report = analysis.bi_holder_check(4, analysis.random_word_pairs(rng, BIHOLDER_PAIRS))
    c1, c2 = analysis.bi_holder_constants(4)
    ok = report.ok and report.worst_lower > 0 and report.worst_upper > 0 \
        and abs(c1 - math.sqrt(3 / 4)) < 1e-12 and abs(c2 - math.sqrt(3 / 2)) < 1e-12
    return ok, (f"{report.pair_count - len(report.failures)}/{report.pair_count} pairs inside; worst slack "
                f"lower {report.worst_lower:.3g}, upper {report.worst_upper:.3g}")


def unbounded_variation():
    first = None
    best = None
    for n in range(1, VARIATION_MAX_N + 1):
        v = cantor.variation_lower_bound(3, Q, "phi", 2, n)
        best = v.value
        if first is None and decide(v.value, VARIATION_TARGET) is Ordering.GREATER:
            first = n
    grid = cantor.endpoint_grid(3, 12)
    total = cantor.variation_partition_sum(cantor.StaircaseConfig(3, Q), grid)
    grid_ok = decide(total, 2) is Ordering.GREATER
    ok = first is not None and grid_ok
    return ok, (f"lower bound at n={VARIATION_MAX_N}: {_fmt(best.center)} (needs > 1e3, first n above: "
                f"{first or 'none'}); level-12 partition sum {_fmt(total.center)} > 2: {grid_ok}")


CRITERIA = [
    (1, "arc length limit", arc_length, 1.0),
    (2, "gap-integral trichotomy", gap_integral_trichotomy, 1.0),
    (3, "slope-length-integral identity", slope_length_identity, None),
    (4, "expansion roundtrip", roundtrip, None),
    (5, "Parry conformance", parry_conformance, None),
    (6, "Hoelder sandwich q=3", holder_sandwich, None),
    (7, "jump formula", jump_formula, None),
    (8, "nowhere-monotone witnesses", nowhere_monotone, None),
    (9, "Dini blow-up", dini_blowup, None),
    (10, "box dimension", box_dimension, 1.0),
    (11, "monotone classes", monotone_classes, None),
    (12, "bi-Hoelder bounds p=4", bi_holder, None),
    (13, "unbounded variation", unbounded_variation, None),
]


def run(number):
    for num, title, fn, budget in CRITERIA:
        if num == number:
            ok, detail, seconds = _timed(fn)
            if budget is not None and seconds >= budget:
                ok = False
                detail += f"; runtime {seconds:.2f}s over the {budget:.0f}s budget"
            return Verdict(num, title, ok, detail, seconds)
    raise KeyError(number)


def run_all():
    return [run(num) for num, *_ in CRITERIA]
