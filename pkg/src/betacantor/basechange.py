"""Base-change maps b_{p,q} = pi_q o b_p and a_{p,q} = pi_q o a_p, jumps and witnesses."""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass

from .errors import AlphaTooShort, DomainError, NotFiniteExpansion, WitnessNotFound
from .evaluation import pi_eval, pi_prefix, pi_word, tail_bound
from .expansions import (
    Kind,
    alpha_one,
    greedy_digits,
    is_admissible,
    quasi_greedy_digits,
)
from .precision import (
    DEFAULT_CAP,
    GOLDEN_RATIO,
    ApproxReal,
    Base,
    Ordering,
    Regime,
    as_base,
    as_real,
    decide,
)
from .sequences import DigitSeq


class Monotonicity(enum.Enum):
    INCREASING = "increasing"
    NONDECREASING = "nondecreasing"
    NOWHERE_MONOTONE = "nowhere_monotone"


def _resolved(a, b, cap=DEFAULT_CAP):
    o = decide(a, b, cap)
    if o is Ordering.UNRESOLVED:
        raise DomainError("comparison of bases unresolved at the precision cap")
    return o


class BasePair:
    """An ordered pair of distinct bases with the monotonicity class of each map."""

    __slots__ = ("p", "q")

    def __init__(self, p, q):
        self.p, self.q = as_base(p), as_base(q)
        if _resolved(self.p.value, self.q.value) is Ordering.EQUAL:
            raise DomainError("the pair needs p != q")

    @property
    def b_class(self):
        p, q = self.p, self.q
        top = ApproxReal(2) if p.regime is Regime.LARGE else p.value
        o = _resolved(q.value, top)
        if o is Ordering.GREATER:
            return Monotonicity.INCREASING
        if o is Ordering.EQUAL:
            return Monotonicity.NONDECREASING
        return Monotonicity.NOWHERE_MONOTONE

    @property
    def a_class(self):
        if self.p.regime is Regime.LARGE:
            raise DomainError("a_{p,q} is defined for p <= 2")
        o = _resolved(self.q.value, self.p.value)
        return Monotonicity.INCREASING if o is Ordering.GREATER else Monotonicity.NOWHERE_MONOTONE

    def __repr__(self):
        return f"BasePair({self.p}, {self.q})"


# ---------------------------------------------------------------------------
# values
# ---------------------------------------------------------------------------

@dataclass
class ChangeValue:
    """pi_q of the first N digits plus the bound on what the dropped digits add."""

    value: ApproxReal
    truncation: ApproxReal
    digits: str
    sequence: DigitSeq | None

    @property
    def complete(self):
        return self.sequence is not None

    def enclosure(self):
        v = self.value
        lo = v.lo
        hi = (v + self.truncation).hi
        return lo, hi

    def __str__(self):
        return str(self.value)


def _change(report, q, N):
    q = as_base(q)
    if report.sequence is not None:
        return ChangeValue(pi_eval(q, report.sequence), ApproxReal(0), report.digits, report.sequence)
    if not report.resolved:
        N = len(report.digits)
    return ChangeValue(pi_word(q, report.digits), tail_bound(q, N), report.digits, None)


def b_pq(p, q, x, N=64, **kw):
    """b_{p,q}(x) from the first N greedy base-p digits of x.

    When the greedy recursion proves the expansion eventually periodic the
    value is the exact image and the truncation is 0.
    """
    report = greedy_digits(p, x, N, detect_period=True, **kw)
    return _change(report, q, N)


def a_pq(p, q, x, N=64, **kw):
    """a_{p,q}(x) from the first N quasi-greedy base-p digits; p <= 2."""
    p = as_base(p)
    if p.regime is Regime.LARGE:
        raise DomainError("a_{p,q} is defined for 1 < p <= 2")
    report = quasi_greedy_digits(p, x, N, detect_period=True, **kw)
    return _change(report, q, N)


def pi_alpha(q, alpha):
    """pi_q(a_p(1)); an enclosure when only a prefix of a_p(1) is known."""
    if isinstance(alpha, DigitSeq):
        return pi_eval(q, alpha)
    return pi_prefix(as_base(q), alpha)


# ---------------------------------------------------------------------------
# jumps
# ---------------------------------------------------------------------------

@dataclass
class JumpRecord:
    """One-sided jump at a point with finite greedy expansion (last 1 at index n).

    ``magnitude`` is q^-n (1 - pi_q(a_p(1))).  ``limit`` is the one-sided limit
    of the map on ``side``; ``value`` is the map at x.
    """

    x: ApproxReal
    n: int
    magnitude: ApproxReal
    value: ApproxReal
    limit: ApproxReal
    side: str


def _last_one(p, x, N):
    report = greedy_digits(p, x, N, detect_period=True)
    seq = report.sequence
    if seq is None or not seq.is_finite:
        raise NotFiniteExpansion(f"greedy expansion of {as_real(x)} is not finite within {N} digits")
    return seq


def jump_magnitude(p, q, n):
    p, q = as_base(p), as_base(q)
    if p.regime is Regime.LARGE:
        raise DomainError("jumps of the base-change maps occur for p <= 2")
    alpha = alpha_one(p)
    return (1 - pi_alpha(q, alpha)) / q.value ** n


def jump_left_b(p, q, x, N=256):
    """b_{p,q}(x) minus its left limit at a point with finite greedy expansion."""
    p, q = as_base(p), as_base(q)
    seq = _last_one(p, x, N)
    n = seq.last_one
    magnitude = jump_magnitude(p, q, n)
    value = pi_eval(q, seq)
    return JumpRecord(as_real(x), n, magnitude, value, value - magnitude, "left")


def jump_right_a(p, q, x, N=256):
    """Right limit of a_{p,q} minus a_{p,q}(x) at a point with finite greedy expansion."""
    p, q = as_base(p), as_base(q)
    seq = _last_one(p, x, N)
    n = seq.last_one
    magnitude = jump_magnitude(p, q, n)
    value = a_pq(p, q, x, N).value
    return JumpRecord(as_real(x), n, magnitude, value, value + magnitude, "right")


# ---------------------------------------------------------------------------
# nowhere-monotonicity witnesses
# ---------------------------------------------------------------------------

@dataclass
class Witness:
    """Three points x < y < z whose images have the middle one strictly largest."""

    x: ApproxReal
    y: ApproxReal
    z: ApproxReal
    fx: ApproxReal
    fy: ApproxReal
    fz: ApproxReal
    sequences: tuple
    anchor: str
    r: object = None
    m: int | None = None

    def as_tuple(self):
        return self.x, self.y, self.z


def _alpha_p(p):
    return None if p.regime is Regime.LARGE else alpha_one(p, 128)


def _admissible(p, alpha, seq, kind):
    if alpha is None:
        return True
    try:
        return is_admissible(seq, alpha, kind)
    except AlphaTooShort:
        return False


def _cylinder(p, w):
    lo = pi_word(p, w)
    hi = lo + 1 / (p.value ** len(w) * (p.value - 1))
    return lo, hi


def _inside(a, b, lo, hi, cap):
    return decide(a, lo, cap) in (Ordering.GREATER, Ordering.EQUAL) and \
        decide(b, hi, cap) in (Ordering.LESS, Ordering.EQUAL)


def _meets(a, b, lo, hi, cap):
    return decide(b, lo, cap) is not Ordering.LESS and decide(a, hi, cap) is not Ordering.GREATER


def _anchor_search(p, lo, hi, accept, max_depth, cap):
    """Breadth-first search for words w whose cylinder sits inside [lo, hi].

    Only words whose cylinder meets the interval are expanded; ``accept(w)``
    performs the admissibility checks of the construction.
    """
    frontier = deque([""])
    depth = 0
    while frontier and depth <= max_depth:
        nxt = deque()
        for w in frontier:
            a, b = _cylinder(p, w)
            if _inside(a, b, lo, hi, cap) and accept(w):
                return w
            for d in "01":
                u = w + d
                a, b = _cylinder(p, u)
                if _meets(a, b, lo, hi, cap):
                    nxt.append(u)
        frontier = nxt
        depth += 1
    return None


def _strictly_peaked(pts, imgs, cap):
    x, y, z = pts
    fx, fy, fz = imgs
    ordered = decide(x, y, cap) is Ordering.LESS and decide(y, z, cap) is Ordering.LESS
    return ordered and decide(fy, fx, cap) is Ordering.GREATER and decide(fy, fz, cap) is Ordering.GREATER


def _default_r(p, q):
    top_real = ApproxReal(2) if p.regime is Regime.LARGE else p.value
    phi = ApproxReal(GOLDEN_RATIO)
    if decide(q.value, phi) is Ordering.LESS and decide(phi, top_real) is Ordering.LESS:
        return Base(phi)
    return Base((q.value + top_real) / 2)


def _truncated_alpha(q, alpha):
    """Shortest prefix alpha_1..alpha_L with pi_q(prefix) > 1, as a finite sequence."""
    for L in range(1, len(alpha) + 1):
        if alpha[L - 1] == "1" and decide(pi_word(q, alpha[:L]), 1) is Ordering.GREATER:
            return DigitSeq.finite(alpha[:L])
    raise WitnessNotFound("known prefix of a_r(1) never pushes pi_q above 1")


def monotonicity_witness_b(p, q, interval, r=None, *, max_depth=200, cap=DEFAULT_CAP):
    """Points x < y < z in ``interval`` with b_{p,q}(y) above both neighbours.

    Uses the sequences w0^inf, w0 alpha and w10^inf where alpha = a_r(1) for
    some q < r < min(p, 2); pi_q(alpha) > 1 makes the middle image largest.
    Every inequality is re-checked before returning.
    """
    p, q = as_base(p), as_base(q)
    pair = BasePair(p, q)
    if pair.b_class is not Monotonicity.NOWHERE_MONOTONE:
        raise DomainError(f"b_(p,q) is {pair.b_class.value} for {pair}; no witness exists")
    r = _default_r(p, q) if r is None else as_base(r)
    top = ApproxReal(2) if p.regime is Regime.LARGE else p.value
    if not (decide(q.value, r.value) is Ordering.LESS and decide(r.value, top) is Ordering.LESS):
        raise DomainError("r must satisfy q < r < min(p, 2)")
    alpha = alpha_one(r, 64)
    tip = alpha if isinstance(alpha, DigitSeq) else _truncated_alpha(q, alpha)
    alpha_p = _alpha_p(p)
    lo, hi = (as_real(v) for v in interval)

    def triple(w):
        return DigitSeq.finite(w + "0"), tip.cons(w + "0"), DigitSeq.finite(w + "1")

    def accept(w):
        s = triple(w)
        return _admissible(p, alpha_p, s[1], Kind.GREEDY) and _admissible(p, alpha_p, s[2], Kind.GREEDY)

    w = _anchor_search(p, lo, hi, accept, max_depth, cap)
    if w is None:
        raise WitnessNotFound(f"no admissible anchor inside the interval within depth {max_depth}")
    seqs = triple(w)
    pts = [pi_eval(p, s) for s in seqs]
    imgs = [pi_eval(q, s) for s in seqs]
    if not _strictly_peaked(pts, imgs, cap):
        raise WitnessNotFound("constructed triple failed verification")
    return Witness(*pts, *imgs, seqs, w, r=r)


def witness_m(p, q, alpha=None):
    """Least m with 10^m alpha < alpha and (1 - q^-m) pi_q(alpha) > 1, alpha = a_p(1)."""
    p, q = as_base(p), as_base(q)
    alpha = alpha_one(p) if alpha is None else alpha
    if not isinstance(alpha, DigitSeq):
        raise WitnessNotFound("a_p(1) is not known exactly; the witness needs its full sequence")
    pa = pi_eval(q, alpha)
    if decide(pa, 1) is not Ordering.GREATER:
        raise DomainError("pi_q(a_p(1)) must exceed 1, which needs q < p")
    m = 1
    while True:
        below = alpha.cons("1" + "0" * m) < alpha
        if below and decide((1 - 1 / q.value ** m) * pa, 1) is Ordering.GREATER:
            return m
        m += 1
        if m > 4096:
            raise WitnessNotFound("no m found below 4096")


def monotonicity_witness_a(p, q, interval, m=None, *, max_depth=200, cap=DEFAULT_CAP):
    """Points x < y < z with a_{p,q}(y) above both neighbours, for q < p <= 2.

    Sequences w000 alpha, w00 alpha and w010^m alpha with alpha = a_p(1);
    ``m`` defaults to the least integer satisfying both defining inequalities.
    """
    p, q = as_base(p), as_base(q)
    pair = BasePair(p, q)
    if pair.a_class is not Monotonicity.NOWHERE_MONOTONE:
        raise DomainError(f"a_(p,q) is increasing for {pair}; no witness exists")
    alpha = alpha_one(p)
    m = witness_m(p, q, alpha) if m is None else m
    lo, hi = (as_real(v) for v in interval)

    def triple(w):
        return alpha.cons(w + "000"), alpha.cons(w + "00"), alpha.cons(w + "01" + "0" * m)

    def accept(w):
        return all(_admissible(p, alpha, s, Kind.QUASI_GREEDY) for s in triple(w))

    w = _anchor_search(p, lo, hi, accept, max_depth, cap)
    if w is None:
        raise WitnessNotFound(f"no admissible anchor inside the interval within depth {max_depth}")
    seqs = triple(w)
    pts = [pi_eval(p, s) for s in seqs]
    imgs = [pi_eval(q, s) for s in seqs]
    if not _strictly_peaked(pts, imgs, cap):
        raise WitnessNotFound("constructed triple failed verification")
    return Witness(*pts, *imgs, seqs, w, m=m)


__all__ = [
    "Monotonicity", "BasePair", "ChangeValue", "b_pq", "a_pq", "pi_eval", "pi_alpha",
    "JumpRecord", "jump_magnitude", "jump_left_b", "jump_right_a", "Witness", "monotonicity_witness_b",
    "monotonicity_witness_a", "witness_m",
]
