"""Greedy and quasi-greedy expansions, Parry admissibility and friends."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import AlphaTooShort, DomainError, InadmissiblePrefix, PrecisionExhausted
from .evaluation import pi_word
from .precision import (
    DEFAULT_CAP,
    DEFAULT_PRECISION,
    ApproxReal,
    Ordering,
    Regime,
    as_base,
    as_real,
    decide,
    exact_sign,
    format_real,
    iv_mul,
    iv_sub,
)
from .sequences import ZEROS, DigitSeq, as_seq


class Kind(enum.Enum):
    GREEDY = "greedy"
    QUASI_GREEDY = "quasigreedy"

    @classmethod
    def of(cls, k):
        if isinstance(k, Kind):
            return k
        key = str(k).lower().replace("-", "").replace("_", "")
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"unknown expansion kind {k!r}")


@dataclass
class ExpansionReport:
    base: object
    input: ApproxReal
    kind: Kind
    digits: str
    tie_events: list = field(default_factory=list)
    resolved: bool = True
    sequence: DigitSeq | None = None  # full eventually periodic expansion, when proven
    _residuals: list = field(default_factory=list, repr=False)

    @property
    def residuals(self):
        """r_n = p^n (x - sum_{i<=n} c_i p^-i) for n = 1..len(digits)."""
        out = []
        for r in self._residuals:
            if isinstance(r, tuple):
                r = Fraction(*r)
            out.append(r if isinstance(r, ApproxReal) else ApproxReal(r))
        return out

    @property
    def finite(self):
        return self.sequence is not None and self.sequence.is_finite


# ---------------------------------------------------------------------------
# the digit recursions
# ---------------------------------------------------------------------------

def _check_domain(p, x, cap):
    if p.exact and x.exact:
        try:
            v, lim = x.value, 1 / (p.value.value - 1)
            if exact_sign(v) < 0 or exact_sign(v - lim) > 0:
                raise DomainError(f"x={format_real(x)} outside [0, 1/(p-1)] for p={p}")
            return
        except TypeError:
            pass
    if decide(x, 0, cap) is Ordering.LESS or decide(x, p.limit(), cap) is Ordering.GREATER:
        raise DomainError(f"x={format_real(x)} outside [0, 1/(p-1)] for p={p}")
    if decide(x, 0, cap) is Ordering.UNRESOLVED or decide(x, p.limit(), cap) is Ordering.UNRESOLVED:
        raise PrecisionExhausted("cannot place x inside [0, 1/(p-1)]")


def _expand_exact(p, x, N, strict, detect_period):
    pv, r = p.value.value, x.value
    large = p.regime is Regime.LARGE
    limit = 1 / (pv - 1) if large else None
    digits, residuals, ties = [], [], []
    seen = {r: 0} if detect_period else None
    sequence = None
    for n in range(1, N + 1):
        t = pv * r
        s = exact_sign(t - 1)
        if s == 0:
            ties.append(n)
        c = 1 if (s > 0 or (s == 0 and not strict)) else 0
        r = t - c if c else t
        if large and (exact_sign(r) < 0 or exact_sign(r - limit) > 0):
            raise DomainError(
                f"x={format_real(x)} is not in J_p for p={p}: residual left [0, 1/(p-1)] at digit {n}")
        digits.append("1" if c else "0")
        residuals.append(r)
        if sequence is None and seen is not None:
            # a repeated residual state proves the whole expansion
            if r in seen:
                i = seen[r]
                word = "".join(digits)
                sequence = DigitSeq(word[:i], word[i:])
            else:
                seen[r] = n
    return "".join(digits), residuals, ties, sequence


def _expand_rational(p, x, N, strict, detect_period):
    """The exact recursion for rational p and x on integers, without gcd per step.

    The residual n/d keeps d = b^k * d0 for p = a/b; residuals are stored as
    (numerator, denominator) pairs and turned into fractions on demand.
    """
    a, b = p.value.value.numerator, p.value.value.denominator
    num, den = x.value.numerator, x.value.denominator
    large = p.regime is Regime.LARGE
    digits, residuals, ties = [], [], []
    seen = {} if detect_period else None
    if seen is not None:
        seen[num if b == 1 else x.value] = 0
    sequence = None
    for n in range(1, N + 1):
        num, den = a * num, b * den
        if num > den:
            c = 1
        elif num == den:
            ties.append(n)
            c = 0 if strict else 1
        else:
            c = 0
        if c:
            num -= den
        if large and (num < 0 or num * (a - b) > den * b):
            raise DomainError(
                f"x={format_real(x)} is not in J_p for p={p}: residual left [0, 1/(p-1)] at digit {n}")
        digits.append("1" if c else "0")
        residuals.append((num, den))
        if sequence is None and seen is not None:
            key = num if b == 1 else Fraction(num, den)
            if key in seen:
                i = seen[key]
                word = "".join(digits)
                sequence = DigitSeq(word[:i], word[i:])
            else:
                seen[key] = n
    return "".join(digits), residuals, ties, sequence


def _expand_interval(p, x, N, strict, cap):
    """Digit recursion in outward-rounded interval arithmetic with restarts."""
    prec = max(p.value.prec, x.prec)
    digits = []
    while True:
        p_iv = p.value.interval(prec)
        r = x.interval(prec)
        ok = True
        for ch in digits:
            r = iv_mul(p_iv, r, prec)
            if ch == "1":
                r = iv_sub(r, (Fraction(1), Fraction(1)), prec)
        while len(digits) < N:
            t = iv_mul(p_iv, r, prec)
            if t[0] > 1 or (t[0] == 1 and not strict and t[1] == 1):
                c = 1
            elif t[1] < 1 or (t[1] == 1 and strict and t[0] == 1):
                c = 0
            elif t[0] >= 1 and not strict:
                c = 1
            elif t[1] <= 1 and strict:
                c = 0
            else:
                ok = False
                break
            digits.append("1" if c else "0")
            r = iv_sub(t, (Fraction(c), Fraction(c)), prec) if c else t
        if ok:
            return "".join(digits), True, prec
        if prec * 2 > cap:
            return "".join(digits), False, prec
        prec *= 2


def _residual_real(p, x, word):
    def fn(prec):
        p_iv = p.value.interval(prec)
        r = x.interval(prec)
        for ch in word:
            r = iv_mul(p_iv, r, prec)
            if ch == "1":
                r = iv_sub(r, (Fraction(1), Fraction(1)), prec)
        return r

    return ApproxReal(fn=fn, prec=max(p.value.prec, x.prec))


def _expand(p, x, N, kind, detect_period, require_full, precision, cap):
    p = as_base(p, precision)
    x = as_real(x, precision)
    if N < 1:
        raise ValueError("N must be at least 1")
    _check_domain(p, x, cap)
    strict = kind is Kind.QUASI_GREEDY
    if p.exact and x.exact and isinstance(p.value.value, Fraction) and isinstance(x.value, Fraction):
        digits, residuals, ties, seq = _expand_rational(p, x, N, strict, detect_period)
        return ExpansionReport(p, x, kind, digits, ties, True, seq, residuals)
    if p.exact and x.exact:
        try:
            digits, residuals, ties, seq = _expand_exact(p, x, N, strict, detect_period)
            return ExpansionReport(p, x, kind, digits, ties, True, seq, residuals)
        except TypeError:
            pass  # incompatible quadratic fields: fall through to intervals
    digits, resolved, _ = _expand_interval(p, x, N, strict, cap)
    if not resolved and require_full:
        raise PrecisionExhausted(f"digit {len(digits) + 1} unresolved at the {cap}-bit cap")
    residuals = [_residual_real(p, x, digits[:n]) for n in range(1, len(digits) + 1)]
    return ExpansionReport(p, x, kind, digits, [], resolved, None, residuals)


def greedy_digits(p, x, N, *, detect_period=False, require_full=False,
                  precision=DEFAULT_PRECISION, cap=DEFAULT_CAP):
    """First ``N`` digits of the greedy expansion b_p(x).

    Digit n is 1 exactly when the partial sum plus p^-n does not exceed x, so
    exact ties go to 1.  With ``detect_period`` the residual states are
    remembered and a repeat yields the whole expansion as ``report.sequence``.
    For p > 2 a point outside J_p raises :class:`DomainError` as soon as the
    residual leaves [0, 1/(p-1)].
    """
    return _expand(p, x, N, Kind.GREEDY, detect_period, require_full, precision, cap)


def quasi_greedy_digits(p, x, N, *, detect_period=False, require_full=False,
                        precision=DEFAULT_PRECISION, cap=DEFAULT_CAP):
    """First ``N`` digits of the quasi-greedy expansion a_p(x) (ties go to 0).

    Defined for 1 < p <= 2.  Larger bases are accepted; there the result is
    the unique expansion when that expansion is infinite, and a point whose
    unique expansion is finite raises :class:`DomainError`.
    """
    return _expand(p, x, N, Kind.QUASI_GREEDY, detect_period, require_full, precision, cap)


def expand(p, x, N, kind=Kind.GREEDY, **kw):
    kind = Kind.of(kind)
    fn = greedy_digits if kind is Kind.GREEDY else quasi_greedy_digits
    return fn(p, x, N, **kw)


# ---------------------------------------------------------------------------
# the quasi-greedy expansion of 1
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def _alpha_exact(pv, N):
    from .precision import Base

    report = quasi_greedy_digits(Base(ApproxReal(pv)), 1, N, detect_period=True)
    return report.sequence if report.sequence is not None else report.digits


def alpha_one(p, N=64, *, precision=DEFAULT_PRECISION, cap=DEFAULT_CAP):
    """a_p(1): a :class:`DigitSeq` when a period is proven, else an N-digit prefix."""
    p = as_base(p, precision)
    if p.regime is Regime.LARGE:
        raise DomainError("a_p(1) is only used for 1 < p <= 2 (1 is outside J_p for p > 2)")
    if p.exact:
        return _alpha_exact(p.value.value, N)
    return quasi_greedy_digits(p, 1, N, cap=cap).digits


def _alpha_take(alpha, n):
    if isinstance(alpha, DigitSeq):
        return alpha.take(n)
    return alpha[:n]


# ---------------------------------------------------------------------------
# Parry admissibility
# ---------------------------------------------------------------------------

def _compare_tail(s, alpha, tail_after):
    """Compare the sequence ``s`` + ``tail_after`` (a DigitSeq) with alpha: -1/0/1."""
    a = _alpha_take(alpha, len(s))
    if len(a) < len(s):
        if s[:len(a)] != a:
            return -1 if s[:len(a)] < a else 1
        raise AlphaTooShort(f"a_p(1) known to {len(a)} digits, comparison needs more")
    if s != a:
        return -1 if s < a else 1
    if isinstance(alpha, DigitSeq):
        rest = alpha.shift(len(s))
        if tail_after == rest:
            return 0
        return -1 if tail_after < rest else 1
    # a prefix-only alpha belongs to an infinite sequence, so 0^inf is below its remainder
    if tail_after == ZEROS:
        return -1
    raise AlphaTooShort("cannot compare an infinite tail with a prefix-only a_p(1)")


def is_admissible(s, alpha, kind=Kind.GREEDY):
    """Parry's lexicographic test.

    Every tail following a 0 digit must be below ``alpha`` (greedy) or at
    most ``alpha`` (quasi-greedy).  A finite word ``w`` is tested as w0^inf.
    ``alpha`` is a :class:`DigitSeq` or a prefix string of an infinite a_p(1).
    """
    kind = Kind.of(kind)
    bound = -1 if kind is Kind.GREEDY else 0
    if isinstance(s, str) and "(" not in s and "." not in s:
        w = s
        for i, ch in enumerate(w):
            if ch == "0" and _compare_tail(w[i + 1:], alpha, ZEROS) > bound:
                return False
        # tails inside the trailing zeros are 0^inf, which is below any alpha starting with 1
        if isinstance(alpha, DigitSeq) and alpha == ZEROS:
            return kind is Kind.QUASI_GREEDY
        return True
    seq = as_seq(s)
    n = len(seq.prefix) + len(seq.period)
    for i in range(1, n + 1):
        if seq.digit(i) == 0:
            tail = seq.shift(i)
            if isinstance(alpha, DigitSeq):
                c = -1 if tail < alpha else (0 if tail == alpha else 1)
            else:
                word = tail.take(len(alpha))
                if word == alpha:
                    raise AlphaTooShort("tail agrees with the known prefix of a_p(1)")
                c = -1 if word < alpha else 1
            if c > bound:
                return False
    return True


def admissible_in_base(p, s, kind=Kind.GREEDY, N=64):
    """Admissibility in base p; every sequence is greedy-admissible for p > 2."""
    p = as_base(p)
    if p.regime is Regime.LARGE:
        return True
    return is_admissible(s, alpha_one(p, max(N, 64)), kind)


# ---------------------------------------------------------------------------
# J_p membership for p > 2
# ---------------------------------------------------------------------------

class Membership(enum.Enum):
    INSIDE = "inside"
    OUTSIDE_IN_GAP = "outside_in_gap"
    UNKNOWN_AT_DEPTH = "unknown_at_depth"


@dataclass
class MembershipVerdict:
    status: Membership
    prefix: str
    depth: int
    sequence: DigitSeq | None = None          # the expansion, when a residual cycle proved it
    endpoint: tuple | None = None             # (anchor word, "left"|"right") for gap endpoints


def membership(p, x, depth=64, *, detect_cycles=False, precision=DEFAULT_PRECISION, cap=DEFAULT_CAP):
    """Digit-forcing recursion for p > 2.

    At each step at most one digit keeps the residual inside [0, 1/(p-1)].
    If neither does, x lies in the gap anchored at the forced prefix.  The
    recursion reports UnknownAtDepth after ``depth`` steps; with
    ``detect_cycles`` an exact residual repeat is reported as Inside.
    """
    p = as_base(p, precision)
    if p.regime is not Regime.LARGE:
        raise DomainError("membership testing applies to p > 2 (J_p is an interval otherwise)")
    x = as_real(x, precision)
    _check_domain(p, x, cap)
    limit = p.limit()
    digits = []
    endpoint = None
    sequence = None
    if p.exact and x.exact:
        pv, r, lim = p.value.value, x.value, limit.value
        seen = {r: 0}
        for n in range(1, depth + 1):
            t = pv * r
            if exact_sign(t - 1) >= 0:
                c = 1
            elif exact_sign(t - lim) <= 0:
                c = 0
            else:
                return MembershipVerdict(Membership.OUTSIDE_IN_GAP, "".join(digits), n - 1)
            r = t - c
            digits.append(str(c))
            if endpoint is None:
                if c == 1 and r == 0:
                    endpoint = ("".join(digits[:-1]), "right")
                elif c == 0 and r == lim:
                    endpoint = ("".join(digits[:-1]), "left")
                if endpoint is not None and detect_cycles:
                    # a gap endpoint fixes every later digit
                    tail = "0" if endpoint[1] == "right" else "1"
                    sequence = DigitSeq("".join(digits), tail)
                    return MembershipVerdict(Membership.INSIDE, "".join(digits), n, sequence, endpoint)
            if sequence is None:
                if r in seen:
                    i = seen[r]
                    word = "".join(digits)
                    sequence = DigitSeq(word[:i], word[i:])
                    if detect_cycles:
                        return MembershipVerdict(Membership.INSIDE, word, n, sequence, endpoint)
                else:
                    seen[r] = n
    else:
        r = x
        for n in range(1, depth + 1):
            t = p.value * r
            up = decide(t, 1, cap)
            if up in (Ordering.GREATER, Ordering.EQUAL):
                c = 1
            else:
                down = decide(t, limit, cap)
                if up is Ordering.UNRESOLVED or down is Ordering.UNRESOLVED:
                    raise PrecisionExhausted(f"membership step {n} unresolved at the cap")
                if down is Ordering.GREATER:
                    return MembershipVerdict(Membership.OUTSIDE_IN_GAP, "".join(digits), n - 1)
                c = 0
            r = t - c
            digits.append(str(c))
            # re-anchor on an exact interval to keep the closure chain shallow
            lo, hi = r.interval()
            prec = r.prec
            r = ApproxReal(fn=lambda pr, lo=lo, hi=hi: (lo, hi), prec=prec)
    return MembershipVerdict(Membership.UNKNOWN_AT_DEPTH, "".join(digits), depth, sequence, endpoint)


def separation_bound(p, n):
    """(p-2)/(p^n (p-1)): the gap between images of sequences first differing at n."""
    p = as_base(p)
    if p.regime is not Regime.LARGE:
        raise DomainError("the separation bound needs p > 2")
    pv = p.value
    return (pv - 2) / (pv ** n * (pv - 1))


# ---------------------------------------------------------------------------
# truncation points and counting
# ---------------------------------------------------------------------------

def truncation_point(p, prefix):
    """pi_p(prefix 0^inf); its greedy expansion is prefix 0^inf."""
    p = as_base(p)
    if not admissible_in_base(p, prefix, Kind.GREEDY, len(prefix) + 1):
        raise InadmissiblePrefix(f"{prefix} is not greedy-admissible in base {p}")
    return pi_word(p, prefix)


def _transition_table(alpha_prefix):
    """Transitions of the comparison automaton.

    A state is the length k of the longest suffix that follows a 0 digit
    and equals alpha_1..alpha_k (the suffix then lives in the window
    '0' + alpha[:k]).  k = 0 splits into 'z' (last digit 0) and 'n'.
    """
    cache = {}

    def step(state, letter):
        key = (state, letter)
        if key in cache:
            return cache[key]
        if state == "n":
            window = letter
            starts = []
        elif state == "z":
            window = "0" + letter
            starts = [1]
        else:
            window = "0" + alpha_prefix[:state] + letter
            starts = [i for i in range(1, len(window)) if window[i - 1] == "0"]
        longest = 0
        result = None
        for i in starts:
            s = window[i:]
            a = alpha_prefix[:len(s)]
            if s > a:
                result = "reject"
                break
            if s == a:
                longest = max(longest, len(s))
        if result is None:
            if longest:
                result = longest
            else:
                result = "z" if letter == "0" else "n"
        cache[key] = result
        return result

    return step


def count_admissible(p, n):
    """Number of words w of length n with w0^inf greedy-admissible in base p.

    Dynamic programming over the comparison automaton of
    :func:`_transition_table`; O(n * states).
    """
    p = as_base(p)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if p.regime is Regime.LARGE:
        return 2 ** n
    alpha = alpha_one(p, max(n, 1) + 1)
    prefix = _alpha_take(alpha, n + 1)
    if len(prefix) < n:
        raise AlphaTooShort(f"a_p(1) known to {len(prefix)} digits, need {n}")
    step = _transition_table(prefix)
    counts = {"n": 1}
    for _ in range(n):
        nxt = {}
        for state, c in counts.items():
            for letter in "01":
                t = step(state, letter)
                if t != "reject":
                    nxt[t] = nxt.get(t, 0) + c
        counts = nxt
    return sum(counts.values())


def cylinder_width(p, n):
    """Upper bound p^-n/(p-1) on the spread of values sharing an n-digit prefix."""
    pv = as_base(p).value
    return 1 / (pv ** n * (pv - 1))


__all__ = [
    "Kind", "ExpansionReport", "greedy_digits", "quasi_greedy_digits", "expand", "alpha_one",
    "is_admissible", "admissible_in_base", "Membership", "MembershipVerdict", "membership",
    "separation_bound", "truncation_point", "count_admissible", "cylinder_width",
]
