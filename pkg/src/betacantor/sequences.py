"""Eventually periodic binary sequences.

Finite words are plain ``str`` objects over ``'0'``/``'1'``.  Infinite
sequences are :class:`DigitSeq` values ``prefix + period^inf`` held in a
canonical form, so equality of instances is equality of sequences.

Text format::

    1(10)     prefix 1, period 10
    110...    the last digit repeats: 110^inf
    110...0   prefix 110, tail 0^inf (same sequence)
    0... 1... 0^inf and 1^inf
    110       a bare word means 110 0^inf
"""
from __future__ import annotations

import enum
import math
import re
from fractions import Fraction

from .errors import ParseError


class Tail(enum.Enum):
    ZEROS = "zeros"
    ONES = "ones"
    PERIODIC = "periodic"


def _check_word(w):
    if not isinstance(w, str) or w.strip("01"):
        raise ParseError(f"not a binary word: {w!r}")
    return w


def _primitive_root(w):
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d]
    return w


class DigitSeq:
    """The sequence ``prefix`` followed by ``period`` repeated forever."""

    __slots__ = ("prefix", "period")

    def __init__(self, prefix="", period="0"):
        _check_word(prefix)
        _check_word(period)
        if not period:
            raise ParseError("period must be nonempty")
        period = _primitive_root(period)
        # absorb trailing prefix digits into the period by rotation
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = period[-1] + period[:-1]
        self.prefix = prefix
        self.period = period

    @classmethod
    def finite(cls, word):
        """``word`` followed by zeros."""
        return cls(word, "0")

    @property
    def tail(self):
        if self.period == "0":
            return Tail.ZEROS
        if self.period == "1":
            return Tail.ONES
        return Tail.PERIODIC

    @property
    def is_finite(self):
        """Ends with 10^inf; 0^inf itself does not count as finite."""
        return self.period == "0" and "1" in self.prefix

    @property
    def last_one(self):
        """Index (1-based) of the last 1 of a finite sequence, else ``None``."""
        if not self.is_finite:
            return None
        return self.prefix.rindex("1") + 1

    def digit(self, i):
        """The i-th digit, 1-based."""
        if i <= len(self.prefix):
            return int(self.prefix[i - 1])
        return int(self.period[(i - len(self.prefix) - 1) % len(self.period)])

    def take(self, n):
        """The first ``n`` digits as a word."""
        if n <= len(self.prefix):
            return self.prefix[:n]
        rest = n - len(self.prefix)
        reps = rest // len(self.period) + 1
        return self.prefix + (self.period * reps)[:rest]

    def shift(self, n):
        if n <= len(self.prefix):
            return DigitSeq(self.prefix[n:], self.period)
        k = (n - len(self.prefix)) % len(self.period)
        return DigitSeq("", self.period[k:] + self.period[:k])

    def cons(self, word):
        """``word`` followed by this sequence."""
        return DigitSeq(word + self.prefix, self.period)

    def reflect(self):
        return DigitSeq(_complement(self.prefix), _complement(self.period))

    def horizon(self, other):
        """A length after which both sequences are periodic in lockstep."""
        return max(len(self.prefix), len(other.prefix)) + math.lcm(len(self.period), len(other.period))

    def __eq__(self, other):
        if not isinstance(other, DigitSeq):
            return NotImplemented
        return self.prefix == other.prefix and self.period == other.period

    def __hash__(self):
        return hash((self.prefix, self.period))

    def __lt__(self, other):
        return lex_compare(self, other) < 0

    def __le__(self, other):
        return lex_compare(self, other) <= 0

    def __gt__(self, other):
        return lex_compare(self, other) > 0

    def __ge__(self, other):
        return lex_compare(self, other) >= 0

    def __str__(self):
        if self.period in ("0", "1"):
            return f"{self.prefix}{self.period}..."
        return f"{self.prefix}({self.period})"

    def __repr__(self):
        return f"DigitSeq('{self}')"


def _complement(w):
    return w.translate(_FLIP)


_FLIP = str.maketrans("01", "10")

ZEROS = DigitSeq("", "0")
ONES = DigitSeq("", "1")

_FORMAT = re.compile(r"^([01]*)(?:\(([01]+)\)|\.\.\.([01]?))?$")


def parse_seq(text):
    """Parse the text format described in the module docstring."""
    m = _FORMAT.match(text.strip())
    if not m:
        raise ParseError(f"malformed sequence: {text!r}")
    prefix, period, dots = m.groups()
    if period is not None:
        return DigitSeq(prefix, period)
    if dots is None:
        if not prefix:
            raise ParseError("empty sequence")
        return DigitSeq(prefix, "0")
    if dots:
        return DigitSeq(prefix, dots)
    if not prefix:
        raise ParseError("'...' needs a digit to repeat")
    return DigitSeq(prefix[:-1], prefix[-1])


def as_seq(s):
    if isinstance(s, DigitSeq):
        return s
    if isinstance(s, str):
        return parse_seq(s)
    raise TypeError(f"not a sequence: {s!r}")


def lex_compare(a, b):
    """-1, 0 or 1 for the lexicographic order of two sequences."""
    a, b = as_seq(a), as_seq(b)
    if a == b:
        return 0
    n = a.horizon(b)
    x, y = a.take(n), b.take(n)
    # canonical forms differ, so the sequences differ within the horizon
    return -1 if x < y else 1


def first_difference(a, b):
    """1-based index of the first disagreement, or ``None`` if equal."""
    a, b = as_seq(a), as_seq(b)
    if a == b:
        return None
    n = a.horizon(b)
    x, y = a.take(n), b.take(n)
    for i, (u, v) in enumerate(zip(x, y), 1):
        if u != v:
            return i
    raise AssertionError("distinct canonical sequences agree on their horizon")


def rho(a, b):
    """The metric 2^-n, n the first index of disagreement."""
    n = first_difference(a, b)
    return Fraction(0) if n is None else Fraction(1, 1 << n)


def shift(a, n):
    if n < 0:
        raise ValueError("shift count must be nonnegative")
    return as_seq(a).shift(n)


def reflect(a):
    return as_seq(a).reflect()


def truncate(a, n):
    if n < 0:
        raise ValueError("truncation length must be nonnegative")
    return as_seq(a).take(n)
