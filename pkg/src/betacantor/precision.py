"""Precision-managed reals.

Two tiers:

* exact values -- ``Fraction`` or :class:`QuadraticNumber` (elements of
  Q(sqrt d)), where every comparison is decidable;
* interval values -- outward-rounded dyadic enclosures that remember how to
  re-evaluate themselves, so they can be refined to a smaller radius.

:class:`ApproxReal` wraps both behind one interface.
"""
from __future__ import annotations

import enum
import math
import re
from fractions import Fraction
from functools import total_ordering

from .errors import DomainError, ParseError, PrecisionExhausted, RefinementCapExceeded

DEFAULT_PRECISION = 128
DEFAULT_CAP = 4096


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1
    UNRESOLVED = None

    def __str__(self):
        return self.name


# ---------------------------------------------------------------------------
# exact quadratic field elements
# ---------------------------------------------------------------------------

class IncompatibleFields(TypeError):
    pass


@total_ordering
class QuadraticNumber:
    """The number (a + b*sqrt(d)) / c with integers a, b, c > 0 and b != 0.

    Arithmetic that cancels the irrational part returns a plain ``Fraction``,
    so a live instance always has ``b != 0``.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        if c == 0:
            raise ZeroDivisionError("zero denominator")
        if c < 0:
            a, b, c = -a, -b, -c
        g = math.gcd(a, b, c)
        if g > 1:
            a, b, c = a // g, b // g, c // g
        self.a, self.b, self.c, self.d = a, b, c, d

    @staticmethod
    def make(a, b, c, d):
        if b == 0 or d == 0:
            return Fraction(a, c)
        r = math.isqrt(d)
        if r * r == d:
            return Fraction(a + b * r, c)
        return QuadraticNumber(a, b, c, d)

    def _parts(self, other):
        """Coerce ``other`` into (a, b, c) over this field."""
        if isinstance(other, QuadraticNumber):
            if other.d != self.d:
                raise IncompatibleFields(f"sqrt({self.d}) vs sqrt({other.d})")
            return other.a, other.b, other.c
        if isinstance(other, int):
            return other, 0, 1
        if isinstance(other, Fraction):
            return other.numerator, 0, other.denominator
        return None

    def __add__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        a, b, c = o
        return QuadraticNumber.make(self.a * c + a * self.c, self.b * c + b * self.c, self.c * c, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.c, self.d)

    def __sub__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        a, b, c = o
        return QuadraticNumber.make(self.a * c - a * self.c, self.b * c - b * self.c, self.c * c, self.d)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        a, b, c = o
        if b == 0:
            return QuadraticNumber.make(self.a * a, self.b * a, self.c * c, self.d)
        return QuadraticNumber.make(self.a * a + self.d * self.b * b, self.a * b + self.b * a,
                                    self.c * c, self.d)

    __rmul__ = __mul__

    def reciprocal(self):
        norm = self.a * self.a - self.d * self.b * self.b
        return QuadraticNumber.make(self.c * self.a, -self.c * self.b, norm, self.d)

    def __truediv__(self, other):
        if isinstance(other, QuadraticNumber):
            return self * other.reciprocal()
        o = self._parts(other)
        if o is None:
            return NotImplemented
        a, _, c = o
        if a == 0:
            raise ZeroDivisionError("division by zero")
        return QuadraticNumber.make(self.a * c, self.b * c, self.c * a, self.d)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.reciprocal() ** (-n)
        result, base = Fraction(1), self
        while n:
            if n & 1:
                result = base * result
            n >>= 1
            if n:
                base = base * base
        return result

    def sign(self):
        a, b = self.a, self.b
        if a >= 0 and b > 0:
            return 1
        if a <= 0 and b < 0:
            return -1
        s = a * a - self.d * b * b
        s = (s > 0) - (s < 0)
        return s if a > 0 else -s

    def _cmp(self, other):
        diff = self - other
        if isinstance(diff, QuadraticNumber):
            return diff.sign()
        return (diff > 0) - (diff < 0)

    def __eq__(self, other):
        if isinstance(other, QuadraticNumber):
            return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)
        return False  # b != 0, so never rational

    def __lt__(self, other):
        if self._parts(other) is None:
            return NotImplemented
        return self._cmp(other) < 0

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __float__(self):
        return float(self.enclosure(64)[0])

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def enclosure(self, bits):
        """Rational lower/upper bounds of width about 2^-bits relative."""
        k = bits + abs(self.b).bit_length() + 4
        s = math.isqrt(self.d << (2 * k))
        lo_s, hi_s = Fraction(s, 1 << k), Fraction(s + 1, 1 << k)
        if self.b < 0:
            lo_s, hi_s = hi_s, lo_s
        return (Fraction(self.a, self.c) + Fraction(self.b, self.c) * lo_s,
                Fraction(self.a, self.c) + Fraction(self.b, self.c) * hi_s)

    def __str__(self):
        a = Fraction(self.a, self.c)
        b = Fraction(self.b, self.c)
        sb = f"{b}*sqrt({self.d})" if b != 1 else f"sqrt({self.d})"
        if a == 0:
            return sb if b != -1 else f"-sqrt({self.d})"
        sign = "+" if b > 0 else "-"
        b = abs(b)
        sb = f"{b}*sqrt({self.d})" if b != 1 else f"sqrt({self.d})"
        return f"{a}{sign}{sb}"

    def __repr__(self):
        return f"QuadraticNumber({self})"


GOLDEN_RATIO = QuadraticNumber(1, 1, 2, 5)


def exact_sign(v):
    if isinstance(v, QuadraticNumber):
        return v.sign()
    return (v > 0) - (v < 0)


# ---------------------------------------------------------------------------
# dyadic interval helpers
# ---------------------------------------------------------------------------

def _shift_for(v, prec):
    e = v.numerator.bit_length() - v.denominator.bit_length()
    return prec + 1 - min(e, 0)


def round_down(v, prec):
    v = Fraction(v)
    if v == 0:
        return v
    s = _shift_for(v, prec)
    return Fraction((v.numerator << s) // v.denominator, 1 << s)


def round_up(v, prec):
    v = Fraction(v)
    if v == 0:
        return v
    s = _shift_for(v, prec)
    return Fraction(-((-v.numerator << s) // v.denominator), 1 << s)


def exact_interval(v, prec):
    if isinstance(v, QuadraticNumber):
        lo, hi = v.enclosure(prec)
        return round_down(lo, prec), round_up(hi, prec)
    v = Fraction(v)
    return v, v


def iv_add(x, y, prec):
    return round_down(x[0] + y[0], prec), round_up(x[1] + y[1], prec)


def iv_sub(x, y, prec):
    return round_down(x[0] - y[1], prec), round_up(x[1] - y[0], prec)


def iv_mul(x, y, prec):
    products = (x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1])
    return round_down(min(products), prec), round_up(max(products), prec)


def iv_div(x, y, prec):
    if y[0] <= 0 <= y[1]:
        raise ZeroDivisionError("divisor interval contains zero")
    inv = (1 / y[1], 1 / y[0])
    return iv_mul(x, inv, prec)


def iv_sqrt(x, prec):
    if x[1] < 0:
        raise DomainError("square root of a negative interval")
    k = prec + 2
    lo = max(x[0], Fraction(0))
    s_lo = math.isqrt((lo.numerator << (2 * k)) // lo.denominator)
    hi_scaled = -((-x[1].numerator << (2 * k)) // x[1].denominator)
    s_hi = math.isqrt(hi_scaled)
    if s_hi * s_hi < hi_scaled:
        s_hi += 1
    return Fraction(s_lo, 1 << k), Fraction(s_hi, 1 << k)


# ---------------------------------------------------------------------------
# ApproxReal
# ---------------------------------------------------------------------------

def _is_exact_value(v):
    return isinstance(v, (int, Fraction, QuadraticNumber))


class ApproxReal:
    """A real number known either exactly or as a refinable interval.

    Inexact instances keep an evaluator ``fn(prec) -> (lo, hi)`` so that
    :func:`refine` can recompute them at a higher precision.
    """

    __slots__ = ("_value", "_lo", "_hi", "_prec", "_fn")

    def __init__(self, value=None, *, fn=None, prec=DEFAULT_PRECISION):
        if fn is None:
            if not _is_exact_value(value):
                raise TypeError(f"not an exact value: {value!r}")
            self._value = Fraction(value) if isinstance(value, int) else value
            self._fn = None
            self._prec = prec
            self._lo = self._hi = None
        else:
            self._value = None
            self._fn = fn
            self._prec = prec
            self._lo, self._hi = fn(prec)

    @classmethod
    def from_interval(cls, lo, hi):
        """An interval with no provenance; refinement cannot shrink it."""
        lo, hi = Fraction(lo), Fraction(hi)
        return cls(fn=lambda prec: (lo, hi))

    # -- accessors ---------------------------------------------------------
    @property
    def exact(self):
        return self._fn is None

    @property
    def value(self):
        """The exact value, or ``None`` for interval values."""
        return self._value

    @property
    def prec(self):
        return self._prec

    def interval(self, prec=None):
        if self._fn is None:
            return exact_interval(self._value, self._prec if prec is None else prec)
        if prec is None or prec == self._prec:
            return self._lo, self._hi
        return self._fn(prec)

    @property
    def lo(self):
        return self.interval()[0]

    @property
    def hi(self):
        return self.interval()[1]

    @property
    def center(self):
        if self._fn is None:
            return self._value
        return (self._lo + self._hi) / 2

    @property
    def radius(self):
        if self._fn is None:
            return Fraction(0)
        return (self._hi - self._lo) / 2

    def __float__(self):
        return float(self.center)

    def __repr__(self):
        return f"ApproxReal({format_real(self)})"

    __str__ = lambda self: format_real(self)

    # -- arithmetic --------------------------------------------------------
    def _binary(self, other, exact_op, iv_op):
        if not isinstance(other, ApproxReal):
            if not _is_exact_value(other):
                return NotImplemented
            other = ApproxReal(other)
        if self._fn is None and other._fn is None:
            try:
                return ApproxReal(exact_op(self._value, other._value))
            except IncompatibleFields:
                pass
        a, b = self, other
        prec = max(a._prec, b._prec)
        return ApproxReal(fn=lambda pr: iv_op(a.interval(pr), b.interval(pr), pr), prec=prec)

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y, iv_add)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y, iv_sub)

    def __rsub__(self, other):
        return ApproxReal(other) - self if _is_exact_value(other) else NotImplemented

    def __mul__(self, other):
        return self._binary(other, lambda x, y: x * y, iv_mul)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        return self._binary(other, lambda x, y: x / y, iv_div)

    def __rtruediv__(self, other):
        return ApproxReal(other) / self if _is_exact_value(other) else NotImplemented

    def __neg__(self):
        if self._fn is None:
            return ApproxReal(-self._value)
        a = self
        return ApproxReal(fn=lambda pr: tuple(-t for t in reversed(a.interval(pr))), prec=a._prec)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if self._fn is None:
            return ApproxReal(self._value ** n if n >= 0 else 1 / (self._value ** -n))
        a = self

        def fn(pr):
            base = a.interval(pr)
            if n < 0:
                base = iv_div((Fraction(1), Fraction(1)), base, pr)
            result = (Fraction(1), Fraction(1))
            for _ in range(abs(n)):
                result = iv_mul(result, base, pr)
            if abs(n) % 2 == 0 and result[0] < 0:
                result = (Fraction(0), result[1])
            return result

        return ApproxReal(fn=fn, prec=a._prec)

    def __abs__(self):
        if self._fn is None:
            return ApproxReal(abs(self._value))
        a = self

        def fn(pr):
            lo, hi = a.interval(pr)
            if lo >= 0:
                return lo, hi
            if hi <= 0:
                return -hi, -lo
            return Fraction(0), max(-lo, hi)

        return ApproxReal(fn=fn, prec=a._prec)

    def sqrt(self):
        if self._fn is None:
            v = self._value
            if isinstance(v, Fraction) and v >= 0:
                rn, rd = math.isqrt(v.numerator), math.isqrt(v.denominator)
                if rn * rn == v.numerator and rd * rd == v.denominator:
                    return ApproxReal(Fraction(rn, rd))
                # sqrt(n/d) = sqrt(n*d)/d stays inside a quadratic field
                return ApproxReal(QuadraticNumber.make(0, 1, v.denominator, v.numerator * v.denominator))
        a = self
        return ApproxReal(fn=lambda pr: iv_sqrt(a.interval(pr), pr), prec=a._prec)


def as_real(x, precision=DEFAULT_PRECISION):
    """Coerce ints, Fractions, quadratic numbers and literals to :class:`ApproxReal`."""
    if isinstance(x, ApproxReal):
        return x
    if isinstance(x, Base):
        return x.value
    if _is_exact_value(x):
        return ApproxReal(x)
    if isinstance(x, str):
        return make_real(x, precision)
    if isinstance(x, float):
        return ApproxReal(Fraction(x))
    raise TypeError(f"cannot interpret {x!r} as a real")


# ---------------------------------------------------------------------------
# literals
# ---------------------------------------------------------------------------

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_DECIMAL = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")
_SQRT = re.compile(r"^sqrt\((\d+)\)$")


def make_real(text, precision=DEFAULT_PRECISION):
    """Parse a literal.

    Accepted forms: ``3/4``, ``2``, ``1.5`` (exact: 3/2), ``phi``,
    ``sqrt(5)``.  A trailing ``~`` marks a decimal as approximate; it is then
    held as a dyadic enclosure with radius at most 2^-precision.
    """
    if precision < 8:
        raise ValueError("precision must be at least 8 bits")
    s = text.strip()
    approximate = s.endswith("~")
    if approximate:
        s = s[:-1].strip()
    if s.lower() in ("phi", "golden"):
        return ApproxReal(GOLDEN_RATIO, prec=precision)
    m = _SQRT.match(s)
    if m:
        return ApproxReal(Fraction(int(m.group(1)))).sqrt()
    if _RATIONAL.match(s):
        try:
            v = Fraction(s)
        except ZeroDivisionError as exc:
            raise ParseError(f"zero denominator in {text!r}") from exc
    elif _DECIMAL.match(s):
        v = Fraction(s)
    else:
        raise ParseError(f"malformed real literal: {text!r}")
    if not approximate:
        return ApproxReal(v, prec=precision)
    return ApproxReal(fn=lambda pr: (round_down(v, pr), round_up(v, pr)), prec=precision)


# ---------------------------------------------------------------------------
# comparison and refinement
# ---------------------------------------------------------------------------

def cmp(a, b):
    """Three-valued comparison; never refines."""
    a, b = as_real(a), as_real(b)
    if a.exact and b.exact:
        try:
            s = exact_sign(a.value - b.value)
            return Ordering(s)
        except IncompatibleFields:
            pass
    prec = max(a.prec, b.prec)
    alo, ahi = a.interval(prec)
    blo, bhi = b.interval(prec)
    if ahi < blo:
        return Ordering.LESS
    if bhi < alo:
        return Ordering.GREATER
    return Ordering.UNRESOLVED


def refine(a, target_radius, cap=DEFAULT_CAP):
    """Re-evaluate ``a`` until its radius is at most ``target_radius``."""
    a = as_real(a)
    if a.exact or a.radius <= target_radius:
        return a
    target = Fraction(target_radius)
    if target <= 0:
        raise RefinementCapExceeded("an interval value cannot reach radius 0")
    need = -(target.numerator.bit_length() - target.denominator.bit_length()) + 2
    prec = max(a.prec * 2, need)
    while True:
        if prec > cap:
            raise RefinementCapExceeded(f"needs more than {cap} bits")
        r = ApproxReal(fn=a._fn, prec=prec)
        if r.radius <= target:
            return r
        prec *= 2


def decide(a, b, cap=DEFAULT_CAP):
    """Like :func:`cmp`, but refines both sides until resolved or the cap is hit."""
    result = cmp(a, b)
    a, b = as_real(a), as_real(b)
    prec = max(a.prec, b.prec)
    while result is Ordering.UNRESOLVED and not (a.exact and b.exact):
        prec *= 2
        if prec > cap:
            return result
        if not a.exact:
            a = ApproxReal(fn=a._fn, prec=prec)
        if not b.exact:
            b = ApproxReal(fn=b._fn, prec=prec)
        result = cmp(a, b)
    return result


def format_real(x):
    """Exact values print exactly; intervals print as ``center±radius``."""
    x = as_real(x)
    if x.exact:
        return str(x.value)
    return f"{float(x.center):.17g}±{float(x.radius):.3g}"


# ---------------------------------------------------------------------------
# bases
# ---------------------------------------------------------------------------

class Regime(enum.Enum):
    SMALL = "small"   # 1 < p < 2
    TWO = "two"       # p = 2
    LARGE = "large"   # p > 2


class Base:
    """A base p > 1 with its regime tag."""

    __slots__ = ("value", "regime")

    def __init__(self, value, precision=DEFAULT_PRECISION, cap=DEFAULT_CAP):
        value = as_real(value, precision)
        if decide(value, 1, cap) is not Ordering.GREATER:
            raise DomainError(f"base must exceed 1, got {format_real(value)}")
        to_two = decide(value, 2, cap)
        if to_two is Ordering.UNRESOLVED:
            raise PrecisionExhausted("cannot decide whether the base is above or below 2")
        self.value = value
        self.regime = {Ordering.LESS: Regime.SMALL, Ordering.EQUAL: Regime.TWO,
                       Ordering.GREATER: Regime.LARGE}[to_two]

    @property
    def exact(self):
        return self.value.exact

    @property
    def large(self):
        return self.regime is Regime.LARGE

    def limit(self):
        """The right end 1/(p-1) of the expansion domain."""
        return 1 / (self.value - 1)

    def __float__(self):
        return float(self.value)

    def __eq__(self, other):
        if isinstance(other, Base):
            return cmp(self.value, other.value) is Ordering.EQUAL
        return NotImplemented

    def __hash__(self):
        return hash(self.value.value) if self.exact else id(self)

    def __repr__(self):
        return f"Base({format_real(self.value)})"

    def __str__(self):
        v = self.value.value
        if v == GOLDEN_RATIO:
            return "phi"
        return format_real(self.value)


def as_base(p, precision=DEFAULT_PRECISION):
    return p if isinstance(p, Base) else Base(p, precision)
