"""The Cantor set J_p for p > 2 and the staircase B_{p,q} that extends b_{p,q} over its gaps."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, EnumerationCap, InvalidR
from .evaluation import pi_eval, pi_prefix, pi_word
from .expansions import Membership, count_admissible, greedy_digits, membership
from .precision import (
    DEFAULT_CAP,
    ApproxReal,
    Ordering,
    Regime,
    as_base,
    as_real,
    decide,
)
from .sequences import DigitSeq

ENUMERATION_CAP = 1 << 20


def _large(p):
    p = as_base(p)
    if p.regime is not Regime.LARGE:
        raise DomainError(f"the Cantor construction needs p > 2, got {p}")
    return p


# ---------------------------------------------------------------------------
# gaps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GapInterval:
    """The removed open interval (pi_p(w01^inf), pi_p(w10^inf)) for an anchor word w."""

    m: int
    k: int
    anchor: str
    left: ApproxReal
    right: ApproxReal

    @property
    def length(self):
        return self.right - self.left

    def row(self):
        return self.m, self.k, self.anchor, self.left, self.right


def gap_length(p, m):
    """(p-2)/(p^(m+1)(p-1)), the length shared by every level-m gap."""
    pv = _large(p).value
    return (pv - 2) / (pv ** (m + 1) * (pv - 1))


def gap_of(p, anchor):
    p = _large(p)
    pv = p.value
    m = len(anchor)
    base = pi_word(p, anchor)
    scale = 1 / pv ** m
    left = base + scale / (pv * (pv - 1))
    right = base + scale / pv
    k = int(anchor, 2) + 1 if anchor else 1
    return GapInterval(m, k, anchor, left, right)


def gap_intervals(p, m, cap=ENUMERATION_CAP):
    """All 2^m gaps of level m in increasing order."""
    p = _large(p)
    if m < 0:
        raise ValueError("level must be nonnegative")
    if (1 << m) > cap:
        raise EnumerationCap(f"2^{m} gaps exceed the enumeration cap {cap}")
    gaps = [gap_of(p, "".join(bits)) for bits in itertools.product("01", repeat=m)]
    for a, b in zip(gaps, gaps[1:]):
        # lexicographic rank matches left-endpoint order because pi_p increases
        if decide(a.right, b.left) is not Ordering.LESS:
            raise AssertionError("gap enumeration out of order")
    return gaps


# ---------------------------------------------------------------------------
# locating points
# ---------------------------------------------------------------------------

class Where(enum.Enum):
    ON_JP = "on_jp"
    IN_GAP = "in_gap"
    BOUNDARY = "boundary"


@dataclass
class Location:
    kind: Where
    prefix: str
    gap: GapInterval | None = None
    side: str | None = None                 # "left"/"right" endpoint of ``gap`` for Boundary
    sequence: DigitSeq | None = None        # the expansion when proven
    distance_bound: ApproxReal | None = None

    def __str__(self):
        if self.kind is Where.IN_GAP:
            return f"InGap(level {self.gap.m}, [{self.gap.left}, {self.gap.right}])"
        if self.kind is Where.BOUNDARY:
            return f"Boundary({self.side} endpoint of level {self.gap.m} gap {self.gap.anchor!r})"
        return f"OnJp({self.prefix or 'empty'})"


def locate(p, x, depth=64, *, cap=DEFAULT_CAP):
    """Place x in a gap, on a gap endpoint, or on J_p to within ``depth`` digits."""
    p = _large(p)
    v = membership(p, x, depth, detect_cycles=True, cap=cap)
    if v.status is Membership.OUTSIDE_IN_GAP:
        return Location(Where.IN_GAP, v.prefix, gap_of(p, v.prefix))
    if v.endpoint is not None:
        anchor, side = v.endpoint
        seq = DigitSeq(anchor + "0", "1") if side == "left" else DigitSeq.finite(anchor + "1")
        return Location(Where.BOUNDARY, v.prefix, gap_of(p, anchor), side, seq)
    bound = None if v.sequence is not None else 1 / (p.value ** depth * (p.value - 1))
    return Location(Where.ON_JP, v.prefix, sequence=v.sequence, distance_bound=bound)


# ---------------------------------------------------------------------------
# the staircase
# ---------------------------------------------------------------------------

class StaircaseConfig:
    """Parameters of B_{p,q}: p > 2 and q > 1 with q != p."""

    __slots__ = ("p", "q")

    def __init__(self, p, q):
        self.p = _large(p)
        self.q = as_base(q)
        if decide(self.p.value, self.q.value) is Ordering.EQUAL:
            raise DomainError("the staircase needs q != p")

    def __repr__(self):
        return f"StaircaseConfig(p={self.p}, q={self.q})"


def _as_cfg(cfg_or_p, q=None):
    if isinstance(cfg_or_p, StaircaseConfig):
        return cfg_or_p
    return StaircaseConfig(cfg_or_p, q)


def gap_images(cfg, gap):
    """B at the two ends of a gap: pi_q(w01^inf) and pi_q(w10^inf)."""
    w = gap.anchor
    return pi_eval(cfg.q, DigitSeq(w + "0", "1")), pi_eval(cfg.q, DigitSeq.finite(w + "1"))


def staircase_eval(cfg, x, N=64, *, cap=DEFAULT_CAP):
    """B_{p,q}(x): b_{p,q} on J_p, affine across every gap.

    With exact inputs the result is exact on gaps, at gap endpoints and at
    points whose expansion cycles within N steps; otherwise it is an
    enclosure of width q^-N/(q-1).
    """
    cfg = _as_cfg(cfg)
    x = as_real(x)
    loc = locate(cfg.p, x, N, cap=cap)
    if loc.kind is Where.IN_GAP:
        g = loc.gap
        fl, fr = gap_images(cfg, g)
        return fl + (fr - fl) * (x - g.left) / (g.right - g.left)
    if loc.sequence is not None:
        return pi_eval(cfg.q, loc.sequence)
    return pi_prefix(cfg.q, loc.prefix)


def gap_derivative(cfg, m):
    """Slope of B_{p,q} inside every level-m gap.

    (p/q)^(m+1) (q-2)(p-1) / ((p-2)(q-1)); defined at interior points only.
    """
    cfg = _as_cfg(cfg)
    p, q = cfg.p.value, cfg.q.value
    return (p / q) ** (m + 1) * (q - 2) * (p - 1) / ((p - 2) * (q - 1))


def gap_integral(cfg, m):
    """Integral of the slope over one level-m gap: (q-2)/(q^(m+1)(q-1))."""
    cfg = _as_cfg(cfg)
    q = cfg.q.value
    return (q - 2) / (q ** (m + 1) * (q - 1))


class IntegralTrend(enum.Enum):
    CONVERGES = "converges_to"
    ZERO = "zero"
    DIVERGES = "diverges_to_minus_infinity"


@dataclass
class GapIntegralReport:
    partial_sums: list
    trend: IntegralTrend
    limit: ApproxReal | None

    @property
    def last(self):
        return self.partial_sums[-1]


def total_gap_integral(cfg, M):
    """Partial sums over levels 0..M of 2^m times the one-gap integral.

    The ratio 2/q decides the trend: below 1 the sums converge to 1/(q-1),
    at q = 2 they vanish and above 1 they diverge to minus infinity.
    """
    cfg = _as_cfg(cfg)
    q = cfg.q.value
    sums, total = [], ApproxReal(0)
    for m in range(M + 1):
        total = total + gap_integral(cfg, m) * (1 << m)
        sums.append(total)
    o = decide(q, 2)
    if o is Ordering.GREATER:
        return GapIntegralReport(sums, IntegralTrend.CONVERGES, 1 / (q - 1))
    if o is Ordering.EQUAL:
        return GapIntegralReport(sums, IntegralTrend.ZERO, ApproxReal(0))
    return GapIntegralReport(sums, IntegralTrend.DIVERGES, None)


def measure_partial_sum(p, M):
    """Total length of the gaps of levels 0..M."""
    total = ApproxReal(0)
    for m in range(M + 1):
        total = total + gap_length(p, m) * (1 << m)
    return total


def arc_length_polygonal(p, n):
    """Length L_n of the polygon through the level-n corners of B_{p,2}.

    2^n sqrt((p^-n/(p-1))^2 + 4^-n) plus the flat gaps of levels below n.
    """
    pv = _large(p).value
    if n < 1:
        raise ValueError("n must be at least 1")
    run = 1 / (pv ** n * (pv - 1))
    rise = ApproxReal(Fraction(1, 1 << n))
    slanted = (run * run + rise * rise).sqrt() * (1 << n)
    flats = ApproxReal(0)
    for k in range(1, n + 1):
        flats = flats + (pv - 2) * (1 << (k - 1)) / (pv ** k * (pv - 1))
    return slanted + flats


def arc_length_limit(p):
    pv = _large(p).value
    return pv / (pv - 1)


# ---------------------------------------------------------------------------
# variation
# ---------------------------------------------------------------------------

@dataclass
class VariationBound:
    value: ApproxReal
    count: int
    ratio: ApproxReal


def variation_lower_bound(p, q, r, m, n, *, depth=256):
    """count_admissible(r, n) * q^-(n+m+1), a lower bound on the variation of B_{p,q}.

    Requires q < r < min(p, 2) and a finite greedy expansion of 1 in base r
    whose last 1 sits at index m.  The bound grows like (r/q)^n.
    """
    p, q, r = as_base(p), as_base(q), as_base(r)
    top = ApproxReal(2) if p.regime is Regime.LARGE else p.value
    if decide(q.value, r.value) is not Ordering.LESS or decide(r.value, top) is not Ordering.LESS:
        raise InvalidR("r must satisfy q < r < min(p, 2)")
    report = greedy_digits(r, 1, depth, detect_period=True)
    seq = report.sequence
    if seq is None or not seq.is_finite:
        raise InvalidR(f"greedy expansion of 1 in base {r} is not finite within {depth} digits")
    if seq.last_one != m:
        raise InvalidR(f"last 1 of the greedy expansion of 1 is at {seq.last_one}, not {m}")
    count = count_admissible(r, n)
    value = ApproxReal(count) / q.value ** (n + m + 1)
    return VariationBound(value, count, r.value / q.value)


def endpoint_grid(p, M):
    """0, 1/(p-1) and both ends of every gap of level at most M, sorted."""
    p = _large(p)
    pts = [ApproxReal(0), p.limit()]
    for m in range(M + 1):
        for g in gap_intervals(p, m):
            pts.extend((g.left, g.right))
    if p.exact:
        pts.sort(key=lambda v: v.value)
    else:
        pts.sort(key=lambda v: v.center)
    return pts


def variation_partition_sum(cfg, grid, N=64):
    """Sum of |B(x_{i+1}) - B(x_i)| over a sorted grid; a lower bound on the variation."""
    cfg = _as_cfg(cfg)
    values = [staircase_eval(cfg, x, N) for x in grid]
    total = ApproxReal(0)
    for a, b in zip(values, values[1:]):
        total = total + abs(b - a)
    return total


__all__ = [
    "GapInterval", "gap_length", "gap_of", "gap_intervals", "Where", "Location", "locate",
    "StaircaseConfig", "gap_images", "staircase_eval", "gap_derivative", "gap_integral",
    "IntegralTrend", "GapIntegralReport", "total_gap_integral", "measure_partial_sum",
    "arc_length_polygonal", "arc_length_limit", "VariationBound", "variation_lower_bound",
    "endpoint_grid", "variation_partition_sum", "ENUMERATION_CAP",
]
