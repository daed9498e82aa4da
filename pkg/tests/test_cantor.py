import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import partial_sum
from betacantor.basechange import b_pq
from betacantor.cantor import (
    StaircaseConfig,
    Where,
    arc_length_limit,
    arc_length_polygonal,
    endpoint_grid,
    gap_derivative,
    gap_images,
    gap_integral,
    gap_intervals,
    gap_length,
    gap_of,
    IntegralTrend,
    locate,
    measure_partial_sum,
    staircase_eval,
    total_gap_integral,
    variation_lower_bound,
    variation_partition_sum,
)
from betacantor.errors import DomainError, EnumerationCap, InvalidR
from betacantor.evaluation import pi_eval
from betacantor.expansions import count_admissible
from betacantor.precision import ApproxReal, GOLDEN_RATIO
from betacantor.sequences import DigitSeq, parse_seq

F = Fraction


def ends(g):
    return g.left.value, g.right.value


def test_gap_examples():
    (g,) = gap_intervals(3, 0)
    assert ends(g) == (F(1, 6), F(1, 3))
    g1, g2 = gap_intervals(3, 1)
    assert (g1.k, ends(g1)) == (1, (F(1, 18), F(1, 9)))
    assert (g2.k, ends(g2)) == (2, (F(7, 18), F(4, 9)))
    (g,) = gap_intervals(4, 0)
    assert ends(g) == (F(1, 12), F(1, 4)) and g.length.value == F(1, 6)


@pytest.mark.parametrize("p", [3, 4, F(5, 2), F(7, 3)])
def test_gaps_match_sequence_images(p):
    for m in range(5):
        gaps = gap_intervals(p, m)
        assert len(gaps) == 2 ** m
        for g in gaps:
            w = g.anchor
            # left = pi_p(w01^inf), right = pi_p(w10^inf) from the truncated series
            left = partial_sum(F(p), w + "0" + "1" * 200)
            right = partial_sum(F(p), w + "1")
            assert abs(g.left.value - left) < F(1, 10 ** 40) and g.right.value == right
            assert g.length.value == gap_length(p, m).value


@pytest.mark.parametrize("p", [3, 4, F(9, 4)])
def test_measure_exhaustion(p):
    p = F(p)
    for M in (0, 3, 10, 30):
        removed = measure_partial_sum(p, M).value
        cylinders = 2 ** (M + 1) * p ** -(M + 1) / (p - 1)
        assert removed + cylinders == 1 / (p - 1)


def test_gap_enumeration_cap():
    with pytest.raises(EnumerationCap):
        gap_intervals(3, 21)


def test_gaps_need_large_base():
    with pytest.raises(DomainError):
        gap_intervals(2, 1)


def test_locate_examples():
    loc = locate(3, F(1, 4))
    assert loc.kind is Where.IN_GAP and loc.gap.m == 0 and ends(loc.gap) == (F(1, 6), F(1, 3))
    loc = locate(3, F(1, 3))
    assert loc.kind is Where.BOUNDARY and loc.side == "right" and loc.gap.anchor == ""
    loc = locate(3, F(1, 10))
    assert loc.kind is Where.IN_GAP and loc.gap.m == 1 and ends(loc.gap) == (F(1, 18), F(1, 9))
    loc = locate(3, F(1, 8))
    assert loc.kind is Where.ON_JP and loc.sequence == DigitSeq("", "01")


@settings(max_examples=60)
@given(st.fractions(min_value=0, max_value=F(1, 2), max_denominator=10 ** 4))
def test_locate_gap_verdicts_are_inside_the_gap(x):
    loc = locate(3, x)
    if loc.kind is Where.IN_GAP:
        assert loc.gap.left.value < x < loc.gap.right.value
    elif loc.kind is Where.BOUNDARY:
        assert x in ends(loc.gap)


@pytest.mark.parametrize("p,q,x,want", [(3, 2, F(1, 4), F(1, 2)), (3, 4, F(1, 4), F(1, 6)),
                                        (3, 2, 0, 0), (3, 2, F(1, 2), 1)])
def test_staircase_examples(p, q, x, want):
    assert staircase_eval(StaircaseConfig(p, q), x).value == want


def test_staircase_agrees_with_b_on_cantor_points():
    cfg = StaircaseConfig(3, F(3, 2))
    for s in ("(01)", "1(10)", "0011...0", "(001)"):
        c = parse_seq(s)
        x = pi_eval(3, c).value
        assert staircase_eval(cfg, x).value == b_pq(3, F(3, 2), x).value.value == pi_eval(F(3, 2), c).value


@pytest.mark.parametrize("k", range(3, 12))
def test_staircase_continuous_at_gap_edges(k):
    cfg = StaircaseConfig(3, 4)
    g = gap_of(3, "01")
    eps = F(1, 10 ** k)
    left_img = pi_eval(4, DigitSeq("010", "1")).value
    inside = staircase_eval(cfg, g.left.value + eps).value
    outside = staircase_eval(cfg, g.left.value - eps)
    assert abs(inside - left_img) <= eps * 10
    # B_{3,4} is Lipschitz, so the image moves by O(eps) on the Cantor side too
    assert abs(outside.center - left_img) <= 10 * eps + outside.radius


def test_slope_examples():
    assert gap_derivative(StaircaseConfig(3, 2), 5).value == 0
    assert gap_derivative(StaircaseConfig(5, 3), 0).value == F(10, 9)
    assert gap_derivative(StaircaseConfig(3, 4), 0).value == 1


def test_slope_is_rise_over_run():
    for p, q in ((3, 4), (5, 3), (F(7, 2), F(3, 2))):
        cfg = StaircaseConfig(p, q)
        for g in gap_intervals(p, 2):
            fl, fr = gap_images(cfg, g)
            assert ((fr - fl) / g.length).value == gap_derivative(cfg, g.m).value


def test_integral_examples():
    assert gap_integral(StaircaseConfig(4, 3), 0).value == F(1, 6)
    assert gap_integral(StaircaseConfig(4, 2), 7).value == 0
    assert gap_integral(StaircaseConfig(4, 3), 2).value == F(1, 54)


def test_total_integral_trends():
    r = total_gap_integral(StaircaseConfig(4, 3), 60)
    assert r.trend is IntegralTrend.CONVERGES and r.limit.value == F(1, 2)
    assert abs(r.last.value - F(1, 2)) < F(1, 10 ** 9)
    r = total_gap_integral(StaircaseConfig(4, 2), 40)
    assert r.trend is IntegralTrend.ZERO and all(s.value == 0 for s in r.partial_sums)
    r = total_gap_integral(StaircaseConfig(3, F(3, 2)), 50)
    assert r.trend is IntegralTrend.DIVERGES and r.last.value < -10 ** 4


def test_arc_length_first_polygon():
    L1 = arc_length_polygonal(3, 1)
    assert L1.exact
    want = F(1, 6) + math.sqrt(10) / 3
    assert abs(float(L1) - want) < 1e-12
    assert abs(float(L1) - 1.22076) < 1e-5


def test_arc_length_limits_and_monotonicity():
    assert arc_length_limit(3).value == F(3, 2) and arc_length_limit(4).value == F(4, 3)
    for p in (3, 4):
        seq = [float(arc_length_polygonal(p, n)) for n in range(1, 40)]
        assert all(a <= b for a, b in zip(seq, seq[1:]))
        assert seq[-1] < float(arc_length_limit(p))
    # the deficit shrinks like 2^n (p-2)/(p^n (p-1)) ... geometric in 2/p
    d = [float(arc_length_limit(3)) - float(arc_length_polygonal(3, n)) for n in (20, 21)]
    assert abs(d[1] / d[0] - 2 / 3) < 0.01


def test_variation_bound_examples():
    v = variation_lower_bound(3, F(3, 2), "phi", 2, 10)
    assert v.count == count_admissible("phi", 10) == 232
    assert v.value.value == F(232) / F(3, 2) ** 13 == F(1900544, 1594323)
    assert 232 >= float(ApproxReal(GOLDEN_RATIO ** 10)) > 122.99
    v = variation_lower_bound(3, F(3, 2), "phi", 2, 1)
    assert v.value.value == F(2) / F(81, 16)


def test_variation_bound_preconditions():
    with pytest.raises(InvalidR):
        variation_lower_bound(3, F(3, 2), F(7, 5), 2, 4)
    with pytest.raises(InvalidR):
        variation_lower_bound(3, F(3, 2), "phi", 3, 4)


def test_partition_sums():
    cfg2 = StaircaseConfig(3, 2)
    assert variation_partition_sum(cfg2, endpoint_grid(3, 6)).value == 1
    cfg = StaircaseConfig(3, F(3, 2))
    two = variation_partition_sum(cfg, [ApproxReal(0), ApproxReal(F(1, 2))])
    assert two.value == 2
    assert variation_partition_sum(cfg, endpoint_grid(3, 8)).value > 2
