import math
import random
from fractions import Fraction

import pytest

from betacantor.analysis import (
    DiniCase,
    Side,
    bi_holder_check,
    bi_holder_constants,
    box_dimension,
    crossing_index,
    dini_witness_quotients,
    holder_fit,
    random_pairs,
    random_word_pairs,
    right_accumulation_probe,
    slow_alpha,
)
from betacantor.errors import CaseMismatch, DegeneratePairs, DomainError
from betacantor.evaluation import pi_eval
from betacantor.expansions import Membership
from betacantor.sequences import DigitSeq, parse_seq

Q = Fraction(3, 2)
RATIO = Fraction(4, 3)


def test_dini_zero_case():
    s = dini_witness_quotients("b", 2, Q, 0, 6)
    assert s.case is DiniCase.ZERO and s.side is Side.RIGHT and s.exact
    assert [y.value for _, y, _ in s.points] == [Fraction(1, 2 ** n) for n in range(1, 7)]
    assert s.quotients[3].value == Fraction(256, 81)
    assert all(q.value == RATIO ** n for n, _, q in s.points)


def test_dini_right_end_case():
    s = dini_witness_quotients("b", 2, Q, 1, 12)
    assert s.case is DiniCase.RIGHT_END and s.side is Side.LEFT
    for q, bound in zip(s.quotients, s.bounds):
        assert q.value >= bound.value
    assert s.quotients[-1].value > 10


def test_dini_infinite_case_b_and_a():
    x = Fraction(1, 3)
    for kind in ("b", "a"):
        s = dini_witness_quotients(kind, 2, Q, x, 10)
        assert s.case is DiniCase.INFINITE and s.side is Side.LEFT
        for (_, y, q), bound in zip(s.points, s.bounds):
            assert y.value < x
            assert q.value >= bound.value
        assert s.quotients[-1].value > s.quotients[0].value


def test_dini_finite_case_right_witness_is_exact_power():
    s = dini_witness_quotients("b", 2, Q, Fraction(1, 2), 8)
    assert s.case is DiniCase.FINITE and s.side is Side.RIGHT
    # the witness x + p^-j gives (p/q)^j on the nose
    assert all(q.value == RATIO ** j for j, _, q in s.points)


def test_dini_finite_case_naive_left_falls():
    s = dini_witness_quotients("b", 2, Q, Fraction(1, 2), 24, side="left")
    qs = [q.value for q in s.quotients]
    assert all(b < a for a, b in zip(qs, qs[1:]))
    assert qs[-1] < -10 ** 6


def test_dini_case_mismatch():
    with pytest.raises(CaseMismatch):
        dini_witness_quotients("b", 2, Q, Fraction(1, 2), 4, case="c")
    with pytest.raises(CaseMismatch):
        dini_witness_quotients("b", 2, Q, 0, 4, side="left")


def test_dini_domain():
    with pytest.raises(DomainError):
        dini_witness_quotients("b", 2, 3, 0, 4)
    with pytest.raises(DomainError):
        dini_witness_quotients("b", 3, 2, 0, 4)


def test_slow_alpha_is_below_one():
    s = slow_alpha(Q)
    assert pi_eval(Q, s).value < 1
    # pi_{3/2}((10)^inf) = 6/5 is too big; (100)^inf gives 18/19
    assert s == DigitSeq("", "100") and pi_eval(Q, s).value == Fraction(18, 19)


def test_crossing_index():
    assert crossing_index([1, 5, 20, 3], 10) == 3
    assert crossing_index([1, 2], 10) is None
    vals = [RATIO ** n for n in range(1, 31)]
    assert crossing_index(vals, 1000) == 25
    assert math.ceil(math.log(1000) / math.log(4 / 3)) == 25


@pytest.mark.parametrize("p,q,want", [(3, 2, math.log(2) / math.log(3)), (4, 8, 1.0), (5, 3, math.log(3) / math.log(5)),
                                      (3, 4, 1.0)])
def test_holder_fit_staircase(p, q, want):
    fit = holder_fit("staircase", p, q, count=400, seed=1)
    assert abs(fit.exponent - want) < 0.05


def test_holder_fit_identity_pairs():
    fit = holder_fit("pi", 4, 3, count=300, seed=2)
    assert abs(fit.exponent - math.log(3) / math.log(4)) < 0.05


def test_holder_fit_is_seed_deterministic():
    a = holder_fit("staircase", 3, 2, count=100, seed=9)
    b = holder_fit("staircase", 3, 2, count=100, seed=9)
    assert a == b


def test_holder_fit_degenerate():
    with pytest.raises(ValueError):
        holder_fit("staircase", 3, 2, count=4)
    with pytest.raises(ValueError):
        holder_fit("nonsense", 3, 2)
    assert issubclass(DegeneratePairs, ValueError)


@pytest.mark.parametrize("p,want,tol", [(4, 0.5, 1e-12), (3, 1 / math.log2(3), 1e-12),
                                        (Fraction(2) + Fraction(1, 10 ** 9), 1.0, 1e-6)])
def test_box_dimension(p, want, tol):
    est = box_dimension(p, 40)
    assert abs(est.slope - want) < tol
    assert [n for _, n, _ in est.levels[:4]] == [1, 2, 4, 8]


def test_box_dimension_preconditions():
    with pytest.raises(DomainError):
        box_dimension(2, 10)
    with pytest.raises(ValueError):
        box_dimension(3, 2)


def test_bi_holder_constants():
    c1, c2 = bi_holder_constants(4)
    assert abs(c1 - math.sqrt(3 / 4)) < 1e-12 and abs(c2 - math.sqrt(3 / 2)) < 1e-12


def test_bi_holder_identical_points():
    c = parse_seq("1(10)")
    r = bi_holder_check(4, [(c, c)])
    assert r.ok and not r.failures


def test_bi_holder_random_pairs():
    rng = random.Random(3)
    for p in (3, 4, Fraction(5, 2)):
        assert bi_holder_check(p, random_pairs(rng, 300)).ok
    r = bi_holder_check(4, random_word_pairs(rng, 300))
    assert r.ok and r.worst_lower > 0 and r.worst_upper > 0


def test_bi_holder_extreme_pair_saturates():
    # 1^inf against 0^inf: (p-1)/p |dx| = p^-1 exactly
    r = bi_holder_check(3, [(parse_seq("1..."), parse_seq("0..."))])
    assert r.ok and abs(r.worst_lower) < 1e-12


def test_accumulation_probe():
    probe = right_accumulation_probe(3, parse_seq("01..."), 4)
    assert probe.right_isolated
    assert all(s is Membership.OUTSIDE_IN_GAP for _, s in probe.probes)
    probe = right_accumulation_probe(3, parse_seq("(01)"), 5)
    x = pi_eval(3, parse_seq("(01)")).value
    assert not probe.right_isolated
    pts = [y.value for y, _ in probe.probes]
    assert all(y > x for y in pts) and pts == sorted(pts, reverse=True)
    assert all(s is Membership.INSIDE for _, s in probe.probes)
