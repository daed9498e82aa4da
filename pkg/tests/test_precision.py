import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from betacantor.errors import DomainError, ParseError, RefinementCapExceeded
from betacantor.precision import (
    GOLDEN_RATIO,
    ApproxReal,
    Base,
    Ordering,
    QuadraticNumber,
    Regime,
    cmp,
    decide,
    make_real,
    refine,
)

fractions = st.fractions(min_value=-100, max_value=100, max_denominator=10 ** 6)


def interval_real(center, radius):
    c, r = Fraction(center), Fraction(radius)
    return ApproxReal.from_interval(c - r, c + r)


def test_rational_literal_is_exact():
    x = make_real("3/4", 64)
    assert x.exact and x.value == Fraction(3, 4) and x.center == Fraction(3, 4)


def test_integer_base_regime():
    b = Base(make_real("2", 64))
    assert b.exact and b.value.value == 2 and b.regime is Regime.TWO


def test_decimal_literal_is_exact_by_default():
    assert make_real("1.5").value == Fraction(3, 2)


def test_approximate_golden_literal_radius():
    text = "1.61803398874989484820"
    x = make_real(text + "~", 128)
    assert not x.exact
    assert x.radius <= Fraction(1, 2 ** 128)
    assert x.lo <= Fraction(text) <= x.hi


def test_phi_keyword_is_exact_quadratic():
    x = make_real("phi")
    assert x.exact and x.value == GOLDEN_RATIO
    assert x.value * x.value == x.value + 1


@pytest.mark.parametrize("bad", ["", "abc", "1/0", "3//4", "--2"])
def test_malformed_literals(bad):
    with pytest.raises(ParseError):
        make_real(bad)


def test_precision_floor():
    with pytest.raises(ValueError):
        make_real("1", 4)


def test_cmp_examples():
    assert cmp(Fraction(1, 2), Fraction(1, 2)) is Ordering.EQUAL
    tiny = Fraction(1, 10 ** 30)
    assert cmp(interval_real(Fraction(1, 2), tiny), interval_real(Fraction(3, 4), tiny)) is Ordering.LESS
    wide = Fraction(3, 10)
    assert cmp(interval_real(Fraction(1, 2), wide), interval_real(Fraction(6, 10), wide)) is Ordering.UNRESOLVED


def test_refine_exact_unchanged():
    x = ApproxReal(Fraction(5, 7))
    assert refine(x, Fraction(1, 2 ** 500)) is x


def test_refine_reevaluates_at_higher_precision():
    x = make_real("0.1~", 64)
    target = Fraction(1, 2 ** 200)
    y = refine(x, target)
    assert y.prec >= 200 and y.radius <= target
    assert y.lo <= Fraction(1, 10) <= y.hi


def test_refine_cap():
    x = make_real("0.1~", 64)
    with pytest.raises(RefinementCapExceeded):
        refine(x, Fraction(1, 2 ** 1000), cap=256)


def test_decide_refines_until_resolved():
    a = make_real("0.1000000000000000000001~", 16)
    b = make_real("0.1", 16)
    assert decide(a, b) is Ordering.GREATER


def test_base_rejects_at_most_one():
    with pytest.raises(DomainError):
        Base(1)
    with pytest.raises(DomainError):
        Base(Fraction(1, 2))


def test_base_regimes():
    assert Base(Fraction(3, 2)).regime is Regime.SMALL
    assert Base(3).regime is Regime.LARGE
    assert Base("phi").regime is Regime.SMALL
    assert str(Base("phi")) == "phi"


def test_quadratic_arithmetic_matches_floats():
    phi = GOLDEN_RATIO
    s5 = math.sqrt(5)
    for v, f in [(phi * phi, ((1 + s5) / 2) ** 2), (1 / phi, 2 / (1 + s5)), (phi - 1 / phi, 1.0),
                 (phi ** 10, ((1 + s5) / 2) ** 10)]:
        assert abs(float(ApproxReal(v)) - f) < 1e-12


def test_quadratic_identity_inverse_powers():
    phi = GOLDEN_RATIO
    assert 1 / phi + 1 / phi ** 2 == 1


def test_exact_sqrt_of_rational():
    assert ApproxReal(Fraction(9, 4)).sqrt().value == Fraction(3, 2)
    r = ApproxReal(Fraction(10)).sqrt()
    assert r.exact and isinstance(r.value, QuadraticNumber)
    assert r.value * r.value == 10


@given(fractions, fractions)
def test_exact_arithmetic_agrees_with_fractions(a, b):
    x, y = ApproxReal(a), ApproxReal(b)
    assert (x + y).value == a + b
    assert (x - y).value == a - b
    assert (x * y).value == a * b
    if b:
        assert (x / y).value == a / b
    assert cmp(x, y) is Ordering((a > b) - (a < b))


@given(fractions, fractions, st.integers(min_value=8, max_value=200))
def test_interval_ops_enclose_true_value(a, b, prec):
    x = ApproxReal(fn=lambda pr: (a - Fraction(1, 2 ** pr), a + Fraction(1, 2 ** pr)), prec=prec)
    y = ApproxReal(fn=lambda pr: (b - Fraction(1, 2 ** pr), b + Fraction(1, 2 ** pr)), prec=prec)
    for got, want in [(x + y, a + b), (x - y, a - b), (x * y, a * b)]:
        assert got.lo <= want <= got.hi
    if abs(b) > Fraction(1, 2 ** (prec - 2)):
        q = x / y
        assert q.lo <= a / b <= q.hi


@given(st.fractions(min_value=0, max_value=1000, max_denominator=1000), st.integers(min_value=16, max_value=160))
def test_interval_sqrt_encloses(v, prec):
    x = ApproxReal(fn=lambda pr: (v, v), prec=prec)
    r = x.sqrt()
    lo, hi = r.interval()
    assert lo >= 0 and lo * lo <= v <= hi * hi
