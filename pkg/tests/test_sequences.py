from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import HORIZON, naive_lex, sequences, words
from betacantor.errors import ParseError
from betacantor.sequences import (
    ONES,
    ZEROS,
    DigitSeq,
    first_difference,
    lex_compare,
    parse_seq,
    reflect,
    rho,
    shift,
    truncate,
)


def S(text):
    return parse_seq(text)


@pytest.mark.parametrize("a,b,want", [("01...", "10...0", -1), ("(10)", "10...0", 1), ("110...0", "110...0", 0)])
def test_lex_examples(a, b, want):
    assert lex_compare(S(a), S(b)) == want


def test_rho_examples():
    c = S("1(10)")
    assert rho(c, c) == 0
    assert rho(ONES, ZEROS) == Fraction(1, 2)
    assert rho(S("110...0"), S("111...")) == Fraction(1, 8)


def test_shift_examples():
    assert shift(S("110...0"), 2) == ZEROS
    assert shift(S("(10)"), 1) == S("(01)")
    c = S("01(110)")
    assert shift(c, 0) == c


def test_reflect_examples():
    assert reflect(ZEROS) == ONES
    assert reflect(S("10...0")) == S("01...")


def test_truncate_examples():
    assert truncate(S("(10)"), 5) == "10101"
    assert truncate(S("1(10)"), 0) == ""
    assert truncate(S("110...0"), 4) == "1100"


@pytest.mark.parametrize("text,prefix,period", [
    ("110(10)", "1", "10"), ("110...0", "11", "0"), ("110...", "11", "0"), ("0...", "", "0"),
    ("1...", "", "1"), ("110", "11", "0"), ("(01)", "", "01"),
])
def test_parse_canonical_form(text, prefix, period):
    s = parse_seq(text)
    assert (s.prefix, s.period) == (prefix, period)


@pytest.mark.parametrize("bad", ["", "12", "(", "()", "1(0", "...", "1..01"])
def test_parse_rejects(bad):
    with pytest.raises(ParseError):
        parse_seq(bad)


@given(sequences)
def test_text_roundtrip(s):
    assert parse_seq(str(s)) == s
    assert str(parse_seq(str(s))) == str(s)


@given(sequences, sequences)
def test_lex_matches_long_prefixes(a, b):
    assert lex_compare(a, b) == naive_lex(a, b)
    assert (a < b) == (naive_lex(a, b) < 0)


@given(sequences, sequences)
def test_first_difference_matches_prefix_scan(a, b):
    n = first_difference(a, b)
    x, y = a.take(HORIZON), b.take(HORIZON)
    if n is None:
        assert x == y
    else:
        assert x[:n - 1] == y[:n - 1] and x[n - 1] != y[n - 1]


@given(sequences, st.integers(min_value=0, max_value=30))
def test_shift_and_truncate_agree_with_digits(s, n):
    assert shift(s, n).take(50) == s.take(n + 50)[n:]
    assert truncate(s, n) == s.take(n)


@given(sequences)
def test_reflect_is_involution_and_complements(s):
    assert reflect(reflect(s)) == s
    assert all(u != v for u, v in zip(s.take(80), reflect(s).take(80)))


@given(sequences, sequences, sequences)
def test_rho_ultrametric(a, b, c):
    assert rho(a, c) <= max(rho(a, b), rho(b, c))


@given(words)
def test_finite_words(w):
    s = DigitSeq.finite(w)
    assert s.take(len(w) + 5) == w + "0" * 5
    # 0^inf is not a finite expansion
    assert s.is_finite == ("1" in w)
    if "1" in w:
        assert s.last_one == w.rindex("1") + 1
