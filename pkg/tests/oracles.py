"""Independent reference implementations used to cross-check the library.

They work from the defining inequalities on partial sums and from long
digit prefixes, never through the library's residual recursions.
"""
from fractions import Fraction

from hypothesis import strategies as st

from betacantor.sequences import DigitSeq

HORIZON = 240


def partial_sum(p, word):
    return sum((Fraction(1) / p ** i for i, ch in enumerate(word, 1) if ch == "1"), Fraction(0))


def naive_digits(p, x, N, strict=False):
    """Digit n is 1 when the partial sum plus p^-n stays <= x (< x when strict)."""
    p, x = Fraction(p), Fraction(x)
    s, out = Fraction(0), []
    for n in range(1, N + 1):
        step = s + Fraction(1) / p ** n
        if step < x or (step == x and not strict):
            s = step
            out.append("1")
        else:
            out.append("0")
    return "".join(out)


def naive_value(q, seq, terms=HORIZON):
    """Truncated series; exact up to q^-terms/(q-1)."""
    return partial_sum(Fraction(q), seq.take(terms))


def naive_admissible(word_or_seq, alpha, strict):
    """Every tail that follows a 0 compared to alpha on long prefixes."""
    s = word_or_seq if isinstance(word_or_seq, DigitSeq) else DigitSeq.finite(word_or_seq)
    digits = s.take(HORIZON + 60)
    a = alpha.take(HORIZON)
    for i in range(60):
        if digits[i] == "0":
            tail = digits[i + 1:i + 1 + HORIZON]
            if (tail > a) if not strict else (tail >= a):
                return False
    return True


def naive_lex(a, b):
    x, y = a.take(HORIZON), b.take(HORIZON)
    return (x > y) - (x < y)


words = st.text(alphabet="01", max_size=12)
nonempty_words = st.text(alphabet="01", min_size=1, max_size=6)
sequences = st.builds(DigitSeq, words, nonempty_words)
