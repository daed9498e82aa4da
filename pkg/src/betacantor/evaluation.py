"""Evaluation of sum c_i q^-i on words and eventually periodic sequences."""
from __future__ import annotations

from fractions import Fraction

from .precision import ApproxReal, Base, as_real, iv_add, iv_div, iv_mul, iv_sub
from .sequences import as_seq

_ONE = (Fraction(1), Fraction(1))


def _exact(q):
    if isinstance(q, Base):
        q = q.value
    q = as_real(q)
    return q.value if q.exact else None


def word_sum(q_value, word):
    """Exact sum_{i<=n} w_i q^-i for an exact base value."""
    if isinstance(q_value, (int, Fraction)):
        # integer Horner over the common denominator a^n for q = a/b
        a, b = Fraction(q_value).numerator, Fraction(q_value).denominator
        num, den = 0, 1
        for ch in reversed(word):
            if ch == "1":
                num += den
            num *= b
            den *= a
        return Fraction(num, den)
    inv = 1 / q_value
    v = Fraction(0)
    for ch in reversed(word):
        v = (v + 1) * inv if ch == "1" else v * inv
    return v


def _word_sum_iv(q_iv, word, prec):
    inv = iv_div(_ONE, q_iv, prec)
    v = (Fraction(0), Fraction(0))
    for ch in reversed(word):
        if ch == "1":
            v = iv_add(v, _ONE, prec)
        v = iv_mul(v, inv, prec)
    return v


def _seq_exact(qv, seq):
    head = word_sum(qv, seq.prefix)
    if seq.period == "0":
        return head
    inv = 1 / qv
    L = len(seq.period)
    inv_L = inv ** L
    cycle = word_sum(qv, seq.period) / (1 - inv_L)
    return head + inv ** len(seq.prefix) * cycle


def _seq_interval(q_iv, seq, prec):
    head = _word_sum_iv(q_iv, seq.prefix, prec)
    if seq.period == "0":
        return head
    inv = iv_div(_ONE, q_iv, prec)
    inv_L = _ONE
    for _ in range(len(seq.period)):
        inv_L = iv_mul(inv_L, inv, prec)
    cycle = iv_div(_word_sum_iv(q_iv, seq.period, prec), iv_sub(_ONE, inv_L, prec), prec)
    scale = _ONE
    for _ in range(len(seq.prefix)):
        scale = iv_mul(scale, inv, prec)
    return iv_add(head, iv_mul(scale, cycle, prec), prec)


def pi_eval(q, seq):
    """Closed-form value of a digit sequence in base ``q``.

    Exact whenever ``q`` is exact; otherwise a refinable enclosure.
    """
    seq = as_seq(seq)
    qv = _exact(q)
    if qv is not None:
        return ApproxReal(_seq_exact(qv, seq))
    qr = q.value if isinstance(q, Base) else as_real(q)
    return ApproxReal(fn=lambda pr: _seq_interval(qr.interval(pr), seq, pr), prec=qr.prec)


def pi_word(q, word):
    """Value of the finite word followed by zeros."""
    qv = _exact(q)
    if qv is not None:
        return ApproxReal(word_sum(qv, word))
    qr = q.value if isinstance(q, Base) else as_real(q)
    return ApproxReal(fn=lambda pr: _word_sum_iv(qr.interval(pr), word, pr), prec=qr.prec)


def tail_bound(q, n):
    """Largest possible contribution of the digits after index n: q^-n/(q-1)."""
    qr = q.value if isinstance(q, Base) else as_real(q)
    return 1 / (qr ** n * (qr - 1))


def pi_prefix(q, word):
    """Enclosure of pi_q over every sequence that starts with ``word``."""
    head = pi_word(q, word)
    tail = tail_bound(q, len(word))
    return ApproxReal(
        fn=lambda pr: (head.interval(pr)[0], iv_add(head.interval(pr), tail.interval(pr), pr)[1]),
        prec=max(head.prec, tail.prec))
