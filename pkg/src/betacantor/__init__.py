"""Digit expansions in non-integer bases, base-change maps and the Cantor-type staircase B_{p,q}."""
from .basechange import (
    BasePair,
    a_pq,
    b_pq,
    jump_left_b,
    jump_right_a,
    monotonicity_witness_a,
    monotonicity_witness_b,
)
from .cantor import StaircaseConfig, gap_intervals, locate, staircase_eval
from .errors import BetaError, DomainError, PrecisionExhausted
from .evaluation import pi_eval, pi_word
from .expansions import (
    Kind,
    alpha_one,
    count_admissible,
    greedy_digits,
    is_admissible,
    membership,
    quasi_greedy_digits,
)
from .precision import GOLDEN_RATIO, ApproxReal, Base, QuadraticNumber, make_real
from .sequences import DigitSeq, parse_seq

__version__ = "0.1.0"

__all__ = [
    "ApproxReal", "Base", "BasePair", "BetaError", "DigitSeq", "DomainError", "GOLDEN_RATIO", "Kind",
    "PrecisionExhausted", "QuadraticNumber", "StaircaseConfig", "__version__", "a_pq", "alpha_one", "b_pq",
    "count_admissible", "gap_intervals", "greedy_digits", "is_admissible", "jump_left_b", "jump_right_a",
    "locate", "make_real", "membership", "monotonicity_witness_a", "monotonicity_witness_b", "parse_seq",
    "pi_eval", "pi_word", "quasi_greedy_digits", "staircase_eval",
]
