"""One test per acceptance criterion; each prints a PASS/FAIL line with its measured numbers.

Tolerances live in ``betacantor.acceptance``.  Run directly with
``python3 tests/test_acceptance.py`` for the verdict lines alone.
"""
import pytest

from betacantor import acceptance


@pytest.mark.parametrize("number", [c[0] for c in acceptance.CRITERIA],
                         ids=[f"{c[0]:02d}-{c[1].replace(' ', '-')}" for c in acceptance.CRITERIA])
def test_criterion(number, capsys):
    verdict = acceptance.run(number)
    with capsys.disabled():
        print("\n" + verdict.line())
    assert verdict.passed, verdict.detail


if __name__ == "__main__":
    for v in acceptance.run_all():
        print(v.line())
