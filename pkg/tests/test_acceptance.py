"""One test per reproduction criterion, run at the full level.

Each test prints the same pass/fail line as ``wiener-lab verify``.
"""
import pytest

from wiener_lab.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [num for num, _, _ in CRITERIA], ids=[f"{num:02d}-{title}" for num, title, _ in CRITERIA])
def test_criterion(number):
    res = run_criterion(number, level="full")
    print(res.line())
    assert res.passed, res.line()
