"""Acceptance criteria 1-10: one pass/fail line each, printed uncaptured."""

import pytest

from orbifold.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    res = run_criterion(number)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.summary
