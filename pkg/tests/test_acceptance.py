"""Acceptance criteria: one PASS/FAIL line per criterion (run with ``-s`` to see them)."""

import pytest

from maxdet.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"{c[0]:02d}-{c[1]}" for c in CRITERIA])
def test_criterion(number):
    result = run_criterion(number)
    print(result.line())
    assert result.ok, result.detail
    assert result.in_time, f"took {result.seconds:.2f}s, limit {result.limit}s"
