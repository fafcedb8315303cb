"""The twelve acceptance criteria; each prints one PASS/FAIL line (run with -s to see them inline)."""

from __future__ import annotations

import pytest

from polybraid.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", range(1, len(CRITERIA) + 1), ids=[name for name, _ in CRITERIA])
def test_criterion(number, capsys):
    result = run_criterion(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail


def test_count():
    assert len(CRITERIA) == 12
