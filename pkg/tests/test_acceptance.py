"""Acceptance gate: every criterion runs at its stated tolerance.

Each test prints one PASS/FAIL line; run with ``pytest -s`` (or through
``qruler acceptance``) to see them.
"""

import pytest

from qruler.acceptance import CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda fn: fn.__name__)
def test_criterion(criterion):
    result = criterion()
    print(result.line())
    details = "\n".join(result.checks)
    assert result.passed, f"{result.line()}\n{details}"
