"""The acceptance grid, one test per criterion, each printing its line."""

import pytest

from posetmetrics.acceptance import CRITERIA, run_acceptance


@pytest.mark.parametrize("key,title,fn", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(key, title, fn):
    [result] = run_acceptance(keys=[key])
    print(result.line())
    assert result.passed, f"criterion {key} failed: {result.details}"
