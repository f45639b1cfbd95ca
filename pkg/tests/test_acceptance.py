"""The ten acceptance criteria at their stated tolerances and runtime budgets.

Each test prints one PASS/FAIL line, also when run under capture.
"""
import pytest

from schwarzflow.acceptance import CRITERIA


@pytest.mark.parametrize("cid", sorted(CRITERIA))
def test_criterion(cid, capsys):
    r = CRITERIA[cid]()
    with capsys.disabled():
        print("\n" + r.line())
    assert r.passed, f"{r.line()}\n{r.detail}"
