"""The fourteen acceptance criteria, each at its stated tolerance and time budget.

Every run prints one ``[PASS]``/``[FAIL]`` line per criterion (see the
terminal summary hook in conftest.py, and stdout when run with ``-s``).
"""
import pytest

from bracketwords import verify

RESULTS: list = []


@pytest.mark.parametrize("number", [c[0] for c in verify.CRITERIA],
                         ids=[f"c{c[0]:02d}-{c[1].replace(' ', '-')}" for c in verify.CRITERIA])
def test_criterion(number):
    r = verify.run_criterion(number)
    RESULTS.append(r)
    print(r.line())
    assert r.passed, r.line()
    assert r.in_time, r.line()
