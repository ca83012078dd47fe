"""The fourteen acceptance criteria at full scale (500 terms per calculus, size 25).

Each test prints one PASS/FAIL line; the lines are repeated in the terminal summary.
"""

import pytest

from lambdabox.suite import CRITERIA, SuiteConfig, run_criterion

CONFIG = SuiteConfig()


@pytest.mark.parametrize("cid", range(1, len(CRITERIA) + 1), ids=lambda i: f"criterion_{i:02d}")
def test_criterion(cid, record_property):
    res = run_criterion(cid, CONFIG)
    line = f"{res.line()}  ({res.seconds:.1f}s)"
    record_property("criterion", line)
    print(f"\n{line}")
    assert res.passed, f"{res.detail}; witnesses: {res.stats.get('witnesses')}"
