"""One test per acceptance criterion; each reports a PASS/FAIL line."""

import pytest

from causalreg.acceptance import CHECKS, run_check


@pytest.mark.parametrize("name", list(CHECKS))
def test_criterion(name, record_property):
    r = run_check(name, seed=1)
    status = "PASS" if r.passed and r.within_budget else "FAIL"
    line = f"[{status}] {r.name}: {r.detail} ({r.seconds:.2f} s of {r.budget:.0f} s budget)"
    print(line)
    record_property("acceptance", line)
    assert r.passed, r.detail
    assert r.within_budget, f"runtime {r.seconds:.2f} s exceeds {r.budget} s"
