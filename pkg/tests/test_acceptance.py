"""The acceptance suite: one pass/fail line per criterion.

Runs every criterion at full scope.  Set CK_ALGEBRA_QUICK=1 for the
reduced samples used during development.
"""

import os

import pytest

from ck_algebra.acceptance import CRITERIA, run_suite

QUICK = os.environ.get("CK_ALGEBRA_QUICK") == "1"


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    result = CRITERIA[number](quick=QUICK)
    with capsys.disabled():
        print("\n" + result.line())
        for failure in result.failures[:5]:
            print("    " + failure)
    assert result.passed, result.failures[:5]


def test_fault_injection_is_detected(capsys):
    report = run_suite(only=[1], quick=True, inject_fault=True)
    (result,) = report.results
    with capsys.disabled():
        print("\nfault injection: " + ("detected" if not result.passed else "MISSED"))
    assert not report.passed
    assert result.failures and "expected" in result.failures[0]
