"""Acceptance suite: one group per criterion, one printed line per check.

A summary line per criterion is echoed at the end of every pytest run; use
``pytest -v -s tests/test_acceptance.py`` to also see each individual check, or
``superkg verify`` for the same checks outside pytest.
"""

import time

import pytest

from superkg.checks import GROUPS, run_checks

CRITERIA = [
    (1, "coefficients"),
    (2, "dual-form"),
    (3, "initial-conditions"),
    (4, "pde-residual"),
    (5, "m0-reduction"),
    (6, "operator-truncation"),
    (7, "cross-oracle"),
    (8, "causality"),
    (9, "bargmann"),
    (10, "stochastic"),
    (11, "figures"),
]


def test_every_group_is_listed():
    assert [name for _, name in CRITERIA] == list(GROUPS)


@pytest.mark.parametrize("number,group", CRITERIA, ids=[g for _, g in CRITERIA])
def test_criterion(number, group, acceptance_log):
    start = time.perf_counter()
    results = run_checks([group])
    elapsed = time.perf_counter() - start
    assert results
    for res in results:
        print(f"criterion {number:2d}   {res.line()}")
    verdict = "PASS" if all(r.passed for r in results) else "FAIL"
    summary = (f"criterion {number:2d} {group}: {verdict} "
               f"({sum(r.passed for r in results)}/{len(results)} checks, {elapsed:.2f}s)")
    print(summary)
    acceptance_log.append(summary)
    failed = [r.line() for r in results if not r.passed]
    assert not failed, "\n".join(failed)


def test_tolerance_scaling_forces_failures():
    results = run_checks(["m0-reduction", "pde-residual"], tol_scale=1e-3)
    assert any(not r.passed for r in results)
