"""Acceptance suite: one printed PASS/FAIL line per criterion.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or through the
command ``furuta-ohta selftest``.
"""

from __future__ import annotations

import json
import subprocess
import sys
import time

import pytest

from furuta_ohta.acceptance import CRITERIA, DEFAULT_SEED, CriterionResult, run_criterion


def report(capsys, result: CriterionResult) -> None:
    with capsys.disabled():
        print(f"\n{result.line()}")
        print(f"    {json.dumps(result.details, sort_keys=True)[:400]}")


@pytest.mark.parametrize("number", [num for num, *_ in CRITERIA],
                         ids=[f"criterion_{num}_{name.replace(' ', '_')}" for num, name, *_ in CRITERIA])
def test_criterion(capsys, number):
    result = run_criterion(number, DEFAULT_SEED)
    report(capsys, result)
    assert result.passed, result.details
    assert result.within_time, f"took {result.elapsed_s:.2f}s, limit {result.limit_s}s"


def _selftest_without_timing() -> str:
    proc = subprocess.run([sys.executable, "-m", "furuta_ohta", "selftest", "--seed", str(DEFAULT_SEED)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    rec = json.loads(proc.stdout)
    rec.pop("timing")
    return json.dumps(rec, sort_keys=True)


def test_criterion_9_determinism(capsys):
    t0 = time.perf_counter()
    first = _selftest_without_timing()
    second = _selftest_without_timing()
    same = first == second
    result = CriterionResult(9, "determinism", same, float("inf"), {"identical": same, "bytes": len(first)},
                             time.perf_counter() - t0)
    report(capsys, result)
    assert same
