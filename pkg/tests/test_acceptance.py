"""Acceptance criteria 1-10, one test each.

Every test records a ``criterion N: PASS|FAIL`` line that pytest prints in
its terminal summary. Criterion 4 is held to the listed e_z element, which
disagrees with the dressed states by a factor of two; that test is an
expected failure and its line reads FAIL.
"""

import subprocess
import sys
import time

import pytest

from photondress import kernels, verify

from conftest import ACCEPTANCE_LINES


def record(number, result, extra=""):
    status = "PASS" if result.passed else "FAIL"
    line = f"criterion {number}: {status} - {result.name}, max_dev={result.max_dev:.3e}, tol={result.tol:.1e}"
    if result.detail:
        line += f" ({result.detail})"
    if extra:
        line += f" [{extra}]"
    ACCEPTANCE_LINES[number] = line
    print(line)


@pytest.fixture(scope="module", autouse=True)
def warm():
    kernels.warmup()


def timed(fn, *args):
    t0 = time.perf_counter()
    result = fn(*args)
    return result, time.perf_counter() - t0


def test_criterion_1_spin_half_exactness():
    result, elapsed = timed(verify.check_spin_half)
    fast = elapsed < 1.0
    record(1, result if fast else result.__class__(result.name, False, result.max_dev, result.tol, result.detail),
           f"runtime {elapsed:.2f} s < 1 s")
    assert result.passed and fast


def test_criterion_2_spin_j_reduction():
    result = verify.check_spin_j_reduction()
    record(2, result)
    assert result.passed


def test_criterion_3_spin_j_limit():
    result, elapsed = timed(verify.check_spin_j_limit)
    fast = elapsed < 5.0
    record(3, result if fast else result.__class__(result.name, False, result.max_dev, result.tol, result.detail),
           f"runtime {elapsed:.2f} s < 5 s")
    assert result.passed and fast


@pytest.mark.xfail(strict=True, reason="listed e_z magnitude is half the value the dressed states give")
def test_criterion_4_matrix_elements():
    result = verify.check_matrix_elements()
    record(4, result)
    assert result.passed


def test_criterion_4_families_one_to_three_and_selection_rule():
    # the part of criterion 4 unaffected by the e_z discrepancy
    family_dev, selection_ok = verify.matrix_element_deviations(verify.DEFAULT_SEED)
    assert all(family_dev[k] <= 1e-10 for k in (1, 2, 3))
    assert selection_ok


def test_criterion_5_frequencies():
    result = verify.check_frequencies()
    record(5, result)
    assert result.passed


def test_criterion_6_handedness():
    result = verify.check_handedness()
    record(6, result)
    assert result.passed


def test_criterion_7_charged():
    result = verify.check_charged()
    record(7, result)
    assert result.passed


def test_criterion_8_limits():
    result = verify.check_limits()
    record(8, result)
    assert result.passed


def test_criterion_9_hydrogen():
    result = verify.check_hydrogen()
    record(9, result)
    assert result.passed


def test_criterion_10_verify_end_to_end():
    cmd = [sys.executable, "-m", "photondress", "verify"]
    t0 = time.perf_counter()
    first = subprocess.run(cmd, capture_output=True, text=True)
    elapsed = time.perf_counter() - t0
    second = subprocess.run(cmd, capture_output=True, text=True)
    lines = first.stdout.splitlines()
    checks = [line for line in lines if line.startswith(("PASS ", "FAIL "))]
    all_passed = all(line.startswith("PASS ") for line in checks)
    expected_code = 0 if all_passed else 2
    ok = (
        elapsed <= 60.0
        and first.stdout == second.stdout
        and len(checks) == 9
        and first.returncode == second.returncode == expected_code
    )
    failing = [line.split(":")[0].split(" ", 1)[1] for line in checks if line.startswith("FAIL ")]
    status = "PASS" if ok else "FAIL"
    ACCEPTANCE_LINES[10] = (
        f"criterion 10: {status} - verify end-to-end, runtime {elapsed:.1f} s <= 60 s, "
        f"byte-identical reruns {first.stdout == second.stdout}, exit {first.returncode} "
        f"(failing checks: {', '.join(failing) or 'none'})"
    )
    print(ACCEPTANCE_LINES[10])
    assert ok
