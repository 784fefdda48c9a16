"""Acceptance gate: every stated limit checked at its stated tolerance.
Run with -s to see the one-line verdicts."""

from orthozero import acceptance


def _check(fn):
    result = fn()
    print(result.line())
    assert result.passed, result.detail


def test_criterion_01_global_limit():
    _check(acceptance.criterion_1)


def test_criterion_02_monte_carlo_consistency():
    _check(acceptance.criterion_2)


def test_criterion_03_local_limit():
    _check(acceptance.criterion_3)


def test_criterion_04_weak_convergence():
    _check(acceptance.criterion_4)


def test_criterion_05_concentration():
    _check(acceptance.criterion_5)


def test_criterion_06_monomial_slope():
    _check(acceptance.criterion_6)


def test_criterion_07_constants_and_densities():
    _check(acceptance.criterion_7)


def test_criterion_08_radius_and_masses():
    _check(acceptance.criterion_8)


def test_criterion_09_recurrence_oracle():
    _check(acceptance.criterion_9)


def test_criterion_10_universality():
    _check(acceptance.criterion_10)
