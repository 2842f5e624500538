import json
import math

import pytest

from dok.errors import EmptyInput
from dok.params import compute_params
from dok.verify import (
    CheckReport,
    SuiteConfig,
    check_annihilation,
    check_delta,
    check_evenness_decay,
    check_fourier_coefficients,
    check_partial_fractions,
    check_symbol_series,
    run_suite,
)


@pytest.fixture(scope="module")
def suite():
    return run_suite([0.2, 0.1, 0.05])


def test_report_passed_matches_residual():
    r = CheckReport(name="x", h=0.1, tolerance=1e-8, max_residual=1e-9)
    assert r.passed
    r.max_residual = 1e-7
    assert not r.passed
    r = CheckReport(name="x", h=0.1, tolerance=1e-8, max_residual=math.inf, reason="boom")
    assert not r.passed


@pytest.mark.parametrize("h", [0.1, 0.05])
def test_delta_passes(h):
    r = check_delta(compute_params(h), 20, 1e-8)
    assert r.passed and r.radius_used >= 2 and r.reason is None


def test_delta_unachievable():
    r = check_delta(compute_params(0.1), 20, 1e-30)
    assert not r.passed
    assert r.reason.startswith("TolUnachievable")


@pytest.mark.parametrize("target", ["sin", "cos", "xsin", "xcos"])
def test_annihilation(target):
    p = compute_params(0.1)
    r = check_annihilation(p, target, 10)
    assert r.passed and r.tolerance == pytest.approx(1e-7 * p.k)


@pytest.mark.parametrize("h", [0.2, 0.1, 0.05])
def test_control_fails(h):
    p = compute_params(h)
    r = check_annihilation(p, "x2", 10)
    assert not r.passed and not r.expect_pass and r.as_expected
    # residual ~ h (4 + x^2) from the brute-force oracle; far above the annihilation tolerance
    assert r.max_residual > 1e-6 * p.k
    assert r.max_residual == pytest.approx(h * (4 + (10 * h) ** 2), rel=1e-3)


def test_bad_inputs():
    p = compute_params(0.1)
    with pytest.raises(ValueError):
        check_delta(p, 4)
    with pytest.raises(ValueError):
        check_annihilation(p, "tan")
    with pytest.raises(ValueError):
        check_evenness_decay(p, 3)


@pytest.mark.parametrize("h", [0.1, 0.5, 0.001])
def test_evenness_decay(h):
    r = check_evenness_decay(compute_params(h), 30)
    assert r.passed and r.max_residual <= 1e-12
    assert r.criteria["ratio_ulps"][0] <= 4


def test_spectral_checks():
    p = compute_params(0.1)
    assert check_fourier_coefficients(p).passed
    assert check_symbol_series(p).passed
    assert check_partial_fractions(p).passed


def test_suite_count_without_controls():
    reports = run_suite([0.2, 0.1, 0.05], SuiteConfig(controls=False))
    assert len(reports) == 27
    assert all(r.passed for r in reports)


def test_suite_with_controls(suite):
    assert len(suite) == 30
    assert all(r.as_expected for r in suite)
    assert sum(not r.expect_pass for r in suite) == 3
    assert [r.name for r in suite[:10]] == [
        "delta", "annihilate_sin", "annihilate_cos", "annihilate_xsin", "annihilate_xcos", "control_x2",
        "evenness_decay", "spectral_coefficients", "spectral_series", "spectral_partial_fractions",
    ]


def test_deterministic(suite):
    again = run_suite([0.2, 0.1, 0.05])
    dump = lambda rs: json.dumps([r.as_dict() for r in rs], sort_keys=True)
    assert dump(suite) == dump(again)


def test_empty():
    with pytest.raises(EmptyInput):
        run_suite([])


def test_warning_outside_window():
    r = check_evenness_decay(compute_params(1.5), 10)
    assert r.warning and "outside" in r.warning
    assert r.passed
