import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affine_billiards import ExtractionError
from affine_billiards.coeff_extraction import (
    DEFAULT_LADDER,
    DeficitSeries,
    collect_deficits,
    extract_coeffs,
    odd_power_check,
)
from affine_billiards.expansions import predict_deficit_coeffs


def synthetic_series(coeffs: dict, ladder, noise=0.0, seed=None) -> DeficitSeries:
    n = np.array(ladder, dtype=float)
    y = sum(c * n**-p for p, c in coeffs.items())
    if noise:
        rng = np.random.default_rng(seed)
        y = y * (1.0 + noise * rng.standard_normal(len(n)))
    return DeficitSeries(kind="inscribed", n=n, deficit=y, table_area=1.0, lam=1.0)


def test_exact_power_data_recovered():
    truth = {2: 17.0, 4: -80.0, 6: 300.0, 8: -1000.0}
    series = synthetic_series(truth, DEFAULT_LADDER)
    fit = extract_coeffs(series, powers=(2, 4, 6, 8))
    # the n^8 weights span ~1.7e7 in magnitude, so even exact data leaves a
    # few ulps times the condition number in the deep columns; the reported
    # uncertainties must cover whatever error remains
    for p, c in truth.items():
        assert abs(fit.coeff(p) - c) <= 10.0 * fit.uncertainty(p)
    for p in (2, 4, 6):
        assert fit.coeff(p) == pytest.approx(truth[p], rel=1e-7)
        assert fit.uncertainty(p) < 1e-6 * abs(truth[p])


@settings(deadline=None, max_examples=30)
@given(
    a2=st.floats(0.5, 50.0),
    a4=st.floats(-50.0, 50.0),
    a6=st.floats(-300.0, 300.0),
)
def test_fit_inverts_the_forward_model(a2, a4, a6):
    series = synthetic_series({2: a2, 4: a4, 6: a6}, (8, 12, 16, 24, 32, 48, 64))
    fit = extract_coeffs(series, powers=(2, 4, 6))
    assert fit.coeff(2) == pytest.approx(a2, rel=1e-8, abs=1e-10)
    assert fit.coeff(4) == pytest.approx(a4, rel=1e-8, abs=1e-8)
    assert fit.coeff(6) == pytest.approx(a6, rel=1e-8, abs=1e-6)


def test_needs_more_samples_than_powers():
    series = synthetic_series({2: 1.0}, (8, 16, 24))
    with pytest.raises(ExtractionError):
        extract_coeffs(series, powers=(2, 4, 6))


def test_degenerate_ladder_hits_condition_cap():
    series = synthetic_series({2: 1.0}, (16, 16, 16, 16, 16))
    with pytest.raises(ExtractionError):
        extract_coeffs(series, powers=(2, 4))


def test_odd_powers_read_as_zero_on_even_data():
    truth = {2: 20.0, 4: -37.0, 6: -25.0, 8: -300.0}
    series = synthetic_series(truth, DEFAULT_LADDER, noise=1e-10, seed=7)
    check = odd_power_check(series)
    assert check.powers == (3, 5)
    assert check.consistent_with_zero()


def test_odd_power_detects_planted_odd_term():
    truth = {2: 20.0, 3: 0.5, 4: -37.0, 6: -25.0}
    series = synthetic_series(truth, DEFAULT_LADDER, noise=1e-10, seed=7)
    check = odd_power_check(series)
    assert check.max_sigma_ratio > 10.0
    assert not check.consistent_with_zero()


def test_real_table_extraction_smoke(perturbed_af):
    pred = predict_deficit_coeffs(perturbed_af, "inscribed")
    series = collect_deficits(
        perturbed_af, "inscribed", (16, 20, 26, 32, 40), scan_phases=1
    )
    fit = extract_coeffs(series, powers=(2, 4, 6, 8))
    assert fit.coeff(2) == pytest.approx(pred.a2, rel=1e-6)
    assert fit.coeff(4) == pytest.approx(pred.a4, rel=1e-2)
