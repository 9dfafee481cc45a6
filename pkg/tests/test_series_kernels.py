"""Power-series and trigonometric-polynomial kernels under the hood."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affine_billiards.taylor import (
    affine_jets_from_theta_jets,
    ps_compose,
    ps_mul,
    ps_pow,
    ps_reverse,
)
from affine_billiards.trig import TrigCurve, TrigPoly, trig_mul

coef = st.floats(-2.0, 2.0)


@settings(deadline=None, max_examples=50)
@given(st.lists(coef, min_size=4, max_size=6), st.lists(coef, min_size=4, max_size=6))
def test_series_multiplication_matches_polynomial(a, b):
    size = min(len(a), len(b))
    a, b = np.array(a[:size]), np.array(b[:size])
    got = ps_mul(a, b)
    full = np.convolve(a, b)[:size]
    assert np.allclose(got, full, atol=1e-12)


@settings(deadline=None, max_examples=50)
@given(st.lists(coef, min_size=4, max_size=7))
def test_reversion_composes_to_identity(tail):
    series = np.array([0.0, 1.0] + tail)  # invertible: zero constant, unit slope
    inv = ps_reverse(series)
    ident = ps_compose(series, inv)
    want = np.zeros_like(series)
    want[1] = 1.0
    assert np.allclose(ident, want, atol=1e-9)


def test_fractional_power_series():
    # (1 + x)^(1/3) around 0
    base = np.array([1.0, 1.0, 0.0, 0.0, 0.0])
    got = ps_pow(base, 1.0 / 3.0)
    want = [1.0, 1 / 3, -1 / 9, 5 / 81, -10 / 243]  # binomial series
    assert np.allclose(got, want, atol=1e-14)


def test_trig_poly_derivative_and_eval():
    # f = 0.3 + cos t + 0.2 sin 2t
    f = TrigPoly(0.3, np.array([1.0, 0.0]), np.array([0.0, 0.2]))
    t = np.linspace(0.0, 2 * math.pi, 9)
    want = 0.3 + np.cos(t) + 0.2 * np.sin(2 * t)
    assert np.allclose(f(t), want, atol=1e-14)
    df = f.derivative()
    want_d = -np.sin(t) + 0.4 * np.cos(2 * t)
    assert np.allclose(df(t), want_d, atol=1e-14)


def test_trig_product_is_pointwise_product():
    f = TrigPoly(0.5, np.array([0.7]), np.array([-0.2]))
    g = TrigPoly(1.0, np.array([0.0, 0.3]), np.array([0.1, 0.0]))
    h = trig_mul(f, g)
    t = np.linspace(0.1, 6.0, 11)
    assert np.allclose(h(t), f(t) * g(t), atol=1e-13)


def test_affine_jets_on_unit_circle():
    """On the unit circle s = theta, so the s-jets are the theta-jets."""
    curve = TrigCurve(
        TrigPoly(0.0, np.array([1.0]), np.array([0.0])),
        TrigPoly(0.0, np.array([0.0]), np.array([1.0])),
    )
    theta = np.array([0.4, 2.1])
    tj = curve.jets(theta, 8)
    jets_s, sigma = affine_jets_from_theta_jets(tj, 6)
    assert np.allclose(sigma, 1.0, atol=1e-13)
    assert np.allclose(jets_s, tj[..., :7, :], atol=1e-11)


def test_affine_jets_reject_concave_data():
    # a clockwise circle has negative orientation
    curve = TrigCurve(
        TrigPoly(0.0, np.array([1.0]), np.array([0.0])),
        TrigPoly(0.0, np.array([0.0]), np.array([-1.0])),
    )
    with pytest.raises(ValueError):
        affine_jets_from_theta_jets(curve.jets(np.array([0.0]), 8), 6)
