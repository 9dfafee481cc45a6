"""Geometry pipeline tests.

The perturbed-circle reference numbers below were computed independently with
a symbolic chain-rule oracle (exact theta-derivatives of the support
parametrization, evaluated in 50-digit arithmetic) and frozen here; the
library must reproduce them through its spectral/power-series route.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affine_billiards import CurveSpec, build_affine, check_omega_relations

# support h = 1 + 0.05 cos(3 theta)
ORACLE = {
    "lam": 6.225475198917067257378403,
    "I1": 5.97159918498579663630156,
    "I2": 11.38144661270552276895653,
    "k_at_0": -1.976051835827812670003419,
    "k_at_03": 1.028957148286941218120146,
    "k_at_1234": 1.26058828403418425693978,
    "k1_at_03": 9.555383560179005532644767,
    "k2_at_03": -96.88494659161230186742524,
    "s_at_03": 0.225418536961408408351519,
}


def test_circle_invariants(circle_af):
    # sigma = R^(2/3): lam = 2 pi, k = 1, I1 = 2 pi, I2 = 2 pi for R = 1
    assert circle_af.lam == pytest.approx(2 * math.pi, rel=1e-14)
    assert circle_af.area == pytest.approx(math.pi, rel=1e-14)
    assert circle_af.I1 == pytest.approx(2 * math.pi, rel=1e-13)
    assert circle_af.I2 == pytest.approx(2 * math.pi, rel=1e-13)
    assert np.max(np.abs(circle_af.k_grid - 1.0)) < 1e-12


def test_ellipse_invariants():
    # affine images of the circle: lam = 2 pi (ab)^{1/3}, k = (ab)^{-2/3}
    for a, b in [(2.0, 1.0), (3.0, 0.5)]:
        af = build_affine(CurveSpec.ellipse(a, b))
        ab3 = (a * b) ** (1.0 / 3.0)
        assert af.lam == pytest.approx(2 * math.pi * ab3, rel=1e-13)
        assert af.I1 == pytest.approx(2 * math.pi / ab3, rel=1e-12)
        assert af.I2 == pytest.approx(2 * math.pi / (a * b), rel=1e-12)
        assert np.max(np.abs(af.k_grid - (a * b) ** (-2.0 / 3.0))) < 1e-11


def test_perturbed_invariants_match_oracle(perturbed_af):
    af = perturbed_af
    assert af.lam == pytest.approx(ORACLE["lam"], rel=1e-14)
    assert af.I1 == pytest.approx(ORACLE["I1"], rel=1e-13)
    assert af.I2 == pytest.approx(ORACLE["I2"], rel=1e-13)
    assert af.area == pytest.approx(0.99 * math.pi, rel=1e-14)


def test_perturbed_pointwise_curvature_matches_oracle(perturbed_af):
    af = perturbed_af
    s03 = ORACLE["s_at_03"]
    assert af.s_of_theta(0.3) == pytest.approx(s03, abs=1e-14)
    k, k1, k2 = af.curvature_jet(np.array([s03]), 2)[0]
    assert k == pytest.approx(ORACLE["k_at_03"], rel=1e-12)
    assert k1 == pytest.approx(ORACLE["k1_at_03"], rel=1e-11)
    assert k2 == pytest.approx(ORACLE["k2_at_03"], rel=1e-10)
    assert af.curvature_at(np.array([0.0]))[0] == pytest.approx(ORACLE["k_at_0"], rel=1e-12)
    s1234 = af.s_of_theta(1.234)
    assert af.curvature_at(np.array([s1234]))[0] == pytest.approx(
        ORACLE["k_at_1234"], rel=1e-12
    )


def test_curvature_integrals_consistent(perturbed_af):
    i1, i2 = perturbed_af.curvature_integrals()
    assert i1 == pytest.approx(perturbed_af.I1, rel=1e-14)
    assert i2 == pytest.approx(perturbed_af.I2, rel=1e-14)


@settings(deadline=None, max_examples=60)
@given(s=st.floats(-20.0, 20.0))
def test_theta_of_s_round_trip(perturbed_af, s):
    af = perturbed_af
    theta = af.theta_of_s(s)
    assert af.s_of_theta(theta) == pytest.approx(s, abs=1e-11 * max(1.0, abs(s)))


def test_points_lie_on_support_envelope(perturbed_af):
    # x(theta) . n(theta) must reproduce the support value h(theta)
    thetas = np.linspace(0.0, 2 * math.pi, 17)
    pts = perturbed_af.curve.point(thetas)
    h = 1.0 + 0.05 * np.cos(3 * thetas)
    proj = pts[..., 0] * np.cos(thetas) + pts[..., 1] * np.sin(thetas)
    assert np.max(np.abs(proj - h)) < 1e-14


def test_omega_relations_converge():
    spec = CurveSpec.support_fourier(1.0, cos=[0, 0, 0.05])
    coarse = check_omega_relations(spec, 128)
    fine = check_omega_relations(spec, 256)
    assert coarse.max_deviation < 1e-6
    assert fine.max_deviation < 1e-9
    # spectral accuracy: better than 10x per grid doubling until roundoff
    assert fine.max_deviation < coarse.max_deviation / 10.0


def test_grid_size_env_override(monkeypatch):
    monkeypatch.setenv("BILLIARDS_GRID_SIZE", "512")
    af = build_affine(CurveSpec.circle(1.0))
    assert af.grid_size == 512
