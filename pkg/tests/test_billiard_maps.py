import math
from fractions import Fraction

import numpy as np
import pytest

from affine_billiards import (
    CurveSpec,
    PhaseSpaceError,
    build_affine,
    outer_orbit,
    outer_point_step,
    outer_step,
    rotation_number,
    solve_circumscribed,
    solve_inscribed,
    symplectic_orbit,
    symplectic_step,
)
from affine_billiards.billiard_maps import parallel_tangent_param, tangency_from_point


def test_circle_chord_advance_is_constant(circle_af):
    gap = 2 * math.pi / 7
    s = symplectic_orbit(circle_af, 0.1, 0.1 + gap, 20)
    assert np.allclose(np.diff(s), gap, atol=1e-12)


def test_circle_outer_advance_is_constant(circle_af):
    gap = 0.9
    s = outer_orbit(circle_af, 0.0, gap, 20)
    assert np.allclose(np.diff(s), gap, atol=1e-12)


def test_symplectic_step_rejects_degenerate_chord(circle_af):
    with pytest.raises(PhaseSpaceError):
        symplectic_step(circle_af, 0.5, 0.5)


def test_parallel_tangent_on_symmetric_body(ellipse_af):
    # central symmetry: the tangent parallel to the one at s sits half a
    # perimeter away
    s = 0.37
    s_star = parallel_tangent_param(ellipse_af, s)
    assert s_star == pytest.approx(s + ellipse_af.lam / 2, abs=1e-10)


def test_solved_inscribed_polygon_is_a_map_orbit(perturbed_af):
    sol = solve_inscribed(perturbed_af, 9)
    s = np.append(sol.s, [sol.s[0] + perturbed_af.lam, sol.s[1] + perturbed_af.lam])
    for i in range(9):
        stepped = symplectic_step(perturbed_af, s[i], s[i + 1])
        assert stepped == pytest.approx(s[i + 2], abs=1e-9)


def test_solved_circumscribed_polygon_is_a_map_orbit(perturbed_af):
    sol = solve_circumscribed(perturbed_af, 9)
    s = np.append(sol.s, [sol.s[0] + perturbed_af.lam, sol.s[1] + perturbed_af.lam])
    for i in range(9):
        stepped = outer_step(perturbed_af, s[i], s[i + 1])
        assert stepped == pytest.approx(s[i + 2], abs=1e-9)


def test_outer_point_step_is_a_reflection(ellipse_af):
    y = np.array([3.2, 0.4])
    y2, tau = outer_point_step(ellipse_af, y)
    mid = 0.5 * (y + y2)
    assert np.allclose(mid, ellipse_af.point(tau), atol=1e-10)
    # square of the point map: forward tangency from y2 differs from tau
    y3, tau2 = outer_point_step(ellipse_af, y2)
    assert (tau2 - tau) % ellipse_af.lam > 1e-3


def test_tangency_rejects_interior_point(ellipse_af):
    with pytest.raises(PhaseSpaceError):
        tangency_from_point(ellipse_af, np.array([0.1, 0.1]))


def test_rotation_number_detects_rationals(circle_af):
    est = rotation_number(circle_af, "symplectic", 0.0, 2 * math.pi / 7, steps=64)
    assert est.fraction == Fraction(1, 7)
    est = rotation_number(circle_af, "outer", 0.0, 3 * 2 * math.pi / 11, steps=64)
    assert est.fraction == Fraction(3, 11)


def test_rotation_number_irrational_has_no_period(circle_af):
    est = rotation_number(circle_af, "symplectic", 0.0, 1.0, steps=64)
    assert est.fraction is None
    assert est.value == pytest.approx(1.0 / (2 * math.pi), rel=1e-6)
