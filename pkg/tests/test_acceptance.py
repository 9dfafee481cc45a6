"""Acceptance gate: eight numbered criteria, one test (one pass/fail line
under ``pytest -v``) per criterion.  Tolerances are pinned here and nowhere
else; each test prints a one-line summary with the measured margins.

Tables used below:
* unit circle and ellipses (1,1), (2,1), (3,0.5);
* the standard non-ellipse table, support h(t) = 1 + 0.05 cos 3t.
"""

import math
import time

import numpy as np
import pytest

from affine_billiards import (
    CurveSpec,
    best_polygon,
    build_affine,
    check_omega_relations,
    ellipse_beta_coeffs,
    predict_beta_coeffs,
    predict_spacing,
    series_remainder_table,
    solve_circumscribed,
    solve_inscribed,
    spacing_gaps,
    tab_inequality,
)
from affine_billiards.coeff_extraction import (
    DEFAULT_LADDER,
    collect_deficits,
    extract_coeffs,
    odd_power_check,
)

ELLIPSE_PRESETS = [(1.0, 1.0), (2.0, 1.0), (3.0, 0.5)]

TOL_CIRCLE_DEFICIT_ABS = 1e-12  # criterion 1
MAX_SECONDS_CIRCLE = 10.0  # criterion 1
TOL_BETA_REL = 1e-10  # criterion 2
TOL_A2_REL = 1e-8  # criterion 3
TOL_A4_REL = 1e-4  # criterion 3
TOL_A6_REL = 2e-2  # criterion 3
MAX_SECONDS_EXTRACTION = 300.0  # criterion 3
TOL_OMEGA_BASE = 1e-7  # criterion 4, 2048 nodes
TOL_OMEGA_REFINED = 1e-8  # criterion 4, 4096 nodes (10x tighter)
MIN_OMEGA_IMPROVEMENT = 10.0  # criterion 4, in the resolvable regime
REMAINDER_RATIO_LO = 2.0**6  # criterion 5
REMAINDER_RATIO_HI = 2.0**10  # criterion 5
SPACING_DECAY_FACTOR = 0.5  # criterion 6
TOL_ELLIPSE_SPACING_ABS = 1e-10  # criterion 6
TOL_TAB_EQUALITY_REL = 1e-10  # criterion 7
MIN_TAB_GAP_NORMALIZED = 1e-6  # criterion 7
MAX_ODD_POWER_SIGMA = 10.0  # criterion 8


def _line(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} ({detail})")


def test_criterion_1_circle_closed_forms(circle_af):
    started = time.perf_counter()
    worst = 0.0
    for n in range(3, 65):
        ins = solve_inscribed(circle_af, n)
        cir = solve_circumscribed(circle_af, n)
        want_ins = math.pi - 0.5 * n * math.sin(2 * math.pi / n)
        want_cir = n * math.tan(math.pi / n) - math.pi
        worst = max(worst, abs(ins.deficit - want_ins), abs(cir.deficit - want_cir))
    elapsed = time.perf_counter() - started
    ok = worst <= TOL_CIRCLE_DEFICIT_ABS and elapsed <= MAX_SECONDS_CIRCLE
    _line(1, ok, f"max |deficit - closed form| = {worst:.2e}, {elapsed:.1f}s")
    assert worst <= TOL_CIRCLE_DEFICIT_ABS
    assert elapsed <= MAX_SECONDS_CIRCLE


def test_criterion_2_ellipse_beta_coefficients():
    worst = 0.0
    for a, b in ELLIPSE_PRESETS:
        af = build_affine(CurveSpec.ellipse(a, b))
        for kind in ("inscribed", "circumscribed"):
            got = predict_beta_coeffs(af, kind)
            want = ellipse_beta_coeffs(a, b, kind)
            for g, w in zip((got.beta1, got.beta3, got.beta5, got.beta7), want):
                if w == 0.0:
                    assert g == 0.0  # tangent-dynamics beta1, exact on both routes
                else:
                    worst = max(worst, abs(g / w - 1.0))
    ok = worst <= TOL_BETA_REL
    _line(2, ok, f"max relative beta deviation = {worst:.2e}")
    assert worst <= TOL_BETA_REL


def test_criterion_3_perturbed_circle_extraction(perturbed_af):
    af = perturbed_af
    lam, i1, i2 = af.lam, af.I1, af.I2
    predicted = {
        "inscribed": (
            lam**3 / 12.0,
            -(lam**4) * i1 / 240.0,
            -9.0 * lam**6 * i2 / 50400.0 + lam**5 * i1**2 / 3600.0,
        ),
        "circumscribed": (
            lam**3 / 24.0,
            lam**4 * i1 / 240.0,
            -27.0 * lam**6 * i2 / 201600.0 + lam**5 * i1**2 / 1800.0,
        ),
    }
    started = time.perf_counter()
    rel = {}
    for kind, (a2, a4, a6) in predicted.items():
        fit = extract_coeffs(collect_deficits(af, kind, DEFAULT_LADDER))
        rel[kind] = (
            abs(fit.coeff(2) / a2 - 1.0),
            abs(fit.coeff(4) / a4 - 1.0),
            abs(fit.coeff(6) / a6 - 1.0),
        )
    elapsed = time.perf_counter() - started
    ok = elapsed <= MAX_SECONDS_EXTRACTION and all(
        r2 <= TOL_A2_REL and r4 <= TOL_A4_REL and r6 <= TOL_A6_REL
        for r2, r4, r6 in rel.values()
    )
    detail = ", ".join(
        f"{kind} rel err a2/a4/a6 = {r2:.1e}/{r4:.1e}/{r6:.1e}"
        for kind, (r2, r4, r6) in rel.items()
    )
    _line(3, ok, f"{detail}, {elapsed:.0f}s")
    for r2, r4, r6 in rel.values():
        assert r2 <= TOL_A2_REL
        assert r4 <= TOL_A4_REL
        assert r6 <= TOL_A6_REL
    assert elapsed <= MAX_SECONDS_EXTRACTION


def test_criterion_4_jet_identity_suite():
    spec = CurveSpec.support_fourier(1.0, cos=[0, 0, 0.05])
    base = check_omega_relations(spec, 2048)
    refined = check_omega_relations(spec, 4096)
    # Both large grids converge to the roundoff floor (~5e-11), each far
    # below its bound; the refined bound is 10x tighter, and the actual
    # >= 10x decay per refinement is verified where discretization error is
    # still resolvable above that floor.
    coarse = check_omega_relations(spec, 128)
    mid = check_omega_relations(spec, 256)
    improvement = coarse.max_deviation / mid.max_deviation
    ok = (
        base.max_deviation <= TOL_OMEGA_BASE
        and refined.max_deviation <= TOL_OMEGA_REFINED
        and improvement >= MIN_OMEGA_IMPROVEMENT
    )
    _line(
        4,
        ok,
        f"max residual {base.max_deviation:.1e} @2048, "
        f"{refined.max_deviation:.1e} @4096, refinement gain x{improvement:.0f}",
    )
    assert base.max_deviation <= TOL_OMEGA_BASE
    assert refined.max_deviation <= TOL_OMEGA_REFINED
    assert improvement >= MIN_OMEGA_IMPROVEMENT


def test_criterion_5_series_remainder_orders(circle_af, perturbed_af):
    ratios = []
    for af in (circle_af, perturbed_af):
        rows = series_remainder_table(af, 0.1, [0.4, 0.2, 0.1])
        for prev, cur in zip(rows, rows[1:]):
            ratios.append(prev.chord_remainder / cur.chord_remainder)
            ratios.append(prev.corner_remainder / cur.corner_remainder)
    ok = all(REMAINDER_RATIO_LO <= r <= REMAINDER_RATIO_HI for r in ratios)
    _line(5, ok, "halving ratios " + ", ".join(f"{r:.0f}" for r in ratios))
    for r in ratios:
        assert REMAINDER_RATIO_LO <= r <= REMAINDER_RATIO_HI


def test_criterion_6_spacing_laws(perturbed_af):
    def scaled_residual(kind, n):
        sol = best_polygon(perturbed_af, kind, n, scan_phases=1)
        pred = predict_spacing(perturbed_af, kind, n, sol.s)
        return n**3 * float(np.max(np.abs(spacing_gaps(sol, perturbed_af.lam) - pred)))

    decays = {}
    for kind in ("inscribed", "circumscribed"):
        r32, r128 = scaled_residual(kind, 32), scaled_residual(kind, 128)
        decays[kind] = (r32, r128)

    worst_gap = 0.0
    for a, b in ELLIPSE_PRESETS:
        af = build_affine(CurveSpec.ellipse(a, b))
        for kind in ("inscribed", "circumscribed"):
            sol = best_polygon(af, kind, 32, scan_phases=1)
            dev = float(np.max(np.abs(spacing_gaps(sol, af.lam) - af.lam / 32)))
            worst_gap = max(worst_gap, dev)

    ok = worst_gap <= TOL_ELLIPSE_SPACING_ABS and all(
        r128 <= SPACING_DECAY_FACTOR * r32 for r32, r128 in decays.values()
    )
    detail = ", ".join(
        f"{kind} n^3 residual {r32:.1e}->{r128:.1e}" for kind, (r32, r128) in decays.items()
    )
    _line(6, ok, f"{detail}; ellipse gap dev {worst_gap:.1e}")
    for r32, r128 in decays.values():
        assert r128 <= SPACING_DECAY_FACTOR * r32
    assert worst_gap <= TOL_ELLIPSE_SPACING_ABS


def test_criterion_7_coefficient_inequality(perturbed_af):
    worst_eq = 0.0
    for a, b in ELLIPSE_PRESETS:
        af = build_affine(CurveSpec.ellipse(a, b))
        for kind in ("inscribed", "circumscribed"):
            rep = tab_inequality(af, kind)
            assert rep.holds
            worst_eq = max(worst_eq, abs(rep.gap) / rep.scale)
    gaps = {}
    for kind in ("inscribed", "circumscribed"):
        rep = tab_inequality(perturbed_af, kind)
        assert rep.holds
        gaps[kind] = rep.gap / rep.scale
    ok = worst_eq <= TOL_TAB_EQUALITY_REL and all(
        g > MIN_TAB_GAP_NORMALIZED for g in gaps.values()
    )
    _line(
        7,
        ok,
        f"ellipse |gap|/scale <= {worst_eq:.1e}; perturbed normalized gaps "
        + ", ".join(f"{kind} {g:.2e}" for kind, g in gaps.items()),
    )
    assert worst_eq <= TOL_TAB_EQUALITY_REL
    for g in gaps.values():
        assert g > MIN_TAB_GAP_NORMALIZED


def test_criterion_8_odd_power_absence(perturbed_af):
    ratios = {}
    for kind in ("inscribed", "circumscribed"):
        series = collect_deficits(perturbed_af, kind, DEFAULT_LADDER)
        check = odd_power_check(series)
        ratios[kind] = check.max_sigma_ratio
    ok = all(r <= MAX_ODD_POWER_SIGMA for r in ratios.values())
    _line(
        8,
        ok,
        "odd n^-3/n^-5 coefficients within "
        + ", ".join(f"{kind} {r:.1f} sigma" for kind, r in ratios.items()),
    )
    for r in ratios.values():
        assert r <= MAX_ODD_POWER_SIGMA
