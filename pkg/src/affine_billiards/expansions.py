"""Asymptotic expansions: local area series, spacing laws, deficit and
beta-function coefficients, and the coefficient inequalities.

Everything here is expressed through four invariants of the table,

    lam = affine perimeter,  area = enclosed area,
    I1 = integral of k ds,   I2 = integral of k^2 ds,

with k the affine curvature.  The local series use k and its first two
s-derivatives at the left endpoint of the arc.

Conventions for the beta function at rotation number 1/n (winding-one
polygons):

* chord/inscribed dynamics: beta(1/n) = -(2/n) * (best inscribed n-gon area),
  an odd series beta1 x + beta3 x^3 + ... in x = 1/n;
* tangent/outer dynamics:   beta(1/n) = deficit(n) / n, likewise odd with
  beta1 = 0.

All rational constants below were derived by hand from the generating
recursions of the two dynamics and cross-checked numerically (circle and
ellipse closed forms, high-order fits on perturbed tables) before being
frozen here and in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .affine_geometry import AffineCurve

__all__ = [
    "ExpansionCoefficients",
    "RemainderSample",
    "TabReport",
    "chord_area_series",
    "tangent_area_series",
    "predict_deficit_coeffs",
    "predict_beta_coeffs",
    "predict_spacing",
    "beta_from_area",
    "beta_from_deficit",
    "ellipse_beta_coeffs",
    "series_remainder_table",
    "tab_inequality",
    "SPACING_COEFF",
]

# Gap-recursion coefficient c of each dynamics: consecutive gaps of a critical
# polygon differ by c * k'(s) * (lam/n)^4 + O(n^-5), which integrates to the
# explicit spacing law in predict_spacing.
SPACING_COEFF = {"inscribed": Fraction(1, 30), "circumscribed": Fraction(-1, 15)}


def chord_area_series(k, k1, k2, delta) -> np.ndarray:
    """Series of the area between an arc of affine length delta and its chord.

    F = d^3/12 - k d^5/240 - k' d^6/480 + (k^2/10080 - k''/1680) d^7 + O(d^8),
    with k, k', k'' at the arc's left endpoint.
    """
    k, k1, k2, d = np.broadcast_arrays(k, k1, k2, delta)
    d3 = d**3
    return d3 * (
        1.0 / 12.0
        - k * d * d / 240.0
        - k1 * d3 / 480.0
        + (k * k / 10080.0 - k2 / 1680.0) * d3 * d
    )


def tangent_area_series(k, k1, k2, delta) -> np.ndarray:
    """Series of the corner area between two tangent lines and their arc.

    H = d^3/24 + k d^5/240 + k' d^6/480 + (k''/1680 + 17 k^2/40320) d^7 + O(d^8),
    with k, k', k'' at the arc's left endpoint.
    """
    k, k1, k2, d = np.broadcast_arrays(k, k1, k2, delta)
    d3 = d**3
    return d3 * (
        1.0 / 24.0
        + k * d * d / 240.0
        + k1 * d3 / 480.0
        + (k2 / 1680.0 + 17.0 * k * k / 40320.0) * d3 * d
    )


def predict_spacing(af: AffineCurve, kind: str, n: int, s) -> np.ndarray:
    """Predicted parameter gaps of the critical n-gon whose tangency/vertex
    parameters are s: lam/n - c (lam^2/n^3) I1 + c (lam^3/n^3) k(s) with the
    dynamics' recursion coefficient c.  Accurate to O(n^-4)."""
    c = float(SPACING_COEFF[kind])
    lam = af.lam
    k = af.curvature_at(np.asarray(s, dtype=float))
    return lam / n - c * lam**2 / n**3 * af.I1 + c * lam**3 / n**3 * k


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Leading deficit and beta coefficients of one dynamics on one table."""

    kind: str
    lam: float
    area: float
    I1: float
    I2: float
    a2: float  # deficit(n) = a2/n^2 + a4/n^4 + a6/n^6 + O(n^-8)
    a4: float
    a6: float
    beta1: float  # beta(x) = beta1 x + beta3 x^3 + beta5 x^5 + beta7 x^7 + ...
    beta3: float
    beta5: float
    beta7: float

    def deficit_at(self, n) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        return self.a2 / n**2 + self.a4 / n**4 + self.a6 / n**6

    def beta_at(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        x2 = x * x
        return x * (self.beta1 + x2 * (self.beta3 + x2 * (self.beta5 + x2 * self.beta7)))


def predict_deficit_coeffs(af: AffineCurve, kind: str) -> ExpansionCoefficients:
    """Deficit and beta coefficients of the table from (lam, area, I1, I2)."""
    lam, i1, i2 = af.lam, af.I1, af.I2
    if kind == "inscribed":
        a2 = lam**3 / 12.0
        a4 = -(lam**4) * i1 / 240.0
        a6 = -(9.0 / 50400.0) * lam**6 * i2 + lam**5 * i1**2 / 3600.0
        beta = (-2.0 * af.area, 2.0 * a2, 2.0 * a4, 2.0 * a6)
    elif kind == "circumscribed":
        a2 = lam**3 / 24.0
        a4 = lam**4 * i1 / 240.0
        a6 = -(27.0 / 201600.0) * lam**6 * i2 + lam**5 * i1**2 / 1800.0
        beta = (0.0, a2, a4, a6)
    else:
        raise ValueError("kind must be 'inscribed' or 'circumscribed'")
    return ExpansionCoefficients(
        kind=kind,
        lam=lam,
        area=af.area,
        I1=i1,
        I2=i2,
        a2=a2,
        a4=a4,
        a6=a6,
        beta1=beta[0],
        beta3=beta[1],
        beta5=beta[2],
        beta7=beta[3],
    )


predict_beta_coeffs = predict_deficit_coeffs  # same object carries both


def beta_from_area(kind: str, n, polygon_area) -> np.ndarray:
    """Value of the beta function at rotation number 1/n from a solved polygon."""
    n = np.asarray(n, dtype=float)
    polygon_area = np.asarray(polygon_area, dtype=float)
    if kind == "inscribed":
        return -2.0 * polygon_area / n
    if kind == "circumscribed":
        raise ValueError("circumscribed beta values need the deficit; use beta_from_deficit")
    raise ValueError("kind must be 'inscribed' or 'circumscribed'")


def beta_from_deficit(kind: str, n, deficit, table_area: float) -> np.ndarray:
    """Beta value at 1/n from the area deficit (both dynamics)."""
    n = np.asarray(n, dtype=float)
    deficit = np.asarray(deficit, dtype=float)
    if kind == "inscribed":
        return -2.0 * (table_area - deficit) / n
    if kind == "circumscribed":
        return deficit / n
    raise ValueError("kind must be 'inscribed' or 'circumscribed'")


def _bernoulli(m_max: int) -> list[Fraction]:
    """B_0..B_{m_max} by the defining recurrence, exactly."""
    out = [Fraction(1)]
    for m in range(1, m_max + 1):
        acc = Fraction(0)
        binom = 1
        for j in range(m):
            acc += binom * out[j]
            binom = binom * (m + 1 - j) // (j + 1)
        out.append(-acc / (m + 1))
    return out


def ellipse_beta_coeffs(a: float, b: float, kind: str, count: int = 4) -> np.ndarray:
    """Exact beta coefficients (beta1, beta3, ...) for an ellipse with
    semi-axes a, b.

    Closed forms: the chord dynamics has beta(x) = -ab sin(2 pi x); the
    tangent dynamics has beta(x) = ab (tan(pi x) - pi x).  Taylor coefficients
    of tan come from Bernoulli numbers, kept as exact fractions until the
    final float multiply.
    """
    ab = a * b
    out = np.empty(count)
    if kind == "inscribed":
        fact = 1
        for m in range(count):
            fact *= max(1, (2 * m) * (2 * m + 1))
            out[m] = -ab * (-1) ** m * (2.0 * np.pi) ** (2 * m + 1) / fact
        return out
    if kind != "circumscribed":
        raise ValueError("kind must be 'inscribed' or 'circumscribed'")
    bern = _bernoulli(2 * count)
    out[0] = 0.0  # beta1: the pi x term cancels tan's linear part
    for m in range(1, count):
        t = (
            Fraction((-1) ** (m) * 2 ** (2 * m + 2) * (2 ** (2 * m + 2) - 1))
            * bern[2 * m + 2]
            / math.factorial(2 * m + 2)
        )
        out[m] = ab * float(t) * np.pi ** (2 * m + 1)
    return out


@dataclass(frozen=True)
class TabReport:
    """The quadratic coefficient inequality of one dynamics.

    gap is formed from the series coefficients alone; spectral_form evaluates
    the same quantity through the curvature integrals, const * lam^8 *
    (lam I2 - I1^2), which is nonnegative by Cauchy-Schwarz and zero exactly
    for constant affine curvature (ellipses).
    """

    kind: str
    gap: float
    spectral_form: float
    scale: float
    holds: bool

    @property
    def is_equality_case(self) -> bool:
        return abs(self.gap) <= 1e-9 * self.scale


def tab_inequality(af: AffineCurve, kind: str) -> TabReport:
    """Check the inequality tying beta5 and beta7, sharp exactly on ellipses.

    chord dynamics:   5! beta5^2 - 42 lam^3 beta7 >= 0
    tangent dynamics: 170 beta5^2 - 7 lam^3 beta7 >= 0
    """
    coeffs = predict_deficit_coeffs(af, kind)
    lam, i1, i2 = coeffs.lam, coeffs.I1, coeffs.I2
    if kind == "inscribed":
        gap = 120.0 * coeffs.beta5**2 - 42.0 * lam**3 * coeffs.beta7
        spectral = (3.0 / 200.0) * lam**8 * (lam * i2 - i1 * i1)
        scale = 120.0 * coeffs.beta5**2 + abs(42.0 * lam**3 * coeffs.beta7)
    else:
        gap = 170.0 * coeffs.beta5**2 - 7.0 * lam**3 * coeffs.beta7
        spectral = (3.0 / 3200.0) * lam**8 * (lam * i2 - i1 * i1)
        scale = 170.0 * coeffs.beta5**2 + abs(7.0 * lam**3 * coeffs.beta7)
    return TabReport(
        kind=kind,
        gap=gap,
        spectral_form=spectral,
        scale=scale,
        holds=gap >= -1e-12 * scale,
    )


@dataclass(frozen=True)
class RemainderSample:
    """Exact vs truncated local area at one arc length, for order checks."""

    delta: float
    chord_exact: float
    chord_series: float
    chord_remainder: float
    corner_exact: float
    corner_series: float
    corner_remainder: float


def series_remainder_table(
    af: AffineCurve, s0: float, deltas, nodes: int = 32
) -> list[RemainderSample]:
    """Compare quadrature-exact local areas against the truncated series.

    Both remainders drop by ~2^8 per halving of delta (the first omitted
    term is order delta^8), until quadrature/roundoff noise takes over
    around |remainder| ~ 1e-17.
    """
    from .polygon_solvers import chord_segment_areas, corner_region_areas

    deltas = np.asarray(deltas, dtype=float)
    k, k1, k2 = (float(v) for v in af.curvature_jet(np.asarray([s0]), 2)[0])
    rows = []
    for delta in deltas:
        lo = np.array([s0])
        hi = np.array([s0 + delta])
        f_exact = float(chord_segment_areas(af, lo, hi, nodes)[0])
        h_exact = float(corner_region_areas(af, lo, hi, nodes)[0])
        f_ser = float(chord_area_series(k, k1, k2, delta))
        h_ser = float(tangent_area_series(k, k1, k2, delta))
        rows.append(
            RemainderSample(
                delta=float(delta),
                chord_exact=f_exact,
                chord_series=f_ser,
                chord_remainder=abs(f_exact - f_ser),
                corner_exact=h_exact,
                corner_series=h_ser,
                corner_remainder=abs(h_exact - h_ser),
            )
        )
    return rows
