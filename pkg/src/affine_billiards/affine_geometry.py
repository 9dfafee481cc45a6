"""Equi-affine arc length, affine curvature, and the jet identities.

For a strictly convex counterclockwise curve x(theta), the affine arc length
element is ds = sigma d theta with sigma = omega(x', x'')^(1/3).  In the
parameter s the curve satisfies omega(x_s, x_ss) = 1, the affine curvature is
k(s) = omega(x_ss, x_sss), and x_sss = -k x_s.  The total affine perimeter is
written ``lam`` throughout.

:func:`build_affine` precomputes the reparametrization on a uniform theta
grid: sigma is sampled exactly, its antiderivative is formed in Fourier space
(spectrally accurate for these analytic curves), and theta(s) is then
available everywhere by Newton's method.  Jets in s at arbitrary points come
from the truncated-power-series pipeline in :mod:`affine_billiards.taylor`,
never from finite differences.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .curve_model import CurveSpec, omega
from .errors import ConvexityError, UnsupportedOrderError
from .taylor import affine_jets_from_theta_jets
from .trig import TrigCurve

__all__ = [
    "AffineCurve",
    "OmegaReport",
    "build_affine",
    "check_omega_relations",
    "DEFAULT_GRID_SIZE",
    "GRID_SIZE_ENV",
]

DEFAULT_GRID_SIZE = 2048
GRID_SIZE_ENV = "BILLIARDS_GRID_SIZE"

MAX_S_ORDER = 6


def _resolve_grid_size(grid_size: int | None) -> int:
    if grid_size is not None:
        return int(grid_size)
    env = os.environ.get(GRID_SIZE_ENV)
    return int(env) if env else DEFAULT_GRID_SIZE


def _fourier_deriv(values: np.ndarray) -> np.ndarray:
    """Spectral d/dtheta on a uniform periodic grid, with noise thresholding.

    Modes whose magnitude sits at the roundoff floor of the forward transform
    are zeroed before multiplying by i*m, which otherwise amplifies them by a
    factor of the mode number.
    """
    n = values.shape[-1]
    coeff = np.fft.rfft(values)
    floor = 1e-15 * np.max(np.abs(coeff))
    coeff[np.abs(coeff) < floor] = 0.0
    coeff *= 1j * np.arange(coeff.shape[-1])
    if n % 2 == 0:
        coeff[..., -1] = 0.0
    return np.fft.irfft(coeff, n)


@dataclass
class OmegaReport:
    """Max-norm residuals of the six jet identities on a check grid."""

    grid_size: int
    deviations: dict[str, float]
    curvature_scale: float

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values())

    def lines(self) -> list[str]:
        out = [f"jet identity residuals on a {self.grid_size}-point grid:"]
        for name, dev in self.deviations.items():
            out.append(f"  {name:28s} {dev:.3e}")
        out.append(f"  max residual                 {self.max_deviation:.3e}")
        return out


@dataclass
class AffineCurve:
    """A convex table with its affine arc-length structure precomputed."""

    curve: TrigCurve
    spec: CurveSpec | None
    grid_size: int
    lam: float  # affine perimeter
    area: float  # enclosed Euclidean area
    I1: float  # integral of k ds over one period
    I2: float  # integral of k^2 ds over one period
    theta_grid: np.ndarray = field(repr=False)
    s_grid: np.ndarray = field(repr=False)
    sigma_grid: np.ndarray = field(repr=False)
    k_grid: np.ndarray = field(repr=False)
    _c0: float = field(repr=False)
    _modes_m: np.ndarray = field(repr=False)
    _modes_sin: np.ndarray = field(repr=False)  # coefficients of sin(m theta) in s(theta)
    _modes_cos: np.ndarray = field(repr=False)  # coefficients of cos(m theta) in s(theta)
    _s_const: float = field(repr=False)

    # -- parameter conversion ----------------------------------------------

    def s_of_theta(self, theta) -> np.ndarray:
        """Affine arc length from theta = 0, spectral antiderivative of sigma."""
        theta = np.asarray(theta, dtype=float)
        out = self._c0 * theta + self._s_const
        if len(self._modes_m):
            ang = np.multiply.outer(theta, self._modes_m)
            out = out + np.sin(ang) @ self._modes_sin + np.cos(ang) @ self._modes_cos
        return out

    def sigma_of_theta(self, theta) -> np.ndarray:
        jets = self.curve.jets(theta, 2)
        w = omega(jets[..., 1, :], jets[..., 2, :])
        return np.cbrt(w)

    def theta_of_s(self, s) -> np.ndarray:
        """Invert s(theta) by Newton's method; accepts any real s (wraps by lam)."""
        s = np.asarray(s, dtype=float)
        turns = np.floor(s / self.lam)
        rem = s - turns * self.lam
        xp = np.concatenate([self.s_grid, [self.lam]])
        fp = np.concatenate([self.theta_grid, [2.0 * np.pi]])
        theta = np.interp(rem, xp, fp)
        for _ in range(8):
            ds = self.s_of_theta(theta) - rem
            theta = theta - ds / self.sigma_of_theta(theta)
            if np.max(np.abs(ds)) < 1e-14 * self.lam:
                break
        return theta + 2.0 * np.pi * turns

    # -- jets and curvature --------------------------------------------------

    def point(self, s) -> np.ndarray:
        return self.curve.point(self.theta_of_s(s))

    def jets_at(self, s, order: int = 2) -> np.ndarray:
        """d^j x / d s^j for j = 0..order, shape s.shape + (order + 1, 2)."""
        if order > MAX_S_ORDER:
            raise UnsupportedOrderError(
                f"jets in affine arc length supported to order {MAX_S_ORDER}, got {order}"
            )
        theta = np.atleast_1d(self.theta_of_s(s))
        theta_jets = self.curve.jets(theta, order + 2)
        jets_s, _ = affine_jets_from_theta_jets(theta_jets, order)
        return jets_s

    def curvature_jet(self, s, nderiv: int = 0) -> np.ndarray:
        """k and its s-derivatives up to ``nderiv`` (at most 2), stacked last.

        Uses the wedge-product identities k = omega(x_ss, x_sss),
        k' = omega(x_ss, x_ssss), k'' = omega(x_sss, x_ssss) + omega(x_ss, x_sssss),
        so the values are exact up to roundoff.
        """
        if nderiv > 2:
            raise UnsupportedOrderError("curvature derivatives supported to order 2")
        jets = self.jets_at(s, nderiv + 3)
        cols = [omega(jets[..., 2, :], jets[..., 3, :])]
        if nderiv >= 1:
            cols.append(omega(jets[..., 2, :], jets[..., 4, :]))
        if nderiv >= 2:
            cols.append(
                omega(jets[..., 3, :], jets[..., 4, :]) + omega(jets[..., 2, :], jets[..., 5, :])
            )
        return np.stack(cols, axis=-1)

    def curvature_at(self, s) -> np.ndarray:
        return self.curvature_jet(s, 0)[..., 0]

    def curvature_integrals(self) -> tuple[float, float]:
        """(integral of k ds, integral of k^2 ds) over one period."""
        return self.I1, self.I2


def build_affine(spec: CurveSpec | TrigCurve, grid_size: int | None = None) -> AffineCurve:
    """Precompute the affine arc-length structure on a uniform theta grid.

    The grid size defaults to 2048 and may be overridden by the
    ``BILLIARDS_GRID_SIZE`` environment variable.  All sampled quantities are
    evaluated exactly; the grid only limits the Fourier antiderivative of
    sigma, whose coefficients decay geometrically for these analytic curves.
    """
    n = _resolve_grid_size(grid_size)
    if isinstance(spec, CurveSpec):
        curve_spec: CurveSpec | None = spec
        curve = spec.compile()
    else:
        curve_spec = None
        curve = spec
    theta = np.arange(n) * (2.0 * np.pi / n)

    theta_jets = curve.jets(theta, 5)
    w = omega(theta_jets[..., 1, :], theta_jets[..., 2, :])
    if np.any(w <= 0.0):
        raise ConvexityError(
            "omega(x', x'') <= 0 on the sampling grid; the table must be "
            "strictly convex and counterclockwise"
        )
    sigma = np.cbrt(w)

    coeff = np.fft.rfft(sigma)
    c0 = coeff[0].real / n
    cos_c = 2.0 * coeff.real / n
    sin_c = -2.0 * coeff.imag / n
    if n % 2 == 0:
        cos_c[-1] *= 0.5
    m_all = np.arange(1, coeff.shape[-1])
    amp = np.hypot(cos_c[1:], sin_c[1:])
    keep = amp > 1e-16 * max(abs(c0), float(amp.max(initial=0.0)))
    m_kept = m_all[keep].astype(float)
    a_m = cos_c[1:][keep]
    b_m = sin_c[1:][keep]
    modes_sin = a_m / m_kept if len(m_kept) else np.zeros(0)
    modes_cos = -b_m / m_kept if len(m_kept) else np.zeros(0)
    s_const = -float(np.sum(modes_cos))
    lam = 2.0 * np.pi * c0

    jets_s, _ = affine_jets_from_theta_jets(theta_jets, 3)
    k = omega(jets_s[..., 2, :], jets_s[..., 3, :])

    dtheta = 2.0 * np.pi / n
    i1 = float(np.sum(k * sigma) * dtheta)
    i2 = float(np.sum(k * k * sigma) * dtheta)
    area = float(0.5 * np.sum(omega(theta_jets[..., 0, :], theta_jets[..., 1, :])) * dtheta)

    af = AffineCurve(
        curve=curve,
        spec=curve_spec,
        grid_size=n,
        lam=lam,
        area=area,
        I1=i1,
        I2=i2,
        theta_grid=theta,
        s_grid=np.zeros(n),
        sigma_grid=sigma,
        k_grid=k,
        _c0=c0,
        _modes_m=m_kept,
        _modes_sin=modes_sin,
        _modes_cos=modes_cos,
        _s_const=s_const,
    )
    af.s_grid = af.s_of_theta(theta)
    return af


_RELATION_NAMES = (
    "omega(x1,x4) = -k",
    "omega(x2,x4) = k'",
    "omega(x1,x5) = -2k'",
    "omega(x3,x4) = k^2",
    "omega(x2,x5) = k'' - k^2",
    "omega(x1,x6) = -3k'' + k^2",
)


def check_omega_relations(
    table: "AffineCurve | CurveSpec | TrigCurve", grid_size: int | None = None
) -> OmegaReport:
    """Residuals of the six wedge-product identities between jets and k.

    The left sides pair jets x^(j) = d^j x / ds^j obtained from the local
    power-series pipeline; the right sides differentiate the sampled affine
    curvature spectrally (an independent route, so agreement is a real check
    rather than an algebraic tautology).  Returns the max-norm residual of
    each identity over a uniform grid of ``grid_size`` points.
    """
    if isinstance(table, AffineCurve):
        curve = table.curve
        n = _resolve_grid_size(grid_size) if grid_size is not None else table.grid_size
    else:
        curve = table.compile() if isinstance(table, CurveSpec) else table
        n = _resolve_grid_size(grid_size)
    theta = np.arange(n) * (2.0 * np.pi / n)
    theta_jets = curve.jets(theta, 8)
    jets, sigma = affine_jets_from_theta_jets(theta_jets, 6)
    x = [jets[..., j, :] for j in range(7)]

    k = omega(x[2], x[3])
    k1 = _fourier_deriv(k) / sigma
    k2 = _fourier_deriv(k1) / sigma

    residuals = (
        omega(x[1], x[4]) + k,
        omega(x[2], x[4]) - k1,
        omega(x[1], x[5]) + 2.0 * k1,
        omega(x[3], x[4]) - k * k,
        omega(x[2], x[5]) - (k2 - k * k),
        omega(x[1], x[6]) + 3.0 * k2 - k * k,
    )
    deviations = {
        name: float(np.max(np.abs(res))) for name, res in zip(_RELATION_NAMES, residuals)
    }
    scale = float(max(1.0, np.max(np.abs(k)) ** 2, np.max(np.abs(k1)), np.max(np.abs(k2))))
    return OmegaReport(grid_size=n, deviations=deviations, curvature_scale=scale)
