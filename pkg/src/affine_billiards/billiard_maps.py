"""The two polygon dynamics on a convex table, as maps on boundary parameters.

Chord dynamics (inscribed case).  A state is a pair of boundary parameters
(s0, s1).  The successor s2 is the second intersection of the curve with the
line through x(s0) parallel to the tangent at x(s1); equivalently the chord
x(s0) x(s2) is parallel to x_s(s1).  Closed orbits of this map that wind once
around the table are exactly the critical inscribed polygons of the area
functional.

Tangent dynamics (circumscribed case).  A state is a pair of consecutive
tangency parameters (s0, s1).  The successor s2 is fixed by the reflection
rule: the vertex shared by the tangent lines at s1 and s2 must be the mirror
image, through the tangency point x(s1), of the vertex shared by the tangent
lines at s0 and s1.  Closed orbits correspond to critical circumscribed
polygons.  The same dynamics is also available in its classical form as a map
of outer points, y -> 2 x(tau) - y with tau the forward tangency from y.

All motion is counterclockwise.  Both maps are solved by bracketed bisection
(brentq) plus a Newton polish, using exact jets only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np
from scipy.optimize import brentq

from .affine_geometry import AffineCurve
from .curve_model import omega
from .errors import PhaseSpaceError

__all__ = [
    "ChordState",
    "OuterState",
    "RotationEstimate",
    "parallel_tangent_param",
    "symplectic_step",
    "symplectic_orbit",
    "outer_step",
    "outer_orbit",
    "outer_point_step",
    "tangency_from_point",
    "tangent_vertex",
    "rotation_number",
]

_SCAN = 64  # coarse bracketing resolution for the root solves


@dataclass(frozen=True)
class ChordState:
    """Consecutive vertex parameters of an inscribed trajectory."""

    s0: float
    s1: float


@dataclass(frozen=True)
class OuterState:
    """Consecutive tangency parameters of a circumscribed trajectory."""

    s0: float
    s1: float


@dataclass(frozen=True)
class RotationEstimate:
    value: float
    fraction: Fraction | None  # set when a periodic orbit was detected

    def __str__(self) -> str:
        if self.fraction is not None:
            return f"{self.value:.12f} (= {self.fraction})"
        return f"{self.value:.12f}"


def _tangent(af: AffineCurve, s) -> tuple[np.ndarray, np.ndarray]:
    jets = af.jets_at(np.atleast_1d(np.asarray(s, dtype=float)), 1)
    return jets[..., 0, :], jets[..., 1, :]


def parallel_tangent_param(af: AffineCurve, s: float) -> float:
    """The unique u in (s, s + lam) where the tangent is parallel to the one at s."""
    _, t0 = _tangent(af, s)
    t0 = t0[0]

    def h(u: np.ndarray) -> np.ndarray:
        _, tu = _tangent(af, u)
        return omega(tu, t0)

    delta = 1e-9 * af.lam
    u = _bracketed_root(h, s + delta, s + af.lam - delta, "the parallel-tangent parameter")
    for _ in range(3):  # Newton polish: h'(u) = omega(x_ss(u), t0)
        jets = af.jets_at(np.array([u]), 2)
        slope = float(omega(jets[0, 2, :], t0))
        if slope == 0.0:
            break
        u -= float(omega(jets[0, 1, :], t0)) / slope
    return float(u)


def _bracketed_root(fun, lo: float, hi: float, what: str) -> float:
    """First sign change of ``fun`` on (lo, hi), refined by brentq.

    ``fun`` must accept an ndarray of parameters, so the coarse scan costs a
    single batched curve evaluation.
    """
    grid = np.linspace(lo, hi, _SCAN + 1)
    vals = fun(grid)
    sign_flip = np.nonzero(np.diff(np.sign(vals)) != 0)[0]
    if len(sign_flip) == 0:
        raise PhaseSpaceError(f"no bracket found while solving for {what}")
    i = sign_flip[0]
    return brentq(
        lambda u: float(fun(np.array([u]))[0]),
        grid[i],
        grid[i + 1],
        xtol=1e-14 * max(1.0, abs(hi)),
    )


def symplectic_step(af: AffineCurve, s0: float, s1: float, validate: bool = True) -> float:
    """Advance the chord dynamics: s2 with x(s2) - x(s0) parallel to x_s(s1).

    Requires s1 in (s0, s0*) modulo the perimeter, where s0* is the parameter
    with tangent parallel to the one at s0; outside that strip the forward
    image would run backwards and a PhaseSpaceError is raised.
    """
    lam = af.lam
    s1 = s0 + (s1 - s0) % lam
    if validate:
        s0_star = parallel_tangent_param(af, s0)
        if not s0 < s1 < s0_star:
            raise PhaseSpaceError(
                f"s1 - s0 = {s1 - s0:.6g} outside the admissible interval "
                f"(0, {s0_star - s0:.6g})"
            )
    x0 = af.point(np.array([s0]))[0]
    _, t1 = _tangent(af, s1)
    t1 = t1[0]

    def g(u: np.ndarray) -> np.ndarray:
        return omega(af.point(u) - x0, t1)

    u = _bracketed_root(g, s1 + 1e-9 * lam, s0 + lam - 1e-9 * lam, "the next chord vertex")
    for _ in range(3):  # Newton polish: g'(u) = omega(x_s(u), t1)
        xu, tu = _tangent(af, u)
        slope = float(omega(tu[0], t1))
        if slope == 0.0:
            break
        u -= float(omega(xu[0] - x0, t1)) / slope
    return float(u)


def _vertex_offset_in(af: AffineCurve, s0: float, s1: float) -> float:
    """Signed offset a with v = x(s1) + a x_s(s1) the tangent intersection (a < 0)."""
    (x0, x1), (t0, t1) = (
        af.point(np.array([s0, s1])),
        af.jets_at(np.array([s0, s1]), 1)[:, 1, :],
    )
    den = float(omega(t1, t0))
    if den == 0.0:
        raise PhaseSpaceError("tangent lines are parallel; no vertex between tangency points")
    return float(-omega(x1 - x0, t0)) / den


def tangent_vertex(af: AffineCurve, s0: float, s1: float) -> np.ndarray:
    """Intersection point of the tangent lines at parameters s0 and s1."""
    x1, t1 = _tangent(af, s1)
    return x1[0] + _vertex_offset_in(af, s0, s1) * t1[0]


def outer_step(af: AffineCurve, s0: float, s1: float, validate: bool = True) -> float:
    """Advance the tangent dynamics: s2 placing x(s1) midway between vertices.

    The incoming vertex sits at x(s1) + a_in x_s(s1) with a_in < 0; the
    successor tangency s2 is the parameter whose shared vertex with s1 sits at
    offset -a_in on the other side.
    """
    lam = af.lam
    s1 = s0 + (s1 - s0) % lam
    if validate:
        s0_star = parallel_tangent_param(af, s0)
        if not s0 < s1 < s0_star:
            raise PhaseSpaceError(
                f"s1 - s0 = {s1 - s0:.6g} outside the admissible interval "
                f"(0, {s0_star - s0:.6g})"
            )
    a_in = _vertex_offset_in(af, s0, s1)
    x1, t1 = _tangent(af, s1)
    x1, t1 = x1[0], t1[0]
    s1_star = parallel_tangent_param(af, s1)

    def r(u: np.ndarray) -> np.ndarray:
        xu, tu = _tangent(af, u)
        return omega(xu - x1, tu) / omega(t1, tu) + a_in

    u = _bracketed_root(r, s1 + 1e-9 * lam, s1_star - 1e-9 * lam, "the next tangency point")
    for _ in range(3):  # Newton polish on the outgoing-offset residual
        jets = af.jets_at(np.array([u]), 2)
        xu, tu, cu = jets[0, 0, :], jets[0, 1, :], jets[0, 2, :]
        num = float(omega(xu - x1, tu))
        den = float(omega(t1, tu))
        slope = (float(omega(xu - x1, cu)) * den - num * float(omega(t1, cu))) / den**2
        if slope == 0.0:
            break
        u -= (num / den + a_in) / slope
    return float(u)


def tangency_from_point(af: AffineCurve, y: np.ndarray) -> float:
    """Forward tangency parameter seen from an outside point y.

    Of the two tangent lines through y, picks the one whose tangency point
    lies ahead of y along the counterclockwise tangent direction, which is the
    touching point used by the counterclockwise outer reflection.
    """
    y = np.asarray(y, dtype=float)
    n = max(128, af.grid_size // 8)
    grid = np.linspace(0.0, af.lam, n + 1)
    pts = af.point(grid)
    tans = af.jets_at(grid, 1)[:, 1, :]
    vals = omega(tans, y - pts)
    flips = np.nonzero(np.diff(np.sign(vals)) != 0)[0]
    if len(flips) == 0:
        raise PhaseSpaceError("no tangent line through the given point (it lies inside)")

    def f(u: float) -> float:
        xu, tu = _tangent(af, u)
        return float(omega(tu[0], y - xu[0]))

    for i in flips:
        root = brentq(f, grid[i], grid[i + 1], xtol=1e-13 * af.lam)
        xu, tu = _tangent(af, root)
        if float(np.dot(y - xu[0], tu[0])) < 0.0:
            return float(root)
    raise PhaseSpaceError("no forward tangency found from the given point")


def outer_point_step(af: AffineCurve, y: np.ndarray) -> tuple[np.ndarray, float]:
    """Classical outer reflection y -> 2 x(tau) - y; returns (new point, tau)."""
    tau = tangency_from_point(af, y)
    return 2.0 * af.point(np.array([tau]))[0] - np.asarray(y, dtype=float), tau


def symplectic_orbit(af: AffineCurve, s0: float, s1: float, steps: int) -> np.ndarray:
    """Unwrapped parameters (s0, s1, ..., s_{steps+1}) of the chord dynamics."""
    out = np.empty(steps + 2)
    out[0], out[1] = s0, s0 + (s1 - s0) % af.lam
    for i in range(steps):
        out[i + 2] = symplectic_step(af, out[i], out[i + 1])
    return out


def outer_orbit(af: AffineCurve, s0: float, s1: float, steps: int) -> np.ndarray:
    """Unwrapped tangency parameters of the tangent dynamics."""
    out = np.empty(steps + 2)
    out[0], out[1] = s0, s0 + (s1 - s0) % af.lam
    for i in range(steps):
        out[i + 2] = outer_step(af, out[i], out[i + 1])
    return out


def _orbit_iter(af: AffineCurve, kind: str, s0: float, s1: float) -> Iterator[float]:
    step = {"symplectic": symplectic_step, "outer": outer_step}[kind]
    prev, cur = s0, s0 + (s1 - s0) % af.lam
    yield prev
    yield cur
    while True:
        prev, cur = cur, step(af, prev, cur)
        yield cur


def rotation_number(
    af: AffineCurve,
    kind: str,
    s0: float,
    s1: float,
    steps: int = 128,
    max_period: int = 512,
    tol: float = 1e-9,
) -> RotationEstimate:
    """Average advance per step in units of the perimeter, with period detection.

    Iterates the chosen dynamics ``steps`` times; if the average advance is
    within ``tol`` of a rational p/q (q <= max_period) and the orbit actually
    returns to its start after q steps, the fraction is reported as well.
    """
    if kind not in ("symplectic", "outer"):
        raise ValueError("kind must be 'symplectic' or 'outer'")
    it = _orbit_iter(af, kind, s0, s1)
    traj = [next(it) for _ in range(steps + 2)]
    value = (traj[-1] - traj[1]) / (steps * af.lam)
    frac = Fraction(value).limit_denominator(max_period)
    if frac.denominator <= steps and abs(value - float(frac)) < tol:
        q, p = frac.denominator, frac.numerator
        if abs((traj[1 + q] - traj[1]) - p * af.lam) < tol * af.lam * max(1, p):
            return RotationEstimate(value=value, fraction=frac)
    return RotationEstimate(value=value, fraction=None)
