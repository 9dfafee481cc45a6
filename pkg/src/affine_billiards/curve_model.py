"""Curve descriptions, validation, and exact pointwise geometry.

Two kinds of input data are supported:

* ``ellipse`` with semi-axes a, b, traced as (a cos theta, b sin theta);
* ``support_fourier`` with a support function h(theta) given by a finite
  Fourier series.  The curve is recovered from the support function as
  x = h(theta) n(theta) + h'(theta) t(theta) with n = (cos theta, sin theta)
  and t = (-sin theta, cos theta); the radius of curvature is h + h''.

Both compile to a :class:`~affine_billiards.trig.TrigCurve`, i.e. a pair of
finite trigonometric polynomials, so jets of any order are exact.  In JSON
curve files the harmonic convention is ``cos[i]``/``sin[i]`` multiplying
cos((i+1) theta) / sin((i+1) theta): index i stores harmonic i + 1.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConvexityError, CurveSpecError, UnsupportedOrderError
from .trig import TrigCurve, TrigPoly, trig_mul

__all__ = [
    "CurveSpec",
    "Jet",
    "evaluate_jet",
    "ordinary_curvature",
    "enclosed_area",
    "omega",
]

MAX_JET_ORDER = 6
_VALIDATION_GRID = 4096


def omega(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Standard area form omega(u, v) = u1 v2 - u2 v1 (counterclockwise positive)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


@dataclass
class Jet:
    """Derivatives d^j x / d theta^j, j = 0..order, at one or many parameters."""

    order: int
    derivs: np.ndarray  # shape batch + (order + 1, 2)

    def deriv(self, j: int) -> np.ndarray:
        return self.derivs[..., j, :]


@dataclass
class CurveSpec:
    """Validated description of a smooth strictly-convex table."""

    kind: str
    a: float = 0.0
    b: float = 0.0
    a0: float = 0.0
    cos: tuple[float, ...] = ()
    sin: tuple[float, ...] = ()
    _compiled: TrigCurve | None = field(default=None, repr=False, compare=False)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def ellipse(a: float, b: float) -> "CurveSpec":
        spec = CurveSpec(kind="ellipse", a=float(a), b=float(b))
        spec.validate()
        return spec

    @staticmethod
    def circle(radius: float) -> "CurveSpec":
        return CurveSpec.ellipse(radius, radius)

    @staticmethod
    def support_fourier(a0: float, cos=(), sin=()) -> "CurveSpec":
        spec = CurveSpec(
            kind="support_fourier",
            a0=float(a0),
            cos=tuple(float(c) for c in cos),
            sin=tuple(float(c) for c in sin),
        )
        spec.validate()
        return spec

    @staticmethod
    def from_dict(data: dict) -> "CurveSpec":
        try:
            kind = data["kind"]
        except (KeyError, TypeError):
            raise CurveSpecError("curve data must be an object with a 'kind' field")
        if kind == "ellipse":
            try:
                return CurveSpec.ellipse(data["a"], data["b"])
            except KeyError as exc:
                raise CurveSpecError(f"ellipse curve needs field {exc}")
        if kind == "support_fourier":
            if "a0" not in data:
                raise CurveSpecError("support_fourier curve needs field 'a0'")
            return CurveSpec.support_fourier(
                data["a0"], data.get("cos", ()), data.get("sin", ())
            )
        raise CurveSpecError(f"unknown curve kind {kind!r}")

    @staticmethod
    def from_json(path: str | Path) -> "CurveSpec":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CurveSpecError(f"cannot read curve file {path}: {exc}")
        return CurveSpec.from_dict(data)

    @staticmethod
    def from_preset(text: str) -> "CurveSpec":
        """Parse shorthand like 'circle:1', 'ellipse:2,1' or 'fourier:1;0,0,0.05;'.

        The fourier form is 'fourier:a0;cos list;sin list' with comma-separated
        coefficients, harmonic i + 1 at index i; either list may be empty.
        """
        head, _, rest = text.partition(":")
        try:
            if head == "circle":
                return CurveSpec.circle(float(rest))
            if head == "ellipse":
                a, b = (float(v) for v in rest.split(","))
                return CurveSpec.ellipse(a, b)
            if head == "fourier":
                parts = rest.split(";")
                if len(parts) > 3:
                    raise ValueError("too many ';' sections")
                a0 = float(parts[0])
                cos = [float(v) for v in parts[1].split(",") if v.strip()] if len(parts) > 1 else []
                sin = [float(v) for v in parts[2].split(",") if v.strip()] if len(parts) > 2 else []
                return CurveSpec.support_fourier(a0, cos, sin)
        except CurveSpecError:
            raise
        except ValueError as exc:
            raise CurveSpecError(f"cannot parse curve preset {text!r}: {exc}")
        raise CurveSpecError(f"unknown curve preset {text!r}")

    @staticmethod
    def parse(text: str) -> "CurveSpec":
        """Accept either a preset string or a path to a JSON curve file."""
        if ":" in text and not Path(text).exists():
            return CurveSpec.from_preset(text)
        if Path(text).exists():
            return CurveSpec.from_json(text)
        raise CurveSpecError(f"curve argument {text!r} is neither a preset nor a file")

    # -- compilation and validation ---------------------------------------

    def compile(self) -> TrigCurve:
        if self._compiled is None:
            if self.kind == "ellipse":
                curve = TrigCurve(TrigPoly(0.0, [self.a]), TrigPoly(0.0, [], [self.b]))
            elif self.kind == "support_fourier":
                h = TrigPoly(self.a0, self.cos, self.sin)
                h1 = h.derivative()
                cos1 = TrigPoly(0.0, [1.0])
                sin1 = TrigPoly(0.0, [], [1.0])
                x = trig_mul(h, cos1).plus(trig_mul(h1, sin1).scaled(-1.0))
                y = trig_mul(h, sin1).plus(trig_mul(h1, cos1))
                curve = TrigCurve(x, y)
            else:
                raise CurveSpecError(f"unknown curve kind {self.kind!r}")
            self._compiled = curve
        return self._compiled

    def validate(self) -> None:
        if self.kind == "ellipse":
            if not (self.a > 0.0 and self.b > 0.0):
                raise CurveSpecError("ellipse semi-axes must be positive")
            return
        if self.kind != "support_fourier":
            raise CurveSpecError(f"unknown curve kind {self.kind!r}")
        h = TrigPoly(self.a0, self.cos, self.sin)
        rho = h.plus(h.derivative(2))  # radius of curvature
        theta = np.linspace(0.0, 2.0 * np.pi, _VALIDATION_GRID, endpoint=False)
        rho_min = float(np.min(rho(theta)))
        if rho_min <= 0.0:
            raise ConvexityError(
                f"support data is not strictly convex: min(h + h'') = {rho_min:.3e}"
            )
        amp = np.hypot(
            np.pad(np.asarray(self.cos, dtype=float), (0, max(0, len(self.sin) - len(self.cos)))),
            np.pad(np.asarray(self.sin, dtype=float), (0, max(0, len(self.cos) - len(self.sin)))),
        )
        m = np.arange(1, len(amp) + 1, dtype=float)
        bound = self.a0 - float(np.sum((m**2 + 1.0) * amp))
        if bound <= 0.0:
            # Sufficient (conservative) coefficient bound; the grid check above
            # is the one that decides validity.
            warnings.warn(
                "support coefficients fail the conservative convexity bound "
                f"a0 - sum((m^2 + 1)|c_m|) = {bound:.3e} <= 0; relying on grid check",
                stacklevel=2,
            )

    def describe(self) -> str:
        if self.kind == "ellipse":
            if self.a == self.b:
                return f"circle:{self.a:g}"
            return f"ellipse:{self.a:g},{self.b:g}"
        cos = ",".join(f"{c:g}" for c in self.cos)
        sin = ",".join(f"{c:g}" for c in self.sin)
        return f"fourier:{self.a0:g};{cos};{sin}"


def _as_curve(spec: "CurveSpec | TrigCurve") -> TrigCurve:
    return spec.compile() if isinstance(spec, CurveSpec) else spec


def evaluate_jet(spec: "CurveSpec | TrigCurve", theta, order: int = 2) -> Jet:
    """Exact theta-derivatives of the curve point up to ``order`` (at most 6)."""
    if order < 0:
        raise ValueError("jet order must be nonnegative")
    if order > MAX_JET_ORDER:
        raise UnsupportedOrderError(f"jet order {order} not supported (maximum {MAX_JET_ORDER})")
    return Jet(order, _as_curve(spec).jets(theta, order))


def ordinary_curvature(spec: "CurveSpec | TrigCurve", theta) -> np.ndarray:
    """Euclidean curvature kappa(theta) = omega(x', x'') / |x'|^3; must be positive."""
    jets = _as_curve(spec).jets(theta, 2)
    x1 = jets[..., 1, :]
    x2 = jets[..., 2, :]
    num = omega(x1, x2)
    if np.any(num <= 0.0):
        raise ConvexityError("curvature is not strictly positive at a requested parameter")
    return num / np.linalg.norm(x1, axis=-1) ** 3


def enclosed_area(spec: "CurveSpec | TrigCurve", samples: int | None = None) -> float:
    """Area enclosed by the curve, 0.5 * integral of omega(x, x') d theta.

    Uses the periodic trapezoid rule, which is spectrally exact here because
    the integrand is itself a finite trigonometric polynomial.
    """
    curve = _as_curve(spec)
    n = samples or max(_VALIDATION_GRID, 8 * (curve.degree + 1))
    theta = np.arange(n) * (2.0 * np.pi / n)
    jets = curve.jets(theta, 1)
    vals = omega(jets[..., 0, :], jets[..., 1, :])
    return float(0.5 * np.mean(vals) * 2.0 * np.pi)
