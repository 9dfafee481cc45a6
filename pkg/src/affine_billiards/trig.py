"""Finite trigonometric polynomials with exact derivatives and products.

Every curve handled by this package has components that are finite Fourier
series in the parameter theta, so derivatives of any order are computed by
rotating coefficients, never by numerical differentiation.
"""

from __future__ import annotations

import numpy as np

__all__ = ["TrigPoly", "TrigCurve", "trig_mul"]


class TrigPoly:
    """p(theta) = const + sum_m (cos_m * cos(m theta) + sin_m * sin(m theta))."""

    __slots__ = ("const", "cos", "sin")

    def __init__(self, const: float = 0.0, cos=(), sin=()):
        m = max(len(cos), len(sin))
        self.const = float(const)
        self.cos = np.zeros(m, dtype=float)
        self.sin = np.zeros(m, dtype=float)
        self.cos[: len(cos)] = np.asarray(cos, dtype=float)
        self.sin[: len(sin)] = np.asarray(sin, dtype=float)
        self._trim()

    def _trim(self) -> None:
        m = len(self.cos)
        while m > 0 and self.cos[m - 1] == 0.0 and self.sin[m - 1] == 0.0:
            m -= 1
        self.cos = self.cos[:m]
        self.sin = self.sin[:m]

    @property
    def degree(self) -> int:
        return len(self.cos)

    def derivative(self, order: int = 1) -> "TrigPoly":
        """Exact derivative of the given order (coefficient rotation)."""
        c = self.cos.copy()
        s = self.sin.copy()
        m = np.arange(1, self.degree + 1, dtype=float)
        for _ in range(order):
            c, s = m * s, -m * c
        out = TrigPoly(self.const if order == 0 else 0.0)
        out.cos, out.sin = c, s
        return out

    def __call__(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if self.degree == 0:
            return np.full(theta.shape, self.const)
        m = np.arange(1, self.degree + 1, dtype=float)
        ang = np.multiply.outer(theta, m)
        return self.const + np.cos(ang) @ self.cos + np.sin(ang) @ self.sin

    def scaled(self, factor: float) -> "TrigPoly":
        out = TrigPoly(self.const * factor)
        out.cos = self.cos * factor
        out.sin = self.sin * factor
        return out

    def plus(self, other: "TrigPoly") -> "TrigPoly":
        m = max(self.degree, other.degree)
        c = np.zeros(m)
        s = np.zeros(m)
        c[: self.degree] += self.cos
        s[: self.degree] += self.sin
        c[: other.degree] += other.cos
        s[: other.degree] += other.sin
        return TrigPoly(self.const + other.const, c, s)

    def _to_complex(self) -> np.ndarray:
        """Coefficients c_k for k = -deg..deg with p = sum c_k exp(i k theta)."""
        d = self.degree
        c = np.zeros(2 * d + 1, dtype=complex)
        c[d] = self.const
        for k in range(1, d + 1):
            c[d + k] = 0.5 * (self.cos[k - 1] - 1j * self.sin[k - 1])
            c[d - k] = 0.5 * (self.cos[k - 1] + 1j * self.sin[k - 1])
        return c

    @staticmethod
    def _from_complex(c: np.ndarray) -> "TrigPoly":
        d = (len(c) - 1) // 2
        cos = np.empty(d)
        sin = np.empty(d)
        for k in range(1, d + 1):
            cos[k - 1] = (c[d + k] + c[d - k]).real
            sin[k - 1] = (c[d + k] - c[d - k]).imag * -1.0
        return TrigPoly(c[d].real, cos, sin)


def trig_mul(p: TrigPoly, q: TrigPoly) -> TrigPoly:
    """Exact product of two trigonometric polynomials."""
    if p.degree == 0:
        return q.scaled(p.const)
    if q.degree == 0:
        return p.scaled(q.const)
    return TrigPoly._from_complex(np.convolve(p._to_complex(), q._to_complex()))


class TrigCurve:
    """Closed plane curve whose components are trigonometric polynomials.

    Provides exact theta-jets of any order; this is the single evaluation
    primitive everything else in the package is built on.
    """

    def __init__(self, x: TrigPoly, y: TrigPoly):
        self.x = x
        self.y = y
        self._deriv_cache: list[tuple[TrigPoly, TrigPoly]] = [(x, y)]

    @property
    def degree(self) -> int:
        return max(self.x.degree, self.y.degree)

    def _derivs(self, order: int) -> list[tuple[TrigPoly, TrigPoly]]:
        while len(self._deriv_cache) <= order:
            px, py = self._deriv_cache[-1]
            self._deriv_cache.append((px.derivative(), py.derivative()))
        return self._deriv_cache

    def jets(self, theta, order: int) -> np.ndarray:
        """Stacked derivatives d^j x / d theta^j, j = 0..order.

        Returns an array of shape theta.shape + (order + 1, 2).
        """
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        derivs = self._derivs(order)
        deg = max(max(px.degree, py.degree) for px, py in derivs[: order + 1])
        out = np.empty(theta.shape + (order + 1, 2))
        if deg == 0:
            for j, (px, py) in enumerate(derivs[: order + 1]):
                out[..., j, 0] = px.const
                out[..., j, 1] = py.const
            return out
        m = np.arange(1, deg + 1, dtype=float)
        ang = np.multiply.outer(theta, m)
        cosm = np.cos(ang)
        sinm = np.sin(ang)
        for j, (px, py) in enumerate(derivs[: order + 1]):
            for comp, p in ((0, px), (1, py)):
                v = np.full(theta.shape, p.const)
                if p.degree:
                    v = v + cosm[..., : p.degree] @ p.cos + sinm[..., : p.degree] @ p.sin
                out[..., j, comp] = v
        return out

    def point(self, theta) -> np.ndarray:
        return self.jets(theta, 0)[..., 0, :]

    def linear_image(self, mat) -> "TrigCurve":
        """Curve image under a 2x2 linear map, exact on coefficients."""
        mat = np.asarray(mat, dtype=float)
        if mat.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        nx = self.x.scaled(mat[0, 0]).plus(self.y.scaled(mat[0, 1]))
        ny = self.x.scaled(mat[1, 0]).plus(self.y.scaled(mat[1, 1]))
        return TrigCurve(nx, ny)
