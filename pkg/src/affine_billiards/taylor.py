"""Batched truncated power-series arithmetic.

Used to convert exact theta-jets of a curve into exact jets with respect to
affine arc length at each evaluation point: form the local series of
sigma = (d s / d theta) = omega(x', x'')^(1/3), integrate, revert, compose.
All operations act on the last axis (coefficients 0..P) and broadcast over
leading batch axes.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "ps_mul",
    "ps_pow",
    "ps_antideriv",
    "ps_compose",
    "ps_reverse",
    "affine_jets_from_theta_jets",
]


def ps_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cauchy product truncated to the common order."""
    p = a.shape[-1]
    out = np.zeros(np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (p,))
    for j in range(p):
        out[..., j:] += a[..., j : j + 1] * b[..., : p - j]
    return out


def ps_pow(a: np.ndarray, alpha: float) -> np.ndarray:
    """a(u)**alpha for series with a[..., 0] > 0 (J.C.P. Miller recurrence)."""
    p = a.shape[-1]
    a0 = a[..., 0]
    out = np.zeros_like(a)
    out[..., 0] = a0**alpha
    for n in range(1, p):
        acc = np.zeros_like(a0)
        for j in range(1, n + 1):
            acc += ((alpha + 1.0) * j - n) * a[..., j] * out[..., n - j]
        out[..., n] = acc / (n * a0)
    return out


def ps_antideriv(a: np.ndarray) -> np.ndarray:
    """Termwise antiderivative with zero constant term, same truncation order."""
    out = np.zeros_like(a)
    out[..., 1:] = a[..., :-1] / np.arange(1, a.shape[-1])
    return out


def ps_compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a(b(u)) for inner series with b[..., 0] = 0, by Horner's scheme."""
    p = a.shape[-1]
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (p,)
    out = np.zeros(shape)
    out[..., 0] = a[..., p - 1]
    for j in range(p - 2, -1, -1):
        out = ps_mul(out, b)
        out[..., 0] += a[..., j]
    return out


def ps_reverse(s: np.ndarray) -> np.ndarray:
    """Compositional inverse of s(u) with s[..., 0] = 0 and s[..., 1] != 0.

    Newton iteration in series arithmetic; the number of correct orders
    roughly doubles per step.
    """
    p = s.shape[-1]
    ds = np.zeros_like(s)
    ds[..., :-1] = s[..., 1:] * np.arange(1, p)
    ds[..., -1] = 0.0
    u = np.zeros_like(s)
    u[..., 1] = 1.0 / s[..., 1]
    ident = np.zeros_like(s)
    ident[..., 1] = 1.0
    steps = max(3, math.ceil(math.log2(p)) + 1)
    for _ in range(steps):
        err = ps_compose(s, u) - ident
        slope = ps_compose(ds, u)
        u = u - ps_mul(err, ps_pow(slope, -1.0))
    return u


_FACT = np.array([math.factorial(j) for j in range(20)], dtype=float)


def affine_jets_from_theta_jets(theta_jets: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Jets with respect to affine arc length from exact theta-jets.

    theta_jets has shape batch + (P + 1, 2) with P >= order + 1 and must hold
    d^j x / d theta^j for j = 0..P.  Returns (jets_s, sigma) where jets_s has
    shape batch + (order + 1, 2) holding d^j x / d s^j and sigma = ds/dtheta
    at each point.  Requires omega(x', x'') > 0 (strict convexity, positive
    orientation).
    """
    pp = theta_jets.shape[-2]  # number of stored coefficients, P + 1
    if pp < order + 2:
        raise ValueError("need theta-jets to order at least order + 1")
    xc = theta_jets / _FACT[:pp, None]  # Taylor coefficients about the point
    n = np.arange(1, pp)
    dx = xc[..., 1:, :] * n[:, None]  # series of x', orders 0..P-1
    d2x = dx[..., 1:, :] * n[: pp - 2, None]  # series of x'', orders 0..P-2
    m = pp - 2
    w = ps_mul(dx[..., :m, 0], d2x[..., :m, 1]) - ps_mul(dx[..., :m, 1], d2x[..., :m, 0])
    if np.any(w[..., 0] <= 0.0):
        raise ValueError("omega(x', x'') <= 0: curve not strictly convex and counterclockwise")
    sigma = ps_pow(w, 1.0 / 3.0)
    s_series = np.zeros(sigma.shape[:-1] + (m + 1,))
    s_series[..., 1:] = sigma / np.arange(1, m + 1)
    u_of_s = ps_reverse(s_series)
    jets_s = np.empty(theta_jets.shape[:-2] + (order + 1, 2))
    for comp in range(2):
        comp_series = ps_compose(xc[..., : m + 1, comp], u_of_s)
        jets_s[..., comp] = comp_series[..., : order + 1] * _FACT[: order + 1]
    return jets_s, sigma[..., 0]
