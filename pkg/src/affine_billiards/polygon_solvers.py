"""Best approximating inscribed and circumscribed polygons.

Critical polygons are computed by Newton's method on the gradient of the
polygon-area functional in the vertex (resp. tangency) parameters:

* inscribed n-gon, vertices x(s_i): grad_i = 0.5 * omega(x_s(s_i),
  x(s_{i+1}) - x(s_{i-1})), zero exactly when each chord skipping a vertex is
  parallel to the tangent there (the chord dynamics' periodicity condition);
* circumscribed n-gon, tangency points x(s_i): the gradient is
  0.5 * (a_in_i^2 - a_out_i^2) where a_in/a_out are the signed tangential
  offsets of the two polygon vertices adjacent to x(s_i); zero exactly at the
  reflection (midpoint) condition of the tangent dynamics.

Both gradients have analytic cyclic-tridiagonal Jacobians (the area Hessians),
so Newton steps are exact, and the same matrix certifies second-order
optimality after convergence.  The Newton step is solved in the least-squares
sense, which transparently handles the rotational null mode present for
tables of constant affine curvature (ellipses).

Area deficits are evaluated from per-edge Gauss-Legendre quadrature of the
region between the polygon and the curve, not by subtracting two nearly equal
areas.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .affine_geometry import AffineCurve
from .curve_model import omega
from .errors import PhaseSpaceError, SolverError

__all__ = [
    "SolverConfig",
    "best_polygon",
    "PolygonSolution",
    "DeficitSample",
    "solve_inscribed",
    "solve_circumscribed",
    "deficit_sweep",
    "chord_segment_areas",
    "corner_region_areas",
    "shoelace_area",
    "spacing_gaps",
]


@dataclass
class SolverConfig:
    """Knobs for the polygon Newton solvers; the defaults suit n >= 3 on any
    validated table."""

    max_iter: int = 60
    grad_tol: float | None = None  # default: 1e-13 * (lam/n)^2
    gauss_nodes: int = 0  # 0 = pick from edge length
    check_second_order: bool = True
    phase: float = 0.0  # offset of the uniform initial guess
    max_step_fraction: float = 0.45  # Newton step cap, in units of the mean gap
    second_order_tol: float = 1e-7  # relative slack for the definiteness check


@dataclass
class PolygonSolution:
    """A converged critical polygon with its certificates."""

    kind: str  # "inscribed" or "circumscribed"
    n: int
    s: np.ndarray  # boundary parameters, increasing, one period
    vertices: np.ndarray  # polygon vertices, (n, 2)
    area: float  # polygon area (shoelace)
    deficit: float  # |table area - polygon area|, by quadrature
    grad_norm: float
    iterations: int
    second_order_ok: bool | None
    hessian_edge: float | None = field(default=None)
    # largest Hessian eigenvalue for inscribed (should be <= 0 up to slack),
    # smallest for circumscribed (should be >= 0 up to slack)


@dataclass
class DeficitSample:
    kind: str
    n: int
    deficit: float
    area: float
    grad_norm: float
    iterations: int


def shoelace_area(points: np.ndarray) -> float:
    """Signed polygon area, positive for counterclockwise vertex order."""
    return float(0.5 * np.sum(omega(points, np.roll(points, -1, axis=0))))


def spacing_gaps(sol: PolygonSolution, lam: float) -> np.ndarray:
    """Parameter gaps s_{i+1} - s_i of a solution, wrapping the last edge."""
    return np.diff(np.append(sol.s, sol.s[0] + lam))


def _gauss_nodes_for(max_gap: float, requested: int) -> int:
    if requested:
        return requested
    # Gauss error decays like (gap/2)^(2g); 12 nodes are ample for gaps < 1,
    # grow for the short-polygon regime where edges are order-one long.
    return 12 + 4 * int(np.ceil(max(0.0, max_gap)))


def chord_segment_areas(
    af: AffineCurve, s_from: np.ndarray, s_to: np.ndarray, nodes: int = 0
) -> np.ndarray:
    """Areas between curve arcs and their chords, one per (s_from, s_to) pair.

    Evaluates 0.5 * integral of omega(x(t) - x(s_from), x_s(t)) dt by fixed
    Gauss-Legendre quadrature on each arc.
    """
    s_from = np.asarray(s_from, dtype=float)
    s_to = np.asarray(s_to, dtype=float)
    g = _gauss_nodes_for(float(np.max(s_to - s_from)), nodes)
    xi, wgt = np.polynomial.legendre.leggauss(g)
    half = 0.5 * (s_to - s_from)
    t = 0.5 * (s_from + s_to)[..., None] + half[..., None] * xi
    jets = af.jets_at(t.ravel(), 1).reshape(t.shape + (2, 2))
    base = af.point(s_from)[..., None, :]
    integrand = omega(jets[..., 0, :] - base, jets[..., 1, :])
    return 0.5 * (integrand @ wgt) * half


def corner_region_areas(
    af: AffineCurve, s_from: np.ndarray, s_to: np.ndarray, nodes: int = 0
) -> np.ndarray:
    """Areas pinched between two tangent lines and the arc joining their
    tangency points: triangle (x_from, vertex, x_to) minus the chord segment."""
    s_from = np.asarray(s_from, dtype=float)
    s_to = np.asarray(s_to, dtype=float)
    jets = af.jets_at(np.stack([s_from, s_to]), 1)
    x0, t0 = jets[0, ..., 0, :], jets[0, ..., 1, :]
    x1, t1 = jets[1, ..., 0, :], jets[1, ..., 1, :]
    den = omega(t0, t1)
    if np.any(den <= 0.0):
        raise PhaseSpaceError("tangent lines do not meet forward of the arc")
    a_out = omega(x1 - x0, t1) / den
    vertex = x0 + a_out[..., None] * t0
    triangle = 0.5 * omega(vertex - x0, x1 - x0)
    return triangle - chord_segment_areas(af, s_from, s_to, nodes)


# -- Newton infrastructure ---------------------------------------------------


def _cyclic_matrix(lower: np.ndarray, diag: np.ndarray, upper: np.ndarray) -> np.ndarray:
    n = len(diag)
    mat = np.zeros((n, n))
    idx = np.arange(n)
    mat[idx, idx] = diag
    mat[idx, (idx + 1) % n] = upper
    mat[idx, (idx - 1) % n] = lower
    return mat


def _inscribed_system(af: AffineCurve, s: np.ndarray):
    jets = af.jets_at(s, 2)
    x, t, c = jets[:, 0, :], jets[:, 1, :], jets[:, 2, :]
    diff = np.roll(x, -1, axis=0) - np.roll(x, 1, axis=0)
    grad = 0.5 * omega(t, diff)
    diag = 0.5 * omega(c, diff)
    upper = 0.5 * omega(t, np.roll(t, -1, axis=0))
    lower = -0.5 * omega(t, np.roll(t, 1, axis=0))
    return grad, _cyclic_matrix(lower, diag, upper)


def _circumscribed_edges(af: AffineCurve, s: np.ndarray):
    """Per-edge vertex offsets and their parameter derivatives.

    Edge e joins tangencies (s_e, s_{e+1}); its polygon vertex sits at
    x_e + a_out_e * t_e = x_{e+1} + a_in_e * t_{e+1} with a_out_e > 0 > a_in_e.
    """
    jets = af.jets_at(s, 2)
    x, t, c = jets[:, 0, :], jets[:, 1, :], jets[:, 2, :]
    xu, tu, cu = (np.roll(v, -1, axis=0) for v in (x, t, c))
    d = xu - x
    den = omega(t, tu)
    if np.any(den <= 0.0):
        raise PhaseSpaceError(
            "consecutive tangent lines fail to intersect properly; "
            "tangency points are out of order or too far apart"
        )
    a_out = omega(d, tu) / den
    a_in = omega(d, t) / den
    w_cr_tu = omega(c, tu)
    w_tr_cu = omega(t, cu)
    da_out_dr = -1.0 - a_out * w_cr_tu / den
    da_out_du = (omega(d, cu) - a_out * w_tr_cu) / den
    da_in_dr = (omega(d, c) - a_in * w_cr_tu) / den
    da_in_du = -1.0 - a_in * w_tr_cu / den
    vertices = x + a_out[:, None] * t
    return a_out, a_in, da_out_dr, da_out_du, da_in_dr, da_in_du, vertices


def _circumscribed_system(af: AffineCurve, s: np.ndarray):
    a_out, a_in, da_out_dr, da_out_du, da_in_dr, da_in_du, _ = _circumscribed_edges(af, s)
    b_in = np.roll(a_in, 1)  # incoming offset seen from tangency i (edge i-1)
    grad = 0.5 * (b_in**2 - a_out**2)
    diag = b_in * np.roll(da_in_du, 1) - a_out * da_out_dr
    lower = b_in * np.roll(da_in_dr, 1)
    upper = -a_out * da_out_du
    return grad, _cyclic_matrix(lower, diag, upper)


def _ordered(s: np.ndarray, lam: float) -> bool:
    ext = np.append(s, s[0] + lam)
    return bool(np.all(np.diff(ext) > 0.0))


def _newton_solve(af: AffineCurve, system, s0: np.ndarray, cfg: SolverConfig):
    lam = af.lam
    n = len(s0)
    tol = cfg.grad_tol if cfg.grad_tol is not None else 1e-13 * (lam / n) ** 2
    cap = cfg.max_step_fraction * lam / n
    s = s0.copy()
    grad, hess = system(af, s)
    norm = float(np.max(np.abs(grad)))
    for iteration in range(1, cfg.max_iter + 1):
        if norm <= tol:
            return s, grad, hess, norm, iteration - 1
        step = np.linalg.lstsq(hess, -grad, rcond=None)[0]
        big = np.max(np.abs(step))
        if big > cap:
            step *= cap / big
        accepted = False
        for _ in range(30):  # backtrack until the gradient norm drops
            s_try = s + step
            if _ordered(s_try, lam):
                g_try, h_try = system(af, s_try)
                n_try = float(np.max(np.abs(g_try)))
                if n_try < norm or np.max(np.abs(step)) < 1e-15 * lam:
                    s, grad, hess, norm = s_try, g_try, h_try, n_try
                    accepted = True
                    break
            step *= 0.5
        if not accepted:
            # Levenberg fallback: damp the Hessian until a descent step exists
            mu = 1e-6 * float(np.max(np.abs(hess)))
            for _ in range(20):
                step = np.linalg.lstsq(hess + mu * np.eye(n), -grad, rcond=None)[0]
                s_try = s + step
                if _ordered(s_try, lam):
                    g_try, h_try = system(af, s_try)
                    n_try = float(np.max(np.abs(g_try)))
                    if n_try < norm:
                        s, grad, hess, norm = s_try, g_try, h_try, n_try
                        accepted = True
                        break
                mu *= 10.0
            if not accepted:
                if norm <= 1e3 * tol:
                    # stalled at the evaluation roundoff floor; by the envelope
                    # theorem this residual perturbs areas only quadratically
                    return s, grad, hess, norm, iteration
                raise SolverError(
                    f"Newton stalled at gradient norm {norm:.3e} after "
                    f"{iteration} iterations (tolerance {tol:.3e})"
                )
    if norm <= 100.0 * tol:
        warnings.warn(
            f"polygon solver reached max_iter with gradient norm {norm:.3e}",
            stacklevel=2,
        )
        return s, grad, hess, norm, cfg.max_iter
    raise SolverError(
        f"polygon solver failed to converge: gradient norm {norm:.3e} > {tol:.3e}"
    )


def _second_order(hess: np.ndarray, kind: str, slack_rel: float):
    sym = 0.5 * (hess + hess.T)
    eigs = np.linalg.eigvalsh(sym)
    scale = float(np.max(np.abs(eigs))) or 1.0
    if kind == "inscribed":  # area maximum: spectrum <= 0 up to slack
        edge = float(eigs[-1])
        ok = edge <= slack_rel * scale
    else:  # area minimum: spectrum >= 0 up to slack
        edge = float(eigs[0])
        ok = edge >= -slack_rel * scale
    return ok, edge


def _solve(af: AffineCurve, n: int, kind: str, cfg: SolverConfig) -> PolygonSolution:
    if n < 3:
        raise ValueError("polygons need at least 3 vertices")
    system = _inscribed_system if kind == "inscribed" else _circumscribed_system
    lam = af.lam
    phases = (cfg.phase, cfg.phase + 0.5 * lam / n, cfg.phase + 0.25 * lam / n)
    last_exc: SolverError | None = None
    for attempt, phase in enumerate(phases):
        s0 = phase + lam * np.arange(n) / n
        try:
            s, grad, hess, norm, iters = _newton_solve(af, system, s0, cfg)
        except SolverError as exc:
            last_exc = exc
            continue
        ok: bool | None = None
        edge: float | None = None
        if cfg.check_second_order:
            ok, edge = _second_order(hess, kind, cfg.second_order_tol)
            if not ok and attempt + 1 < len(phases):
                continue  # landed on a saddle family; retry shifted
        if kind == "inscribed":
            vertices = af.point(s)
            area = shoelace_area(vertices)
            gaps_to = np.append(s[1:], s[0] + lam)
            deficit = float(np.sum(chord_segment_areas(af, s, gaps_to, cfg.gauss_nodes)))
        else:
            vertices = _circumscribed_edges(af, s)[-1]
            area = shoelace_area(vertices)
            gaps_to = np.append(s[1:], s[0] + lam)
            deficit = float(np.sum(corner_region_areas(af, s, gaps_to, cfg.gauss_nodes)))
        return PolygonSolution(
            kind=kind,
            n=n,
            s=s - lam * np.floor(s[0] / lam),
            vertices=vertices,
            area=area,
            deficit=deficit,
            grad_norm=norm,
            iterations=iters,
            second_order_ok=ok,
            hessian_edge=edge,
        )
    if last_exc is not None:
        raise last_exc
    raise SolverError(
        f"{kind} polygon with n={n}: every attempt converged to a critical "
        "point failing the second-order check"
    )


def solve_inscribed(af: AffineCurve, n: int, cfg: SolverConfig | None = None) -> PolygonSolution:
    """Maximum-area inscribed n-gon (winding number one)."""
    return _solve(af, n, "inscribed", cfg or SolverConfig())


def solve_circumscribed(
    af: AffineCurve, n: int, cfg: SolverConfig | None = None
) -> PolygonSolution:
    """Minimum-area circumscribed n-gon (winding number one)."""
    return _solve(af, n, "circumscribed", cfg or SolverConfig())


def best_polygon(
    af: AffineCurve,
    kind: str,
    n: int,
    cfg: SolverConfig | None = None,
    scan_phases: int = 3,
) -> PolygonSolution:
    """Best approximating n-gon: the smallest-deficit critical polygon over a
    scan of initial phases.

    Distinct critical families (separated by exponentially small area
    barriers) coexist when the polygon size resonates with a symmetry of the
    table; scanning a few phases of the initial guess reaches each family's
    basin, and the smallest deficit identifies the true optimum.
    """
    cfg = cfg or SolverConfig()
    solver = solve_inscribed if kind == "inscribed" else solve_circumscribed
    best: PolygonSolution | None = None
    last_exc: SolverError | None = None
    for j in range(max(1, scan_phases)):
        cfg_j = replace(cfg, phase=cfg.phase + j * af.lam / (n * max(1, scan_phases)))
        try:
            sol = solver(af, n, cfg_j)
        except SolverError as exc:
            last_exc = exc
            continue
        if best is None or sol.deficit < best.deficit:
            best = sol
    if best is None:
        raise last_exc if last_exc is not None else SolverError("no phase converged")
    return best


def deficit_sweep(
    af: AffineCurve,
    kind: str,
    n_values,
    cfg: SolverConfig | None = None,
    scan_phases: int = 3,
) -> list[DeficitSample]:
    """Best-approximating deficits for a family of polygon sizes."""
    if kind not in ("inscribed", "circumscribed"):
        raise ValueError("kind must be 'inscribed' or 'circumscribed'")
    out = []
    for n in n_values:
        sol = best_polygon(af, kind, int(n), cfg, scan_phases)
        out.append(
            DeficitSample(
                kind=kind,
                n=sol.n,
                deficit=sol.deficit,
                area=sol.area,
                grad_norm=sol.grad_norm,
                iterations=sol.iterations,
            )
        )
    return out
