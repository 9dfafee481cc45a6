"""Command-line front end.

One executable, nine subcommands, machine-readable output: JSON for single
results, CSV for n-indexed sweeps.  Every payload embeds the package version,
floats are printed with 17 significant digits, and runs are deterministic for
fixed inputs (fixed iteration orders, no randomness anywhere in the solvers).

Exit codes: 0 success, 2 validation/input error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .affine_geometry import AffineCurve, build_affine, check_omega_relations
from .billiard_maps import outer_orbit, symplectic_orbit
from .coeff_extraction import (
    DEFAULT_LADDER,
    DEFAULT_POWERS,
    collect_deficits,
    extract_coeffs,
    odd_power_check,
)
from .curve_model import CurveSpec
from .errors import (
    CurveSpecError,
    ExtractionError,
    PhaseSpaceError,
    SolverError,
    UnsupportedOrderError,
)
from .expansions import (
    predict_deficit_coeffs,
    series_remainder_table,
    tab_inequality,
)
from .polygon_solvers import SolverConfig, best_polygon, spacing_gaps

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_SOLVER = 3

# CLI kind names follow the dynamics; the solvers follow the polygons.
KIND_ALIASES = {
    "symplectic": "inscribed",
    "outer": "circumscribed",
    "inscribed": "inscribed",
    "circumscribed": "circumscribed",
}


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _json_chunks(obj, indent: int):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            yield "{}"
            return
        yield "{\n"
        for i, (key, val) in enumerate(obj.items()):
            yield f'{pad}  "{key}": '
            yield from _json_chunks(val, indent + 1)
            yield ",\n" if i + 1 < len(obj) else "\n"
        yield pad + "}"
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            yield "[]"
            return
        yield "[\n"
        for i, val in enumerate(items):
            yield pad + "  "
            yield from _json_chunks(val, indent + 1)
            yield ",\n" if i + 1 < len(items) else "\n"
        yield pad + "]"
    elif isinstance(obj, str):
        yield '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    elif isinstance(obj, (bool, np.bool_)) or obj is None:
        yield {True: "true", False: "false", None: "null"}[bool(obj) if obj is not None else None]
    elif isinstance(obj, (int, np.integer)):
        yield str(int(obj))
    else:
        # own the float formatting instead of trusting a serializer's repr
        yield _fmt(obj)


def emit_json(payload: dict, out) -> None:
    out.write("".join(_json_chunks(payload, 0)) + "\n")


def emit_csv(columns, rows, out) -> None:
    out.write(f"# affine-billiards {__version__}\n")
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(str(int(v)) if isinstance(v, (int, np.integer)) else _fmt(v) for v in row) + "\n")


def _payload(command: str, **fields) -> dict:
    head = {"version": __version__, "command": command}
    head.update(fields)
    return head


def _spec_fields(spec: CurveSpec) -> dict:
    if spec.kind == "ellipse":
        return {"kind": "ellipse", "a": spec.a, "b": spec.b}
    return {
        "kind": "support_fourier",
        "a0": spec.a0,
        "cos": list(spec.cos),
        "sin": list(spec.sin),
    }


def _build(args) -> tuple[CurveSpec, AffineCurve]:
    spec = CurveSpec.parse(args.curve)
    return spec, build_affine(spec, getattr(args, "grid_size", None))


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise CurveSpecError(f"{flag} expects comma-separated integers, got {text!r}")
    if not values:
        raise CurveSpecError(f"{flag} is empty")
    return values


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise CurveSpecError(f"{flag} expects comma-separated numbers, got {text!r}")
    if not values:
        raise CurveSpecError(f"{flag} is empty")
    return values


# -- subcommands -----------------------------------------------------------


def cmd_curve_info(args, out) -> int:
    spec, af = _build(args)
    report = check_omega_relations(af)
    payload = _payload(
        "curve-info",
        curve=_spec_fields(spec),
        grid_size=af.grid_size,
        affine_perimeter=af.lam,
        area=af.area,
        I1=af.I1,
        I2=af.I2,
        curvature_min=float(np.min(af.k_grid)),
        curvature_max=float(np.max(af.k_grid)),
        jet_identity_residuals={
            "grid_size": report.grid_size,
            "max_residual": report.max_deviation,
            "curvature_scale": report.curvature_scale,
            "residuals": dict(report.deviations),
        },
    )
    emit_json(payload, out)
    return EXIT_OK


def cmd_orbit(args, out) -> int:
    _, af = _build(args)
    if args.start is None:
        s0, s1 = 0.0, af.lam / 8.0
    else:
        start = _parse_float_list(args.start, "--start")
        if len(start) != 2:
            raise CurveSpecError("--start expects two parameters 's0,s1'")
        s0, s1 = start
    if args.steps < 0:
        raise CurveSpecError("--steps must be nonnegative")
    orbit_fn = symplectic_orbit if args.kind == "symplectic" else outer_orbit
    s = orbit_fn(af, s0, s1, args.steps)
    pts = af.point(s % af.lam)
    rows = [(i, s[i], pts[i, 0], pts[i, 1]) for i in range(len(s))]
    emit_csv(("step", "s", "x", "y"), rows, out)
    return EXIT_OK


def _solver_config(args) -> SolverConfig:
    cfg = SolverConfig()
    if getattr(args, "phase", None) is not None:
        cfg.phase = args.phase
    return cfg


def cmd_polygon(args, out) -> int:
    spec, af = _build(args)
    kind = KIND_ALIASES[args.kind]
    sol = best_polygon(af, kind, args.n, _solver_config(args), args.scan_phases)
    payload = _payload(
        "polygon",
        curve=_spec_fields(spec),
        kind=sol.kind,
        n=sol.n,
        params=list(sol.s),
        spacing=list(spacing_gaps(sol, af.lam)),
        residual_norm=sol.grad_norm,
        area=sol.area,
        deficit=sol.deficit,
        iterations=sol.iterations,
        second_order_ok=sol.second_order_ok,
    )
    if args.emit_vertices:
        payload["vertices"] = [list(v) for v in sol.vertices]
    emit_json(payload, out)
    return EXIT_OK


def _deficit_accuracy(af: AffineCurve, n: int, grad_norm: float) -> float:
    # stationarity makes the area error quadratic in the parameter error;
    # grad/Hessian-scale estimates the latter, plus a quadrature floor
    return n * n * grad_norm * grad_norm / af.lam + 8e-16 * abs(af.area)


def cmd_deficit_sweep(args, out) -> int:
    _, af = _build(args)
    kind = KIND_ALIASES[args.kind]
    n_values = sorted(set(_parse_int_list(args.n_list, "--n-list")))
    cfg = _solver_config(args)

    def solve_one(n: int):
        sol = best_polygon(af, kind, n, cfg, args.scan_phases)
        return (n, sol.deficit, sol.grad_norm, _deficit_accuracy(af, n, sol.grad_norm))

    workers = max(1, min(args.jobs, len(n_values)))
    if workers == 1:
        rows = [solve_one(n) for n in n_values]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(solve_one, n_values))
    rows.sort(key=lambda r: r[0])
    emit_csv(("n", "delta", "residual", "accuracy_estimate"), rows, out)
    return EXIT_OK


def cmd_extract(args, out) -> int:
    spec, af = _build(args)
    kind = KIND_ALIASES[args.kind]
    ladder = (
        tuple(sorted(set(_parse_int_list(args.n_list, "--n-list"))))
        if args.n_list
        else DEFAULT_LADDER
    )
    powers = (
        tuple(_parse_int_list(args.orders, "--orders")) if args.orders else DEFAULT_POWERS
    )
    series = collect_deficits(af, kind, ladder, _solver_config(args), args.scan_phases)
    fit = extract_coeffs(series, powers=powers)

    # error budget: a coefficient at n^-p can only be trusted to about
    # (deficit accuracy) * max(n)^p, whatever the fit covariance says
    delta_acc = max(
        _deficit_accuracy(af, int(n), 0.0) for n in series.n
    )  # grad converged below tolerance, so the quadrature floor dominates
    n_max = float(np.max(series.n))
    budgets = {p: delta_acc * n_max**p for p in powers}
    for power, claimed in args.claim or []:
        if power not in budgets:
            raise CurveSpecError(f"--claim order {power} is not among fitted orders")
        if claimed < budgets[power]:
            raise CurveSpecError(
                f"claimed tolerance {claimed:g} for the n^-{power} coefficient is "
                f"below the error budget {budgets[power]:.3g} "
                f"(deficit accuracy {delta_acc:.3g} x {n_max:g}^{power})"
            )

    if args.output == "csv":
        model = np.zeros_like(series.n)
        for p, c in zip(fit.powers, fit.coeffs):
            model = model + c * series.n ** float(-p)
        rows = [
            (int(n), d, d - m)
            for n, d, m in zip(series.n, series.deficit, model)
        ]
        emit_csv(("n", "delta", "model_residual"), rows, out)
        return EXIT_OK

    odd = (
        odd_power_check(series, basis=tuple(sorted(set(powers) | {3, 5})))
        if args.odd_check
        else None
    )
    payload = _payload(
        "extract",
        curve=_spec_fields(spec),
        kind=kind,
        n_list=[int(n) for n in series.n],
        powers=list(fit.powers),
        coefficients={f"n^-{p}": fit.coeff(p) for p in fit.powers},
        uncertainties={f"n^-{p}": fit.uncertainty(p) for p in fit.powers},
        uncertainty_budget={f"n^-{p}": budgets[p] for p in fit.powers},
        condition=fit.condition,
        weighted_rms=fit.residual_rms,
        tail_model="inverse even powers; nuisance block assumed beyond n^-6",
    )
    if odd is not None:
        payload["odd_power_check"] = {
            f"n^-{p}": {"coefficient": c, "uncertainty": u, "sigma_ratio": r}
            for p, c, u, r in zip(odd.powers, odd.coeffs, odd.uncertainties, odd.ratios)
        }
        payload["odd_powers_consistent_with_zero"] = odd.consistent_with_zero()
    emit_json(payload, out)
    return EXIT_OK


def cmd_beta(args, out) -> int:
    spec, af = _build(args)
    kind = KIND_ALIASES[args.kind]
    coeffs = predict_deficit_coeffs(af, kind)
    payload = _payload(
        "beta",
        curve=_spec_fields(spec),
        kind=args.kind,
        beta1=coeffs.beta1,
        beta3=coeffs.beta3,
        beta5=coeffs.beta5,
        beta7=coeffs.beta7,
        affine_perimeter=af.lam,
        area=af.area,
        I1=af.I1,
        I2=af.I2,
    )
    emit_json(payload, out)
    return EXIT_OK


def cmd_verify_tab(args, out) -> int:
    spec, af = _build(args)
    kinds = ("symplectic", "outer") if args.kind == "both" else (args.kind,)
    reports = {}
    for name in kinds:
        rep = tab_inequality(af, KIND_ALIASES[name])
        reports[name] = {
            "gap": rep.gap,
            "spectral_form": rep.spectral_form,
            "scale": rep.scale,
            "holds": rep.holds,
            "status": "equality (ellipse)" if rep.is_equality_case else "strict",
        }
    emit_json(_payload("verify-tab", curve=_spec_fields(spec), reports=reports), out)
    return EXIT_OK


def cmd_verify_omega(args, out) -> int:
    spec, _ = _build(args)
    base = check_omega_relations(spec, args.grid_size)
    refined_size = args.refined_grid or 2 * base.grid_size
    refined = check_omega_relations(spec, refined_size)
    payload = _payload(
        "verify-omega",
        curve=_spec_fields(spec),
        base={
            "grid_size": base.grid_size,
            "residuals": dict(base.deviations),
            "max_residual": base.max_deviation,
        },
        refined={
            "grid_size": refined.grid_size,
            "residuals": dict(refined.deviations),
            "max_residual": refined.max_deviation,
        },
        improvement_ratio=base.max_deviation / refined.max_deviation
        if refined.max_deviation > 0
        else float("inf"),
        curvature_scale=base.curvature_scale,
    )
    emit_json(payload, out)
    return EXIT_OK


def cmd_verify_series(args, out) -> int:
    spec, af = _build(args)
    deltas = (
        _parse_float_list(args.deltas, "--deltas") if args.deltas else [0.4, 0.2, 0.1, 0.05]
    )
    if any(d <= 0 for d in deltas):
        raise CurveSpecError("--deltas must be positive")
    rows = series_remainder_table(af, args.base, deltas)
    if args.output == "csv":
        emit_csv(
            (
                "delta",
                "chord_exact",
                "chord_series",
                "chord_remainder",
                "corner_exact",
                "corner_series",
                "corner_remainder",
            ),
            [
                (
                    r.delta,
                    r.chord_exact,
                    r.chord_series,
                    r.chord_remainder,
                    r.corner_exact,
                    r.corner_series,
                    r.corner_remainder,
                )
                for r in rows
            ],
            out,
        )
        return EXIT_OK
    ratios = []
    for prev, cur in zip(rows, rows[1:]):
        ratios.append(
            {
                "delta_from": prev.delta,
                "delta_to": cur.delta,
                "chord_ratio": prev.chord_remainder / cur.chord_remainder
                if cur.chord_remainder > 0
                else float("inf"),
                "corner_ratio": prev.corner_remainder / cur.corner_remainder
                if cur.corner_remainder > 0
                else float("inf"),
            }
        )
    payload = _payload(
        "verify-series",
        curve=_spec_fields(spec),
        base_parameter=args.base,
        samples=[
            {
                "delta": r.delta,
                "chord_exact": r.chord_exact,
                "chord_series": r.chord_series,
                "chord_remainder": r.chord_remainder,
                "corner_exact": r.corner_exact,
                "corner_series": r.corner_series,
                "corner_remainder": r.corner_remainder,
            }
            for r in rows
        ],
        shrink_ratios=ratios,
    )
    emit_json(payload, out)
    return EXIT_OK


# -- argument parsing ------------------------------------------------------


def _claim(text: str) -> tuple[int, float]:
    try:
        power, _, tol = text.partition(":")
        return int(power), float(tol)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected ORDER:TOL, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affine-billiards",
        description="Best approximating polygons, billiard orbits and "
        "asymptotic coefficients for smooth strictly-convex tables.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p, grid=True):
        p.add_argument(
            "--curve",
            required=True,
            help="curve preset ('circle:1', 'ellipse:2,1', 'fourier:a0;c1,c2,..;s1,..') "
            "or path to a JSON file",
        )
        if grid:
            p.add_argument(
                "--grid-size",
                type=int,
                default=None,
                help="spectral grid size (default: BILLIARDS_GRID_SIZE or 2048)",
            )

    p = sub.add_parser("curve-info", help="table invariants and jet-identity report")
    add_common(p)
    p.set_defaults(fn=cmd_curve_info)

    p = sub.add_parser("orbit", help="iterate a billiard map, emit CSV states")
    add_common(p)
    p.add_argument("--kind", choices=("symplectic", "outer"), required=True)
    p.add_argument("--start", default=None, help="two start parameters 's0,s1'")
    p.add_argument("--steps", type=int, default=100)
    p.set_defaults(fn=cmd_orbit)

    p = sub.add_parser("polygon", help="best approximating n-gon as JSON")
    add_common(p)
    p.add_argument("--kind", choices=sorted(KIND_ALIASES), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--emit-vertices", action="store_true")
    p.add_argument("--phase", type=float, default=None, help="initial guess offset")
    p.add_argument("--scan-phases", type=int, default=3)
    p.set_defaults(fn=cmd_polygon)

    p = sub.add_parser("deficit-sweep", help="deficits over a list of n, CSV")
    add_common(p)
    p.add_argument("--kind", choices=sorted(KIND_ALIASES), required=True)
    p.add_argument("--n-list", required=True, help="comma-separated polygon sizes")
    p.add_argument("--phase", type=float, default=None)
    p.add_argument("--scan-phases", type=int, default=3)
    p.add_argument("--jobs", type=int, default=min(4, os.cpu_count() or 1))
    p.set_defaults(fn=cmd_deficit_sweep)

    p = sub.add_parser("extract", help="fit inverse-power deficit coefficients")
    add_common(p)
    p.add_argument("--kind", choices=sorted(KIND_ALIASES), required=True)
    p.add_argument("--n-list", default=None, help=f"default {','.join(map(str, DEFAULT_LADDER))}")
    p.add_argument("--orders", default=None, help=f"default {','.join(map(str, DEFAULT_POWERS))}")
    p.add_argument("--phase", type=float, default=None)
    p.add_argument("--scan-phases", type=int, default=3)
    p.add_argument("--output", choices=("json", "csv"), default="json")
    p.add_argument(
        "--claim",
        type=_claim,
        action="append",
        metavar="ORDER:TOL",
        help="refuse if TOL is tighter than the error budget for that order",
    )
    p.add_argument("--odd-check", action="store_true", help="also fit odd powers and test them against zero")
    p.set_defaults(fn=cmd_extract)

    p = sub.add_parser("beta", help="beta-function coefficients beta1..beta7")
    add_common(p)
    p.add_argument("--kind", choices=("symplectic", "outer"), required=True)
    p.set_defaults(fn=cmd_beta)

    p = sub.add_parser("verify-tab", help="coefficient inequality report")
    add_common(p)
    p.add_argument("--kind", choices=("symplectic", "outer", "both"), default="both")
    p.set_defaults(fn=cmd_verify_tab)

    p = sub.add_parser("verify-omega", help="jet identity residuals on two grids")
    add_common(p)
    p.add_argument("--refined-grid", type=int, default=None, help="default: twice --grid-size")
    p.set_defaults(fn=cmd_verify_omega)

    p = sub.add_parser("verify-series", help="local area series remainder orders")
    add_common(p)
    p.add_argument("--base", type=float, default=0.0, help="arc-length base point")
    p.add_argument("--deltas", default=None, help="comma-separated arc lengths, descending")
    p.add_argument("--output", choices=("json", "csv"), default="json")
    p.set_defaults(fn=cmd_verify_series)
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args, out)
    except (
        CurveSpecError,
        UnsupportedOrderError,
        ExtractionError,
        PhaseSpaceError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
