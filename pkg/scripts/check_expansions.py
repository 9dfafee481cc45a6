#!/usr/bin/env python3
"""Exercise every expansion claim on one table and print a compact report:

* the four invariants (perimeter, area, I1, I2) and jet-identity residuals;
* local chord/corner area series against quadrature, with halving ratios;
* spacing-law residuals at two polygon sizes (should drop ~16x per halving);
* predicted vs computed deficits at a few n;
* the beta5/beta7 inequality for both dynamics.

Usage: python scripts/check_expansions.py [--curve PRESET] [--grid-size N]
"""

import argparse
import sys

import numpy as np

from affine_billiards import (
    CurveSpec,
    best_polygon,
    build_affine,
    check_omega_relations,
    predict_beta_coeffs,
    predict_spacing,
    series_remainder_table,
    spacing_gaps,
    tab_inequality,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--curve", default="fourier:1;0,0,0.05;")
    ap.add_argument("--grid-size", type=int, default=None)
    args = ap.parse_args()

    af = build_affine(CurveSpec.parse(args.curve), args.grid_size)
    print(f"table {args.curve}")
    print(f"  perimeter {af.lam:.15g}   area {af.area:.15g}")
    print(f"  I1 {af.I1:.15g}   I2 {af.I2:.15g}")
    rep = check_omega_relations(af)
    print(f"  jet identities: max residual {rep.max_deviation:.2e} on {rep.grid_size} nodes")

    print("\nlocal series remainders (top: chord, bottom: corner):")
    rows = series_remainder_table(af, 0.1, [0.4, 0.2, 0.1, 0.05])
    for prev, cur in zip(rows, rows[1:]):
        print(
            f"  delta {prev.delta:.3g} -> {cur.delta:.3g}: "
            f"ratios {prev.chord_remainder / cur.chord_remainder:7.1f} / "
            f"{prev.corner_remainder / cur.corner_remainder:7.1f}   (order 8 => ~256)"
        )

    print("\nspacing-law residuals, max_i |gap_i - prediction|:")
    for kind in ("inscribed", "circumscribed"):
        res = []
        for n in (32, 64):
            sol = best_polygon(af, kind, n, scan_phases=1)
            pred = predict_spacing(af, kind, n, sol.s)
            res.append(np.max(np.abs(spacing_gaps(sol, af.lam) - pred)))
        print(f"  {kind:13s} n=32: {res[0]:.2e}   n=64: {res[1]:.2e}   ratio {res[0]/res[1]:.1f}")

    print("\ndeficits vs truncated prediction:")
    for kind in ("inscribed", "circumscribed"):
        coeffs = predict_beta_coeffs(af, kind)
        for n in (16, 32, 64):
            sol = best_polygon(af, kind, n, scan_phases=1)
            pred = float(coeffs.deficit_at(n))
            print(
                f"  {kind:13s} n={n:<3d} computed {sol.deficit:.12e} "
                f"predicted {pred:.12e}  rel dev {abs(sol.deficit / pred - 1):.1e}"
            )

    print("\ncoefficient inequality (zero exactly on ellipses):")
    for kind in ("inscribed", "circumscribed"):
        t = tab_inequality(af, kind)
        status = "equality (ellipse)" if t.is_equality_case else "strict"
        print(f"  {kind:13s} gap {t.gap:.6e}  normalized {t.gap / t.scale:.2e}  [{status}]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
