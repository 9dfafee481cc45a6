#!/usr/bin/env python3
"""Sweep best-polygon deficits over a ladder of n and fit the asymptotics.

Example:

    python scripts/run_deficit_sweep.py --curve "fourier:1;0,0,0.05;" \
        --kind inscribed --n-list 16,20,26,32,40,52,64 --csv sweep.csv

Writes the per-n table (optionally to CSV) and prints the fitted inverse-power
coefficients next to the values predicted from the table invariants.
"""

import argparse
import sys
from pathlib import Path

from affine_billiards import CurveSpec, build_affine, predict_deficit_coeffs
from affine_billiards.coeff_extraction import (
    DEFAULT_LADDER,
    DEFAULT_POWERS,
    collect_deficits,
    extract_coeffs,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--curve", default="fourier:1;0,0,0.05;")
    ap.add_argument("--kind", choices=("inscribed", "circumscribed"), default="inscribed")
    ap.add_argument("--n-list", default=",".join(map(str, DEFAULT_LADDER)))
    ap.add_argument("--orders", default=",".join(map(str, DEFAULT_POWERS)))
    ap.add_argument("--scan-phases", type=int, default=3)
    ap.add_argument("--csv", type=Path, default=None, help="also write n,deficit rows here")
    args = ap.parse_args()

    af = build_affine(CurveSpec.parse(args.curve))
    ladder = tuple(int(t) for t in args.n_list.split(","))
    series = collect_deficits(af, args.kind, ladder, scan_phases=args.scan_phases)

    print(f"table: {args.curve}  perimeter {af.lam:.12g}  area {af.area:.12g}")
    print(f"{'n':>5}  {'deficit':>24}")
    for n, d in zip(series.n, series.deficit):
        print(f"{int(n):>5}  {d:>24.16e}")
    if args.csv is not None:
        lines = ["n,deficit"] + [
            f"{int(n)},{d:.17g}" for n, d in zip(series.n, series.deficit)
        ]
        args.csv.write_text("\n".join(lines) + "\n")
        print(f"wrote {args.csv}")

    powers = tuple(int(t) for t in args.orders.split(","))
    fit = extract_coeffs(series, powers=powers)
    pred = predict_deficit_coeffs(af, args.kind)
    known = {2: pred.a2, 4: pred.a4, 6: pred.a6}
    print("\nfitted coefficients (vs invariant predictions where available):")
    for p in powers:
        line = f"  n^-{p}: {fit.coeff(p): .12e} +- {fit.uncertainty(p):.1e}"
        if p in known:
            line += f"   predicted { known[p]: .12e}"
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
