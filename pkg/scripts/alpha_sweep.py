#!/usr/bin/env python3
"""Sweep the critical root alpha(a, m) over the weight jump m.

Prints alpha, the minimizer location, and the rescaled gap
(alpha - theta0) * sqrt(m), whose large-m limit should be 3*c1*sqrt(theta0)
per the half-line perturbation picture.  A CSV dump is optional.

    python3 scripts/alpha_sweep.py --a 1.0 --m 1.5:1e4:log:9 --csv sweep.csv
"""

import argparse
import csv
import math
import sys

from proxspec import cli, fields, halfline


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", type=float, default=1.0)
    ap.add_argument("--m", default="1.5:1e4:log:9", help="range syntax lo:hi:log|lin:n")
    ap.add_argument("--csv", default=None, metavar="PATH")
    args = ap.parse_args()

    uc = halfline.universal_constants()
    limit = 3.0 * uc.c1 * math.sqrt(uc.theta0)
    print(f"# theta0 = {uc.theta0:.9f}   large-m reference 3*c1*sqrt(theta0) = {limit:.6f}")
    print(f"{'m':>12} {'alpha':>14} {'xi_star':>12} {'(alpha-theta0)sqrt(m)':>22}")

    rows = []
    for m in cli.parse_values(args.m):
        res = fields.alpha_of(args.a, m)
        scaled = (res.alpha - uc.theta0) * math.sqrt(m) if m > 1.0 else float("nan")
        xi = res.xi_star if res.xi_star is not None else float("nan")
        print(f"{m:12.4g} {res.alpha:14.9f} {xi:12.7f} {scaled:22.6f}")
        rows.append({"m": m, "alpha": res.alpha, "xi_star": xi, "scaled_gap": scaled})

    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
        print(f"# wrote {args.csv}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
