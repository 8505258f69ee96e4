"""How much does the worst pattern deviation depend on the chosen basis?

For fixed (field, d, shifts) the census of X^d is recomputed under the power
basis and a number of seeded random bases; one CSV row per basis.
"""

import argparse
import csv
import sys
from fractions import Fraction

import numpy as np

from ffdigit import build_field
from ffdigit.ff_core import random_basis
from ffdigit.patterncount import monomial, shifted_values, t_values
from ffdigit.sweep import census_worst


def _coords(x) -> str:
    # power-basis coordinates, independent of the basis being tested
    return "[" + ",".join(map(str, x.coords)) + "]"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--r", type=int, default=7)
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--shifts", default="0,1", help="element indices")
    ap.add_argument("--bases", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    shifts = [int(x) for x in args.shifts.split(",")]
    rng = np.random.default_rng(args.seed)
    specs = [None] + [random_basis(args.p, args.r, rng) for _ in range(args.bases)]
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["basis_no", "basis", "delta", "worst_targets", "worst_count", "worst_deviation",
                "deviation_over_sqrt_q"])
    for i, spec in enumerate(specs):
        ctx = build_field(args.p, args.r, basis_spec=spec)
        vals = shifted_values(ctx, t_values(ctx, monomial(ctx, args.d)), shifts)
        cw = census_worst(ctx, vals, 1 << 12)
        dev = Fraction(cw.deviation)
        w.writerow([i, ";".join(_coords(b) for b in ctx.basis.elements), _coords(ctx.basis.delta),
                    "".join(map(str, cw.targets)), cw.count, str(dev), f"{float(dev) / ctx.q**0.5:.4f}"])
    if fh is not sys.stdout:
        fh.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
