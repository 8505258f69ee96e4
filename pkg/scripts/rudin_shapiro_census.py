"""Census of the Rudin-Shapiro digit function along seeded random polynomials.

No bound is asserted; the table records the largest |count - p^(r-1)| per
(field, polynomial) so its growth in q can be inspected.
"""

import argparse
import csv
import sys

import numpy as np

from ffdigit import build_field
from ffdigit.digitfn import DigitFunctionKind, digit_table
from ffdigit.patterncount import describe_function, value_table
from ffdigit.sweep import random_polynomial


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", default="2,3")
    ap.add_argument("--q-cap", type=int, default=1024)
    ap.add_argument("--polys", type=int, default=20)
    ap.add_argument("--max-degree", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["p", "r", "q", "function", "counts", "max_deviation", "max_deviation_over_sqrt_q"])
    for p in (int(x) for x in args.p.split(",")):
        r = 1
        while p**r <= args.q_cap:
            ctx = build_field(p, r)
            R = digit_table(ctx, DigitFunctionKind.RUDIN_SHAPIRO)
            rng = np.random.default_rng([args.seed, p, r])
            for _ in range(args.polys):
                f = random_polynomial(ctx, int(rng.integers(1, args.max_degree + 1)), rng)
                counts = np.bincount(R[value_table(ctx, f)], minlength=p)
                if counts.sum() != ctx.q:
                    raise AssertionError("R-census does not partition the field")
                dev = int(np.abs(counts - p ** (r - 1)).max())
                w.writerow([p, r, ctx.q, describe_function(ctx, f), " ".join(map(str, counts)), dev,
                            f"{dev / ctx.q**0.5:.4f}"])
            r += 1
    if fh is not sys.stdout:
        fh.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
