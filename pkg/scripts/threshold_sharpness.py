"""Where do empty pattern sets first appear for monomials?

For every X^d over small fields, take the shifts as the first s elements of
the enumeration (the prime field first) and find the least s with an
unattained target vector. That is compared with the two guaranteed emptiness
thresholds. A second column gives the least s at which the shifted T-value
tables become linearly dependent.
"""

import argparse
import csv
import sys

from ffdigit import build_field
from ffdigit.binomials import p_adic_expansion, theorem1_emptiness_thresholds
from ffdigit.errors import NoDependence
from ffdigit.construct import empty_pattern_any_A
from ffdigit.patterncount import monomial, pattern_census

COLUMNS = ["p", "r", "q", "d", "first_empty_s", "first_dependent_s", "prime_field_threshold",
           "prime_field_applies", "any_shift_threshold"]


def first_empty(ctx, f) -> int | None:
    for s in range(1, ctx.q + 1):
        census = pattern_census(ctx, f, [ctx.element(i) for i in range(s)], sparse=True)
        if len(census) < ctx.p**s:
            return s
    return None


def first_dependent(ctx, f) -> int | None:
    for s in range(1, ctx.q + 1):
        try:
            empty_pattern_any_A(ctx, f, list(range(s)), force=True)
            return s
        except NoDependence:
            continue
    return None


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", default="2,3,5")
    ap.add_argument("--q-cap", type=int, default=64)
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(COLUMNS)
    for p in (int(x) for x in args.p.split(",")):
        r = 1
        while p**r <= args.q_cap:
            ctx = build_field(p, r)
            for d in range(1, ctx.q):
                th = theorem1_emptiness_thresholds(p_adic_expansion(d, p), p, r)
                f = monomial(ctx, d)
                w.writerow([p, r, ctx.q, d, first_empty(ctx, f), first_dependent(ctx, f),
                            th.s_part2, th.dcond, th.s_part3])
            r += 1
    if fh is not sys.stdout:
        fh.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
