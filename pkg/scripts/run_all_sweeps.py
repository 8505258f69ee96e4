"""Run the four bound sweeps and write NDJSON and CSV tables into one directory."""

import argparse
import os
import sys
import time

from ffdigit.sweep import SweepConfig, run_sweep, write_csv, write_json

THEOREMS = ("T1", "T2", "T3", "DarSar")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--p", default="2,3,5,7")
    ap.add_argument("--q-cap", type=int, default=2048)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--only", choices=THEOREMS, action="append")
    args = ap.parse_args(argv)

    os.makedirs(args.out_dir, exist_ok=True)
    primes = tuple(int(x) for x in args.p.split(","))
    dirty = 0
    for tid in args.only or THEOREMS:
        cfg = SweepConfig(theorem_id=tid, p_set=primes, q_cap=args.q_cap, seed=args.seed,
                          workers=args.workers,
                          polys_per_cell=200 if tid == "T3" else SweepConfig.polys_per_cell)
        t0 = time.perf_counter()
        rep = run_sweep(cfg)
        base = os.path.join(args.out_dir, tid)
        with open(base + ".ndjson", "w") as fh:
            write_json(rep, fh)
        with open(base + ".csv", "w", newline="") as fh:
            write_csv(rep.rows, fh)
        s = rep.summary()
        print(f"{tid}: cells={s['cells']} vacuous={s['vacuous_cells']} cases={s['cases']} "
              f"violations={s['violations']} wall={time.perf_counter() - t0:.1f}s", file=sys.stderr)
        dirty += not rep.clean
    return 1 if dirty else 0


if __name__ == "__main__":
    sys.exit(main())
