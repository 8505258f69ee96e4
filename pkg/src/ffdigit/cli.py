"""ffdigit command-line driver.

Exit codes: 0 clean, 1 a mathematical violation (or no dependence found in a
forced construction), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import __version__
from .construct import (
    empty_pattern_any_A,
    empty_pattern_monomial,
    empty_pattern_polynomial,
    gcd_counterexample,
)
from .errors import FFDigitError, NoDependence, VerificationFailed
from .ff_core import DEFAULT_Q_CAP, FieldContext, build_field
from .patterncount import (
    THEOREM_IDS,
    PatternSpec,
    character_sum,
    count_pattern,
    describe_function,
    function_degree,
    is_degenerate,
    make_report,
    monomial,
    parse_function,
    theorem_terms,
)
from .sweep import SweepConfig, render, run_sweep

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _q_cap() -> int:
    env = os.environ.get("FFDIGIT_QCAP")
    if env is None:
        return DEFAULT_Q_CAP
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"FFDIGIT_QCAP must be an integer, got {env!r}")


def _field(args) -> FieldContext:
    basis = None
    if args.basis:
        basis = [json.loads(row) for row in args.basis.split(";")]
    return build_field(args.p, args.r, modulus_poly=args.modulus, basis_spec=basis, q_cap=_q_cap())


def _element_list(ctx: FieldContext, text: str):
    # bare integers are comma separated; bracketed elements may contain commas
    items, depth, cur = [], 0, ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            items.append(cur)
            cur = ""
        else:
            cur += ch
    items.append(cur)
    return [ctx.parse(x.strip()) for x in items if x.strip()]


def _emit(args, text: str) -> None:
    if args.out and args.out != "-":
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj) -> None:
    if args.format == "csv" and isinstance(obj, dict):
        keys = list(obj)
        vals = [json.dumps(obj[k]) if isinstance(obj[k], (list, dict)) else str(obj[k]) for k in keys]
        _emit(args, ",".join(keys) + "\n" + ",".join(f'"{v}"' if "," in v else v for v in vals) + "\n")
    else:
        _emit(args, json.dumps(obj, sort_keys=True) + "\n")


# -- subcommands -----------------------------------------------------------


def cmd_field(args) -> int:
    ctx = _field(args)
    info = ctx.describe()
    info.update(
        q=ctx.q,
        basis_elements=[ctx.format(i) for i in ctx.basis_indices],
        dual_basis=[ctx.format(x) for x in ctx.basis.dual],
        delta=ctx.format(ctx.delta_index),
    )
    _emit_json(args, info)
    return EXIT_OK


def _matching_theorems(ctx, f, s):
    out = []
    for tid in ("T1", "T2", "T3", "DarSar"):
        try:
            out.append((tid, theorem_terms(ctx, tid, f, s)))
        except FFDigitError:
            continue
    return out


def cmd_count(args) -> int:
    ctx = _field(args)
    f = parse_function(ctx, args.f)
    shifts = _element_list(ctx, args.shifts)
    spec = PatternSpec(tuple(shifts), tuple(args.targets))
    count = count_pattern(ctx, f, spec)
    matches = _matching_theorems(ctx, f, spec.s)
    shift_idx = [ctx.index(a) for a in shifts]
    bounds = []
    for tid, terms in matches:
        rep = make_report(ctx, tid, f, shift_idx, spec.targets, count, terms, function_text=args.f)
        bounds.append({"theorem_id": tid, "bound": rep.bound, "applicable": rep.applicable,
                       "pass": rep.passed})
    if matches:
        tid, terms = next(((t, m) for t, m in matches if m.applicable), matches[0])
        rep = make_report(ctx, tid, f, shift_idx, spec.targets, count, terms,
                          function_text=args.f, extra={"bounds": bounds})
        out = rep.to_dict()
    else:
        out = {"p": ctx.p, "r": ctx.r, "q": ctx.q, "function": args.f, "count": count,
               "theorem_id": None, "applicable": False, "pass": None, "bounds": []}
    _emit_json(args, out)
    return EXIT_VIOLATION if any(b["pass"] is False for b in bounds) else EXIT_OK


def cmd_verify(args) -> int:
    cfg = SweepConfig(
        theorem_id=args.theorem,
        p_set=tuple(args.p),
        q_cap=min(args.q_cap, _q_cap()),
        r_max=args.r_max,
        d_min=args.d_min,
        d_max=args.d_max,
        s_values=tuple(args.s) if args.s else None,
        s_cap=args.s_cap,
        samples_per_cell=args.samples,
        exhaustive_a_cap=args.exhaustive_a_cap,
        exhaustive_c_cap=args.exhaustive_c_cap,
        polys_per_cell=args.polys,
        seed=args.seed,
        redchar_cap=args.redchar_cap,
        redchar_a_per_cell=args.redchar_a,
        include_vacuous=args.include_vacuous,
        workers=args.workers,
    )
    rep = run_sweep(cfg)
    _emit(args, render(rep, args.format))
    s = rep.summary()
    print(
        f"cells={s['cells']} vacuous={s['vacuous_cells']} cases={s['cases']} "
        f"violations={s['violations']} redchar_failures={s['redchar_failures']} "
        f"wall_time={rep.wall_time:.2f}s",
        file=sys.stderr,
    )
    return EXIT_OK if rep.clean else EXIT_VIOLATION


def cmd_counterexample(args) -> int:
    ctx = _field(args)
    cid = args.construction

    def target_function():
        if args.f:
            return parse_function(ctx, args.f)
        if args.d is not None:
            return monomial(ctx, args.d)
        raise UsageError(f"{cid} needs --f or --d")

    def need_s():
        if args.s is None:
            raise UsageError(f"{cid} needs --s")
        return args.s

    if cid == "T1P2":
        if args.d is None:
            raise UsageError("T1P2 needs --d")
        cert = empty_pattern_monomial(ctx, args.d, need_s())
    elif cid in ("T1P3", "T3P3"):
        f = target_function()
        if args.shifts:
            shifts = _element_list(ctx, args.shifts)
        else:
            shifts = list(range(need_s()))
        cert = empty_pattern_any_A(ctx, f, shifts, force=args.force)
    elif cid == "T3P2":
        cert = empty_pattern_polynomial(ctx, target_function(), need_s())
    elif cid == "GCD71":
        if not args.g:
            raise UsageError("GCD71 needs --g")
        c0 = ctx.parse(args.c0) if args.c0 else ctx.zero
        cert = gcd_counterexample(ctx, parse_function(ctx, args.g), c0, args.s or 1)
    else:
        raise UsageError(f"unknown construction {cid!r}")
    _emit_json(args, cert.to_dict())
    return EXIT_OK


def cmd_charsum(args) -> int:
    ctx = _field(args)
    F = parse_function(ctx, args.F)
    S = character_sum(ctx, F)
    deg = function_degree(F)
    degenerate = is_degenerate(ctx, F)
    weil = (deg - 1) * math.sqrt(ctx.q) if deg >= 1 and not degenerate else None
    _emit_json(args, {
        "function": describe_function(ctx, F),
        "sum_re": S.real,
        "sum_im": S.imag,
        "modulus": abs(S),
        "degree": deg,
        "degenerate": degenerate,
        "weil_bound": weil,
    })
    return EXIT_VIOLATION if weil is not None and abs(S) > weil + 1e-6 else EXIT_OK


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="-", help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    fieldargs = argparse.ArgumentParser(add_help=False)
    fieldargs.add_argument("--p", type=int, required=True)
    fieldargs.add_argument("--r", type=int, required=True)
    fieldargs.add_argument("--modulus", type=_int_list, default=None,
                           help="ascending coefficients, e.g. 1,1,1 for X^2+X+1")
    fieldargs.add_argument("--basis", default=None,
                           help="basis rows in power-basis coordinates, e.g. '[1,0];[1,1]'")

    parser = argparse.ArgumentParser(prog="ffdigit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", parents=[common, fieldargs], help="print field data")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("count", parents=[common, fieldargs], help="count one pattern set")
    p.add_argument("--f", required=True)
    p.add_argument("--shifts", required=True)
    p.add_argument("--targets", type=_int_list, required=True)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("verify", parents=[common], help="run a seeded bound sweep")
    p.add_argument("--theorem", type=_theorem, required=True, help="1, 2, 3 or DarSar")
    p.add_argument("--p", type=_int_list, default=[2, 3, 5, 7])
    p.add_argument("--q-cap", type=int, default=1 << 11)
    p.add_argument("--r-max", type=int, default=None)
    p.add_argument("--d-min", type=int, default=1)
    p.add_argument("--d-max", type=int, default=None)
    p.add_argument("--s", type=_int_list, default=None, help="explicit pattern lengths")
    p.add_argument("--s-cap", type=int, default=None)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--exhaustive-a-cap", type=int, default=10_000)
    p.add_argument("--exhaustive-c-cap", type=int, default=1 << 12)
    p.add_argument("--polys", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--redchar-cap", type=int, default=1 << 8)
    p.add_argument("--redchar-a", type=int, default=10)
    p.add_argument("--include-vacuous", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("counterexample", parents=[common, fieldargs], help="emit a verified empty pattern")
    p.add_argument("--construction", required=True, choices=("T1P2", "T1P3", "T3P2", "T3P3", "GCD71"))
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--f", default=None)
    p.add_argument("--shifts", default=None)
    p.add_argument("--g", default=None)
    p.add_argument("--c0", default=None)
    p.add_argument("--force", action="store_true", help="attempt below the dimension threshold")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("charsum", parents=[common, fieldargs], help="additive character sum of F")
    p.add_argument("--F", required=True)
    p.set_defaults(func=cmd_charsum)
    return parser


def _theorem(text: str) -> str:
    aliases = {"1": "T1", "2": "T2", "3": "T3", "darsar": "DarSar"}
    tid = aliases.get(text.lower(), text)
    if tid not in THEOREM_IDS:
        raise argparse.ArgumentTypeError(f"unknown theorem {text!r}")
    return tid


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FFDigitError, UsageError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoDependence, VerificationFailed) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
