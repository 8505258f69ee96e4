"""Seeded verification sweeps over grids of (field, degree, pattern length).

A cell is one (p, r, d, s). For every shift set the whole census of target
vectors is computed, so each cell is checked against every c exactly; the
report keeps the worst row of each cell and every violating row.
"""

from __future__ import annotations

import itertools
import json
import math
import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

import numpy as np

from .binomials import monomial_profile
from .errors import InvalidParameter, PartitionError
from .ff_core import FieldContext, build_field, is_prime
from .patterncount import (
    BoundCheckReport,
    DensePolynomial,
    Function,
    RationalMonomial,
    combination_sums,
    decode_targets,
    describe_function,
    is_degenerate,
    make_report,
    main_term,
    monomial,
    poly_scale,
    shifted_values,
    t_values,
    theorem_terms,
    within_bound,
)

THEOREM_CODES = {"DarSar": 0, "T1": 1, "T2": 2, "T3": 3}
PRNG_NAME = "numpy.random.PCG64 via default_rng(SeedSequence([seed, theorem, p, r, d, s, stream]))"
CODE_LIMIT = 1 << 62


@dataclass
class SweepConfig:
    theorem_id: str = "T1"
    p_set: tuple[int, ...] = (2, 3, 5, 7)
    q_cap: int = 1 << 11
    r_max: int | None = None
    d_min: int = 1
    d_max: int | None = None  # None: every admissible degree (T1), 32 (T2), 10 otherwise
    s_values: tuple[int, ...] | None = None  # None: the theorem's own range
    s_cap: int | None = None  # T2 default 8
    samples_per_cell: int = 50
    exhaustive_a_cap: int = 10_000
    exhaustive_c_cap: int = 1 << 12  # dense census below this many cells
    polys_per_cell: int = 200
    seed: int = 0
    redchar_cap: int = 1 << 8
    redchar_a_per_cell: int = 10
    include_vacuous: bool = False
    workers: int = 1

    def validate(self) -> None:
        if self.theorem_id not in THEOREM_CODES:
            raise InvalidParameter(f"unknown theorem {self.theorem_id!r}")
        if not self.p_set or any(not is_prime(p) for p in self.p_set):
            raise InvalidParameter("p_set must be a nonempty list of primes")
        for name in ("q_cap", "samples_per_cell", "exhaustive_a_cap", "exhaustive_c_cap",
                     "polys_per_cell", "redchar_cap", "workers"):
            if getattr(self, name) < 1:
                raise InvalidParameter(f"{name} must be positive")
        if self.redchar_a_per_cell < 0:
            raise InvalidParameter("redchar_a_per_cell must be >= 0")
        if self.s_values is not None and any(s < 1 for s in self.s_values):
            raise InvalidParameter("pattern lengths must be >= 1")

    def effective_d_max(self, q: int) -> int:
        if self.d_max is not None:
            return min(self.d_max, q - 1)
        if self.theorem_id == "T1":
            return q - 1
        if self.theorem_id == "T2":
            return min(32, q - 1)
        return min(10, q - 1)


class Cell(NamedTuple):
    p: int
    r: int
    d: int
    s: int


def cell_rng(cfg: SweepConfig, cell: Cell, stream: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(
        [cfg.seed, THEOREM_CODES[cfg.theorem_id], cell.p, cell.r, cell.d, cell.s, stream]
    )
    return np.random.default_rng(ss)


def fields_in_grid(cfg: SweepConfig) -> list[tuple[int, int]]:
    out = []
    for p in sorted(set(cfg.p_set)):
        r = 1
        while p**r <= cfg.q_cap and (cfg.r_max is None or r <= cfg.r_max):
            out.append((p, r))
            r += 1
    return out


def _theorem_s_range(cfg: SweepConfig, p: int, q: int, d: int) -> list[int]:
    if cfg.s_values is not None:
        return [s for s in cfg.s_values if s <= q]
    tid = cfg.theorem_id
    if tid == "T1":
        return list(range(1, monomial_profile(d, _QShape(p, q)).s_max + 1))
    if tid == "T2":
        return list(range(1, min(cfg.s_cap or 8, q) + 1))
    if tid == "T3":
        return list(range(1, d % p + 1))
    return [1]


class _QShape(NamedTuple):
    p: int
    q: int


def _degree_ok(cfg: SweepConfig, p: int, d: int) -> bool:
    # T3 needs gcd(d, q) = 1
    return cfg.theorem_id != "T3" or d % p != 0


def plan_cells(cfg: SweepConfig) -> list[Cell]:
    cells = []
    for p, r in fields_in_grid(cfg):
        q = p**r
        for d in range(cfg.d_min, cfg.effective_d_max(q) + 1):
            if not _degree_ok(cfg, p, d):
                continue
            for s in _theorem_s_range(cfg, p, q, d):
                cells.append(Cell(p, r, d, s))
    return cells


def is_vacuous(K: int, L: int, p: int, r: int, s: int) -> bool:
    """The bound is at least max(main, q - main), which every count meets."""
    q = p**r
    main = main_term(p, r, s)
    return within_bound(max(main, q - main), K, L, q)


# -- evaluation ------------------------------------------------------------


@dataclass
class CensusWorst:
    deviation: Fraction
    targets: tuple[int, ...]
    count: int


def census_worst(ctx: FieldContext, vals: np.ndarray, dense_cap: int) -> CensusWorst:
    """Largest |count - p^(r-s)| over all target vectors c, attained or not,
    from the s x q matrix of T-values. Checks the census mass."""
    p, q, r = ctx.p, ctx.q, ctx.r
    s = vals.shape[0]
    main = main_term(p, r, s)
    cells = p**s
    if cells <= dense_cap:
        weights = p ** np.arange(s, dtype=np.int64)
        counts = np.bincount(weights @ vals, minlength=cells)
        if int(counts.sum()) != q:
            raise PartitionError(f"census mass {int(counts.sum())} != q = {q}")
        scale = p ** max(0, s - r)
        mains = p ** max(0, r - s)
        k = int(np.argmax(np.abs(counts * scale - mains)))
        n = int(counts[k])
        return CensusWorst(abs(n - main), decode_targets(k, p, s), n)
    if cells <= CODE_LIMIT:
        weights = p ** np.arange(s, dtype=np.int64)
        keys, counts = np.unique(weights @ vals, return_counts=True)
        attained = [decode_targets(int(k), p, s) for k in keys]
    else:
        rows, counts = np.unique(vals.T, axis=0, return_counts=True)
        attained = [tuple(int(v) for v in row) for row in rows]
    if int(counts.sum()) != q:
        raise PartitionError(f"census mass {int(counts.sum())} != q = {q}")
    k = max(range(len(counts)), key=lambda i: abs(int(counts[i]) - main))
    best = CensusWorst(abs(int(counts[k]) - main), attained[k], int(counts[k]))
    if len(attained) < cells and main > best.deviation:
        seen = set(attained)
        code = 0
        while decode_targets(code, p, s) in seen:
            code += 1
        best = CensusWorst(main, decode_targets(code, p, s), 0)
    return best


def shift_sets(cfg: SweepConfig, cell: Cell, q: int) -> tuple[list[list[int]], str]:
    """Shift sets for a cell.

    Counts are invariant under x -> x + b, so the sets {0} u B with B an
    (s-1)-subset of the nonzero elements cover every A up to translation.
    They are used whenever there are at most exhaustive_a_cap of them.
    """
    s = cell.s
    if math.comb(q - 1, s - 1) <= cfg.exhaustive_a_cap:
        return [[0, *rest] for rest in itertools.combinations(range(1, q), s - 1)], "exhaustive"
    rng = cell_rng(cfg, cell, stream=1)
    return [sorted(int(x) for x in rng.choice(q, s, replace=False))
            for _ in range(cfg.samples_per_cell)], "sampled"


def random_polynomial(ctx: FieldContext, d: int, rng: np.random.Generator) -> DensePolynomial:
    """Uniform coefficients with a nonzero leading one."""
    coeffs = [int(x) for x in rng.integers(0, ctx.q, size=d)] + [int(rng.integers(1, ctx.q))]
    return DensePolynomial.from_indices(ctx, coeffs)


def cell_functions(cfg: SweepConfig, ctx: FieldContext, cell: Cell) -> list[Function]:
    tid = cfg.theorem_id
    if tid == "T1":
        return [monomial(ctx, cell.d)]
    if tid == "T2":
        return [RationalMonomial(-cell.d)]
    # the same polynomials for every s of a given (field, d)
    rng = cell_rng(cfg, cell._replace(s=0), stream=2)
    return [random_polynomial(ctx, cell.d, rng) for _ in range(cfg.polys_per_cell)]


@dataclass
class CellResult:
    cell: Cell
    rows: list[BoundCheckReport] = field(default_factory=list)
    vacuous: bool = False
    cases: int = 0
    censuses: int = 0
    violations: int = 0
    not_applicable: int = 0
    redchar_checked: int = 0
    redchar_failures: int = 0


def _field_for(cell: Cell) -> FieldContext:
    return build_field(cell.p, cell.r, q_cap=max(1 << 20, cell.p**cell.r))


def run_cell(cfg: SweepConfig, cell: Cell) -> CellResult:
    ctx = _field_for(cell)
    res = CellResult(cell)
    fns = cell_functions(cfg, ctx, cell)
    terms0 = theorem_terms(ctx, cfg.theorem_id, fns[0], cell.s)
    if not cfg.include_vacuous and is_vacuous(terms0.K, terms0.L, cell.p, cell.r, cell.s):
        res.vacuous = True
        return res
    sets, mode = shift_sets(cfg, cell, ctx.q)
    if len(fns) == 1:
        pairs = [(fns[0], A) for A in sets]
    else:
        pairs = [(f, sets[i % len(sets)]) for i, f in enumerate(fns)]
    worst = None
    tv_cache: dict[int, np.ndarray] = {}
    do_redchar = cell.p**cell.s <= cfg.redchar_cap
    for i, (f, A) in enumerate(pairs):
        terms = terms0 if len(fns) == 1 else theorem_terms(ctx, cfg.theorem_id, f, cell.s)
        if not terms.applicable:
            res.not_applicable += 1
            continue
        key = id(f)
        if key not in tv_cache:
            tv_cache.clear()
            tv_cache[key] = t_values(ctx, f)
        vals = shifted_values(ctx, tv_cache[key], A)
        cw = census_worst(ctx, vals, cfg.exhaustive_c_cap)
        res.cases += 1
        res.censuses += 1
        ok = within_bound(cw.deviation, terms.K, terms.L, ctx.q)
        rc = None
        if do_redchar and res.redchar_checked < cfg.redchar_a_per_cell:
            A_vecs = np.array([a for a in itertools.product(range(cell.p), repeat=cell.s) if any(a)],
                              dtype=np.int64).reshape(-1, cell.s)
            M = float(combination_sums(cell.p, vals, A_vecs).max())
            rc = float(cw.deviation) <= M + 1e-9 * ctx.q
            res.redchar_checked += 1
            if not rc:
                res.redchar_failures += 1
        margin = float(cw.deviation) - terms.value(ctx.q)
        extra = {"cell": list(cell), "cases": len(pairs), "a_mode": mode, "shift_indices": list(A)}
        if rc is not None:
            extra["redchar_max_char_sum"] = M
        if not ok or rc is False:
            res.violations += not ok
            res.rows.append(_row(ctx, cfg, f, A, cw, terms, extra))
        elif worst is None or margin > worst[0]:
            worst = (margin, f, A, cw, terms, extra)
    if worst is not None and res.violations == 0:
        _, f, A, cw, terms, extra = worst
        res.rows.append(_row(ctx, cfg, f, A, cw, terms, extra))
    return res


def _row(ctx, cfg, f, A, cw: CensusWorst, terms, extra) -> BoundCheckReport:
    return make_report(ctx, cfg.theorem_id, f, A, cw.targets, cw.count, terms, seed=cfg.seed,
                       function_text=describe_function(ctx, f), extra=extra)


# -- runs ------------------------------------------------------------------


@dataclass
class RunReport:
    config: SweepConfig
    rows: list = field(default_factory=list)
    cells: int = 0
    vacuous_cells: int = 0
    cases: int = 0
    censuses: int = 0
    violations: int = 0
    not_applicable: int = 0
    redchar_checked: int = 0
    redchar_failures: int = 0
    wall_time: float = 0.0

    def summary(self) -> dict:
        return {
            "kind": "summary",
            "cells": self.cells,
            "vacuous_cells": self.vacuous_cells,
            "cases": self.cases,
            "censuses": self.censuses,
            "violations": self.violations,
            "not_applicable": self.not_applicable,
            "redchar_checked": self.redchar_checked,
            "redchar_failures": self.redchar_failures,
        }

    def header(self) -> dict:
        return {
            "kind": "header",
            "config": asdict(self.config),
            "prng": PRNG_NAME,
            "numpy": np.__version__,
        }

    @property
    def clean(self) -> bool:
        return self.violations == 0 and self.redchar_failures == 0


def _run_cell_star(args):
    return run_cell(*args)


def run_sweep(cfg: SweepConfig, cells: Iterable[Cell] | None = None) -> RunReport:
    import time

    cfg.validate()
    t0 = time.perf_counter()
    cells = list(plan_cells(cfg) if cells is None else cells)
    rep = RunReport(cfg, cells=len(cells))
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(_run_cell_star, [(cfg, c) for c in cells], chunksize=4))
    else:
        results = [run_cell(cfg, c) for c in cells]
    for res in results:  # plan order, whatever the completion order was
        rep.rows.extend(res.rows)
        rep.vacuous_cells += res.vacuous
        rep.cases += res.cases
        rep.censuses += res.censuses
        rep.violations += res.violations
        rep.not_applicable += res.not_applicable
        rep.redchar_checked += res.redchar_checked
        rep.redchar_failures += res.redchar_failures
    rep.wall_time = time.perf_counter() - t0
    return rep


def write_json(rep: RunReport, fh) -> None:
    """Newline-delimited JSON: header, rows, summary. No timings, so equal
    inputs give byte-identical files."""
    fh.write(json.dumps(rep.header(), sort_keys=True) + "\n")
    for row in rep.rows:
        fh.write(json.dumps(row.to_dict(), sort_keys=True) + "\n")
    fh.write(json.dumps(rep.summary(), sort_keys=True) + "\n")


def write_csv(rows: list[BoundCheckReport], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(BoundCheckReport.CSV_COLUMNS)
    for row in rows:
        w.writerow(row.csv_row())


def render(rep: RunReport, fmt: str) -> str:
    buf = io.StringIO()
    if fmt == "csv":
        write_csv(rep.rows, buf)
    else:
        write_json(rep, buf)
    return buf.getvalue()
