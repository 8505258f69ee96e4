import io
import json
import math
from fractions import Fraction

import numpy as np
import pytest

from ffdigit import build_field
from ffdigit.errors import InvalidParameter
from ffdigit.patterncount import monomial, pattern_census, shifted_values, t_values
from ffdigit.sweep import (
    Cell,
    SweepConfig,
    census_worst,
    fields_in_grid,
    is_vacuous,
    plan_cells,
    render,
    run_cell,
    run_sweep,
    shift_sets,
)


def test_fields_in_grid():
    cfg = SweepConfig(p_set=(3, 2), q_cap=27)
    assert fields_in_grid(cfg) == [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3)]
    assert fields_in_grid(SweepConfig(p_set=(2,), q_cap=64, r_max=2)) == [(2, 1), (2, 2)]


def test_plan_cells_ranges():
    t1 = plan_cells(SweepConfig(theorem_id="T1", p_set=(3,), q_cap=9))
    assert Cell(3, 2, 8, 3) in t1 and Cell(3, 2, 8, 4) not in t1
    assert Cell(3, 2, 3, 1) in t1 and Cell(3, 2, 3, 2) not in t1
    t2 = plan_cells(SweepConfig(theorem_id="T2", p_set=(2,), q_cap=64))
    assert max(c.s for c in t2) == 8 and max(c.d for c in t2) == 32
    assert all(c.s <= 2 for c in t2 if c.r == 1)
    t3 = plan_cells(SweepConfig(theorem_id="T3", p_set=(5,), q_cap=25))
    assert all(c.d % 5 and c.s <= c.d % 5 and c.d <= 10 for c in t3)


def test_config_validation():
    with pytest.raises(InvalidParameter):
        SweepConfig(theorem_id="T4").validate()
    with pytest.raises(InvalidParameter):
        SweepConfig(p_set=(4,)).validate()
    with pytest.raises(InvalidParameter):
        SweepConfig(samples_per_cell=0).validate()


def test_vacuous():
    # bound 0 is never vacuous; a bound of q always is
    assert not is_vacuous(0, 0, 2, 4, 1)
    assert is_vacuous(4, 0, 2, 4, 1)
    assert not is_vacuous(1, 0, 2, 4, 1)  # 4 < 8


def test_shift_sets_exhaustive_cover_translates():
    cfg = SweepConfig(exhaustive_a_cap=10**4)
    sets, mode = shift_sets(cfg, Cell(2, 3, 3, 3), 8)
    assert mode == "exhaustive" and len(sets) == math.comb(7, 2)
    ctx = build_field(2, 3)
    f = monomial(ctx, 3)
    # every 3-subset's census equals that of its translate through 0
    for A in [(1, 2, 5), (3, 6, 7)]:
        rep = [0, ctx.arith.sub(A[1], A[0]), ctx.arith.sub(A[2], A[0])]
        a = pattern_census(ctx, f, [ctx.element(i) for i in A])
        b = pattern_census(ctx, f, [ctx.element(i) for i in rep])
        assert a == b


def test_shift_sets_sampled_are_seeded():
    cfg = SweepConfig(exhaustive_a_cap=10, samples_per_cell=5, seed=3)
    a, mode = shift_sets(cfg, Cell(2, 5, 3, 3), 32)
    b, _ = shift_sets(cfg, Cell(2, 5, 3, 3), 32)
    assert mode == "sampled" and a == b and len(a) == 5
    assert all(len(set(x)) == 3 for x in a)


@pytest.mark.parametrize("dense_cap", [1, 1 << 12])
def test_census_worst_against_census(dense_cap):
    ctx = build_field(3, 3)
    f = monomial(ctx, 5)
    for A in ([0, 1], [0, 4, 7], [2, 3, 5, 11, 20]):
        vals = shifted_values(ctx, t_values(ctx, f), A)
        cw = census_worst(ctx, vals, dense_cap)
        census = pattern_census(ctx, f, [ctx.element(i) for i in A])
        main = Fraction(3) ** (3 - len(A))
        devs = [abs(n - main) for n in census.values()]
        if len(census) < 3 ** len(A):
            devs.append(main)
        assert cw.deviation == max(devs)
        assert census.get(cw.targets, 0) == cw.count


def test_census_worst_huge_s():
    # p^s far beyond 2^62: rows are compared directly
    ctx = build_field(2, 7)
    vals = shifted_values(ctx, t_values(ctx, monomial(ctx, 3)), list(range(70)))
    cw = census_worst(ctx, vals, 1 << 12)
    assert cw.deviation == 1 - Fraction(1, 2**63)
    assert cw.count == 1


def test_small_sweeps_are_clean():
    for tid in ("T2", "T3", "DarSar"):
        rep = run_sweep(SweepConfig(theorem_id=tid, p_set=(2, 3), q_cap=32, polys_per_cell=10))
        assert rep.clean, tid
        assert rep.cases > 0


def test_t1_known_violation_is_reported():
    # X^3 over F_128 with delta = 1: T(f(x+1)) - T(f(x)) is constant
    rep = run_sweep(SweepConfig(theorem_id="T1", p_set=(2,), q_cap=128), cells=[Cell(2, 7, 3, 2)])
    assert rep.violations == 1 and not rep.clean
    row = rep.rows[0]
    assert row.passed is False and row.count == 0 and row.deviation == 32.0


def test_determinism_and_rendering():
    cfg = SweepConfig(theorem_id="T2", p_set=(3,), q_cap=27, seed=11)
    a = render(run_sweep(cfg), "json")
    b = render(run_sweep(cfg), "json")
    assert a == b
    lines = [json.loads(x) for x in a.splitlines()]
    assert lines[0]["kind"] == "header" and lines[-1]["kind"] == "summary"
    assert all(row["seed"] == 11 for row in lines[1:-1])
    csv_text = render(run_sweep(cfg), "csv")
    assert csv_text.splitlines()[0].startswith("theorem_id,p,r,q")


def test_workers_do_not_change_output():
    cfg = SweepConfig(theorem_id="T3", p_set=(2, 3), q_cap=16, polys_per_cell=5, seed=5)
    one = render(run_sweep(cfg), "json")
    cfg.workers = 2
    two = render(run_sweep(cfg), "json").replace('"workers": 2', '"workers": 1')
    assert one == two


def test_run_cell_counts_not_applicable():
    cfg = SweepConfig(theorem_id="DarSar", p_set=(2,), q_cap=4, polys_per_cell=40, include_vacuous=True)
    res = run_cell(cfg, Cell(2, 2, 2, 1))
    # some random degree-2 polynomials over F_4 are degenerate
    assert res.not_applicable > 0
    assert res.cases + res.not_applicable == 40
