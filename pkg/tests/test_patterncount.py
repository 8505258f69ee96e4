import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ffdigit import build_field
from ffdigit.errors import CensusTooLarge, InvalidParameter, ShapeMismatch, TooManyCoefficientVectors
from ffdigit.ff_core import FieldElement
from ffdigit.patterncount import (
    DensePolynomial,
    PatternSpec,
    RationalMonomial,
    bound_report,
    build_F,
    character_sum,
    count_pattern,
    describe_function,
    evaluate,
    is_degenerate,
    monomial,
    parse_function,
    pattern_census,
    redchar_check,
    taylor_shift,
    value_table,
    within_bound,
)

from conftest import ref_mul, ref_pow, ref_trace

W = FieldElement((0, 1))  # root of X^2 + X + 1 in F_4


def spec(ctx, shifts, targets):
    return PatternSpec(tuple(ctx.element(i) if isinstance(i, int) else i for i in shifts), tuple(targets))


def brute_count(ctx, f, shifts, targets):
    """Oracle: schoolbook evaluation, digits via the basis change."""
    p, m = ctx.p, ctx.params.modulus
    coeffs = [c.coords for c in f.coeffs]

    def ev(x):
        acc = tuple([0] * ctx.r)
        for k, c in enumerate(coeffs):
            acc = tuple((u + v) % p for u, v in zip(acc, ref_mul(c, ref_pow(x, k, m, p), m, p)))
        return acc

    n = 0
    for x in ctx.elements():
        ok = True
        for a, c in zip(shifts, targets):
            y = ev(tuple((u + v) % p for u, v in zip(x.coords, a.coords)))
            if sum(ctx.digits_index(ctx.index(FieldElement(y)))) % p != c:
                ok = False
                break
        n += ok
    return n


def test_eval_examples():
    ctx = build_field(2, 2)
    assert evaluate(ctx, monomial(ctx, 2), W) == FieldElement((1, 1))
    assert evaluate(ctx, DensePolynomial(()), W) == ctx.zero
    assert evaluate(ctx, RationalMonomial(-1), ctx.zero) == ctx.zero
    assert evaluate(ctx, RationalMonomial(-1), W) == ctx.inv(W)


def test_dense_polynomial_normalises():
    ctx = build_field(3, 1)
    f = DensePolynomial.from_indices(ctx, [1, 2, 0, 0])
    assert f.degree == 1
    assert DensePolynomial.from_indices(ctx, [0, 0]).degree == -1
    with pytest.raises(InvalidParameter):
        RationalMonomial(0)


def test_count_examples():
    ctx = build_field(2, 2)
    assert count_pattern(ctx, monomial(ctx, 1), spec(ctx, [0], [0])) == 2
    assert count_pattern(ctx, monomial(ctx, 3), spec(ctx, [0], [1])) == 3
    assert count_pattern(ctx, RationalMonomial(-1), spec(ctx, [0], [0])) == 2
    # the two solutions of T(x^-1) = 0 are 0 and w
    tv = ctx.tm_table[value_table(ctx, RationalMonomial(-1))]
    assert [ctx.element(i) for i in np.nonzero(tv == 0)[0]] == [ctx.zero, W]


def test_pattern_spec_validation():
    ctx = build_field(3, 2)
    with pytest.raises(InvalidParameter):
        count_pattern(ctx, monomial(ctx, 1), spec(ctx, [1, 1], [0, 0]))
    with pytest.raises(InvalidParameter):
        count_pattern(ctx, monomial(ctx, 1), spec(ctx, [1, 2], [0]))
    with pytest.raises(InvalidParameter):
        count_pattern(ctx, monomial(ctx, 1), spec(ctx, [1], [3]))


def test_census_examples():
    ctx = build_field(2, 2)
    assert dict(pattern_census(ctx, monomial(ctx, 1), [ctx.zero])) == {(0,): 2, (1,): 2}
    assert dict(pattern_census(ctx, monomial(ctx, 3), [ctx.zero])) == {(0,): 1, (1,): 3}
    with pytest.raises(CensusTooLarge):
        pattern_census(ctx, monomial(ctx, 1), [ctx.element(i) for i in range(4)], cap=8, sparse=False)
    sparse = pattern_census(ctx, monomial(ctx, 3), [ctx.element(i) for i in range(4)], cap=8)
    dense = pattern_census(ctx, monomial(ctx, 3), [ctx.element(i) for i in range(4)])
    assert sparse == dense


fields = st.sampled_from([(2, 3), (2, 4), (3, 2), (5, 1), (5, 2), (7, 1)])


@st.composite
def pattern_case(draw, max_deg=5):
    p, r = draw(fields)
    ctx = build_field(p, r)
    deg = draw(st.integers(0, max_deg))
    coeffs = draw(st.lists(st.integers(0, ctx.q - 1), min_size=deg + 1, max_size=deg + 1))
    f = DensePolynomial.from_indices(ctx, coeffs)
    s = draw(st.integers(1, min(4, ctx.q)))
    shifts = draw(st.lists(st.integers(0, ctx.q - 1), min_size=s, max_size=s, unique=True))
    targets = draw(st.lists(st.integers(0, p - 1), min_size=s, max_size=s))
    return ctx, f, [ctx.element(i) for i in shifts], targets


@given(pattern_case())
def test_count_matches_oracle_and_census(case):
    ctx, f, shifts, targets = case
    n = count_pattern(ctx, f, PatternSpec(tuple(shifts), tuple(targets)))
    assert n == brute_count(ctx, f, shifts, targets)
    census = pattern_census(ctx, f, shifts)
    assert sum(census.values()) == ctx.q
    assert census.get(tuple(targets), 0) == n


@given(fields, st.data())
def test_monomial_reduction(pr, data):
    ctx = build_field(*pr)
    p, q = ctx.p, ctx.q
    j = data.draw(st.integers(1, ctx.r - 1)) if ctx.r > 1 else 0
    d = data.draw(st.integers(1, (q - 1) // p**j))
    s = data.draw(st.integers(1, 3))
    shifts = data.draw(st.lists(st.integers(0, q - 1), min_size=s, max_size=s, unique=True))
    targets = data.draw(st.lists(st.integers(0, p - 1), min_size=s, max_size=s))
    A = [ctx.element(i) for i in shifts]
    Ap = [ctx.element(ctx.arith.pow(i, p**j)) for i in shifts]
    lhs = count_pattern(ctx, monomial(ctx, d * p**j), PatternSpec(tuple(A), tuple(targets)))
    rhs = count_pattern(ctx, monomial(ctx, d), PatternSpec(tuple(Ap), tuple(targets)))
    assert lhs == rhs


def test_build_F_examples():
    ctx = build_field(2, 2)
    f = monomial(ctx, 2)
    F = build_F(ctx, (1,), [W], f)
    expect = [ctx.arith.mul(ctx.delta_index, c) for c in taylor_shift(ctx, f, W).indices(ctx)]
    assert F.indices(ctx) == expect
    F = build_F(ctx, (1, 1), [ctx.zero, ctx.one], f)
    assert F.degree == 0 and F.coeffs[0] == ctx.basis.delta
    assert build_F(ctx, (0, 0), [ctx.zero, ctx.one], f).degree == -1


@given(pattern_case())
def test_taylor_shift_and_F_pointwise(case):
    ctx, f, shifts, _ = case
    ar = ctx.arith
    vt = value_table(ctx, f)
    for alpha in shifts:
        g = value_table(ctx, taylor_shift(ctx, f, alpha))
        assert (g == vt[ar.translates([ctx.index(alpha)])[0]]).all()
    a = [1] * len(shifts)
    F = value_table(ctx, build_F(ctx, a, shifts, f))
    # Tr(F_a(x)) = sum_i T(f(x + alpha_i)) as functions of x
    tv = ctx.tm_table[vt][ar.translates([ctx.index(x) for x in shifts])].sum(axis=0) % ctx.p
    assert (ctx.trace_table[F] == tv).all()


def brute_character_sum(ctx, F):
    p, m = ctx.p, ctx.params.modulus
    total = 0
    for x in ctx.elements():
        y = tuple([0] * ctx.r)
        for k, c in enumerate(F.coeffs):
            y = tuple((u + v) % p for u, v in zip(y, ref_mul(c.coords, ref_pow(x.coords, k, m, p), m, p)))
        total += cmath.exp(2j * math.pi * ref_trace(y, m, p) / p)
    return total


def test_character_sum_examples():
    ctx = build_field(2, 3)
    assert character_sum(ctx, DensePolynomial(())) == ctx.q
    dX = DensePolynomial((ctx.zero, ctx.basis.delta))
    assert abs(character_sum(ctx, dX)) < 1e-12
    f3 = build_field(3, 1)
    assert abs(abs(character_sum(f3, monomial(f3, 2))) - math.sqrt(3)) < 1e-12


@given(pattern_case(max_deg=4))
def test_character_sum_matches_oracle(case):
    ctx, f, _, _ = case
    assert abs(character_sum(ctx, f) - brute_character_sum(ctx, f)) < 1e-9


def test_degeneracy_examples():
    ctx = build_field(2, 2)
    assert is_degenerate(ctx, DensePolynomial((W,)))
    assert not is_degenerate(ctx, DensePolynomial((ctx.zero, ctx.basis.delta)))
    assert is_degenerate(ctx, parse_function(ctx, "X^2+X"))


@given(st.sampled_from([(2, 5), (2, 7), (3, 3), (3, 4), (5, 2), (7, 2), (2, 10)]), st.data())
def test_weil_bound(pr, data):
    ctx = build_field(*pr)
    deg = data.draw(st.integers(1, 6))
    coeffs = data.draw(st.lists(st.integers(0, ctx.q - 1), min_size=deg, max_size=deg))
    lead = data.draw(st.integers(1, ctx.q - 1))
    F = DensePolynomial.from_indices(ctx, coeffs + [lead])
    S = abs(character_sum(ctx, F))
    if is_degenerate(ctx, F):
        assert abs(S - ctx.q) < 1e-9
    else:
        assert S <= (deg - 1) * math.sqrt(ctx.q) + 1e-6


def test_within_bound_is_exact_at_ties():
    assert within_bound(Fraction(2), 1, 0, 4)
    assert not within_bound(Fraction(2) + Fraction(1, 10**30), 1, 0, 4)
    assert within_bound(Fraction(5), 1, 3, 4)
    assert within_bound(Fraction(0), 0, 0, 9)
    assert not within_bound(Fraction(1, 2), 0, 0, 9)


def test_bound_report_examples():
    ctx = build_field(2, 2)
    rep = bound_report(ctx, "T1", monomial(ctx, 3), spec(ctx, [0], [1]))
    assert (rep.count, rep.deviation, rep.bound, rep.applicable, rep.passed) == (3, 1.0, 4.0, True, True)
    rep = bound_report(ctx, "T2", RationalMonomial(-1), spec(ctx, [0], [0]))
    assert (rep.count, rep.deviation, rep.bound, rep.passed) == (2, 0.0, 2.0, True)
    rep = bound_report(ctx, "T1", monomial(ctx, 1), spec(ctx, [0], [0]))
    assert (rep.bound, rep.deviation, rep.passed) == (0.0, 0.0, True)
    d = rep.to_dict()
    assert d["pass"] is True and d["shifts"] == ["[0,0]"] and d["main_term"] == 2.0


def test_bound_report_applicability():
    ctx = build_field(3, 2)
    # X^3 = X^(1 * 3): s_max 1, so s = 2 is out of scope
    rep = bound_report(ctx, "T1", monomial(ctx, 3), spec(ctx, [0, 1], [0, 0]))
    assert not rep.applicable and rep.passed is None
    # T3 needs s <= d mod p
    f = parse_function(ctx, "X^4+X")
    assert bound_report(ctx, "T3", f, spec(ctx, [0], [0])).applicable
    assert not bound_report(ctx, "T3", f, spec(ctx, [0, 1], [0, 0])).applicable
    # DarSar: degenerate f is not covered
    c2 = build_field(2, 2)
    rep = bound_report(c2, "DarSar", parse_function(c2, "[1,1]*X^2+[1,1]*X"), spec(c2, [0], [0]))
    assert not rep.applicable


def test_bound_report_shape_errors():
    ctx = build_field(2, 2)
    with pytest.raises(ShapeMismatch):
        bound_report(ctx, "T1", parse_function(ctx, "X^2+X"), spec(ctx, [0], [0]))
    with pytest.raises(ShapeMismatch):
        bound_report(ctx, "T2", monomial(ctx, 2), spec(ctx, [0], [0]))
    with pytest.raises(ShapeMismatch):
        bound_report(ctx, "DarSar", monomial(ctx, 2), spec(ctx, [0, 1], [0, 0]))
    with pytest.raises(ShapeMismatch):
        bound_report(ctx, "T3", RationalMonomial(-1), spec(ctx, [0], [0]))
    with pytest.raises(ShapeMismatch):
        bound_report(ctx, "T9", monomial(ctx, 2), spec(ctx, [0], [0]))


def test_redchar_examples():
    ctx = build_field(2, 2)
    rep = redchar_check(ctx, monomial(ctx, 2), [ctx.zero])
    assert rep.holds
    rep = redchar_check(ctx, monomial(ctx, 1), [W])
    assert rep.max_char_sum < 1e-9 and rep.worst_deviation == 0
    c8 = build_field(2, 3)
    rep = redchar_check(c8, monomial(c8, 3), [c8.zero, c8.one])
    assert rep.holds and rep.vectors == 3
    with pytest.raises(TooManyCoefficientVectors):
        redchar_check(c8, monomial(c8, 3), list(c8.elements()), cap=64)


@given(pattern_case(max_deg=4))
def test_redchar_routes_agree(case):
    ctx, f, shifts, _ = case
    a = redchar_check(ctx, f, shifts, route="polynomial")
    b = redchar_check(ctx, f, shifts, route="table")
    assert a.holds and b.holds
    assert abs(a.max_char_sum - b.max_char_sum) < 1e-9
    assert a.worst_deviation == b.worst_deviation


@pytest.mark.parametrize("text", ["X^3", "2*X^2+X+1", "[1,1]*X^4+[0,1]", "X^-2", "X"])
def test_parse_describe_round_trip(text):
    ctx = build_field(3, 2)
    f = parse_function(ctx, text)
    assert parse_function(ctx, describe_function(ctx, f)) == f


def test_parse_errors():
    ctx = build_field(3, 2)
    for bad in ["", "X^", "Y^2", "X^-1+X", "2**X"]:
        with pytest.raises(InvalidParameter):
            parse_function(ctx, bad)
    assert parse_function(ctx, "X+X+X").degree == -1


def test_negative_exponent_convention():
    # x^-d equals x^(q-1-d) away from the top degree, both sending 0 to 0
    ctx = build_field(3, 2)
    for d in range(1, ctx.q - 1):
        assert (value_table(ctx, RationalMonomial(-d)) == value_table(ctx, monomial(ctx, ctx.q - 1 - d))).all()
    top = value_table(ctx, RationalMonomial(-(ctx.q - 1)))
    assert top[0] == 0 and (top[1:] == 1).all()
