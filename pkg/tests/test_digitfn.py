import numpy as np
import pytest

from ffdigit import build_field
from ffdigit.digitfn import DigitFunctionKind, digit_table, rudin_shapiro, thue_morse
from ffdigit.ff_core import FieldElement, random_basis, trace

from conftest import SMALL_FIELDS


def test_examples():
    ctx = build_field(2, 2)
    assert thue_morse(ctx, ctx.zero) == 0
    assert thue_morse(ctx, FieldElement((1, 1))) == 0
    assert thue_morse(ctx, ctx.one) == 1 == trace(ctx, ctx.mul(FieldElement((0, 1)), ctx.one))
    assert rudin_shapiro(ctx, ctx.zero) == 0
    assert rudin_shapiro(ctx, FieldElement((1, 1))) == 1
    assert rudin_shapiro(build_field(2, 3), FieldElement((1, 0, 1))) == 0


def test_rudin_shapiro_prime_field_is_zero():
    ctx = build_field(5, 1)
    assert all(rudin_shapiro(ctx, x) == 0 for x in ctx.elements())


@pytest.mark.parametrize("p,r", SMALL_FIELDS + [(2, 12), (3, 7)])
def test_digit_sum_is_trace_of_delta_x(p, r):
    rng = np.random.default_rng([7, p, r])
    for basis in (None, random_basis(p, r, rng)):
        ctx = build_field(p, r, basis_spec=basis)
        xs = np.arange(ctx.q)
        digit_sums = np.array([sum(ctx.digits_index(i)) % p for i in range(ctx.q)])
        via_trace = ctx.trace_table[ctx.arith.vmul(ctx.delta_index, xs)]
        assert (digit_sums == via_trace).all()
        assert (digit_table(ctx, DigitFunctionKind.THUE_MORSE) == digit_sums).all()


@pytest.mark.parametrize("p,r", [(2, 4), (3, 3), (5, 2)])
def test_thue_morse_linear_and_balanced(p, r):
    ctx = build_field(p, r)
    T = ctx.tm_table
    ar = ctx.arith
    xs = np.arange(ctx.q)
    for y in range(ctx.q):
        assert ((T[ar.vadd(xs, np.full(ctx.q, y))] - T - T[y]) % p == 0).all()
    for a in range(p):
        assert ((T[ar.vsmul(a, xs)] - a * T) % p == 0).all()
    assert np.bincount(T, minlength=p).tolist() == [ctx.q // p] * p
    # the scalar path agrees with the table
    assert [thue_morse(ctx, x) for x in ctx.elements()] == T.tolist()


@pytest.mark.parametrize("p,r", [(2, 2), (2, 3), (3, 2), (5, 3)])
def test_rudin_shapiro_not_additive(p, r):
    ctx = build_field(p, r)
    R = digit_table(ctx, DigitFunctionKind.RUDIN_SHAPIRO)
    assert [rudin_shapiro(ctx, x) for x in ctx.elements()] == R.tolist()
    ar = ctx.arith
    assert any((R[ar.add(x, y)] - R[x] - R[y]) % p for x in range(ctx.q) for y in range(ctx.q))
