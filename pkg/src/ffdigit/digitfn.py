"""Digit functions on GF(p^r): the sum of digits T and the Rudin-Shapiro
function R, both with respect to the context's ordered basis."""

from __future__ import annotations

import enum

import numpy as np

from .ff_core import FieldContext, FieldElement, digits_of, trace


class DigitFunctionKind(enum.Enum):
    THUE_MORSE = "ThueMorse"
    RUDIN_SHAPIRO = "RudinShapiro"


def thue_morse(ctx: FieldContext, x: FieldElement) -> int:
    """Sum of the B-digits of x mod p.

    Equals Tr(delta * x); the two are compared whenever assertions are on.
    """
    value = sum(digits_of(ctx, x)) % ctx.p
    assert value == trace(ctx, ctx.mul(ctx.basis.delta, x)), "T(x) != Tr(delta x)"
    return value


def rudin_shapiro(ctx: FieldContext, x: FieldElement) -> int:
    """Sum of products of consecutive B-digits mod p (0 when r = 1)."""
    d = digits_of(ctx, x)
    return sum(a * b for a, b in zip(d, d[1:])) % ctx.p


def digit_table(ctx: FieldContext, kind: DigitFunctionKind) -> np.ndarray:
    """Values of the digit function at every element index."""
    if kind is DigitFunctionKind.THUE_MORSE:
        return ctx.tm_table
    return ctx.rs_table
