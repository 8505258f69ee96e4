"""Explicit empty pattern sets.

Each construction finds shifts A, a nonzero a in Z_p^s and a constant t with
sum_i a_i T(f(x + a_i)) = t for every x. Any target c with
sum_i a_i c_i != t is then unattainable. Nothing is emitted before a
brute-force count confirms the pattern set is empty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .binomials import lucas_binom, monomial_profile, p_adic_expansion
from .errors import PreconditionViolated, VerificationFailed
from .ff_core import FieldContext, FieldElement
from .linalg import null_combination
from .patterncount import (
    DensePolynomial,
    Function,
    PatternSpec,
    count_pattern,
    describe_function,
    evaluate_index,
    monomial,
    monomial_degree,
    shifted_values,
    t_values,
    taylor_shift,
)

__all__ = [
    "CounterexampleCertificate",
    "null_combination",
    "empty_pattern_monomial",
    "empty_pattern_any_A",
    "empty_pattern_polynomial",
    "gcd_counterexample",
    "pointwise_identity_holds",
]

CONSTRUCTION_IDS = ("T1P2", "T1P3", "T3P2", "T3P3", "GCD71")


@dataclass
class CounterexampleCertificate:
    field: dict
    function: str
    shifts: list[str]
    targets: list[int]
    a_vector: list[int]
    attainable_sum: int
    verified: bool
    construction_id: str
    shift_indices: list[int] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "construction_id": self.construction_id,
            "field": self.field,
            "function": self.function,
            "shifts": self.shifts,
            "shift_indices": self.shift_indices,
            "targets": self.targets,
            "a_vector": self.a_vector,
            "attainable_sum": self.attainable_sum,
            "verified": self.verified,
        }
        out.update(self.extra)
        return out


def violating_targets(a: Sequence[int], attainable: int, p: int) -> tuple[int, ...]:
    """Lexicographically smallest c with sum a_i c_i != attainable (mod p)."""
    s = len(a)
    if attainable % p != 0:
        return (0,) * s
    last = max(i for i, x in enumerate(a) if x % p)
    c = [0] * s
    c[last] = 1
    return tuple(c)


def _subfield_shifts(ctx: FieldContext, s: int) -> list[int]:
    """0, 1, ..., min(s, p) - 1 from the prime field, then further elements in
    enumeration order."""
    head = list(range(min(s, ctx.p)))
    tail = [i for i in range(ctx.p, ctx.q)][: s - len(head)]
    return head + tail


def _finish(
    ctx: FieldContext,
    f: Function,
    shift_idx: list[int],
    a: Sequence[int],
    construction_id: str,
    extra: dict | None = None,
) -> CounterexampleCertificate:
    p = ctx.p
    a = [int(x) % p for x in a]
    if not any(a):
        raise VerificationFailed("zero dependence vector")
    tm = ctx._tm_list
    attainable = sum(ai * tm[evaluate_index(ctx, f, al)] for ai, al in zip(a, shift_idx)) % p
    c = violating_targets(a, attainable, p)
    spec = PatternSpec(tuple(ctx.element(i) for i in shift_idx), c)
    n = count_pattern(ctx, f, spec)
    if n != 0:
        raise VerificationFailed(f"{construction_id}: pattern set has {n} elements, expected 0")
    return CounterexampleCertificate(
        field=ctx.describe(),
        function=describe_function(ctx, f),
        shifts=[ctx.format(i) for i in shift_idx],
        targets=list(c),
        a_vector=a,
        attainable_sum=attainable,
        verified=True,
        construction_id=construction_id,
        shift_indices=list(shift_idx),
        extra=dict(extra or {}),
    )


def pointwise_identity_holds(ctx: FieldContext, f: Function, cert: CounterexampleCertificate) -> bool:
    """sum_i a_i T(f(x + a_i)) == attainable_sum for every x (vectorised)."""
    vals = shifted_values(ctx, t_values(ctx, f), cert.shift_indices)
    comb = (np.asarray(cert.a_vector, dtype=np.int64) @ vals) % ctx.p
    return bool((comb == cert.attainable_sum).all())


def _table_dependence(ctx: FieldContext, f: Function, shift_idx: Sequence[int]) -> tuple[int, ...]:
    # rows x -> T(f(x + a_i)) - T(f(a_i)); these span a space of functions
    # whose dimension caps how many shifts can be independent
    tv = t_values(ctx, f)
    vals = shifted_values(ctx, tv, shift_idx)
    rows = (vals - tv[np.asarray(shift_idx)][:, None]) % ctx.p
    return null_combination(rows, ctx.p)


def empty_pattern_monomial(ctx: FieldContext, d: int, s: int) -> CounterexampleCertificate:
    """Empty pattern for X^d with shifts taken from the prime field.

    Needs prod(d_i + 1) <= p and prod(d_i + 1) <= s <= q.
    """
    p, q = ctx.p, ctx.q
    prof = monomial_profile(d, ctx)
    prod = math.prod(x + 1 for x in p_adic_expansion(d, p).digits)
    if prod > p:
        raise PreconditionViolated(f"digit product {prod} exceeds p = {p}")
    if not prod <= s <= q:
        raise PreconditionViolated(f"need {prod} <= s <= {q}, got s = {s}")
    shift_idx = _subfield_shifts(ctx, s)
    m = min(s, p)
    ks = [k for k in range(1, d + 1) if lucas_binom(d, k, p)]
    # coefficient of X^k in (X + a)^d - a^d is C(d, k) a^(d-k), all in Z_p
    vectors = [[lucas_binom(d, k, p) * pow(alpha, d - k, p) % p for k in ks] for alpha in range(m)]
    a = list(null_combination(vectors, p)) + [0] * (s - m)
    return _finish(
        ctx, monomial(ctx, d), shift_idx, a, "T1P2",
        {"d": d, "s": s, "digit_product": prod, "p_power_j": prof.j},
    )


def empty_pattern_any_A(
    ctx: FieldContext, f: Function, shifts: Sequence[FieldElement | int], force: bool = False
) -> CounterexampleCertificate:
    """Empty pattern for the given shifts, found from value tables.

    Monomials X^d need s > (prod(d_i + 1) - 1) r, other polynomials of degree
    d need s > d r. With force=True smaller s is attempted and
    NoDependence may propagate.
    """
    shift_idx = [ctx.index(a) for a in shifts]
    s = len(shift_idx)
    if len(set(shift_idx)) != s:
        raise PreconditionViolated("shifts must be distinct")
    d = monomial_degree(f)
    if d is not None and d < ctx.q:
        prod = math.prod(x + 1 for x in p_adic_expansion(d, ctx.p).digits)
        threshold, cid = (prod - 1) * ctx.r, "T1P3"
    elif isinstance(f, DensePolynomial) and f.degree >= 1:
        threshold, cid = f.degree * ctx.r, "T3P3"
    else:
        raise PreconditionViolated("need a polynomial of degree >= 1")
    below = s <= threshold
    if below and not force:
        raise PreconditionViolated(f"s = {s} does not exceed the dimension bound {threshold}")
    a = _table_dependence(ctx, f, shift_idx)
    return _finish(ctx, f, shift_idx, a, cid, {"s": s, "threshold": threshold, "forced_below_threshold": below})


def empty_pattern_polynomial(ctx: FieldContext, f: DensePolynomial, s: int) -> CounterexampleCertificate:
    """Empty pattern for f with prime-field coefficients and d + 1 <= s <= q.

    With d < p the dependence comes from the coefficients of
    f(X + a) - f(a) on X..X^d for a = 0..d. Otherwise the value tables of
    all s shifts are used, which may raise NoDependence.
    """
    p, q = ctx.p, ctx.q
    if not isinstance(f, DensePolynomial) or f.degree < 1:
        raise PreconditionViolated("need a polynomial of degree >= 1")
    idx = f.indices(ctx)
    if any(c >= p for c in idx):
        raise PreconditionViolated("coefficients must lie in the prime field")
    d = f.degree
    if not d + 1 <= s <= q:
        raise PreconditionViolated(f"need {d + 1} <= s <= {q}, got s = {s}")
    shift_idx = _subfield_shifts(ctx, s)
    m = min(s, p)
    if m > d:
        # prime-field indices are the integers themselves
        vectors = [taylor_shift(ctx, f, ctx.element(alpha)).indices(ctx)[1:] for alpha in range(m)]
        vectors = [v + [0] * (d - len(v)) for v in vectors]
        a = list(null_combination(vectors, p)) + [0] * (s - m)
        route = "coefficients"
    else:
        a = list(_table_dependence(ctx, f, shift_idx))
        route = "value_table"
    return _finish(ctx, f, shift_idx, a, "T3P2", {"d": d, "s": s, "route": route})


def gcd_counterexample(
    ctx: FieldContext, g: DensePolynomial, c0: FieldElement | int, s: int
) -> CounterexampleCertificate:
    """f = delta^-1 (g^p - g + c0) has T(f(x)) = Tr(c0) for every x."""
    ar = ctx.arith
    p, q = ctx.p, ctx.q
    if not isinstance(g, DensePolynomial) or g.degree < 1:
        raise PreconditionViolated("g must have degree >= 1")
    if not 1 <= s <= q:
        raise PreconditionViolated(f"need 1 <= s <= {q}")
    c0i = ctx.index(c0)
    gi = g.indices(ctx)
    # g^p = sum g_k^p X^(kp) in characteristic p
    coeffs = [0] * (g.degree * p + 1)
    for k, c in enumerate(gi):
        coeffs[k * p] = ar.pow(c, p)
    for k, c in enumerate(gi):
        coeffs[k] = ar.sub(coeffs[k], c)
    coeffs[0] = ar.add(coeffs[0], c0i)
    dinv = ar.inv(ctx.delta_index)
    f = DensePolynomial.from_indices(ctx, [ar.mul(dinv, c) for c in coeffs])
    tr_c0 = int(ctx.trace_table[c0i])
    tv = t_values(ctx, f)
    if not (tv == tr_c0).all():
        raise VerificationFailed("T(f(x)) is not constant equal to Tr(c0)")
    a = [1] + [0] * (s - 1)
    return _finish(
        ctx, f, list(range(s)), a, "GCD71",
        {"g": describe_function(ctx, g), "c0": ctx.format(c0i), "trace_c0": tr_c0,
         "degree": f.degree, "degree_mod_p": f.degree % p},
    )
