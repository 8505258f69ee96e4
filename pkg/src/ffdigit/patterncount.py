"""Exhaustive pattern counting, additive character sums and bound reports.

A pattern is a shift set A = (a_1..a_s) of distinct field elements and a
target vector c in Z_p^s; the pattern set is every x with
T(f(x + a_i)) = c_i for all i. Everything here enumerates the whole field.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .binomials import monomial_profile
from .errors import (
    CensusTooLarge,
    InvalidParameter,
    PartitionError,
    ShapeMismatch,
    TooManyCoefficientVectors,
)
from .ff_core import FieldContext, FieldElement

DEFAULT_CENSUS_CAP = 1 << 20
THEOREM_IDS = ("DarSar", "T1", "T2", "T3")


# -- functions -------------------------------------------------------------


@dataclass(frozen=True)
class DensePolynomial:
    """Ascending coefficients; trailing zeros are dropped on construction."""

    coeffs: tuple[FieldElement, ...]

    def __post_init__(self):
        cs = list(self.coeffs)
        while cs and not any(cs[-1].coords):
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_indices(cls, ctx: FieldContext, idx: Sequence[int]) -> "DensePolynomial":
        return cls(tuple(ctx.element(int(i)) for i in idx))

    def indices(self, ctx: FieldContext) -> list[int]:
        # memoised per field; evaluation loops call this for every point
        cache = self.__dict__.setdefault("_index_cache", {})
        if ctx.params not in cache:
            cache[ctx.params] = tuple(ctx.index(c) for c in self.coeffs)
        return list(cache[ctx.params])


@dataclass(frozen=True)
class RationalMonomial:
    """X**exponent; a negative exponent e is evaluated as x**(q-1+e) with
    0 mapped to 0."""

    exponent: int

    def __post_init__(self):
        if self.exponent == 0:
            raise InvalidParameter("RationalMonomial exponent must be nonzero")


Function = Union[DensePolynomial, RationalMonomial]


def monomial(ctx: FieldContext, d: int) -> DensePolynomial:
    return DensePolynomial.from_indices(ctx, [0] * d + [1])


def monomial_degree(f: Function) -> int | None:
    """d if f is X^d with d >= 1, else None."""
    if isinstance(f, RationalMonomial):
        return f.exponent if f.exponent > 0 else None
    if f.degree < 1:
        return None
    lead = f.coeffs[-1].coords
    if lead[0] != 1 or any(lead[1:]):
        return None
    if any(any(c.coords) for c in f.coeffs[:-1]):
        return None
    return f.degree


def function_degree(f: Function) -> int:
    if isinstance(f, RationalMonomial):
        return f.exponent
    return f.degree


def _terms(ctx: FieldContext, f: DensePolynomial) -> list[tuple[int, int]]:
    cache = f.__dict__.setdefault("_terms_cache", {})
    if ctx.params not in cache:
        cache[ctx.params] = [(k, i) for k, i in enumerate(f.indices(ctx)) if i]
    return cache[ctx.params]


def evaluate_index(ctx: FieldContext, f: Function, x: int) -> int:
    ar = ctx.arith
    if isinstance(f, RationalMonomial):
        if f.exponent > 0:
            return ar.pow(x, f.exponent)
        return 0 if x == 0 else ar.pow(ar.inv(x), -f.exponent)
    acc = 0
    for k, c in _terms(ctx, f):
        acc = ar.add(acc, ar.mul(c, ar.pow(x, k)))
    return acc


def evaluate(ctx: FieldContext, f: Function, x: FieldElement) -> FieldElement:
    return ctx.element(evaluate_index(ctx, f, ctx.index(x)))


def value_table(ctx: FieldContext, f: Function) -> np.ndarray:
    """f(x) for every element index x."""
    ar = ctx.arith
    xs = np.arange(ctx.q, dtype=np.int64)
    if isinstance(f, RationalMonomial):
        if f.exponent > 0:
            return ar.vpow(xs, f.exponent)
        return ar.vpow(ar.vinv0(xs), -f.exponent)
    acc = np.zeros(ctx.q, dtype=np.int64)
    for k, c in _terms(ctx, f):
        acc = ar.vadd(acc, ar.vmul(c, ar.vpow(xs, k)))
    return acc


def t_values(ctx: FieldContext, f: Function) -> np.ndarray:
    """T(f(x)) for every element index x."""
    return ctx.tm_table[value_table(ctx, f)]


# -- text forms ------------------------------------------------------------

_TERM_RE = re.compile(
    r"^(?:(?P<coef>\[[^\]]*\]|-?\d+)\s*\*?\s*)?(?P<x>X(?:\^(?P<exp>-?\d+))?)?$"
)


def parse_function(ctx: FieldContext, text: str) -> Function:
    """Parse 'c*X^k + ...' (coefficients in element text form or bare
    integers); a lone 'X^-k' gives a RationalMonomial."""
    text = text.replace(" ", "")
    if not text:
        raise InvalidParameter("empty function spec")
    m = re.fullmatch(r"X\^-(\d+)", text)
    if m:
        k = int(m.group(1))
        if k == 0:
            raise InvalidParameter("X^-0 is not a rational monomial")
        return RationalMonomial(-k)
    ar = ctx.arith
    coeffs: dict[int, int] = {}
    for term in text.split("+"):
        tm = _TERM_RE.match(term)
        if not term or not tm or (tm.group("coef") is None and tm.group("x") is None):
            raise InvalidParameter(f"cannot parse term {term!r} in {text!r}")
        c = ctx.index(ctx.parse(tm.group("coef"))) if tm.group("coef") else 1
        if tm.group("x") is None:
            k = 0
        else:
            k = int(tm.group("exp")) if tm.group("exp") is not None else 1
        if k < 0:
            raise InvalidParameter("negative exponents only as a single term X^-k")
        coeffs[k] = ar.add(coeffs.get(k, 0), c)
    deg = max(coeffs)
    return DensePolynomial.from_indices(ctx, [coeffs.get(k, 0) for k in range(deg + 1)])


def describe_function(ctx: FieldContext, f: Function) -> str:
    if isinstance(f, RationalMonomial):
        return f"X^{f.exponent}"
    parts = []
    for k, c in reversed(_terms(ctx, f)):
        coef = str(c) if c < ctx.p else ctx.format(c)
        mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
        if not mono:
            parts.append(coef)
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{coef}*{mono}")
    return "+".join(parts) or "0"


# -- patterns and counting -------------------------------------------------


@dataclass(frozen=True)
class PatternSpec:
    shifts: tuple[FieldElement, ...]
    targets: tuple[int, ...]

    @property
    def s(self) -> int:
        return len(self.shifts)

    def check(self, ctx: FieldContext) -> None:
        if not 1 <= self.s <= ctx.q:
            raise InvalidParameter(f"pattern length {self.s} outside [1, {ctx.q}]")
        if len(set(self.shifts)) != self.s:
            raise InvalidParameter("shifts must be pairwise distinct")
        if len(self.targets) != self.s:
            raise InvalidParameter("need one target per shift")
        if any(not 0 <= c < ctx.p for c in self.targets):
            raise InvalidParameter(f"targets must lie in [0, {ctx.p})")
        for a in self.shifts:
            ctx.index(a)


def count_pattern(ctx: FieldContext, f: Function, spec: PatternSpec) -> int:
    """|{x : T(f(x + a_i)) = c_i for all i}| by direct enumeration.

    Scalar path, one element at a time with early exit; deliberately shares
    nothing with the vectorised census below.
    """
    spec.check(ctx)
    ar = ctx.arith
    tm = ctx._tm_list
    pairs = list(zip((ctx.index(a) for a in spec.shifts), spec.targets))
    count = 0
    for x in range(ctx.q):
        for a, c in pairs:
            if tm[evaluate_index(ctx, f, ar.add(x, a))] != c:
                break
        else:
            count += 1
    return count


def shifted_values(ctx: FieldContext, tv: np.ndarray, shift_idx) -> np.ndarray:
    """Matrix with row i = (tv[x + a_i])_x, shape s x q."""
    return tv[ctx.arith.translates(np.asarray(shift_idx, dtype=np.int64))]


def pattern_census(
    ctx: FieldContext,
    f: Function,
    shifts: Sequence[FieldElement],
    cap: int = DEFAULT_CENSUS_CAP,
    sparse: bool | None = None,
) -> Counter:
    """Counter mapping every attained target vector to its count.

    Missing keys count zero. Dense counting (bincount over p**s cells) is
    used while p**s <= cap; beyond that the attained rows are collected
    directly, or CensusTooLarge is raised if sparse=False was requested.
    """
    s = len(shifts)
    if len(set(shifts)) != s or s < 1:
        raise InvalidParameter("shifts must be distinct and nonempty")
    p, q = ctx.p, ctx.q
    cells = p**s
    if sparse is None:
        sparse = cells > cap
    elif not sparse and cells > cap:
        raise CensusTooLarge(f"p^s = {p}^{s} cells exceed the census cap {cap}")
    vals = shifted_values(ctx, t_values(ctx, f), [ctx.index(a) for a in shifts])
    out: Counter = Counter()
    if not sparse:
        weights = np.array([p**i for i in range(s)], dtype=np.int64)
        codes = weights @ vals
        counts = np.bincount(codes, minlength=cells)
        for code in np.nonzero(counts)[0]:
            out[decode_targets(int(code), p, s)] = int(counts[code])
    else:
        rows, counts = np.unique(vals.T, axis=0, return_counts=True)
        for row, n in zip(rows, counts):
            out[tuple(int(v) for v in row)] = int(n)
    if sum(out.values()) != q:
        raise PartitionError(f"census mass {sum(out.values())} != q = {q}")
    return out


def decode_targets(code: int, p: int, s: int) -> tuple[int, ...]:
    out = []
    for _ in range(s):
        code, c = divmod(code, p)
        out.append(c)
    return tuple(out)


def encode_targets(c: Sequence[int], p: int) -> int:
    return sum(v * p**i for i, v in enumerate(c))


# -- polynomials F_a -------------------------------------------------------


def taylor_shift(ctx: FieldContext, f: DensePolynomial, alpha: FieldElement) -> DensePolynomial:
    """f(X + alpha), expanded by Horner's scheme on (X + alpha)."""
    ar = ctx.arith
    a = ctx.index(alpha)
    res: list[int] = []
    for c in reversed(f.indices(ctx)):
        new = [0] * (len(res) + 1)
        for k, v in enumerate(res):
            new[k + 1] = ar.add(new[k + 1], v)
            new[k] = ar.add(new[k], ar.mul(a, v))
        new[0] = ar.add(new[0], c)
        res = new
    return DensePolynomial.from_indices(ctx, res)


def poly_add(ctx: FieldContext, f: DensePolynomial, g: DensePolynomial) -> DensePolynomial:
    a, b = f.indices(ctx), g.indices(ctx)
    n = max(len(a), len(b))
    a += [0] * (n - len(a))
    b += [0] * (n - len(b))
    return DensePolynomial.from_indices(ctx, [ctx.arith.add(x, y) for x, y in zip(a, b)])


def poly_scale(ctx: FieldContext, c: FieldElement | int, f: DensePolynomial) -> DensePolynomial:
    """c * f with c a field element (or an index)."""
    ci = ctx.index(c)
    return DensePolynomial.from_indices(ctx, [ctx.arith.mul(ci, x) for x in f.indices(ctx)])


def build_F(
    ctx: FieldContext, a: Sequence[int], shifts: Sequence[FieldElement], f: DensePolynomial
) -> DensePolynomial:
    """delta * sum_i a_i f(X + alpha_i), with a_i in Z_p."""
    if len(a) != len(shifts):
        raise InvalidParameter("need one coefficient per shift")
    ar = ctx.arith
    acc = DensePolynomial(())
    for ai, alpha in zip(a, shifts):
        if ai % ctx.p == 0:
            continue
        shifted = taylor_shift(ctx, f, alpha)
        term = DensePolynomial.from_indices(ctx, [ar.smul(ai, x) for x in shifted.indices(ctx)])
        acc = poly_add(ctx, acc, term)
    return poly_scale(ctx, ctx.delta_index, acc)


# -- character sums --------------------------------------------------------


def _roots_of_unity(p: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(p) / p)


def trace_histogram(ctx: FieldContext, F: Function) -> np.ndarray:
    """hist[k] = |{x : Tr(F(x)) = k}|, exact integers."""
    return np.bincount(ctx.trace_table[value_table(ctx, F)], minlength=ctx.p)


def character_sum(ctx: FieldContext, F: Function) -> complex:
    """sum_x exp(2 pi i Tr(F(x)) / p), accumulated as an integer histogram
    first so the only rounding comes from p complex terms."""
    hist = trace_histogram(ctx, F)
    return complex(hist @ _roots_of_unity(ctx.p))


def is_degenerate(ctx: FieldContext, F: Function) -> bool:
    """True iff x -> Tr(F(x)) is constant on the whole field."""
    return int(np.count_nonzero(trace_histogram(ctx, F))) == 1


# -- bound reports ---------------------------------------------------------


def within_bound(deviation: Fraction, K: int, L: int, q: int) -> bool:
    """deviation <= K * sqrt(q) + L, decided in exact arithmetic."""
    x = Fraction(deviation) - L
    if x <= 0:
        return True
    if K <= 0:
        return False
    return x * x <= K * K * q


def scaled_threshold(K: int, L: int, q: int, scale: int) -> int:
    """Largest integer m with m <= scale * (K sqrt(q) + L)."""
    return L * scale + math.isqrt(K * K * q * scale * scale)


@dataclass(frozen=True)
class BoundTerms:
    """The bound K * sqrt(q) + L plus whether the theorem's hypotheses hold."""

    K: int
    L: int
    applicable: bool
    note: str = ""

    def value(self, q: int) -> float:
        return self.K * math.sqrt(q) + self.L


def theorem_terms(ctx: FieldContext, theorem_id: str, f: Function, s: int) -> BoundTerms:
    q, p = ctx.q, ctx.p
    if theorem_id == "T1":
        d = monomial_degree(f)
        if d is None or not 1 <= d < q:
            raise ShapeMismatch("T1 needs a monomial X^d with 1 <= d < q")
        prof = monomial_profile(d, ctx)
        return BoundTerms(prof.reduced_d - 1, 0, s <= prof.s_max, f"s_max={prof.s_max}")
    if theorem_id == "T2":
        if not isinstance(f, RationalMonomial) or not 1 <= -f.exponent < q:
            raise ShapeMismatch("T2 needs X^-d with 1 <= d < q")
        d = -f.exponent
        reduced = d // math.gcd(d, q)
        return BoundTerms((reduced + 1) * s - 2, s + 1, True)
    if theorem_id == "T3":
        if not isinstance(f, DensePolynomial) or not 1 <= f.degree < q:
            raise ShapeMismatch("T3 needs a polynomial of degree 1 <= d < q")
        d = f.degree
        ok = d % p != 0 and s <= d % p
        return BoundTerms(d - 1, 0, ok, f"d0={d % p}")
    if theorem_id == "DarSar":
        if not isinstance(f, DensePolynomial) or f.degree < 1:
            raise ShapeMismatch("DarSar needs a polynomial of degree >= 1")
        if s != 1:
            raise ShapeMismatch("DarSar is the s = 1 case")
        F = poly_scale(ctx, ctx.delta_index, f)
        return BoundTerms(f.degree - 1, 0, not is_degenerate(ctx, F))
    raise ShapeMismatch(f"unknown theorem id {theorem_id!r}")


def main_term(p: int, r: int, s: int) -> Fraction:
    return Fraction(p) ** (r - s)


@dataclass
class BoundCheckReport:
    p: int
    r: int
    q: int
    function: str
    shifts: list[str]
    targets: list[int]
    count: int
    main_term: float
    deviation: float
    bound: float
    theorem_id: str
    applicable: bool
    passed: bool | None
    modulus: list[int] = field(default_factory=list)
    basis: list[list[int]] = field(default_factory=list)
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    CSV_COLUMNS = (
        "theorem_id", "p", "r", "q", "modulus", "basis", "function", "shifts",
        "targets", "count", "main_term", "deviation", "bound", "applicable",
        "pass", "cases", "seed",
    )

    def to_dict(self) -> dict:
        out = {
            "p": self.p,
            "r": self.r,
            "q": self.q,
            "modulus": self.modulus,
            "basis": self.basis,
            "function": self.function,
            "shifts": self.shifts,
            "targets": self.targets,
            "count": self.count,
            "main_term": self.main_term,
            "deviation": self.deviation,
            "bound": self.bound,
            "theorem_id": self.theorem_id,
            "applicable": self.applicable,
            "pass": self.passed,
            "seed": self.seed,
        }
        out.update(self.extra)
        return out

    def csv_row(self) -> list:
        d = self.to_dict()
        row = []
        for col in self.CSV_COLUMNS:
            v = d.get(col)
            if isinstance(v, list):
                v = " ".join(str(x).replace(" ", "") for x in v)
            row.append("" if v is None else v)
        return row


def make_report(
    ctx: FieldContext,
    theorem_id: str,
    f: Function,
    shift_idx: Sequence[int],
    targets: Sequence[int],
    count: int,
    terms: BoundTerms,
    seed: int | None = None,
    function_text: str | None = None,
    extra: dict | None = None,
) -> BoundCheckReport:
    s = len(shift_idx)
    main = main_term(ctx.p, ctx.r, s)
    dev = abs(count - main)
    passed = within_bound(dev, terms.K, terms.L, ctx.q) if terms.applicable else None
    info = ctx.describe()
    return BoundCheckReport(
        p=ctx.p,
        r=ctx.r,
        q=ctx.q,
        function=function_text if function_text is not None else describe_function(ctx, f),
        shifts=[ctx.format(int(a)) for a in shift_idx],
        targets=[int(c) for c in targets],
        count=int(count),
        main_term=float(main),
        deviation=float(dev),
        bound=terms.value(ctx.q),
        theorem_id=theorem_id,
        applicable=terms.applicable,
        passed=passed,
        modulus=info["modulus"],
        basis=info["basis"],
        seed=seed,
        extra=dict(extra or {}),
    )


def bound_report(
    ctx: FieldContext, theorem_id: str, f: Function, spec: PatternSpec, seed: int | None = None
) -> BoundCheckReport:
    """Count the pattern set and compare it against the named bound."""
    spec.check(ctx)
    terms = theorem_terms(ctx, theorem_id, f, spec.s)
    count = count_pattern(ctx, f, spec)
    return make_report(
        ctx, theorem_id, f, [ctx.index(a) for a in spec.shifts], spec.targets, count, terms, seed
    )


# -- reduction to character sums -------------------------------------------


@dataclass
class RedcharReport:
    max_char_sum: float  # max over a != 0 of |sum_x psi(F_a(x))|
    worst_a: tuple[int, ...]
    worst_targets: tuple[int, ...]
    worst_deviation: float
    holds: bool
    vectors: int
    route: str


def _nonzero_vectors(p: int, s: int):
    for a in itertools.product(range(p), repeat=s):
        if any(a):
            yield a


def combination_sums(p: int, vals: np.ndarray, A: np.ndarray) -> np.ndarray:
    """|sum_x e_p(sum_i a_i vals[i, x])| for every row a of A.

    Since T(y) = Tr(delta y), the exponent equals Tr(F_a(x)).
    """
    n = A.shape[0]
    q = vals.shape[1]
    comb = (A @ vals) % p
    hist = np.bincount((comb + p * np.arange(n)[:, None]).ravel(), minlength=n * p)
    hist = hist.reshape(n, p)
    if (hist.sum(axis=1) != q).any():
        raise PartitionError("trace histogram lost mass")
    return np.abs(hist @ _roots_of_unity(p))


def redchar_check(
    ctx: FieldContext,
    f: Function,
    shifts: Sequence[FieldElement],
    cap: int = 1 << 12,
    route: str | None = None,
) -> RedcharReport:
    """Check max_c ||T(c, A, f)| - p^(r-s)| <= max_{a != 0} |sum psi(F_a)|.

    route 'polynomial' expands F_a symbolically and evaluates it;
    route 'table' combines T-value tables linearly. Default: polynomial for
    dense polynomials of degree <= 64, table otherwise.
    """
    p, s, q = ctx.p, len(shifts), ctx.q
    if p**s - 1 > cap:
        raise TooManyCoefficientVectors(f"{p}^{s} - 1 coefficient vectors exceed the cap {cap}")
    if route is None:
        route = "polynomial" if isinstance(f, DensePolynomial) and f.degree <= 64 else "table"
    shift_idx = [ctx.index(a) for a in shifts]
    vals = shifted_values(ctx, t_values(ctx, f), shift_idx)
    A = np.array(list(_nonzero_vectors(p, s)), dtype=np.int64).reshape(-1, s)
    if route == "table":
        sums = combination_sums(p, vals, A)
    elif route == "polynomial":
        if not isinstance(f, DensePolynomial):
            raise ShapeMismatch("polynomial route needs a dense polynomial")
        sums = np.array([abs(character_sum(ctx, build_F(ctx, a, shifts, f))) for a in A.tolist()])
    else:
        raise InvalidParameter(f"unknown route {route!r}")
    k = int(np.argmax(sums))
    M = float(sums[k])

    weights = np.array([p**i for i in range(s)], dtype=np.int64)
    counts = np.bincount(weights @ vals, minlength=p**s)
    main = main_term(p, ctx.r, s)
    devs = [abs(int(n) - main) for n in counts]
    w = max(range(len(devs)), key=devs.__getitem__)
    worst = devs[w]
    return RedcharReport(
        max_char_sum=M,
        worst_a=tuple(int(x) for x in A[k]),
        worst_targets=decode_targets(w, p, s),
        worst_deviation=float(worst),
        holds=float(worst) <= M + 1e-9 * q,
        vectors=len(A),
        route=route,
    )
