"""Exact arithmetic in GF(p^r) with an explicit ordered basis.

Elements are stored in the power basis (1, t, ..., t^(r-1)) of a root t of
the modulus polynomial. Internally every element is also an integer index
``sum(coords[i] * p**i)``, which is the element enumeration used throughout
the package (index 0 is zero, index 1 is one, indices below p are the prime
subfield). Digits with respect to the user's basis B are a linear view
obtained through a precomputed change-of-basis matrix.

Scalar operations on indices go through exp/log tables of a primitive
element; vector operations do the same with numpy so that whole value
tables over the field can be built in one shot.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from . import linalg
from .errors import (
    DivisionByZero,
    FieldTooLarge,
    InvalidParameter,
    NotIrreducible,
    NotPrime,
    SingularBasis,
)

DEFAULT_Q_CAP = 1 << 20
ADD_TABLE_MAX_Q = 1 << 11


def is_prime(n: int) -> bool:
    """Deterministic trial division."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over Z_p, ascending coefficient lists ---------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of a divided by b over Z_p (b must have a nonzero lead)."""
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        factor = a[-1] * inv_lead % p
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * c) % p
        _trim(a)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Irreducibility over Z_p by trial division against every monic
    polynomial of degree 1..deg/2."""
    poly = _trim([x % p for x in poly])
    deg = len(poly) - 1
    if deg < 1:
        return False
    for k in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=k):
            if not poly_mod(poly, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, r: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree r, comparing
    ascending coefficient lists (c_0, c_1, ..., c_{r-1}, 1)."""
    for low in itertools.product(range(p), repeat=r):
        if r > 1 and low[0] == 0:
            continue
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def format_poly(poly: Sequence[int], var: str = "X") -> str:
    terms = []
    for k in range(len(poly) - 1, -1, -1):
        c = poly[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(terms) or "0"


# -- domain types ----------------------------------------------------------


@dataclass(frozen=True)
class FieldParams:
    p: int
    r: int
    modulus: tuple[int, ...]  # ascending, monic, length r + 1

    @property
    def q(self) -> int:
        return self.p**self.r


@dataclass(frozen=True)
class FieldElement:
    """Power-basis coordinates, canonical (each in [0, p))."""

    coords: tuple[int, ...]


@dataclass(frozen=True)
class OrderedBasis:
    elements: tuple[FieldElement, ...]
    change_matrix: tuple[tuple[int, ...], ...]  # power coords -> B-digits
    dual: tuple[FieldElement, ...]
    delta: FieldElement


# -- arithmetic core -------------------------------------------------------


class GFArith:
    """Table-driven arithmetic on element indices for one modulus."""

    def __init__(self, params: FieldParams):
        p, r = params.p, params.r
        self.params = params
        self.p, self.r, self.q = p, r, params.q
        self.modulus = params.modulus
        q = self.q
        self.pw = np.array([p**i for i in range(r)], dtype=np.int64)
        idx = np.arange(q, dtype=np.int64)
        self.coords = (idx[:, None] // self.pw[None, :]) % p

        g = self._find_primitive()
        self.primitive = g
        exp = self._power_table(g)
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1, dtype=np.int64)
        if q > 1 and (log[1:] < 0).any():
            raise AssertionError("exp table is not a permutation of the nonzero elements")
        self.exp = exp
        self.log = log
        self._exp_list = exp.tolist()
        self._log_list = log.tolist()
        for arr in (self.coords, self.exp, self.log):
            arr.flags.writeable = False
        self._add_table = None

        tr = idx.copy()
        cur = idx
        for _ in range(r - 1):
            cur = self.vpow(cur, p)
            tr = self.vadd(tr, cur)
        if (tr >= p).any():
            raise AssertionError("trace left the prime subfield")
        tr.flags.writeable = False
        self.trace_table = tr

    # polynomial arithmetic on coordinate tuples (reference path)

    def to_coords(self, i: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.r):
            i, d = divmod(i, p)
            out.append(d)
        return tuple(out)

    def to_index(self, coords: Sequence[int]) -> int:
        p = self.p
        i = 0
        for d in reversed(coords):
            i = i * p + d
        return i

    def mul_coords(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        p, r = self.p, self.r
        prod = [0] * (2 * r - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        rem = poly_mod(prod, self.modulus, p)
        return tuple(rem + [0] * (r - len(rem)))

    def _vmul_coords(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        p, r = self.p, self.r
        At = np.ascontiguousarray(A.T)
        Bt = np.ascontiguousarray(B.T)
        prod = np.zeros((2 * r - 1, A.shape[0]), dtype=np.int64)
        for i in range(r):
            for j in range(r):
                prod[i + j] += At[i] * Bt[j]
            prod[i : i + r] %= p
        for k in range(2 * r - 2, r - 1, -1):
            c = prod[k]
            for t, m in enumerate(self.modulus[:r]):
                if m:
                    prod[k - r + t] = (prod[k - r + t] - m * c) % p
        return prod[:r].T

    def _pow_coords(self, a: tuple[int, ...], e: int) -> tuple[int, ...]:
        result = self.to_coords(1)
        base = a
        while e:
            if e & 1:
                result = self.mul_coords(result, base)
            base = self.mul_coords(base, base)
            e >>= 1
        return result

    def _find_primitive(self) -> int:
        q = self.q
        if q == 2:
            return 1
        one = self.to_coords(1)
        factors = prime_factors(q - 1)
        for cand in range(2, q):
            c = self.to_coords(cand)
            if all(self._pow_coords(c, (q - 1) // f) != one for f in factors):
                return cand
        raise AssertionError("no primitive element")  # pragma: no cover

    def _power_table(self, g: int) -> np.ndarray:
        n = self.q - 1
        step = math.isqrt(n) + 1
        baby = [self.to_coords(1)]
        gc = self.to_coords(g)
        for _ in range(step - 1):
            baby.append(self.mul_coords(baby[-1], gc))
        giant_step = self.mul_coords(baby[-1], gc)
        giant = [self.to_coords(1)]
        for _ in range((n + step - 1) // step - 1):
            giant.append(self.mul_coords(giant[-1], giant_step))
        B = np.array(baby, dtype=np.int64)
        G = np.array(giant, dtype=np.int64)
        A1 = np.tile(B, (len(giant), 1))
        A2 = np.repeat(G, len(baby), axis=0)
        C = self._vmul_coords(A1, A2)[:n]
        return C @ self.pw

    # scalar ops on indices

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        p = self.p
        res, w = 0, 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            s = x + y
            if s >= p:
                s -= p
            res += s * w
            w *= p
        return res

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return self.smul(self.p - 1, a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def smul(self, k: int, a: int) -> int:
        """Multiply by the prime-subfield scalar k."""
        p = self.p
        k %= p
        res, w = 0, 1
        while a:
            a, x = divmod(a, p)
            res += (k * x % p) * w
            w *= p
        return res

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp_list[(self._log_list[a] + self._log_list[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no multiplicative inverse")
        return self._exp_list[-self._log_list[a] % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            raise InvalidParameter("exponent must be non-negative")
        if e == 0:
            return 1
        if a == 0:
            return 0
        return self._exp_list[self._log_list[a] * e % (self.q - 1)]

    def pow_sqmul(self, a: int, e: int) -> int:
        """Square-and-multiply; kept separate from the log shortcut."""
        if e < 0:
            raise InvalidParameter("exponent must be non-negative")
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    # vector ops on index arrays

    @property
    def add_table(self) -> np.ndarray | None:
        if self._add_table is None and self.q <= ADD_TABLE_MAX_Q:
            idx = np.arange(self.q, dtype=np.int64)
            t = self.vadd(idx[:, None], idx[None, :]).astype(np.int16)
            t.flags.writeable = False
            self._add_table = t
        return self._add_table

    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        return ((self.coords[a] + self.coords[b]) % self.p) @ self.pw

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        return ((self.p - self.coords[a]) % self.p) @ self.pw

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vsmul(self, k: int, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return ((k % self.p) * self.coords[a] % self.p) @ self.pw

    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        prod = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, prod)

    def vpow(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        res = self.exp[(self.log[a] * (e % (self.q - 1))) % (self.q - 1)]
        return np.where(a == 0, 0, res)

    def vinv0(self, a) -> np.ndarray:
        """Inverse with the convention 0 -> 0."""
        a = np.asarray(a, dtype=np.int64)
        return np.where(a == 0, 0, self.exp[(-self.log[a]) % (self.q - 1)])

    def translates(self, shifts) -> np.ndarray:
        """Row i holds xi + shifts[i] for every xi (shape len(shifts) x q)."""
        shifts = np.asarray(shifts, dtype=np.int64)
        t = self.add_table
        if t is not None:
            return t[shifts]
        xs = np.arange(self.q, dtype=np.int64)
        return self.vadd(shifts[:, None], xs[None, :])


@lru_cache(maxsize=64)
def field_arith(params: FieldParams) -> GFArith:
    return GFArith(params)


# -- basis machinery -------------------------------------------------------


def dual_basis(
    params: FieldParams, basis_elements: Sequence[FieldElement]
) -> tuple[tuple[FieldElement, ...], FieldElement]:
    """Dual basis (d_1..d_r) with Tr(d_i b_j) = [i == j], and their sum.

    Builds the trace-form matrix G[k][j] = Tr(t^k b_j) and inverts it; row
    i of the inverse holds the power coordinates of d_i.
    """
    ar = field_arith(params)
    p, r = params.p, params.r
    if len(basis_elements) != r:
        raise SingularBasis(f"need {r} basis elements, got {len(basis_elements)}")
    b_idx = [ar.to_index(b.coords) for b in basis_elements]
    G = [[int(ar.trace_table[ar.mul(p**k, bj)]) for bj in b_idx] for k in range(r)]
    try:
        Y = linalg.inverse(G, p)
    except linalg.SingularMatrix:
        raise SingularBasis("trace form is degenerate on the given elements") from None
    dual = tuple(FieldElement(tuple(int(x) for x in Y[i])) for i in range(r))
    d_idx = [ar.to_index(d.coords) for d in dual]
    for i in range(r):
        for j in range(r):
            t = trace_index(ar, ar.mul(d_idx[i], b_idx[j]))
            if t != (1 if i == j else 0):
                raise SingularBasis("dual basis verification failed")
    delta = 0
    for d in d_idx:
        delta = ar.add(delta, d)
    if delta == 0:
        raise SingularBasis("sum of dual basis vanished")
    return dual, FieldElement(ar.to_coords(delta))


def trace_index(ar: GFArith, x: int) -> int:
    """Sum of the Frobenius conjugates x^(p^i), by square-and-multiply."""
    acc = x
    cur = x
    for _ in range(ar.r - 1):
        cur = ar.pow_sqmul(cur, ar.p)
        acc = ar.add(acc, cur)
    if acc >= ar.p:
        raise AssertionError("trace is not in the prime subfield")
    return acc


# -- context ---------------------------------------------------------------

_ELEMENT_RE = re.compile(r"^\[\s*-?\d+(\s*,\s*-?\d+)*\s*\]$")


class FieldContext:
    """GF(p^r) together with an ordered basis B, its dual basis and delta.

    Immutable after construction; the numpy tables are read-only.
    """

    def __init__(self, params: FieldParams, basis: OrderedBasis):
        self.params = params
        self.basis = basis
        self.arith = field_arith(params)
        ar = self.arith
        self.p, self.r, self.q = params.p, params.r, params.q
        self.delta_index = ar.to_index(basis.delta.coords)
        self.basis_indices = tuple(ar.to_index(b.coords) for b in basis.elements)
        C = np.array(basis.change_matrix, dtype=np.int64)
        digits = (ar.coords @ C.T) % self.p
        tm = digits.sum(axis=1) % self.p
        via_trace = ar.trace_table[ar.vmul(self.delta_index, np.arange(self.q))]
        if not np.array_equal(tm, via_trace):
            raise AssertionError("digit sum disagrees with Tr(delta * x)")
        rs = (digits[:, :-1] * digits[:, 1:]).sum(axis=1) % self.p
        for arr in (digits, tm, rs):
            arr.flags.writeable = False
        self.digit_table = digits
        self.tm_table = tm
        self.rs_table = rs
        self._tm_list = tm.tolist()

    def __repr__(self) -> str:
        return f"FieldContext(p={self.p}, r={self.r}, modulus={format_poly(self.params.modulus)})"

    @property
    def trace_table(self) -> np.ndarray:
        return self.arith.trace_table

    # element conversions

    def element(self, index: int) -> FieldElement:
        if not 0 <= index < self.q:
            raise InvalidParameter(f"element index {index} outside [0, {self.q})")
        return FieldElement(self.arith.to_coords(index))

    def index(self, x: FieldElement | int) -> int:
        if isinstance(x, (int, np.integer)):
            if not 0 <= x < self.q:
                raise InvalidParameter(f"element index {x} outside [0, {self.q})")
            return int(x)
        if len(x.coords) != self.r or any(not 0 <= c < self.p for c in x.coords):
            raise InvalidParameter(f"{x} is not a canonical element of GF({self.p}^{self.r})")
        return self.arith.to_index(x.coords)

    @property
    def zero(self) -> FieldElement:
        return self.element(0)

    @property
    def one(self) -> FieldElement:
        return self.element(1)

    def elements(self) -> Iterator[FieldElement]:
        for i in range(self.q):
            yield self.element(i)

    def prime(self, k: int) -> FieldElement:
        """The prime-subfield element k mod p."""
        return self.element(k % self.p)

    def digits_index(self, i: int) -> tuple[int, ...]:
        return tuple(int(d) for d in self.digit_table[i])

    def from_digits(self, digits: Sequence[int]) -> FieldElement:
        if len(digits) != self.r:
            raise InvalidParameter(f"expected {self.r} digits, got {len(digits)}")
        ar = self.arith
        acc = 0
        for x, b in zip(digits, self.basis_indices):
            acc = ar.add(acc, ar.smul(x, b))
        return self.element(acc)

    def format(self, x: FieldElement | int) -> str:
        i = x if isinstance(x, int) else self.index(x)
        return "[" + ",".join(str(d) for d in self.digits_index(i)) + "]"

    def parse(self, text: str) -> FieldElement:
        """Element text form: '[x1,...,xr]' in B-digits, or a bare integer
        for a prime-subfield element."""
        text = text.strip()
        if re.fullmatch(r"-?\d+", text):
            return self.prime(int(text))
        if not _ELEMENT_RE.match(text):
            raise InvalidParameter(f"cannot parse field element {text!r}")
        digits = [int(t) for t in text[1:-1].split(",")]
        if len(digits) != self.r or any(not 0 <= d < self.p for d in digits):
            raise InvalidParameter(f"{text!r}: need {self.r} digits in [0, {self.p})")
        return self.from_digits(digits)

    # element arithmetic

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.element(self.arith.add(self.index(a), self.index(b)))

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.element(self.arith.sub(self.index(a), self.index(b)))

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.element(self.arith.mul(self.index(a), self.index(b)))

    def inv(self, a: FieldElement) -> FieldElement:
        return self.element(self.arith.inv(self.index(a)))

    def pow(self, a: FieldElement, e: int) -> FieldElement:
        return self.element(self.arith.pow_sqmul(self.index(a), e))

    def describe(self) -> dict:
        """Field parameters sufficient to rebuild this exact context."""
        return {
            "p": self.p,
            "r": self.r,
            "modulus": list(self.params.modulus),
            "basis": [list(b.coords) for b in self.basis.elements],
        }


def arith(ctx: FieldContext, op: str, a: FieldElement, b) -> FieldElement:
    """Dispatch op in {add, sub, mul, inv, pow}; b is ignored for inv and
    is a non-negative integer for pow."""
    if op == "add":
        return ctx.add(a, b)
    if op == "sub":
        return ctx.sub(a, b)
    if op == "mul":
        return ctx.mul(a, b)
    if op == "inv":
        return ctx.inv(a)
    if op == "pow":
        return ctx.pow(a, int(b))
    raise InvalidParameter(f"unknown operation {op!r}")


def trace(ctx: FieldContext, x: FieldElement) -> int:
    return trace_index(ctx.arith, ctx.index(x))


def digits_of(ctx: FieldContext, x: FieldElement) -> tuple[int, ...]:
    C = ctx.basis.change_matrix
    c = x.coords
    return tuple(sum(row[k] * c[k] for k in range(ctx.r)) % ctx.p for row in C)


def build_field(
    p: int,
    r: int,
    modulus_poly: Sequence[int] | None = None,
    basis_spec: Sequence[Sequence[int]] | None = None,
    q_cap: int = DEFAULT_Q_CAP,
) -> FieldContext:
    """Construct GF(p^r).

    modulus_poly is ascending and monic; by default the lexicographically
    smallest irreducible is used. basis_spec rows are the power-basis
    coordinates of b_1..b_r; by default B is the power basis.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if not isinstance(r, int) or r < 1:
        raise InvalidParameter(f"extension degree must be >= 1, got {r}")
    if p**r > q_cap:
        raise FieldTooLarge(f"q = {p}^{r} = {p**r} exceeds the cap {q_cap}")
    if modulus_poly is None:
        modulus = smallest_irreducible(p, r)
    else:
        modulus = tuple(int(c) % p for c in modulus_poly)
        if len(modulus) != r + 1 or modulus[-1] != 1:
            raise NotIrreducible(f"modulus must be monic of degree {r}: {list(modulus_poly)}")
        if not is_irreducible(modulus, p):
            raise NotIrreducible(f"{format_poly(modulus)} is reducible over F_{p}")
    params = FieldParams(p, r, modulus)
    return _build_context(params, _basis_rows(p, r, basis_spec))


def _basis_rows(p, r, basis_spec) -> tuple[tuple[int, ...], ...]:
    if basis_spec is None:
        return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
    rows = tuple(tuple(int(x) % p for x in row) for row in basis_spec)
    if len(rows) != r or any(len(row) != r for row in rows):
        raise SingularBasis(f"basis must be an {r}x{r} matrix")
    return rows


@lru_cache(maxsize=64)
def _build_context(params: FieldParams, rows: tuple[tuple[int, ...], ...]) -> FieldContext:
    p = params.p
    try:
        change = linalg.inverse(np.array(rows).T, p)
    except linalg.SingularMatrix:
        raise SingularBasis("basis matrix is not invertible over F_%d" % p) from None
    elements = tuple(FieldElement(row) for row in rows)
    dual, delta = dual_basis(params, elements)
    basis = OrderedBasis(
        elements=elements,
        change_matrix=tuple(tuple(int(x) for x in row) for row in change),
        dual=dual,
        delta=delta,
    )
    return FieldContext(params, basis)


def random_basis(p: int, r: int, rng: np.random.Generator) -> list[list[int]]:
    """A uniformly random invertible r x r matrix over Z_p (rejection)."""
    while True:
        M = rng.integers(0, p, size=(r, r))
        if linalg.rank(M, p) == r:
            return M.tolist()
