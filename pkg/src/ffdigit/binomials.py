"""p-adic digit combinatorics: Lucas' congruence, Fine's count and the
pattern-length thresholds derived from the digits of a monomial degree."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import DegreeOutOfRange, InvalidParameter


@dataclass(frozen=True)
class PAdicExpansion:
    n: int
    p: int
    digits: tuple[int, ...]  # ascending, no trailing zeros; () for n = 0

    @property
    def value(self) -> int:
        return sum(d * self.p**i for i, d in enumerate(self.digits))

    def __len__(self) -> int:
        return len(self.digits)


def p_adic_expansion(n: int, p: int) -> PAdicExpansion:
    if n < 0:
        raise InvalidParameter("p-adic expansion needs n >= 0")
    digits = []
    m = n
    while m:
        m, d = divmod(m, p)
        digits.append(d)
    return PAdicExpansion(n, p, tuple(digits))


def _small_binom_mod(m: int, n: int, p: int) -> int:
    # m, n < p here, so the factorial quotient is exact and p-free
    if n < 0 or n > m:
        return 0
    num = den = 1
    for i in range(n):
        num = num * (m - i) % p
        den = den * (i + 1) % p
    return num * pow(den, -1, p) % p


def lucas_binom(m: int, n: int, p: int) -> int:
    """C(m, n) mod p as the product of digit-wise binomials."""
    if m < 0 or n < 0:
        raise InvalidParameter("binomial arguments must be non-negative")
    result = 1
    while m or n:
        m, mj = divmod(m, p)
        n, nj = divmod(n, p)
        if nj > mj:
            return 0
        result = result * _small_binom_mod(mj, nj, p) % p
    return result


def fine_count(m: int, p: int) -> int:
    """Number of n in [0, m] with C(m, n) nonzero mod p."""
    return math.prod(d + 1 for d in p_adic_expansion(m, p).digits)


def _digits(x: PAdicExpansion | Sequence[int]) -> tuple[int, ...]:
    return x.digits if isinstance(x, PAdicExpansion) else tuple(x)


def theorem1_s_max(digits: PAdicExpansion | Sequence[int], p: int) -> int:
    """Largest pattern length covered by the monomial bound.

    For one digit this is d_0. Otherwise every start position m >= 1 is
    tried: k is the length of the run of (p-1)-digits starting at m,
    stopped so that m + k <= n - 1, and the candidate is
    (d_{m+k} + 1) * p**k. The answer is the max of d_0 and all candidates.
    """
    d = _digits(digits)
    if not d or d[0] == 0:
        raise InvalidParameter("digits must be canonical with d_0 != 0")
    n = len(d)
    best = d[0]
    for m in range(1, n):
        k = 0
        while m + k < n - 1 and d[m + k] == p - 1:
            k += 1
        best = max(best, (d[m + k] + 1) * p**k)
    return best


class EmptinessThresholds(NamedTuple):
    s_part2: int  # product of (d_i + 1)
    dcond: bool  # product <= p, i.e. the prime-subfield construction applies
    s_part3: int  # smallest s with s > (product - 1) * r


def theorem1_emptiness_thresholds(
    digits: PAdicExpansion | Sequence[int], p: int, r: int
) -> EmptinessThresholds:
    prod = math.prod(x + 1 for x in _digits(digits))
    return EmptinessThresholds(prod, prod <= p, (prod - 1) * r + 1)


@dataclass(frozen=True)
class MonomialProfile:
    d: int  # raw degree
    j: int  # gcd(d, q) = p**j
    reduced_d: int
    digits: tuple[int, ...]
    n: int
    s_max: int
    fine_product: int


def monomial_profile(d_raw: int, ctx) -> MonomialProfile:
    """Split d_raw = reduced_d * p**j with p not dividing reduced_d.

    ``ctx`` is anything with ``p`` and ``q`` attributes.
    """
    p, q = ctx.p, ctx.q
    if not 1 <= d_raw < q:
        raise DegreeOutOfRange(f"degree {d_raw} outside [1, {q})")
    j = 0
    reduced = d_raw
    while reduced % p == 0:
        reduced //= p
        j += 1
    exp = p_adic_expansion(reduced, p)
    return MonomialProfile(
        d=d_raw,
        j=j,
        reduced_d=reduced,
        digits=exp.digits,
        n=len(exp.digits),
        s_max=theorem1_s_max(exp, p),
        fine_product=math.prod(x + 1 for x in exp.digits),
    )
