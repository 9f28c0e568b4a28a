"""Partition contributions to power coefficients and the compression map.

The coefficient of z**n in f**m expands as a sum over integer partitions
of n with parts bounded by deg(f): choosing the monomial a_i z**i from
lambda_i of the m factors contributes

    Cont(lambda) = C(m, l_1) C(m - l_1, l_2) ... C(m - l_1 - ... - l_{d-1}, l_d)
                   * prod_i a_i**l_i * a_0**(m - sum_i l_i)

The trailing a_0 power covers polynomials whose constant term is not 1;
with a_0 = 1 it disappears and the familiar product remains.

The compression map sends a partition with negative contribution to one
with positive contribution by swapping out one part j (the least index
with a_j < 0 and lambda_j > 0) for the maximal-weight decomposition of j
into positive-support parts.  Its key properties, checked by the tests:
the image contribution exceeds d times the source in absolute value once
m is large, and each image has at most d preimages.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, isqrt
from typing import Dict, Iterator, List, Optional, Tuple

from . import covering
from .poly import InputError, SparsePolynomial

PARTITION_GUARD_N = 12
PARTITION_GUARD_M = 30


class BudgetExceeded(RuntimeError):
    """Partition enumeration guard tripped (n or m beyond configured cap)."""


@dataclass(frozen=True)
class PartitionTerm:
    """A partition of n (as a multiplicity vector) with its contribution."""

    multiplicities: Tuple[int, ...]
    contribution: Fraction
    mapped: Optional["PartitionTerm"] = None

    @property
    def size(self) -> int:
        return sum(self.multiplicities)

    @property
    def total(self) -> int:
        return sum(i * li for i, li in enumerate(self.multiplicities, start=1))


def enumerate_partitions(n: int, d: int) -> Iterator[Tuple[int, ...]]:
    """All multiplicity vectors (l_1..l_d) with sum i*l_i == n, streamed.

    Order is lexicographic in the multiplicity vector.  n = 0 yields the
    single empty partition.
    """
    if n < 0:
        raise InputError("partition target must be non-negative")
    if d < 1:
        raise InputError("need at least one part size")

    def rec(prefix: List[int], part: int, remaining: int) -> Iterator[Tuple[int, ...]]:
        if part == d:
            if remaining % d == 0:
                yield tuple(prefix + [remaining // d])
            return
        for count in range(remaining // part + 1):
            yield from rec(prefix + [count], part + 1, remaining - count * part)

    yield from rec([], 1, n)


def contribution(lam: Tuple[int, ...], m: int, f: SparsePolynomial) -> Fraction:
    """Exact contribution of one partition to [z**n] f**m."""
    used = sum(lam)
    if used > m:
        return Fraction(0)
    value = Fraction(1)
    remaining = m
    for i, li in enumerate(lam, start=1):
        if li == 0:
            continue
        a_i = f.coefficient(i)
        if a_i == 0:
            return Fraction(0)
        value *= comb(remaining, li) * a_i ** li
        remaining -= li
    a0 = f.coefficient(0)
    if used < m:
        if a0 == 0:
            return Fraction(0)
        value *= a0 ** (m - used)
    return value


def coefficient_via_partitions(
    f: SparsePolynomial, n: int, m: int,
    guard_n: int = PARTITION_GUARD_N, guard_m: int = PARTITION_GUARD_M,
) -> Fraction:
    """[z**n] f**m as the exact partition sum (independent of convolution)."""
    if n > guard_n or m > guard_m:
        raise BudgetExceeded(
            f"partition sum guarded at n <= {guard_n}, m <= {guard_m} (got n={n}, m={m})"
        )
    if f.is_zero():
        return Fraction(1) if (n == 0 and m == 0) else Fraction(0)
    d = max(f.degree, 1)
    total = Fraction(0)
    for lam in enumerate_partitions(n, d):
        total += contribution(lam, m, f)
    return total


def compress(
    lam: Tuple[int, ...], f: SparsePolynomial, n: int, m: int,
) -> PartitionTerm:
    """Apply the compression map to a negative-contribution partition.

    Picks the minimal j with a_j < 0 and lambda_j > 0, removes one part j,
    and adds the parts of the deterministic maximal-weight decomposition of
    j.  Returns the source term with its image attached.
    """
    cont = contribution(lam, m, f)
    if cont >= 0:
        raise InputError("compression map applies only to negative contributions")
    j = None
    for i, li in enumerate(lam, start=1):
        if li > 0 and f.coefficient(i) < 0:
            j = i
            break
    if j is None:
        raise InputError("negative contribution without a negative-coefficient part")
    _, mu = covering.weight_of_index(f, j)
    mapped = list(lam)
    mapped[j - 1] -= 1
    for p in mu:
        mapped[p - 1] += 1
    mapped_t = tuple(mapped)
    mapped_term = PartitionTerm(mapped_t, contribution(mapped_t, m, f))
    return PartitionTerm(lam, cont, mapped=mapped_term)


def negative_terms(
    f: SparsePolynomial, n: int, m: int,
) -> Iterator[PartitionTerm]:
    """Stream compressed terms for every negative-contribution partition of n."""
    d = max(f.degree, 1)
    for lam in enumerate_partitions(n, d):
        if contribution(lam, m, f) < 0:
            yield compress(lam, f, n, m)


def binomial_ratio_bound_check(
    a: int, b: int, i: int, j: int, gamma: Fraction, d: int,
) -> Tuple[bool, bool]:
    """Exact check of C(a,b) / C(a-i, b+j) <= a**(-j(1-gamma)).

    Returns (hypothesis_ok, inequality_holds).  The hypothesis mirrors the
    ratio bound's assumptions: |i| <= d, 1 <= j <= d, b <= (4d)**(-d) a**gamma
    and a at least the threshold from required_a.  A violated hypothesis is
    reported, never asserted; the inequality is still evaluated exactly.

    gamma must be rational: both sides are raised to the q-th power
    (gamma = p/q) so the comparison is between integers.
    """
    gamma = Fraction(gamma)
    if not (0 < gamma < 1):
        raise InputError("gamma must lie in (0, 1)")
    if a <= 0 or b < 0 or j < 1:
        raise InputError("need a > 0, b >= 0, j >= 1")
    hyp = (
        abs(i) <= d
        and 1 <= j <= d
        and _b_hypothesis(a, b, gamma, d)
        and a >= required_a(d, gamma)
    )
    lhs = comb(a, b)
    rhs = comb(a - i, b + j)
    if rhs == 0:
        return hyp, False
    # C(a,b)/C(a-i,b+j) <= a**(-j*(1-gamma))
    # <=>  C(a,b)**q * a**(j*(q-p)) <= C(a-i,b+j)**q  with gamma = p/q
    p, q = gamma.numerator, gamma.denominator
    holds = lhs ** q * a ** (j * (q - p)) <= rhs ** q
    return hyp, holds


def _b_hypothesis(a: int, b: int, gamma: Fraction, d: int) -> bool:
    # b <= (4d)**(-d) * a**gamma  <=>  (b * (4d)**d)**q <= a**p
    p, q = gamma.numerator, gamma.denominator
    return (b * (4 * d) ** d) ** q <= a ** p


def required_a(d: int, gamma: Fraction) -> int:
    """Threshold above which the ratio bound is guaranteed.

    Chosen as ceil((2d * (4d)**d)**(1/gamma)), which keeps the part budget
    b <= (4d)**(-d) a**gamma meaningful (at least 1) and makes the crude
    per-factor estimates in the bound go through with room to spare.
    """
    gamma = Fraction(gamma)
    base = 2 * d * (4 * d) ** d
    p, q = gamma.numerator, gamma.denominator
    # smallest integer A with A**p >= base**q
    target = base ** q
    lo = int(round(target ** (1.0 / p)))
    while lo ** p < target:
        lo += 1
    while lo > 1 and (lo - 1) ** p >= target:
        lo -= 1
    return lo


def consecutive_decomposition(x: int, m: int) -> Tuple[int, int, int]:
    """Write x = a*m + b*(m+1) + c*(m-1) with a, b, c >= x/(4m).

    Requires x >= 8m**2 and m >= 2.  Starts from near-equal thirds of
    x // m shifted by the residue, then rebalances with the sum-preserving
    move (a, b, c) -> (a +- 2, b -+ 1, c -+ 1) until the floor holds; the
    plain thirds construction can dip just below the floor when x is close
    to 8m**2.
    """
    if m < 2:
        raise InputError("need m >= 2")
    if x < 8 * m * m:
        raise InputError("need x >= 8m^2")
    k, ell = divmod(x, m)
    s, rem = divmod(k, 3)
    if rem == 0:
        a0, b0, c0 = s, s, s
    elif rem == 1:
        a0, b0, c0 = s + 1, s, s
    else:
        a0, b0, c0 = s, s + 1, s + 1
    a, b, c = a0 - ell, b0 + ell, c0
    assert a * m + b * (m + 1) + c * (m - 1) == x
    # rebalance: each move keeps a*m + b*(m+1) + c*(m-1) fixed
    floor = Fraction(x, 4 * m)
    for _ in range(4 * m + 8):
        if min(a, b, c) >= floor:
            break
        if a < floor:
            a, b, c = a + 2, b - 1, c - 1
        elif b < floor or c < floor:
            a, b, c = a - 2, b + 1, c + 1
    if min(a, b, c) < floor:
        raise InputError(f"rebalancing failed for x={x}, m={m}")
    assert a * m + b * (m + 1) + c * (m - 1) == x
    return a, b, c
