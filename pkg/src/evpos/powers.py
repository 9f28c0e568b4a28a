"""Exact coefficient profiles of f**m and negativity scanning.

Powers are computed over a dense integer vector after clearing one common
denominator D from f, so the coefficients of f**m are integers divided by
D**m and every sign decision is an integer sign.  Incremental scans over a
range of m reuse the previous power (one sparse multiply per step), which
is what the threshold search and the acceptance-range checks lean on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Set, Tuple

from .poly import InputError, SparsePolynomial, _integer_vector, convolve_int


@dataclass
class PowerProfile:
    """Dense exact view of f**m.

    int_coefficients[n] / den_base**m is the exact coefficient of z**n.
    first_negative is the least index with a negative coefficient (None when
    the power is non-negative), negative_indices the full set.
    """

    m: int
    int_coefficients: List[int]
    den_base: int
    first_negative: Optional[int]
    negative_indices: Set[int]

    @property
    def coefficients(self) -> List[Fraction]:
        den = self.den_base ** self.m
        return [Fraction(c, den) for c in self.int_coefficients]

    def coefficient(self, n: int) -> Fraction:
        if n < 0 or n >= len(self.int_coefficients):
            return Fraction(0)
        return Fraction(self.int_coefficients[n], self.den_base ** self.m)


def _scan(vec: Sequence[int]) -> Tuple[Optional[int], Set[int]]:
    negatives = {i for i, c in enumerate(vec) if c < 0}
    return (min(negatives) if negatives else None), negatives


def profile(f: SparsePolynomial, m: int) -> PowerProfile:
    """Exact coefficient profile of f**m with a sign scan."""
    if m < 0:
        raise InputError("power exponent must be non-negative")
    if f.is_zero():
        vec = [1] if m == 0 else [0]
        first, negs = _scan(vec)
        return PowerProfile(m, vec, 1, first, negs)
    base, den = _integer_vector(f)
    if m == 0:
        return PowerProfile(0, [1], den, None, set())
    out: Optional[List[int]] = None
    sq = base
    mm = m
    # binary exponentiation over the cleared-denominator vector
    while mm:
        if mm & 1:
            out = sq if out is None else convolve_int(out, sq)
        mm >>= 1
        if mm:
            sq = convolve_int(sq, sq)
    first, negs = _scan(out)
    return PowerProfile(m, out, den, first, negs)


def iter_profiles(f: SparsePolynomial, m_max: int) -> Iterator[PowerProfile]:
    """Yield profiles for m = 1..m_max incrementally (one multiply per step)."""
    if f.is_zero():
        for m in range(1, m_max + 1):
            yield PowerProfile(m, [0], 1, None, set())
        return
    base, den = _integer_vector(f)
    current = base
    for m in range(1, m_max + 1):
        first, negs = _scan(current)
        yield PowerProfile(m, current, den, first, negs)
        if m < m_max:
            current = convolve_int(current, base)


def threshold_search(f: SparsePolynomial, m_max: int) -> Optional[int]:
    """Least m0 with f**m coefficient-non-negative for every m in [m0, m_max].

    This is a windowed heuristic, not a proof of eventual non-negativity:
    nothing is claimed about m > m_max.  Returns None when even m = m_max
    still carries a negative coefficient.
    """
    if m_max < 1:
        raise InputError("m_max must be >= 1")
    last_negative = 0
    for prof in iter_profiles(f, m_max):
        if prof.first_negative is not None:
            last_negative = prof.m
    return last_negative + 1 if last_negative < m_max else None


def range_check(
    f: SparsePolynomial, m: int, n_lo: int, n_hi: int,
    prof: Optional[PowerProfile] = None,
) -> Tuple[bool, List[int]]:
    """True iff all coefficients of f**m with index in [n_lo, n_hi] are >= 0.

    A precomputed profile for the same (f, m) may be passed to avoid
    re-powering inside scan loops.
    """
    if prof is None:
        prof = profile(f, m)
    top = len(prof.int_coefficients) - 1
    if not (0 <= n_lo <= n_hi <= top):
        raise InputError(f"range [{n_lo}, {n_hi}] outside [0, {top}]")
    violations = [n for n in range(n_lo, n_hi + 1) if prof.int_coefficients[n] < 0]
    return not violations, violations


def sign_profile_rows(f: SparsePolynomial, m_lo: int, m_hi: int) -> Iterator[Tuple[int, int, int]]:
    """(m, n, sign) rows for every coefficient of f**m, m in [m_lo, m_hi]."""
    if m_lo < 0 or m_hi < m_lo:
        raise InputError("need 0 <= m_lo <= m_hi")
    for prof in iter_profiles(f, m_hi):
        if prof.m < m_lo:
            continue
        for n, c in enumerate(prof.int_coefficients):
            yield prof.m, n, (0 if c == 0 else (1 if c > 0 else -1))


def csv_rows(prof: PowerProfile) -> Iterator[Tuple[int, int, int, int, int]]:
    """(m, n, numerator, denominator_exponent, sign) rows; denominator is
    den_base**denominator_exponent."""
    for n, c in enumerate(prof.int_coefficients):
        yield prof.m, n, c, prof.m, (0 if c == 0 else (1 if c > 0 else -1))
