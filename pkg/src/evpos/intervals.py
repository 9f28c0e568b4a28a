"""Exact rational interval arithmetic for box certification.

Endpoints are Fractions, so every enclosure here is exact: there is no
rounding to control, outward or otherwise.  Box subdivision bisects at
exact midpoints, which keeps denominators dyadic multiples of the initial
cell endpoints.  Polynomial ranges are enclosed with interval Horner.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "Interval":
        x = Fraction(x)
        return cls(x, x)

    @classmethod
    def of(cls, a, b) -> "Interval":
        return cls(Fraction(a), Fraction(b))

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __mul__(self, other: "Interval") -> "Interval":
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(min(products), max(products))

    def scale(self, c: Fraction) -> "Interval":
        if c >= 0:
            return Interval(self.lo * c, self.hi * c)
        return Interval(self.hi * c, self.lo * c)

    def shift(self, c: Fraction) -> "Interval":
        return Interval(self.lo + c, self.hi + c)

    def power(self, n: int) -> "Interval":
        """Tight enclosure of x**n over the interval."""
        if n == 0:
            return Interval.point(1)
        if n == 1:
            return self
        lo_p, hi_p = self.lo ** n, self.hi ** n
        if n % 2 == 1:
            return Interval(lo_p, hi_p)
        if self.lo >= 0:
            return Interval(lo_p, hi_p)
        if self.hi <= 0:
            return Interval(hi_p, lo_p)
        return Interval(Fraction(0), max(lo_p, hi_p))

    def halves(self) -> Tuple["Interval", "Interval"]:
        m = self.mid
        return Interval(self.lo, m), Interval(m, self.hi)

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def subset_of(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi


def eval_poly(coeffs: Sequence[Fraction], x: Interval) -> Interval:
    """Interval Horner for a dense ascending coefficient list."""
    acc = Interval.point(0)
    for c in reversed(coeffs):
        acc = acc * x
        acc = acc.shift(c)
    return acc


def eval_bivariate(levels: Sequence[Tuple[int, Sequence[Fraction]]],
                   r: Interval, t: Interval) -> Interval:
    """Enclose sum_i r**i * q_i(t) for r >= 0.

    levels holds (i, coefficients of q_i).  Powers of r are monotone on a
    non-negative interval, so each r**i enclosure is exact.
    """
    total = Interval.point(0)
    r_pows: dict = {}
    for i, coeffs in levels:
        if i not in r_pows:
            r_pows[i] = r.power(i)
        total = total + (eval_poly(coeffs, t) * r_pows[i])
    return total


@dataclass(frozen=True)
class Box:
    r: Interval
    t: Interval
    depth: int = 0

    def split(self) -> Tuple["Box", "Box"]:
        # normalize widths: t spans 2 units where r spans 1
        if self.r.width * 2 >= self.t.width:
            a, b = self.r.halves()
            return Box(a, self.t, self.depth + 1), Box(b, self.t, self.depth + 1)
        a, b = self.t.halves()
        return Box(self.r, a, self.depth + 1), Box(self.r, b, self.depth + 1)
