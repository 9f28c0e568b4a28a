"""Exact sparse univariate polynomial arithmetic over the rationals.

A polynomial is stored as a mapping from exponent to a nonzero
``fractions.Fraction`` coefficient.  The zero polynomial is the empty
mapping and has undefined degree.  All ring operations are exact; no
floating point enters the arithmetic path.  Complex evaluation is done
separately at a configurable binary precision via mpmath, with a
conservative rounding-error bound reported alongside the value.

Powering densifies the coefficients into an integer vector (one common
denominator is cleared up front) and uses binary exponentiation.  Large
dense convolutions go through Kronecker substitution, which rides on
CPython's big-integer multiplication; small ones use schoolbook.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import mpmath

RationalLike = Union[int, str, Fraction]


class InputError(ValueError):
    """Raised when an operation receives an argument outside its domain."""


def _to_fraction(value) -> Fraction:
    if isinstance(value, float):
        raise InputError(
            "float coefficients are not accepted (inexact); pass a Fraction, "
            "int, or a string such as '0.01' or '1/100'"
        )
    return Fraction(value)


class SparsePolynomial:
    """Immutable sparse polynomial with exact rational coefficients.

    Instances behave as values: they hash, compare by coefficient equality
    and support +, -, *, ** with other polynomials / integers.  The terms
    mapping never stores a zero coefficient.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, RationalLike] | Iterable[Tuple[int, RationalLike]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: Dict[int, Fraction] = {}
        for exponent, coeff in items:
            if exponent < 0:
                raise InputError(f"negative exponent {exponent}")
            c = _to_fraction(coeff)
            if c == 0:
                continue
            s = acc.get(exponent, Fraction(0)) + c
            if s == 0:
                acc.pop(exponent, None)
            else:
                acc[exponent] = s
        self._terms = acc
        self._hash: Optional[int] = None

    # -- construction -------------------------------------------------

    @classmethod
    def from_term_list(cls, terms: Iterable[Tuple[int, RationalLike]]) -> "SparsePolynomial":
        """Build from (exponent, coefficient) pairs; duplicates are summed."""
        return cls(list(terms))

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[RationalLike]) -> "SparsePolynomial":
        """Build from a dense ascending coefficient list."""
        return cls(list(enumerate(coeffs)))

    @classmethod
    def constant(cls, value: RationalLike) -> "SparsePolynomial":
        return cls([(0, value)])

    @classmethod
    def zero(cls) -> "SparsePolynomial":
        return cls()

    @classmethod
    def one(cls) -> "SparsePolynomial":
        return cls([(0, 1)])

    # -- basic queries -------------------------------------------------

    @property
    def terms(self) -> Dict[int, Fraction]:
        """The exponent -> coefficient mapping (treat as read-only)."""
        return self._terms

    @property
    def degree(self) -> Optional[int]:
        """Largest stored exponent, or None for the zero polynomial."""
        return max(self._terms) if self._terms else None

    @property
    def order(self) -> Optional[int]:
        """Smallest stored exponent, or None for the zero polynomial."""
        return min(self._terms) if self._terms else None

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(e == 0 for e in self._terms)

    def coefficient(self, exponent: int) -> Fraction:
        return self._terms.get(exponent, Fraction(0))

    def support(self) -> frozenset:
        return frozenset(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return "SparsePolynomial(0)"
        body = " + ".join(f"({c})z^{e}" for e, c in sorted(self._terms.items()))
        return f"SparsePolynomial({body})"

    # -- ring operations -----------------------------------------------

    def __add__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        acc = dict(self._terms)
        for e, c in other._terms.items():
            s = acc.get(e, Fraction(0)) + c
            if s == 0:
                acc.pop(e, None)
            else:
                acc[e] = s
        return _raw(acc)

    def __neg__(self) -> "SparsePolynomial":
        return _raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        return self + (-other)

    def __mul__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return multiply(self, other)

    def __pow__(self, m: int) -> "SparsePolynomial":
        return poly_pow(self, m)

    def scale(self, factor: RationalLike) -> "SparsePolynomial":
        c = _to_fraction(factor)
        if c == 0:
            return SparsePolynomial.zero()
        return _raw({e: k * c for e, k in self._terms.items()})

    def derivative(self) -> "SparsePolynomial":
        return _raw({e - 1: c * e for e, c in self._terms.items() if e >= 1})


def _raw(terms: Dict[int, Fraction]) -> SparsePolynomial:
    """Wrap an already-canonical mapping without re-validating."""
    p = SparsePolynomial.__new__(SparsePolynomial)
    p._terms = terms
    p._hash = None
    return p


# ---------------------------------------------------------------------------
# Multiplication and powering
# ---------------------------------------------------------------------------

_KRONECKER_CUTOFF = 64  # schoolbook below this many term-pairs products


def multiply(a: SparsePolynomial, b: SparsePolynomial) -> SparsePolynomial:
    """Exact convolution product."""
    if a.is_zero() or b.is_zero():
        return SparsePolynomial.zero()
    if len(a.terms) * len(b.terms) <= _KRONECKER_CUTOFF * _KRONECKER_CUTOFF:
        acc: Dict[int, Fraction] = {}
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                e = ea + eb
                s = acc.get(e, Fraction(0)) + ca * cb
                if s == 0:
                    acc.pop(e, None)
                else:
                    acc[e] = s
        return _raw(acc)
    va, da = _integer_vector(a)
    vb, db = _integer_vector(b)
    vc = convolve_int(va, vb)
    den = da * db
    return _raw({e: Fraction(n, den) for e, n in enumerate(vc) if n})


def _integer_vector(f: SparsePolynomial) -> Tuple[List[int], int]:
    """Dense integer coefficients plus the cleared common denominator."""
    if f.is_zero():
        return [], 1
    den = 1
    for c in f.terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    vec = [0] * (f.degree + 1)
    for e, c in f.terms.items():
        vec[e] = int(c * den)
    return vec, den


def convolve_int(u: List[int], v: List[int]) -> List[int]:
    """Exact integer convolution (schoolbook or Kronecker substitution)."""
    if not u or not v:
        return []
    if len(u) * len(v) <= _KRONECKER_CUTOFF * _KRONECKER_CUTOFF:
        out = [0] * (len(u) + len(v) - 1)
        for i, x in enumerate(u):
            if not x:
                continue
            for j, y in enumerate(v):
                if y:
                    out[i + j] += x * y
        return out
    return _kronecker(u, v)


def _kronecker(u: List[int], v: List[int]) -> List[int]:
    # Pack non-negative halves into big integers so CPython's big-int
    # multiplication performs the convolution.  Signed inputs are split
    # as u = up - un, v = vp - vn.
    up = [x if x > 0 else 0 for x in u]
    un = [-x if x < 0 else 0 for x in u]
    vp = [x if x > 0 else 0 for x in v]
    vn = [-x if x < 0 else 0 for x in v]
    mu = max(max(up, default=0), max(un, default=0))
    mv = max(max(vp, default=0), max(vn, default=0))
    # bits needed per packed digit: product terms sum to < len * mu * mv
    nmin = min(len(u), len(v))
    bound = mu * mv * nmin + 1
    shift = max(bound.bit_length(), 1)
    pp = _kron_nonneg(up, vp, shift)
    nn = _kron_nonneg(un, vn, shift)
    pn = _kron_nonneg(up, vn, shift)
    np_ = _kron_nonneg(un, vp, shift)
    n_out = len(u) + len(v) - 1
    out = []
    for i in range(n_out):
        a = pp[i] if i < len(pp) else 0
        b = nn[i] if i < len(nn) else 0
        c = pn[i] if i < len(pn) else 0
        d = np_[i] if i < len(np_) else 0
        out.append(a + b - c - d)
    return out


def _kron_nonneg(u: List[int], v: List[int], shift: int) -> List[int]:
    if not any(u) or not any(v):
        return [0] * max(len(u) + len(v) - 1, 0)
    X = sum(x << (shift * i) for i, x in enumerate(u))
    Y = sum(y << (shift * i) for i, y in enumerate(v))
    Z = X * Y
    mask = (1 << shift) - 1
    out = []
    for _ in range(len(u) + len(v) - 1):
        out.append(Z & mask)
        Z >>= shift
    return out


def poly_pow(f: SparsePolynomial, m: int) -> SparsePolynomial:
    """Exact f**m by binary exponentiation; f**0 == 1."""
    if m < 0:
        raise InputError("negative exponent in poly_pow")
    if m == 0:
        return SparsePolynomial.one()
    if m == 1:
        return f
    if f.is_zero():
        return SparsePolynomial.zero()
    vec, den = _integer_vector(f)
    out_vec, out_den_pow = _pow_int_vector(vec, m)
    den_m = den ** out_den_pow
    return _raw({e: Fraction(n, den_m) for e, n in enumerate(out_vec) if n})


def _pow_int_vector(vec: List[int], m: int) -> Tuple[List[int], int]:
    """Square-and-multiply on integer coefficient vectors.

    Returns (vector of f_int**m, m) where the caller re-applies the cleared
    denominator as den**m.
    """
    result: Optional[List[int]] = None
    base = vec
    mm = m
    while mm:
        if mm & 1:
            result = base if result is None else convolve_int(result, base)
        mm >>= 1
        if mm:
            base = convolve_int(base, base)
    assert result is not None
    return result, m


# ---------------------------------------------------------------------------
# Structure operations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SupportProfile:
    """Sign-partitioned support: exponents of positive / negative coefficients."""

    s_plus: frozenset
    s_minus: frozenset

    @property
    def s_all(self) -> frozenset:
        return self.s_plus | self.s_minus


@dataclass(frozen=True)
class PrimitiveDecomposition:
    """f = z**shift_k * core_g(z**stride_l) with stride_l maximal.

    core_g has a nonzero constant term and is not itself of the form
    h(z**l') for any l' >= 2.
    """

    shift_k: int
    stride_l: int
    core_g: SparsePolynomial

    def reconstruct(self) -> SparsePolynomial:
        return _raw({self.shift_k + self.stride_l * e: c
                     for e, c in self.core_g.terms.items()})


def support_profile(f: SparsePolynomial) -> SupportProfile:
    plus = frozenset(e for e, c in f.terms.items() if c > 0)
    minus = frozenset(e for e, c in f.terms.items() if c < 0)
    return SupportProfile(plus, minus)


def reverse(f: SparsePolynomial) -> SparsePolynomial:
    """Coefficient sequence reversed about the degree: z**d * f(1/z)."""
    if f.is_zero():
        raise InputError("reverse of the zero polynomial is undefined")
    d = f.degree
    return _raw({d - e: c for e, c in f.terms.items()})


def primitive_decompose(f: SparsePolynomial) -> PrimitiveDecomposition:
    """Extract the maximal monomial shift and support stride.

    shift_k is the least exponent in the support and stride_l is the gcd
    of the support differences, so the core has constant term != 0 and
    support of gcd 1.
    """
    if f.is_zero() or f.is_constant():
        raise InputError("primitive decomposition needs a non-constant polynomial")
    k = f.order
    stride = 0
    for e in f.terms:
        stride = math.gcd(stride, e - k)
    # non-constant input guarantees some positive difference
    core = _raw({(e - k) // stride: c for e, c in f.terms.items()})
    return PrimitiveDecomposition(shift_k=k, stride_l=stride, core_g=core)


def scale_variable(f: SparsePolynomial, lam: RationalLike) -> SparsePolynomial:
    """Substitute z -> lam*z: the z**j coefficient picks up lam**j."""
    lam = _to_fraction(lam)
    if lam <= 0:
        raise InputError("scale_variable requires a positive rational factor")
    return _raw({e: c * lam ** e for e, c in f.terms.items()})


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def evaluate_exact(f: SparsePolynomial, x: RationalLike) -> Fraction:
    """Exact rational evaluation at a rational point."""
    x = _to_fraction(x)
    acc = Fraction(0)
    # sparse Horner over descending exponents
    prev: Optional[int] = None
    for e in sorted(f.terms, reverse=True):
        if prev is None:
            acc = f.terms[e]
        else:
            acc = acc * x ** (prev - e) + f.terms[e]
        prev = e
    if prev is not None and prev > 0:
        acc = acc * x ** prev
    return acc


def evaluate_gaussian(f: SparsePolynomial, x: RationalLike, y: RationalLike) -> Tuple[Fraction, Fraction]:
    """Exact evaluation at z = x + i*y with rational x, y.

    Returns (real, imaginary) parts as Fractions.  This is the backbone of
    the exact witness verification in the strong-positivity module.
    """
    x = _to_fraction(x)
    y = _to_fraction(y)
    d = f.degree
    if d is None:
        return Fraction(0), Fraction(0)
    re, im = Fraction(0), Fraction(0)
    for e in range(d, -1, -1):
        re, im = re * x - im * y, re * y + im * x
        c = f.terms.get(e)
        if c is not None:
            re += c
    return re, im


def evaluate(f: SparsePolynomial, point: complex, prec_bits: int = 64) -> mpmath.mpc:
    """Horner evaluation at a complex point with prec_bits working precision."""
    value, _ = evaluate_with_error(f, point, prec_bits)
    return value


def evaluate_with_error(
    f: SparsePolynomial, point: complex, prec_bits: int = 64
) -> Tuple[mpmath.mpc, mpmath.mpf]:
    """Evaluate and return (value, rigorous-ish rounding error bound).

    The bound is the standard Horner running-error estimate: with unit
    roundoff u = 2**(1-prec) each of the ~2*nops rounding steps contributes
    at most u times the accumulated absolute value.
    """
    with mpmath.workprec(prec_bits):
        z = mpmath.mpc(point)
        if f.is_zero():
            return mpmath.mpc(0), mpmath.mpf(0)
        d = f.degree
        acc = mpmath.mpc(0)
        absacc = mpmath.mpf(0)
        az = abs(z)
        exps = sorted(f.terms, reverse=True)
        prev = None
        for e in exps:
            c = f.terms[e]
            cm = mpmath.mpc(mpmath.mpf(c.numerator) / c.denominator)
            if prev is None:
                acc = cm
                absacc = abs(cm)
            else:
                step = az ** (prev - e)
                acc = acc * z ** (prev - e) + cm
                absacc = absacc * step + abs(cm)
            prev = e
        if prev is not None and prev > 0:
            acc = acc * z ** prev
            absacc = absacc * az ** prev
        nops = 2 * (len(exps) + (d or 0))
        u = mpmath.mpf(2) ** (1 - prec_bits)
        bound = absacc * u * nops
        return acc, bound
