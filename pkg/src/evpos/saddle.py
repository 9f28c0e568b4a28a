"""Saddle-point estimation of power coefficients.

The coefficient of z**n in f**m is the contour integral

    [z^n] f^m = (1/2 pi) \\int_{-pi}^{pi} exp(m h(theta)) d theta,
    h(theta)  = log f(rho e^{i theta}) - alpha log(rho e^{i theta}),

with alpha = n/m.  The radius rho is chosen to kill the phase drift at
theta = 0, i.e. rho f'(rho)/f(rho) = alpha, which concentrates the
integrand in a Gaussian bump of width ~ (m |h''(0)|)^{-1/2}.  Quadrature
panels are split at eta = (k^2 m rho^k)^{-1/3} and theta0 = 1/k (k the
least positive support index), matching the bump/tail/far-field split
whose three pieces the diagnostics report.

Everything here is numeric (mpmath); exact coefficients for comparison
come from the powers module when m * deg(f) is small enough.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import mpmath

from . import powers
from .poly import InputError, SparsePolynomial

EXACT_COMPARISON_LIMIT = 3000  # compute the exact coefficient when m*deg <= this


class SaddleNotFound(RuntimeError):
    """No bracket for rho f'(rho)/f(rho) = alpha below the scan ceiling."""


class PoleError(ZeroDivisionError):
    """h-derivative evaluation hit a zero of f."""


@dataclass
class SaddleEstimate:
    alpha: float
    rho: float
    h0: complex
    h2: complex
    estimate: float
    exact: Optional[Fraction]
    rel_error: Optional[float]
    eta: Optional[float] = None
    theta0: Optional[float] = None
    split: Optional[Tuple[float, float, float]] = None


def _mpf_poly(f: SparsePolynomial):
    terms = [(e, mpmath.mpf(c.numerator) / c.denominator)
             for e, c in sorted(f.terms.items())]

    def ev(z):
        return sum(c * z ** e for e, c in terms)

    def ev1(z):
        return sum(c * e * z ** (e - 1) for e, c in terms if e >= 1)

    def ev2(z):
        return sum(c * e * (e - 1) * z ** (e - 2) for e, c in terms if e >= 2)

    def ev3(z):
        return sum(c * e * (e - 1) * (e - 2) * z ** (e - 3) for e, c in terms if e >= 3)

    return ev, ev1, ev2, ev3


def saddle_radius(f: SparsePolynomial, alpha, rel_tol: float = 1e-12) -> float:
    """Smallest bracketed root of rho f'(rho)/f(rho) = alpha.

    The bracket comes from a geometric scan upward from tiny rho; the first
    sign change wins (the ratio need not be monotone for mixed signs).
    Raises SaddleNotFound when the scan exhausts its ceiling, which defines
    the usable alpha range for this polynomial.
    """
    if f.coefficient(0) <= 0:
        raise InputError("saddle radius requires f(0) > 0")
    alpha = float(alpha)
    if alpha < 0:
        raise InputError("alpha must be non-negative")
    if alpha == 0:
        return 0.0
    ev, ev1, _, _ = _mpf_poly(f)

    def phi(rho):
        fr = ev(rho)
        if fr <= 0:
            return None
        return rho * ev1(rho) / fr - alpha

    lo = mpmath.mpf(2) ** -60
    v_lo = phi(lo)
    if v_lo is None or v_lo > 0:
        raise SaddleNotFound("ratio already above alpha at tiny rho")
    hi = lo
    v_hi = v_lo
    while hi < mpmath.mpf(2) ** 60:
        nxt = hi * 2
        v = phi(nxt)
        if v is None:
            break  # f turned non-positive: bracket must appear before this
        hi, v_hi = nxt, v
        if v_hi >= 0:
            break
        lo, v_lo = nxt, v
    if v_hi < 0:
        raise SaddleNotFound(f"no bracket for alpha={alpha}")
    for _ in range(200):
        mid = (lo + hi) / 2
        v = phi(mid)
        if v is None or v >= 0:
            hi = mid
        else:
            lo = mid
        if (hi - lo) < rel_tol * hi:
            break
    return float((lo + hi) / 2)


def h_derivatives(f: SparsePolynomial, rho, theta, alpha=0) -> Tuple[complex, complex, complex, complex]:
    """(h, h', h'', h''') of h(theta) = log f(rho e^{i theta}) - alpha log(rho e^{i theta}).

    h'  = i (z f'/f - alpha)
    h'' = -(z f'/f + z^2 f''/f - (z f'/f)^2)
    h'''= -i (z f'/f + 3 z^2 f''/f + z^3 f'''/f - 3 (zf'/f)^2
              - 3 (zf'/f)(z^2 f''/f) + 2 (zf'/f)^3)

    Only h and h' depend on alpha.  Raises PoleError at zeros of f.
    """
    ev, ev1, ev2, ev3 = _mpf_poly(f)
    rho = mpmath.mpf(rho)
    theta = mpmath.mpf(theta)
    alpha = mpmath.mpf(float(alpha))
    z = rho * mpmath.e ** (1j * theta)
    fz = ev(z)
    if fz == 0:
        raise PoleError(f"f vanishes at z = {z}")
    A = z * ev1(z) / fz
    B = z * z * ev2(z) / fz
    C = z * z * z * ev3(z) / fz
    h = mpmath.log(fz) - alpha * (mpmath.log(rho) + 1j * theta)
    h1 = 1j * (A - alpha)
    h2 = -(A + B - A * A)
    h3 = -1j * (A + 3 * B + C - 3 * A * A - 3 * A * B + 2 * A ** 3)
    return h, h1, h2, h3


def _h_func(f: SparsePolynomial, rho, alpha):
    """exp-ready h(theta) with the alpha log z term included (integer powers
    make the branch of log f immaterial inside exp(m h))."""
    ev, _, _, _ = _mpf_poly(f)
    rho = mpmath.mpf(rho)
    alpha = mpmath.mpf(alpha)

    def h(theta):
        z = rho * mpmath.e ** (1j * theta)
        return mpmath.log(ev(z)) - alpha * (mpmath.log(rho) + 1j * theta)

    return h


def _split_points(f: SparsePolynomial, rho, m) -> Tuple[float, float]:
    k = min(e for e in f.terms if e >= 1)
    eta = float((k * k * m * mpmath.mpf(rho) ** k) ** (-1.0 / 3))
    theta0 = 1.0 / k
    return eta, theta0


def estimate_coefficient(f: SparsePolynomial, n: int, m: int,
                         with_split: bool = False, dps: int = 30) -> SaddleEstimate:
    """Numeric [z^n] f^m via saddle-point quadrature, with the exact value
    attached whenever m * deg(f) <= EXACT_COMPARISON_LIMIT."""
    if f.is_zero() or f.coefficient(0) <= 0 or f.terms[f.degree] <= 0:
        raise InputError("estimate requires positive constant and leading coefficients")
    if m < 1 or n < 0 or n > m * f.degree:
        raise InputError("need m >= 1 and 0 <= n <= m deg f")
    a0 = f.coefficient(0)
    if n == 0:
        exact = a0 ** m
        val = float(exact)
        return SaddleEstimate(alpha=0.0, rho=0.0, h0=complex(math.log(float(a0))), h2=0j,
                              estimate=val, exact=exact, rel_error=0.0)
    with mpmath.workdps(dps):
        alpha = Fraction(n, m)
        rho = saddle_radius(f, float(alpha))
        h = _h_func(f, rho, alpha)
        h0 = h(mpmath.mpf(0))
        _, _, h2, _ = h_derivatives(f, rho, 0.0)
        eta, theta0 = _split_points(f, rho, m)  # theta0 = 1/k <= 1 < pi
        eta = min(eta, theta0)

        def integrand(theta):
            return mpmath.e ** (m * (h(theta) - h0))

        points = sorted({0.0, eta, theta0, math.pi})
        total = mpmath.quad(integrand, points)
        # conjugate symmetry: full integral is 2 Re of the (0, pi) half
        integral = 2 * mpmath.re(total)
        scale = mpmath.e ** (m * h0)
        estimate_mp = scale * integral / (2 * mpmath.pi)
        estimate = float(estimate_mp)
        exact: Optional[Fraction] = None
        rel: Optional[float] = None
        if m * f.degree <= EXACT_COMPARISON_LIMIT:
            exact = powers.profile(f, m).coefficient(n)
            if exact != 0:
                rel = float(abs(estimate_mp - mpmath.mpf(exact.numerator) / exact.denominator)
                            / abs(mpmath.mpf(exact.numerator) / exact.denominator))
        split = None
        if with_split:
            split = _integral_split_values(f, rho, alpha, m, eta, theta0, h, h0)
        return SaddleEstimate(
            alpha=float(alpha), rho=float(rho), h0=complex(h0), h2=complex(h2),
            estimate=estimate, exact=exact, rel_error=rel,
            eta=eta, theta0=theta0, split=split,
        )


def _integral_split_values(f, rho, alpha, m, eta, theta0, h, h0):
    def integrand(theta):
        return mpmath.e ** (m * (h(theta) - h0))

    scale = mpmath.e ** (m * h0)
    i1 = 2 * mpmath.re(mpmath.quad(integrand, [0, eta]))
    i2 = 2 * mpmath.re(mpmath.quad(integrand, [eta, theta0])) if theta0 > eta else mpmath.mpf(0)
    i3 = 2 * mpmath.re(mpmath.quad(integrand, [theta0, mpmath.pi])) if theta0 < math.pi else mpmath.mpf(0)
    return (float(scale * i1), float(scale * i2), float(scale * i3))


def integral_split(f: SparsePolynomial, n: int, m: int, dps: int = 30) -> Tuple[float, float, float]:
    """(I1, I2, I3): the bump, shoulder and far-field pieces of the contour
    integral (each real by conjugate symmetry; their sum is
    2 pi [z^n] f^m)."""
    est = estimate_coefficient(f, n, m, with_split=True, dps=dps)
    if est.split is None:
        raise InputError("split unavailable for the degenerate alpha = 0 case")
    return est.split
