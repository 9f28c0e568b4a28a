"""Strong positivity: refutation search and box certification.

A nonzero polynomial is strongly positive when f(|z|) > |f(z)| for every
complex z off the non-negative real axis.  Writing z = r e^{i theta}, the
squared gap

    G(r, theta) = f(r)^2 - |f(r e^{i theta})|^2
                = sum_j r^j sum_{p+q=j} a_p a_q (1 - cos((p-q) theta))

is a polynomial in r and t = cos(theta) after the Chebyshev substitution
cos(k theta) = T_k(t).  Strong positivity (given a positive constant
coefficient) is equivalent to G > 0 on r in (0, oo), t in [-1, 1).

The certifier is a sound semi-decider:

  * radii above 1 are folded into the unit box through the reversal
    identity G_f(1/r, theta) * r^(2 deg f) = G_rev(f)(r, theta);
  * the forced zeros along t = 1 and r = 0 are divided out:
    H = G / (r^j0 (1 - t)) with j0 the least r-level, which is exact
    because every level polynomial vanishes at t = 1;
  * H is proved positive on [0,1] x [-1,1] by branch-and-bound with exact
    rational interval arithmetic;
  * the residual zeros of H at (r=0, t=cos(2 pi j / j0)) are discharged
    analytically on small strips by splitting the gap into phase-aligned
    and phase-misaligned pair sums and bounding each with explicit
    rational constants (see _strip_certificate).

Refutation witnesses are verified exactly: at a Gaussian-rational point
z = x + iy the sign of f(|z|)^2 - |f(z)|^2 and the sign of f(|z|) are
decided in pure rational arithmetic (|z| enters only through |z|^2).
Certified is never returned on the strength of floating point alone.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Set, Tuple

import mpmath
import numpy as np

from .intervals import Box, Interval, eval_bivariate, eval_poly
from .poly import (
    InputError,
    SparsePolynomial,
    evaluate_gaussian,
    primitive_decompose,
    reverse,
    support_profile,
)

CERTIFIED = "Certified"
REFUTED = "Refuted"
INCONCLUSIVE = "Inconclusive"

DEFAULT_DEPTH_BUDGET = 24
DEFAULT_REFUTE_BUDGET = 100_000

_RAT_DENOM = 1 << 24  # denominator used when snapping float candidates to Q(i)


class NonPrimitiveError(InputError):
    """Phase-set computation received a polynomial of the form g(z**l)."""


# ---------------------------------------------------------------------------
# Chebyshev machinery and the gap expansion
# ---------------------------------------------------------------------------

_CHEB_CACHE: Dict[int, Tuple[int, ...]] = {0: (1,), 1: (0, 1)}


def chebyshev_coefficients(n: int) -> Tuple[int, ...]:
    """Coefficients of T_n (ascending), via the three-term recurrence."""
    if n not in _CHEB_CACHE:
        top = max(_CHEB_CACHE)
        for k in range(top + 1, n + 1):
            a = _CHEB_CACHE[k - 1]
            b = _CHEB_CACHE[k - 2]
            two_t_a = (0,) + tuple(2 * c for c in a)
            ext_b = b + (0,) * (len(two_t_a) - len(b))
            _CHEB_CACHE[k] = tuple(x - y for x, y in zip(two_t_a, ext_b))
    return _CHEB_CACHE[n]


def _one_minus_cheb(n: int) -> Tuple[Fraction, ...]:
    """1 - T_n(t) as exact ascending coefficients."""
    tn = chebyshev_coefficients(n)
    out = [Fraction(-c) for c in tn]
    out[0] += 1
    return tuple(out)


def divide_by_one_minus_t(coeffs: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Exact division P(t) / (1 - t); requires P(1) == 0."""
    # P = (t - 1) S + P(1); synthetic division at the root 1, then negate.
    n = len(coeffs) - 1
    s = [Fraction(0)] * max(n, 0)
    carry = Fraction(0)
    for k in range(n - 1, -1, -1):
        carry = coeffs[k + 1] + carry
        s[k] = carry
    remainder = coeffs[0] + s[0] if n >= 1 else coeffs[0]
    if remainder != 0:
        raise InputError("polynomial is not divisible by (1 - t)")
    return tuple(-c for c in s)


@dataclass(frozen=True)
class GapExpansion:
    """Levelled expansion of f(r)^2 - |f(r e^{i theta})|^2.

    pair_products[j] lists ((p, q), a_p * a_q) over unordered support pairs
    p < q with p + q = j (equal pairs drop out since 1 - cos(0) = 0); the
    stored product is the plain a_p * a_q, the ordered-pair double counting
    is restored by the weight 2 in the level polynomials.

    chebyshev_form[j] is sum over those pairs of 2 a_p a_q (1 - T_{q-p}(t)),
    an exact polynomial in t = cos(theta), always divisible by (1 - t).
    """

    pair_products: Dict[int, Tuple[Tuple[Tuple[int, int], Fraction], ...]]
    chebyshev_form: Dict[int, Tuple[Fraction, ...]]

    def levels(self) -> List[int]:
        return sorted(self.chebyshev_form)

    def evaluate_trig(self, r, theta) -> mpmath.mpf:
        """Evaluate the trigonometric form numerically (test oracle hook)."""
        total = mpmath.mpf(0)
        r = mpmath.mpf(r)
        theta = mpmath.mpf(theta)
        for j, pairs in self.pair_products.items():
            inner = mpmath.mpf(0)
            for (p, q), prod in pairs:
                inner += 2 * mpmath.mpf(prod.numerator) / prod.denominator \
                    * (1 - mpmath.cos((q - p) * theta))
            total += r ** j * inner
        return total


def gap_expansion(f: SparsePolynomial) -> GapExpansion:
    exps = sorted(f.terms)
    pair_products: Dict[int, List[Tuple[Tuple[int, int], Fraction]]] = {}
    cheb: Dict[int, List[Fraction]] = {}
    for ii, p in enumerate(exps):
        for q in exps[ii + 1:]:
            j = p + q
            prod = f.terms[p] * f.terms[q]
            pair_products.setdefault(j, []).append(((p, q), prod))
            form = _one_minus_cheb(q - p)
            acc = cheb.setdefault(j, [Fraction(0)] * len(form))
            if len(acc) < len(form):
                acc.extend([Fraction(0)] * (len(form) - len(acc)))
            for idx, c in enumerate(form):
                acc[idx] += 2 * prod * c
    return GapExpansion(
        pair_products={j: tuple(v) for j, v in sorted(pair_products.items())},
        chebyshev_form={j: tuple(v) for j, v in sorted(cheb.items())},
    )


def gap_value(f: SparsePolynomial, r, theta, prec_bits: int = 80) -> mpmath.mpf:
    """Direct numeric f(r)^2 - |f(r e^{i theta})|^2 (independent of the
    expansion; used as its cross-check)."""
    with mpmath.workprec(prec_bits):
        r = mpmath.mpf(r)
        theta = mpmath.mpf(theta)
        fr = mpmath.mpf(0)
        fz = mpmath.mpc(0)
        z = r * mpmath.e ** (1j * theta)
        for e in sorted(f.terms, reverse=True):
            c = f.terms[e]
            cm = mpmath.mpf(c.numerator) / c.denominator
            fr = fr * 1 + cm * r ** e
            fz = fz + cm * z ** e
        return fr ** 2 - abs(fz) ** 2


# ---------------------------------------------------------------------------
# Phase sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhaseSets:
    """Support split at phase phi: indices j with e^{ij phi} != 1 (t_set)
    versus == 1 (t_star_set), with their minima."""

    t_set: frozenset
    t_star_set: frozenset
    t0: Optional[int]
    t_star: Optional[int]


def phase_sets(f: SparsePolynomial, phi: Fraction) -> PhaseSets:
    """Split the support of f at phi = 2*pi*(p/q).

    Membership is exact: e^{2 pi i j p / q} == 1 iff q divides j (p/q in
    lowest terms).  Raises NonPrimitiveError when every support index lands
    in the aligned class, which happens exactly when f = g(z**l).
    """
    phi = Fraction(phi)
    q = phi.denominator
    t_set = set()
    t_star = set()
    for j in f.terms:
        if j == 0:
            continue
        (t_star if j % q == 0 else t_set).add(j)
    if not t_set:
        raise NonPrimitiveError(
            "no misaligned support index: polynomial has the form g(z**l)"
        )
    return PhaseSets(
        t_set=frozenset(t_set),
        t_star_set=frozenset(t_star),
        t0=min(t_set),
        t_star=min(t_star) if t_star else None,
    )


# ---------------------------------------------------------------------------
# Exact witness verification over Q(i)
# ---------------------------------------------------------------------------


def sign_a_plus_b_sqrt(a: Fraction, b: Fraction, s: Fraction) -> int:
    """Exact sign of a + b*sqrt(s) for rational a, b and s >= 0."""
    if s < 0:
        raise InputError("s must be non-negative")
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0) if s > 0 else 0
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    lhs = a * a
    rhs = b * b * s
    if lhs == rhs:
        return 0
    if a > 0:  # b < 0: positive iff a^2 > b^2 s
        return 1 if lhs > rhs else -1
    return -1 if lhs > rhs else 1  # a < 0 < b


def _f_at_abs_parts(f: SparsePolynomial, s: Fraction) -> Tuple[Fraction, Fraction]:
    """f(sqrt(s)) written as u + v*sqrt(s) with rational u, v."""
    u = Fraction(0)
    v = Fraction(0)
    for e, c in f.terms.items():
        if e % 2 == 0:
            u += c * s ** (e // 2)
        else:
            v += c * s ** ((e - 1) // 2)
    return u, v


@dataclass(frozen=True)
class Witness:
    """A verified strong-positivity violation at z = x + i y (exact rationals).

    kind is "strict" (f(|z|) < |f(z)|) or "equality" (f(|z|) = |f(z)| with z
    off the axis, which already refutes the strict inequality).
    """

    x: Fraction
    y: Fraction
    kind: str
    f_at_abs: float
    abs_f_at_z: float
    note: str = ""

    def as_complex(self) -> complex:
        return complex(self.x) + 1j * complex(self.y)


def verify_witness(f: SparsePolynomial, x: Fraction, y: Fraction) -> Optional[str]:
    """Exact classification of the point z = x + iy.

    Returns "strict" when f(|z|) < |f(z)|, "equality" when f(|z|) = |f(z)|,
    None when the point does not violate strong positivity.  The point must
    lie off the non-negative real axis.
    """
    x, y = Fraction(x), Fraction(y)
    if y == 0 and x >= 0:
        raise InputError("witness must lie off the non-negative real axis")
    s = x * x + y * y
    if s == 0:
        raise InputError("witness must be nonzero")
    re, im = evaluate_gaussian(f, x, y)
    mod2 = re * re + im * im  # |f(z)|^2, exact
    u, v = _f_at_abs_parts(f, s)  # f(|z|) = u + v sqrt(s)
    sign_f_abs = sign_a_plus_b_sqrt(u, v, s)
    if sign_f_abs < 0:
        return "strict"  # f(|z|) < 0 <= |f(z)|
    # compare f(|z|)^2 = (u^2 + v^2 s) + (2uv) sqrt(s) against mod2
    diff_sign = sign_a_plus_b_sqrt(u * u + v * v * s - mod2, 2 * u * v, s)
    if diff_sign < 0:
        return "strict"
    if diff_sign == 0:
        if sign_f_abs == 0:
            return "equality"  # both zero
        return "equality"
    return None


def _make_witness(f: SparsePolynomial, x: Fraction, y: Fraction, kind: str,
                  note: str = "") -> Witness:
    s = float(x * x + y * y)
    rad = math.sqrt(s)
    fr = _float_eval_real(f, rad)
    re, im = evaluate_gaussian(f, x, y)
    return Witness(x=x, y=y, kind=kind, f_at_abs=fr,
                   abs_f_at_z=math.sqrt(float(re * re + im * im)), note=note)


def _float_eval_real(f: SparsePolynomial, r: float) -> float:
    return sum(float(c) * r ** e for e, c in f.terms.items())


# ---------------------------------------------------------------------------
# Refutation search
# ---------------------------------------------------------------------------


def _float_coeff_arrays(f: SparsePolynomial) -> Tuple[np.ndarray, np.ndarray]:
    exps = np.array(sorted(f.terms), dtype=np.int64)
    coeffs = np.array([float(f.terms[int(e)]) for e in exps])
    return exps, coeffs


def _gap_grid(f: SparsePolynomial, rs: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """gap(r, theta) on the grid, vectorized in float."""
    exps, coeffs = _float_coeff_arrays(f)
    r_pow = rs[:, None] ** exps[None, :]              # (nr, nterms)
    fr = r_pow @ coeffs                               # (nr,)
    phase = np.exp(1j * thetas[None, :] * exps[:, None])  # (nterms, ntheta)
    fz = (r_pow[:, :, None] * (coeffs[:, None] * phase)[None, :, :]).sum(axis=1)
    return fr[:, None] ** 2 - np.abs(fz) ** 2


def _snap(value: float, denom: int = _RAT_DENOM) -> Fraction:
    return Fraction(round(value * denom), denom)


def _try_exact(f: SparsePolynomial, x: Fraction, y: Fraction) -> Optional[Witness]:
    if y == 0 and x >= 0:
        return None
    if x == 0 and y == 0:
        return None
    kind = verify_witness(f, x, y)
    if kind is None:
        return None
    return _make_witness(f, x, y, kind)


def _special_candidates(f: SparsePolynomial) -> List[Tuple[Fraction, Fraction]]:
    radii = [Fraction(1, 16), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4),
             Fraction(1), Fraction(3, 2), Fraction(2), Fraction(4), Fraction(16)]
    pts = []
    for r in radii:
        pts.append((-r, Fraction(0)))   # theta = pi
        pts.append((Fraction(0), r))    # theta = pi/2
    return pts


def refute(
    f: SparsePolynomial,
    budget: int = DEFAULT_REFUTE_BUDGET,
    rng: Optional[np.random.Generator] = None,
) -> Optional[Witness]:
    """Search for an exactly-verified violation of f(|z|) > |f(z)|.

    Structural equalities (f = g(z**l), l >= 2) are reported without any
    numerics.  Otherwise a float grid over (0, 1] x (0, pi] is scanned for
    f and for its reverse (which covers radii >= 1), candidate minima are
    refined locally, snapped to Gaussian rationals and verified exactly.
    Absence of a witness is a normal outcome and returns None.
    """
    if f.is_zero():
        raise InputError("refute needs a nonzero polynomial")
    if f.is_constant():
        c = f.coefficient(0)
        # f(|z|) = |f(z)| everywhere: equality refutation at z = -1
        kind = "equality" if c > 0 else ("strict" if c < 0 else None)
        return _make_witness(f, Fraction(-1), Fraction(0), kind,
                             note="constant polynomial") if kind else None
    decomp = primitive_decompose(f)
    if decomp.stride_l >= 2:
        return _structural_stride_witness(f, decomp.stride_l)

    special_hits: List[Witness] = []
    for x, y in _special_candidates(f):
        w = _try_exact(f, x, y)
        if w is not None and w.kind == "strict":
            special_hits.append(w)
    if special_hits:
        return max(special_hits, key=lambda w: w.abs_f_at_z - w.f_at_abs)

    # grid scan on f (r <= 1) and the reverse (covers r >= 1)
    targets = [(f, False)]
    if not f.is_constant() and f.coefficient(0) != 0:
        targets.append((reverse(f), True))
    n_r = max(24, int(math.sqrt(budget / 8)))
    n_t = max(32, budget // (2 * len(targets) * n_r))
    rs = np.geomspace(1e-3, 1.0, n_r)
    thetas = np.linspace(1e-4, math.pi, n_t)
    best_equality: Optional[Witness] = None
    for target, inverted in targets:
        gaps = _gap_grid(target, rs, thetas)
        order = np.argsort(gaps, axis=None)
        checked = 0
        for flat in order[:  max(8, budget // 2000)]:
            i, j = np.unravel_index(flat, gaps.shape)
            if gaps[i, j] > 0 and checked > 4:
                break
            checked += 1
            r0, th0 = rs[i], thetas[j]
            r1, th1 = _local_descent(target, r0, th0)
            for rr, tt in ((r1, th1), (r0, th0)):
                x = _snap(rr * math.cos(tt))
                y = _snap(rr * math.sin(tt))
                w = _try_exact(target, x, y)
                if w is None:
                    continue
                if inverted:
                    w = _invert_witness(f, w)
                    if w is None:
                        continue
                if w.kind == "strict":
                    return w
                best_equality = best_equality or w
    if best_equality is not None:
        # equality on a primitive input: strong positivity is still refuted,
        # but flag it (the support-progression argument makes an equality
        # with *no* strict violation anywhere impossible for primitive f).
        return Witness(best_equality.x, best_equality.y, "equality",
                       best_equality.f_at_abs, best_equality.abs_f_at_z,
                       note="equality witness on primitive input")
    return None


def _structural_stride_witness(f: SparsePolynomial, stride: int) -> Witness:
    """Witness for f = z^k g(z^l), l >= 2: modulus equality at theta = 2 pi/l.

    At z = r e^{2 pi i / l} the inner argument z^l is the positive real
    r^l, so |f(z)| = r^k |g(r^l)| = f(r) whenever f(r) >= 0 (strict
    violation at z = -r when f(r) < 0).  Exact Gaussian-rational angles
    (pi, pi/2) are preferred; otherwise the equality is certified by the
    algebraic identity itself and the stored coordinates are illustrative.
    """
    from .poly import evaluate_exact

    candidates: List[Tuple[Fraction, Fraction]] = []
    for r in (Fraction(1, 2), Fraction(1), Fraction(1, 4), Fraction(2)):
        if stride % 4 == 0:
            candidates.append((Fraction(0), r))
        if stride % 2 == 0:
            candidates.append((-r, Fraction(0)))
    for x, y in candidates:
        w = _try_exact(f, x, y)
        if w is not None:
            return Witness(w.x, w.y, w.kind, w.f_at_abs, w.abs_f_at_z,
                           note=f"structural: stride {stride} >= 2")
    for r in (Fraction(1, 2), Fraction(1), Fraction(1, 4), Fraction(2)):
        fr = evaluate_exact(f, r)
        if fr < 0:
            w = _try_exact(f, -r, Fraction(0))
            if w is not None:
                return Witness(w.x, w.y, w.kind, w.f_at_abs, w.abs_f_at_z,
                               note=f"structural: stride {stride}, f({r}) < 0")
        else:
            theta = 2 * math.pi / stride
            rf = float(r)
            return Witness(
                x=_snap(rf * math.cos(theta)), y=_snap(rf * math.sin(theta)),
                kind="equality", f_at_abs=float(fr), abs_f_at_z=float(fr),
                note=(f"structural equality (algebraic): stride {stride}, "
                      f"|f(r e^(2 pi i/{stride}))| = f(r) at r = {r}; "
                      "coordinates are approximate, the identity is exact"),
            )
    # unreachable for stride >= 2, kept for safety
    raise InputError("could not build structural witness")


def _invert_witness(f: SparsePolynomial, w: Witness) -> Optional[Witness]:
    """Map a witness for reverse(f) at z to a witness for f at 1/z."""
    s = w.x * w.x + w.y * w.y
    if s == 0:
        return None
    x = w.x / s
    y = -w.y / s  # conjugate-inverse keeps Gaussian rationality
    try:
        return _try_exact(f, x, y)
    except InputError:
        return None


def _local_descent(f: SparsePolynomial, r: float, theta: float,
                   rounds: int = 3) -> Tuple[float, float]:
    """Zooming grid refinement around a candidate gap minimum."""
    best = (float(_gap_scalar(f, r, theta)), r, theta)
    dr, dt = r * 0.3, 0.2
    for _ in range(rounds):
        for rr in np.linspace(max(best[1] - dr, 1e-9), best[1] + dr, 7):
            for tt in np.linspace(best[2] - dt, best[2] + dt, 7):
                if not (0 < tt < 2 * math.pi):
                    continue
                g = _gap_scalar(f, rr, tt)
                if g < best[0]:
                    best = (g, rr, tt)
        dr *= 0.3
        dt *= 0.3
    return best[1], best[2]


def _gap_scalar(f: SparsePolynomial, r: float, theta: float) -> float:
    fr = _float_eval_real(f, r)
    z = r * complex(math.cos(theta), math.sin(theta))
    fz = sum(complex(c) * z ** e for e, c in f.terms.items())
    return fr * fr - abs(fz) ** 2


# ---------------------------------------------------------------------------
# Strip certificates at the residual boundary zeros
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StripCertificate:
    """Analytically discharged region (0, r_max] x [t_lo, t_hi].

    Around phi = 2 pi a / b (a/b in lowest terms, b | k, k the least
    positive support index) the gap splits into the phase-misaligned sum,
    bounded below by 2 a0 a_{t0} (1 - cos(t0 theta)) r^t0 minus a tail
    R_nv r^(t0+1), and the phase-aligned sum, bounded below by 0 via
    1 - cos x >= (2/pi^2) x^2 against the quadratic tail R_v.  All constants
    are exact rationals; the cosine lower bound c0 is a directed rational
    approximation with a 2^-40 safety margin.
    """

    phi_numer: int   # a
    phi_denom: int   # b; phi = 2 pi a / b
    t0: int
    t_star: int
    r_max: Fraction
    t_lo: Fraction
    t_hi: Fraction
    c0_lower: Fraction
    theta_halfwidth: Fraction

    def contains_box(self, box: Box) -> bool:
        return (box.r.hi <= self.r_max and box.t.lo >= self.t_lo
                and box.t.hi <= self.t_hi)


def _rational_below(x: mpmath.mpf, bits: int = 40) -> Fraction:
    scaled = int(mpmath.floor(x * (1 << bits))) - 2
    return Fraction(scaled, 1 << bits)


def _rational_above(x: mpmath.mpf, bits: int = 40) -> Fraction:
    scaled = int(mpmath.ceil(x * (1 << bits))) + 2
    return Fraction(scaled, 1 << bits)


def _strip_certificate(f: SparsePolynomial, k: int, jj: int) -> Optional[StripCertificate]:
    """Build the discharge certificate at phi = 2 pi jj / k, or None.

    None signals that the analytic case analysis does not apply (it requires
    a_{t0} > 0; a negative a_{t0} means the polynomial is refutable near
    this angle and the caller should search harder instead).
    """
    g = gcd(jj, k)
    aa, bb = jj // g, k // g
    sets = phase_sets(f, Fraction(aa, bb))
    t0 = sets.t0
    a0 = f.coefficient(0)
    ak = f.coefficient(k)
    at0 = f.coefficient(t0)
    if a0 <= 0 or ak <= 0 or at0 <= 0:
        return None
    exps = sorted(f.terms)
    r_nv_tail = Fraction(0)
    r_v_tail = Fraction(0)
    for ii, p in enumerate(exps):
        for q in exps[ii + 1:]:
            j = p + q
            prod2 = 2 * abs(f.terms[p] * f.terms[q])  # ordered-pair total
            if (q - p) % bb == 0:
                if j > k:
                    r_v_tail += prod2 * Fraction((q - p) ** 2, 2)
            else:
                if j > t0:
                    r_nv_tail += prod2 * 2  # (1 - cos) <= 2
    with mpmath.workdps(60):
        phi = 2 * mpmath.pi * aa / bb
        e = (aa * t0) % bb
        c0 = _rational_below(1 - mpmath.cos(2 * mpmath.pi * e / bb))
        if c0 <= 0:
            return None
        w = min(Fraction(1, k), c0 / (2 * t0))
        # NV floor: 2 a0 at0 (c0/2) r^t0 > R_nv r^(t0+1)
        r_nv = Fraction(1) if r_nv_tail == 0 else a0 * at0 * c0 / r_nv_tail
        # V floor: 2 a0 ak (2/pi^2) k^2 >= r R_v, with 2/pi^2 > 1/5
        r_v = Fraction(1) if r_v_tail == 0 else Fraction(2, 5) * a0 * ak * k * k / r_v_tail
        r_max = min(Fraction(1), r_nv, r_v)
        if aa * 2 == bb:  # phi = pi: strip reaches the t = -1 edge
            t_lo = Fraction(-1)
            t_hi = _rational_below(mpmath.cos(phi - w * mpmath.mpf(3) / 4))
            edge = _rational_above(mpmath.cos(phi - w))
            if not (edge < t_hi):
                return None
        else:
            t_lo = _rational_above(mpmath.cos(phi + w * mpmath.mpf(3) / 4))
            t_hi = _rational_below(mpmath.cos(phi - w * mpmath.mpf(3) / 4))
            lo_edge = _rational_above(mpmath.cos(phi + w))
            hi_edge = _rational_below(mpmath.cos(phi - w))
            if not (lo_edge < t_lo < t_hi < hi_edge):
                return None
    return StripCertificate(
        phi_numer=aa, phi_denom=bb, t0=t0, t_star=k,
        r_max=r_max, t_lo=t_lo, t_hi=t_hi, c0_lower=c0, theta_halfwidth=w,
    )


# ---------------------------------------------------------------------------
# Branch-and-bound certification
# ---------------------------------------------------------------------------


@dataclass
class CertificationStats:
    boxes_examined: int = 0
    max_depth: int = 0
    min_margin: Optional[Fraction] = None
    strips: List[StripCertificate] = field(default_factory=list)
    failed_box: Optional[Box] = None

    def note_margin(self, lo: Fraction) -> None:
        if self.min_margin is None or lo < self.min_margin:
            self.min_margin = lo


@dataclass
class StrongPositivityVerdict:
    status: str
    witness: Optional[Witness] = None
    stats: Optional[CertificationStats] = None
    reverse_stats: Optional[CertificationStats] = None
    boundary_strategy: str = ""

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED


def _h_levels(f: SparsePolynomial) -> Tuple[int, List[Tuple[int, Tuple[Fraction, ...]]]]:
    """H(r, t) = G(r, t) / (r^j0 (1 - t)) as (j0, [(i, q_i coefficients)])."""
    exp = gap_expansion(f)
    forms = {j: coeffs for j, coeffs in exp.chebyshev_form.items()
             if any(c != 0 for c in coeffs)}
    if not forms:
        raise InputError("gap expansion is identically zero (monomial input)")
    j0 = min(forms)
    levels = [(j - j0, divide_by_one_minus_t(coeffs))
              for j, coeffs in sorted(forms.items())]
    return j0, levels


def _certify_unit_box(
    f: SparsePolynomial,
    depth_budget: int,
    stats: CertificationStats,
) -> Tuple[str, Optional[Box], Optional[Tuple[int, int]]]:
    """Prove H_f > 0 on [0,1] x [-1,1] minus the discharged strips.

    Returns (outcome, refutation_box, failed_strip_angle) where outcome is
    one of "certified", "negative-box", "budget", "strip-failed".  A
    refutation box is one where H is provably negative in exact interval
    arithmetic, meaning the gap itself is negative on its interior.
    """
    j0, levels = _h_levels(f)
    k = min(e for e in f.terms if e > 0)
    if j0 != k:
        # a0 is nonzero for every caller, so the least level is 0 + k
        raise InputError("unexpected least gap level")
    strips: List[StripCertificate] = []
    for jj in range(1, k // 2 + 1):
        cert = _strip_certificate(f, k, jj)
        if cert is None:
            g = gcd(jj, k)
            return "strip-failed", None, (jj // g, k // g)
        strips.append(cert)
    stats.strips.extend(strips)

    r_cuts = sorted({Fraction(0), Fraction(1), *(s.r_max for s in strips)})
    t_cuts = sorted({Fraction(-1), Fraction(1),
                     *(s.t_lo for s in strips), *(s.t_hi for s in strips)})
    cells = [Box(Interval(r_cuts[i], r_cuts[i + 1]), Interval(t_cuts[jx], t_cuts[jx + 1]))
             for i in range(len(r_cuts) - 1) for jx in range(len(t_cuts) - 1)]

    stack = cells[::-1]
    while stack:
        box = stack.pop()
        stats.boxes_examined += 1
        stats.max_depth = max(stats.max_depth, box.depth)
        if any(s.contains_box(box) for s in strips):
            continue
        enclosure = eval_bivariate(levels, box.r, box.t)
        if enclosure.lo > 0:
            stats.note_margin(enclosure.lo)
            continue
        if enclosure.hi < 0:
            return "negative-box", box, None
        if box.depth >= depth_budget:
            stats.failed_box = box
            return "budget", None, None
        stack.extend(box.split())
    return "certified", None, None


def _targeted_refute_near_angle(
    f: SparsePolynomial, aa: int, bb: int,
) -> Optional[Witness]:
    """Dense small-radius scan around theta = 2 pi aa / bb.

    Used when a strip certificate fails its sign condition, which means the
    gap is negative along this direction for small radii.
    """
    phi = 2 * math.pi * aa / bb
    for r_exp in range(2, 22, 2):
        r = 2.0 ** (-r_exp)
        for dt in np.linspace(-0.5, 0.5, 41):
            theta = phi + dt
            if not (0 < theta < 2 * math.pi):
                continue
            if _gap_scalar(f, r, theta) < 0:
                rr, tt = _local_descent(f, r, theta)
                for denom_bits in (24, 36, 48):
                    x = _snap(rr * math.cos(tt), 1 << denom_bits)
                    y = _snap(rr * math.sin(tt), 1 << denom_bits)
                    w = _try_exact(f, x, y)
                    if w is not None and w.kind == "strict":
                        return w
    return None


def _box_refutation(f: SparsePolynomial, box: Box) -> Optional[Witness]:
    """Exact witness from a box where H < 0 (gap negative on the interior)."""
    r = box.r.mid if box.r.mid > 0 else (box.r.hi * Fraction(1, 2) or Fraction(1, 2))
    t = box.t.mid
    theta = math.acos(max(-1.0, min(1.0, float(t))))
    for denom_bits in (24, 32, 44):
        x = _snap(float(r) * math.cos(theta), 1 << denom_bits)
        y = _snap(float(r) * math.sin(theta), 1 << denom_bits)
        w = _try_exact(f, x, y)
        if w is not None and w.kind == "strict":
            return w
    return None


def certify(
    f: SparsePolynomial,
    depth_budget: int = DEFAULT_DEPTH_BUDGET,
    refute_budget: int = DEFAULT_REFUTE_BUDGET,
) -> StrongPositivityVerdict:
    """Decide strong positivity of f; sound, with Inconclusive as an out.

    Pipeline: structural screens (constants, z**k shifts, g(z**l) strides,
    sign hypotheses), an exact-verified refutation search, then interval
    branch-and-bound on the divided gap for f and its reverse, with the
    r -> 0 boundary zeros discharged by strip certificates.
    """
    if f.is_zero():
        raise InputError("certify needs a nonzero polynomial")
    notes: List[str] = []
    if f.is_constant():
        w = refute(f)
        return StrongPositivityVerdict(
            status=REFUTED, witness=w,
            boundary_strategy="constant polynomial: f(|z|) = |f(z)| everywhere",
        )
    decomp = primitive_decompose(f)
    if decomp.stride_l >= 2:
        w = _structural_stride_witness(f, decomp.stride_l)
        return StrongPositivityVerdict(
            status=REFUTED, witness=w,
            boundary_strategy=f"stride {decomp.stride_l} >= 2: modulus "
                              f"equality along theta = 2 pi / {decomp.stride_l}",
        )
    if decomp.shift_k > 0:
        notes.append(
            f"monomial shift z^{decomp.shift_k} removed (gap scales by r^(2k))")
        f = decomp.core_g

    if f.coefficient(0) <= 0 or f.terms[f.degree] <= 0:
        w = refute(f, budget=refute_budget)
        if w is not None:
            return StrongPositivityVerdict(
                status=REFUTED, witness=w,
                boundary_strategy="; ".join(
                    notes + ["sign hypothesis failed (a_0 or a_d not positive)"]),
            )
        return StrongPositivityVerdict(
            status=INCONCLUSIVE,
            boundary_strategy="; ".join(
                notes + ["sign hypothesis failed but no witness located"]),
        )

    w = refute(f, budget=refute_budget)
    if w is not None and w.kind == "strict":
        return StrongPositivityVerdict(status=REFUTED, witness=w,
                                       boundary_strategy="; ".join(notes))
    equality_note = w is not None

    stats_f = CertificationStats()
    stats_r = CertificationStats()
    sides = ((f, stats_f, False), (reverse(f), stats_r, True))
    all_ok = True
    for side_poly, side_stats, inverted in sides:
        outcome, bad_box, bad_angle = _certify_unit_box(
            side_poly, depth_budget, side_stats)
        if outcome == "certified":
            continue
        all_ok = False
        if outcome == "negative-box" and bad_box is not None:
            wit = _box_refutation(side_poly, bad_box)
            if wit is not None and inverted:
                wit = _invert_witness(f, wit)
            if wit is not None and wit.kind == "strict":
                return StrongPositivityVerdict(
                    status=REFUTED, witness=wit, stats=stats_f,
                    reverse_stats=stats_r, boundary_strategy="; ".join(notes))
            notes.append("interval arithmetic located a negative box but the "
                         "witness could not be rationalized")
        elif outcome == "strip-failed" and bad_angle is not None:
            wit = _targeted_refute_near_angle(side_poly, *bad_angle)
            if wit is not None and inverted:
                wit = _invert_witness(f, wit)
            if wit is not None and wit.kind == "strict":
                return StrongPositivityVerdict(
                    status=REFUTED, witness=wit, stats=stats_f,
                    reverse_stats=stats_r, boundary_strategy="; ".join(notes))
            notes.append(
                f"strip certificate unavailable at 2 pi {bad_angle[0]}/{bad_angle[1]}")
        else:
            notes.append("branch-and-bound budget exhausted")
        break

    if all_ok:
        if equality_note:
            raise RuntimeError(
                "internal consistency alarm: exact equality witness coexists "
                "with a complete positivity certificate on a primitive input"
            )
        strategy = (
            "unit boxes for f and reverse(f) via the inversion identity; "
            f"{len(stats_f.strips)} + {len(stats_r.strips)} boundary strips "
            "discharged analytically; t = 1 and r = 0 zeros divided out"
        )
        return StrongPositivityVerdict(
            status=CERTIFIED, stats=stats_f, reverse_stats=stats_r,
            boundary_strategy="; ".join(notes + [strategy]),
        )
    return StrongPositivityVerdict(
        status=INCONCLUSIVE, stats=stats_f, reverse_stats=stats_r,
        witness=w if equality_note else None,
        boundary_strategy="; ".join(notes + (
            ["equality witness found on primitive input (consistency flag)"]
            if equality_note else [])),
    )


# ---------------------------------------------------------------------------
# Small-radius margin fitting
# ---------------------------------------------------------------------------


def small_radius_margin(
    f: SparsePolynomial,
    theta0: float,
    r_max: float,
    n_r: int = 64,
    n_theta: int = 128,
) -> Tuple[float, float]:
    """Largest c with |f(r e^{i theta})| <= (1 - c r^d) f(r) on the grid
    |theta| in [theta0, pi], r in (0, r_max].

    Returns (c, worst_residual) where worst_residual is the minimum over
    the grid of 1 - |f|/f(r) (before the r^d scaling).  Raises InputError
    when the inequality itself fails on the grid (c <= 0), which signals a
    strong-positivity violation in the sampled region.
    """
    if not (0 < theta0 < math.pi):
        raise InputError("theta0 must lie in (0, pi)")
    if r_max <= 0:
        raise InputError("r_max must be positive")
    d = f.degree
    rs = np.geomspace(r_max * 1e-3, r_max, n_r)
    thetas = np.linspace(theta0, math.pi, n_theta)
    gaps = _gap_grid(f, rs, thetas)
    exps, coeffs = _float_coeff_arrays(f)
    fr = (rs[:, None] ** exps[None, :]) @ coeffs
    if np.any(fr <= 0):
        raise InputError("f(r) <= 0 in the sampled radius range")
    # gap = f(r)^2 - |f|^2 = f(r)^2 (1 - (|f|/f(r))^2); residual = 1 - |f|/f(r)
    ratio = np.sqrt(np.maximum(fr[:, None] ** 2 - gaps, 0.0)) / fr[:, None]
    residual = 1.0 - ratio
    c_grid = residual / (rs[:, None] ** d)
    c = float(c_grid.min())
    if c <= 0:
        idx = np.unravel_index(np.argmin(c_grid), c_grid.shape)
        raise InputError(
            f"margin inequality violated at r={rs[idx[0]]:.6g}, "
            f"theta={thetas[idx[1]]:.6g}: not strongly positive in this region"
        )
    return c, float(residual.min())
