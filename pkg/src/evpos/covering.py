"""Positive covering property and subset-sum weights.

A polynomial with positive constant and leading coefficients has the
one-sided positive covering property when every exponent carrying a
negative coefficient can be written as a sum of exponents carrying
positive coefficients (zero excluded).  The two-sided property asks the
same of the reversed coefficient sequence.  Reachability and the weight
function

    w_f(k) = max number of parts in a decomposition of k into elements
             of S+(f) \\ {0}

are computed by dynamic programming over 0..degree(f).  Targets never
exceed the degree and every part is >= 1, so unbounded-repetition
reachability coincides with the d-fold iterated sumset.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Set, Tuple

from .poly import InputError, SparsePolynomial, reverse, support_profile

HYPOTHESIS_SIGN = "HYPOTHESIS_SIGN"


class NotCoverable(ValueError):
    """Requested index has no decomposition into positive-support parts."""


@dataclass(frozen=True)
class OneSidedResult:
    covered: bool
    uncovered: frozenset
    witnesses: Dict[int, Tuple[int, ...]]
    reason: Optional[str] = None  # HYPOTHESIS_SIGN when the a_0 > 0, a_d > 0 screen fails


@dataclass(frozen=True)
class CoveringReport:
    """Two-sided covering verdict with weights and witnesses.

    uncovered_indices / witnesses / weights describe the polynomial itself;
    the reverse_* fields describe its reversed coefficient sequence.
    global_weight is None when there is no negative coefficient at all
    (unbounded).
    """

    one_sided_forward: bool
    one_sided_reverse: bool
    uncovered_indices: frozenset
    reverse_uncovered_indices: frozenset
    witnesses: Dict[int, Tuple[int, ...]]
    reverse_witnesses: Dict[int, Tuple[int, ...]]
    weights: Dict[int, int]
    global_weight: Optional[int]
    forward_reason: Optional[str] = None
    reverse_reason: Optional[str] = None

    @property
    def two_sided(self) -> bool:
        return self.one_sided_forward and self.one_sided_reverse


def _positive_parts(f: SparsePolynomial) -> Tuple[int, ...]:
    return tuple(sorted(e for e, c in f.terms.items() if c > 0 and e > 0))


def _best_decomposition(parts: Tuple[int, ...], target: int) -> Optional[Tuple[int, ...]]:
    """Maximum-length decomposition of target into parts, lex-smallest on ties.

    parts must be sorted ascending.  Works over states (remaining, first
    allowed part index) so tuples are built smallest-part-first, which keeps
    them sorted and makes the lexicographic comparison well founded.
    """
    memo: Dict[Tuple[int, int], Optional[Tuple[int, ...]]] = {}

    def solve(x: int, j: int) -> Optional[Tuple[int, ...]]:
        if x == 0:
            return ()
        if j >= len(parts) or parts[j] > x:
            return None
        key = (x, j)
        if key in memo:
            return memo[key]
        take = solve(x - parts[j], j)
        with_part = None if take is None else (parts[j],) + take
        skip = solve(x, j + 1)
        if with_part is None:
            best = skip
        elif skip is None:
            best = with_part
        else:
            best = min(with_part, skip, key=lambda t: (-len(t), t))
        memo[key] = best
        return best

    return solve(target, 0)


def _reach_table(parts: Tuple[int, ...], limit: int) -> list:
    """best[x] = max-length lex-min decomposition tuple of x, else None."""
    return [_best_decomposition(parts, x) for x in range(limit + 1)]


def one_sided_covering(
    f: SparsePolynomial,
) -> Tuple[bool, frozenset, Dict[int, Tuple[int, ...]]]:
    """Forward covering check: (verdict, uncovered indices, witnesses).

    A violation of the sign hypothesis (constant or leading coefficient not
    positive) yields verdict False with no uncovered indices listed; the
    richer reason code is available through covering_report.
    """
    result = _one_sided(f)
    return result.covered, result.uncovered, result.witnesses


def _one_sided(f: SparsePolynomial) -> OneSidedResult:
    if f.is_zero():
        raise InputError("covering check needs a nonzero polynomial")
    if f.coefficient(0) <= 0 or f.terms[f.degree] <= 0:
        return OneSidedResult(False, frozenset(), {}, reason=HYPOTHESIS_SIGN)
    profile = support_profile(f)
    negatives = sorted(profile.s_minus)
    if not negatives:
        return OneSidedResult(True, frozenset(), {})
    parts = _positive_parts(f)
    best = _reach_table(parts, max(negatives))
    uncovered = frozenset(k for k in negatives if best[k] is None)
    witnesses = {k: best[k] for k in negatives if best[k] is not None}
    return OneSidedResult(not uncovered, uncovered, witnesses)


def weight_of_index(f: SparsePolynomial, k: int) -> Tuple[int, Tuple[int, ...]]:
    """Maximal part count over decompositions of k, with one maximizer.

    Returns (w_f(k), mu) where mu is the deterministic choice among the
    maximizers: the lexicographically smallest ascending part tuple.  Ties
    must be broken deterministically because the compression map downstream
    consumes mu.
    """
    if k < 0:
        raise NotCoverable(f"index {k} is negative")
    parts = _positive_parts(f)
    best = _reach_table(parts, k)
    if best[k] is None:
        raise NotCoverable(f"index {k} is not a sum of positive-support exponents {parts}")
    return len(best[k]), best[k]


def global_weight(f: SparsePolynomial) -> Optional[int]:
    """min_k w_f(k) over negative-support k; None (unbounded) when S- is empty."""
    profile = support_profile(f)
    if not profile.s_minus:
        return None
    weights = []
    for k in sorted(profile.s_minus):
        w, _ = weight_of_index(f, k)
        weights.append(w)
    return min(weights)


def covering_report(f: SparsePolynomial) -> CoveringReport:
    """Run both one-sided checks and collect weights for the forward side."""
    fwd = _one_sided(f)
    rev = _one_sided(reverse(f))
    weights: Dict[int, int] = {}
    gw: Optional[int] = None
    if fwd.covered and fwd.reason is None:
        profile = support_profile(f)
        for k in sorted(profile.s_minus):
            weights[k], _ = weight_of_index(f, k)
        gw = min(weights.values()) if weights else None
    return CoveringReport(
        one_sided_forward=fwd.covered,
        one_sided_reverse=rev.covered,
        uncovered_indices=fwd.uncovered,
        reverse_uncovered_indices=rev.uncovered,
        witnesses=fwd.witnesses,
        reverse_witnesses=rev.witnesses,
        weights=weights,
        global_weight=gw,
        forward_reason=fwd.reason,
        reverse_reason=rev.reason,
    )
