"""Parse and pretty-print polynomial expressions in the variable z.

Grammar (whitespace ignored everywhere):

    expression  := sign? term (sign term)*
    sign        := '+' | '-'
    term        := coefficient | coefficient? 'z' ('^' integer)?
    coefficient := integer | decimal | integer '/' integer

Decimal literals are exact rationals ("0.01" means 1/100, never a binary
float).  A bare 'z' has coefficient 1 and exponent 1.  Exponents above
10**6 are rejected.  This grammar is the CLI input format.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .poly import SparsePolynomial

MAX_EXPONENT = 10 ** 6


class ParseError(ValueError):
    """Syntax error carrying the offending position and expectation."""

    def __init__(self, position: int, expected: str, found: str):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(f"at position {position}: expected {expected}, found {found!r}")


@dataclass(frozen=True)
class PolyExpression:
    """Source text together with its parsed polynomial."""

    source_text: str
    parsed: SparsePolynomial


_TOKEN = re.compile(
    r"""
    (?P<number>\d+(?:\.\d+)?)   # integer or decimal
  | (?P<var>z)
  | (?P<caret>\^)
  | (?P<slash>/)
  | (?P<plus>\+)
  | (?P<minus>-)
  | (?P<junk>\S)
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    for match in _TOKEN.finditer(text):
        kind = match.lastgroup
        if kind == "junk":
            raise ParseError(match.start(), "a term, '+' or '-'", match.group())
        tokens.append((kind, match.group(), match.start()))
    return tokens


def parse(text: str) -> SparsePolynomial:
    """Parse an expression into an exact SparsePolynomial.

    Raises ParseError with position information on malformed input; never
    raises anything else for arbitrary string input.
    """
    if not isinstance(text, str):
        raise ParseError(0, "a string", type(text).__name__)
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError(len(text), "a term", "end of input")
    pos = 0
    terms: List[Tuple[int, Fraction]] = []
    n = len(tokens)

    def peek(k: int = 0):
        return tokens[pos + k] if pos + k < n else (None, "", len(text))

    first = True
    while pos < n:
        sign = 1
        kind, value, at = peek()
        if kind in ("plus", "minus"):
            sign = -1 if kind == "minus" else 1
            pos += 1
        elif not first:
            raise ParseError(at, "'+' or '-' between terms", value)
        first = False

        kind, value, at = peek()
        coeff = Fraction(1)
        have_coeff = False
        if kind == "number":
            coeff = Fraction(value)  # exact: "0.01" -> 1/100
            have_coeff = True
            pos += 1
            kind, value, at = peek()
            if kind == "slash":
                pos += 1
                kind, value, at = peek()
                if kind != "number" or "." in value:
                    raise ParseError(at, "an integer denominator", value or "end of input")
                denom = int(value)
                if denom == 0:
                    raise ParseError(at, "a nonzero denominator", value)
                coeff = coeff / denom
                pos += 1
                kind, value, at = peek()

        exponent = 0
        if kind == "var":
            exponent = 1
            pos += 1
            kind, value, at = peek()
            if kind == "caret":
                pos += 1
                kind, value, at = peek()
                if kind != "number" or "." in value:
                    raise ParseError(at, "an integer exponent after '^'", value or "end of input")
                exponent = int(value)
                if exponent > MAX_EXPONENT:
                    raise ParseError(at, f"an exponent <= {MAX_EXPONENT}", value)
                pos += 1
        elif not have_coeff:
            raise ParseError(at, "a coefficient or 'z'", value or "end of input")

        terms.append((exponent, sign * coeff))

    return SparsePolynomial.from_term_list(terms)


def parse_expression(text: str) -> PolyExpression:
    return PolyExpression(source_text=text, parsed=parse(text))


def _format_coefficient(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_poly(f: SparsePolynomial) -> str:
    """Canonical ascending-exponent rendering; parse(format_poly(f)) == f."""
    if f.is_zero():
        return "0"
    pieces = []
    for e in sorted(f.terms):
        c = f.terms[e]
        mag = abs(c)
        if e == 0:
            body = _format_coefficient(mag)
        else:
            head = "" if mag == 1 else _format_coefficient(mag)
            body = f"{head}z" if e == 1 else f"{head}z^{e}"
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(pieces)
