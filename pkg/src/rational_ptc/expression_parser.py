"""
Polynomial expression grammar.

This module reads and writes the expression syntax shared by model files and
the command line:

    expr    := term (('+' | '-') term)*
    term    := [coefficient ['*']] factor ('*' factor)* | coefficient
    factor  := name ['^' integer]

Coefficients are integers or fractions (``3``, ``1/2``); names use letters,
digits, ``_`` and ``'``. Whitespace is ignored. Factors written out of order
pick up their Koszul sign, so ``y*x`` parses as ``-x*y`` for odd ``x, y``.
"""

import re
from fractions import Fraction
from typing import Any, Mapping, Optional

from sympy import QQ

from .exceptions import ParseError
from .graded import GeneratorTuple, GradedPoly, mul

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*^])|(?P<bad>\S))"
)


def _tokenize(text: str, line: Optional[int]) -> list[tuple[str, str]]:
    tokens = []
    position = 0
    stripped = text.rstrip()
    while position < len(stripped):
        match = _TOKEN.match(stripped, position)
        if match is None:
            break
        position = match.end()
        kind = match.lastgroup
        assert kind is not None
        if kind == "bad":
            raise ParseError(f"Unexpected character {match.group(kind)!r} in expression {text.strip()!r}", line)
        tokens.append((kind, match.group(kind)))
    return tokens


def parse_poly(
    text: str,
    gens: GeneratorTuple,
    names: Optional[Mapping[str, int]] = None,
    line: Optional[int] = None,
) -> GradedPoly:
    """
    Parse an expression into a polynomial over ``gens``.

    Args:
        text: Expression in the shared grammar
        gens: Generators the expression may refer to
        names: Optional name -> index table (built from ``gens`` if omitted)
        line: Source line for error messages

    Returns:
        The parsed GradedPoly

    Raises:
        ParseError: If the expression is malformed or names an unknown generator
    """
    if names is None:
        names = {g.name: g.index for g in gens}
    tokens = _tokenize(text, line)
    if not tokens:
        raise ParseError("Empty expression", line)

    result = GradedPoly.zero(gens)
    position = 0
    first = True
    while position < len(tokens):
        sign = 1
        kind, value = tokens[position]
        if kind == "op" and value in "+-":
            sign = -1 if value == "-" else 1
            position += 1
        elif not first:
            raise ParseError(f"Expected '+' or '-' before {value!r}", line)
        term, position = _parse_term(tokens, position, gens, names, line)
        result = result + term.scale(sign)
        first = False
    return result


def _parse_term(
    tokens: list[tuple[str, str]],
    position: int,
    gens: GeneratorTuple,
    names: Mapping[str, int],
    line: Optional[int],
) -> tuple[GradedPoly, int]:
    if position >= len(tokens):
        raise ParseError("Expression ends with an operator", line)
    coefficient: Any = QQ.one
    term = GradedPoly.constant(gens, 1)
    expect_factor = True
    kind, value = tokens[position]
    if kind == "number":
        numerator, _, denominator = value.partition("/")
        if denominator and int(denominator) == 0:
            raise ParseError(f"Zero denominator in {value!r}", line)
        fraction = Fraction(int(numerator), int(denominator or 1))
        coefficient = QQ(fraction.numerator, fraction.denominator)
        position += 1
        expect_factor = False
        if position < len(tokens) and tokens[position] == ("op", "*"):
            position += 1
            expect_factor = True
        elif position < len(tokens) and tokens[position][0] == "name":
            expect_factor = True
    if expect_factor:
        while True:
            if position >= len(tokens) or tokens[position][0] != "name":
                found = tokens[position][1] if position < len(tokens) else "end of expression"
                raise ParseError(f"Expected a generator name, found {found!r}", line)
            name = tokens[position][1]
            if name not in names:
                raise ParseError(f"Unknown generator {name!r}", line)
            position += 1
            exponent = 1
            if position < len(tokens) and tokens[position] == ("op", "^"):
                position += 1
                if position >= len(tokens) or tokens[position][0] != "number" or "/" in tokens[position][1]:
                    raise ParseError(f"Exponent of {name!r} must be a positive integer", line)
                exponent = int(tokens[position][1])
                if exponent < 1:
                    raise ParseError(f"Exponent of {name!r} must be a positive integer", line)
                position += 1
            factor = GradedPoly.generator(gens, names[name])
            for _ in range(exponent):
                term = mul(term, factor)
            if position < len(tokens) and tokens[position] == ("op", "*"):
                position += 1
                continue
            break
    return term.scale(coefficient), position


def format_rational(value: Any) -> str:
    q = QQ.convert(value)
    numerator, denominator = int(q.numerator), int(q.denominator)
    if denominator == 1:
        return str(numerator)
    return f"{numerator}/{denominator}"


def format_poly(p: GradedPoly) -> str:
    """Render a polynomial in the shared grammar; ``0`` for the zero polynomial."""
    if p.is_zero():
        return "0"
    pieces: list[str] = []
    for monomial, coefficient in p.sorted_terms():
        negative = coefficient < 0
        magnitude = -coefficient if negative else coefficient
        factors = [
            p.gens[i].name if e == 1 else f"{p.gens[i].name}^{e}" for i, e in monomial.exponents
        ]
        if not factors:
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = "*".join([format_rational(magnitude)] + factors)
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f"{'-' if negative else '+'} {body}")
    return " ".join(pieces)
