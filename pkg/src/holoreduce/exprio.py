"""Text grammar for polynomials, rational functions and shift operators,
plus canonical text / LaTeX / structured printers.

Grammar tokens: the variable ``n``, the shift symbol ``S``, integer
literals, ``+ - * / ^`` and parentheses.  ``^`` binds tighter than ``*``
and ``/``, which bind tighter than ``+`` and ``-``; juxtaposition is not
multiplication.  ``S`` only carries nonnegative integer exponents, and
``/`` only divides by shift-free values.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import NegativeShiftPower, ParseError, ZeroOperator
from .polynomials import Polynomial, RationalFunction
from .operators import ShiftOperator

SCHEMA = "holoreduce-v1"

_MAX_DEGREE = 600
_MAX_SHIFT = 512
_MAX_EXPONENT = 4096


def _tokenize(text: str):
    if len(text) > 4096:
        raise ParseError("input too long", 4096)
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j]), i))
            i = j
            continue
        if ch == "n":
            tokens.append(("var", ch, i))
            i += 1
            continue
        if ch == "S":
            tokens.append(("shift", ch, i))
            i += 1
            continue
        if ch in "+-*/^()":
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise ParseError(
            f"unexpected character {ch!r}", i,
            expected={"integer", "n", "S", "operator", "parenthesis"},
        )
    tokens.append(("end", None, len(text)))
    return tokens


class _Value:
    """Sum of rational-function coefficients times powers of S."""

    __slots__ = ("parts",)

    def __init__(self, parts=None):
        self.parts = {k: v for k, v in (parts or {}).items() if not v.is_zero()}

    @classmethod
    def scalar(cls, rf):
        return cls({0: rf})

    def max_poly_degree(self):
        d = 0
        for rf in self.parts.values():
            d = max(d, int(rf.numer.degree), int(rf.denom.degree))
        return d

    def add(self, other):
        parts = dict(self.parts)
        for k, v in other.parts.items():
            parts[k] = parts.get(k, RationalFunction(0)) + v
        return _Value(parts)

    def neg(self):
        return _Value({k: -v for k, v in self.parts.items()})

    def mul(self, other, pos):
        if self.max_poly_degree() + other.max_poly_degree() > _MAX_DEGREE:
            raise ParseError("degree limit exceeded", pos)
        parts = {}
        for i, a in self.parts.items():
            for j, b in other.parts.items():
                if i + j > _MAX_SHIFT:
                    raise ParseError("shift power limit exceeded", pos)
                parts[i + j] = parts.get(i + j, RationalFunction(0)) + a * b
        return _Value(parts)

    def div(self, other, pos):
        if any(k > 0 for k in other.parts):
            raise NegativeShiftPower("cannot divide by the shift symbol S")
        if not other.parts:
            raise ParseError("division by zero", pos)
        d = other.parts[0]
        return _Value({k: v / d for k, v in self.parts.items()})

    def pow(self, e, pos):
        if e > _MAX_EXPONENT:
            raise ParseError("exponent too large", pos)
        if self.max_poly_degree() * e > _MAX_DEGREE:
            raise ParseError("degree limit exceeded", pos)
        result = _Value.scalar(RationalFunction(1))
        base = self
        while e:
            if e & 1:
                result = result.mul(base, pos)
            base = base.mul(base, pos) if e > 1 else base
            e >>= 1
        return result


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.idx = 0

    def peek(self):
        return self.tokens[self.idx]

    def advance(self):
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def parse(self) -> _Value:
        value = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ParseError("unexpected token", pos, expected={"end of input", "operator"})
        return value

    def expr(self) -> _Value:
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op, _, _ = self.advance()
            rhs = self.term()
            value = value.add(rhs if op == "+" else rhs.neg())
        return value

    def term(self) -> _Value:
        value = self.factor()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.advance()
            rhs = self.factor()
            value = value.mul(rhs, pos) if op == "*" else value.div(rhs, pos)
        return value

    def factor(self) -> _Value:
        negate = False
        while self.peek()[0] in ("+", "-"):
            if self.advance()[0] == "-":
                negate = not negate
        value = self.power()
        return value.neg() if negate else value

    def power(self) -> _Value:
        base = self.atom()
        if self.peek()[0] != "^":
            return base
        _, _, caret_pos = self.advance()
        kind, val, pos = self.advance()
        if kind == "-":
            if any(k > 0 for k in base.parts):
                raise NegativeShiftPower("S requires a nonnegative exponent")
            raise ParseError("exponent must be a nonnegative integer", pos,
                             expected={"integer"})
        if kind != "int":
            raise ParseError("expected an integer exponent", pos,
                             expected={"integer"})
        return base.pow(val, caret_pos)

    def atom(self) -> _Value:
        kind, val, pos = self.advance()
        if kind == "int":
            return _Value.scalar(RationalFunction(val))
        if kind == "var":
            return _Value.scalar(RationalFunction(Polynomial.variable()))
        if kind == "shift":
            return _Value({1: RationalFunction(1)})
        if kind == "(":
            value = self.expr()
            closing, _, cpos = self.advance()
            if closing != ")":
                raise ParseError("expected ')'", cpos, expected={")"})
            return value
        raise ParseError("expected a value", pos,
                         expected={"integer", "n", "S", "("})


def _parse_value(text: str) -> _Value:
    return _Parser(text).parse()


def _first_shift_pos(text: str) -> int:
    for kind, _, pos in _tokenize(text):
        if kind == "shift":
            return pos
    return 0


def parse_polynomial(text: str) -> Polynomial:
    value = _parse_value(text)
    if any(k > 0 for k in value.parts):
        raise ParseError("the shift symbol S is not allowed in a polynomial",
                         _first_shift_pos(text))
    rf = value.parts.get(0)
    if rf is None:
        return Polynomial()
    if not rf.is_polynomial():
        raise ParseError("expression is a rational function, not a polynomial", 0)
    return rf.as_polynomial()


def parse_rational_function(text: str) -> RationalFunction:
    value = _parse_value(text)
    if any(k > 0 for k in value.parts):
        raise ParseError("the shift symbol S is not allowed here",
                         _first_shift_pos(text))
    return value.parts.get(0, RationalFunction(0))


def parse_operator(text: str) -> ShiftOperator:
    value = _parse_value(text)
    if not value.parts:
        raise ZeroOperator("parsed operator is zero")
    coeffs = []
    for i in range(max(value.parts) + 1):
        rf = value.parts.get(i)
        if rf is None:
            coeffs.append(Polynomial())
            continue
        if not rf.is_polynomial():
            raise ParseError(
                f"coefficient of S^{i} is not a polynomial", 0)
        coeffs.append(rf.as_polynomial())
    return ShiftOperator(coeffs)


# -- printers ---------------------------------------------------------------


def to_text(value) -> str:
    if isinstance(value, (Polynomial, RationalFunction, ShiftOperator)):
        return value.text()
    if isinstance(value, (int, Fraction)):
        f = Fraction(value)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    raise TypeError(f"cannot print {type(value).__name__}")


def _fraction_latex(f: Fraction) -> str:
    sign = "-" if f < 0 else ""
    f = abs(f)
    if f.denominator == 1:
        return f"{sign}{f.numerator}"
    return f"{sign}\\frac{{{f.numerator}}}{{{f.denominator}}}"


def _poly_terms_latex(p: Polynomial) -> str:
    """Ascending-power rendering of an integer-primitive polynomial."""
    parts = []
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            var = "n" if k == 1 else (f"n^{k}" if k < 10 else f"n^{{{k}}}")
            body = var if mag == 1 else f"{mag} {var}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def poly_latex(p: Polynomial) -> str:
    """LaTeX with the rational content factored out of a primitive part."""
    if p.is_zero():
        return "0"
    content, prim = p.rational_content()
    inner = _poly_terms_latex(prim)
    if content == 1:
        return inner
    if content == -1:
        return f"-\\left({inner}\\right)"
    return f"{_fraction_latex(content)} \\left({inner}\\right)"


def to_latex(value) -> str:
    if isinstance(value, Polynomial):
        return poly_latex(value)
    if isinstance(value, RationalFunction):
        if value.is_polynomial():
            return poly_latex(value.numer)
        return f"\\frac{{{poly_latex(value.numer)}}}{{{poly_latex(value.denom)}}}"
    if isinstance(value, ShiftOperator):
        parts = []
        for i, c in enumerate(value.coeffs):
            if c.is_zero():
                continue
            body = poly_latex(c)
            if i == 0:
                parts.append(body)
            else:
                sigma = "\\sigma" if i == 1 else f"\\sigma^{{{i}}}"
                parts.append(f"\\left({body}\\right){sigma}")
        return " + ".join(parts)
    if isinstance(value, (int, Fraction)):
        return _fraction_latex(Fraction(value))
    raise TypeError(f"cannot print {type(value).__name__}")


def _fraction_body(f: Fraction) -> dict:
    return {"num": str(f.numerator), "den": str(f.denominator)}


def _body(value) -> dict:
    if isinstance(value, Polynomial):
        return {
            "kind": "polynomial",
            "coefficients": [_fraction_body(c) for c in value.coeffs],
        }
    if isinstance(value, RationalFunction):
        return {
            "kind": "rational_function",
            "numer": _body(value.numer),
            "denom": _body(value.denom),
        }
    if isinstance(value, ShiftOperator):
        return {
            "kind": "shift_operator",
            "order": value.order,
            "coefficients": [_body(c) for c in value.coeffs],
        }
    if isinstance(value, (int, Fraction)):
        return {"kind": "rational", **_fraction_body(Fraction(value))}
    raise TypeError(f"cannot serialize {type(value).__name__}")


def to_structured(value) -> dict:
    return {"schema": SCHEMA, **_body(value)}


def print_value(value, fmt: str = "text") -> str:
    if fmt == "text":
        return to_text(value)
    if fmt == "latex":
        return to_latex(value)
    if fmt == "structured":
        return json.dumps(to_structured(value), sort_keys=True)
    raise ValueError(f"unknown format {fmt!r}")
