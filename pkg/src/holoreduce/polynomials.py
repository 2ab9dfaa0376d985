"""Exact univariate polynomial and rational-function arithmetic over Q.

Coefficients are :class:`fractions.Fraction` values stored densely by
ascending power.  Every object is immutable and every operation is a pure
function, so values can be shared freely between threads.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, gcd, lcm

from .errors import BothZero, DivisionNotExact, ZeroPolynomial

# Degree of the zero polynomial.  A dedicated sentinel (not -1) so that
# degree laws like deg(a*b) = deg a + deg b stay exact.
NEG_INF = float("-inf")


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected int or Fraction, got {type(value).__name__}")


class Polynomial:
    """Dense univariate polynomial with exact rational coefficients.

    ``coeffs[i]`` is the coefficient of ``n**i``; the highest stored
    coefficient is nonzero (the empty tuple is the zero polynomial).
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs=()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._coeffs = tuple(cs)

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls((_as_fraction(c),))

    @classmethod
    def variable(cls) -> "Polynomial":
        return cls((Fraction(0), Fraction(1)))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Polynomial":
        if k < 0:
            raise ValueError("monomial exponent must be nonnegative")
        return cls((Fraction(0),) * k + (_as_fraction(c),))

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    @property
    def degree(self):
        """Degree as an int, or NEG_INF for the zero polynomial."""
        return len(self._coeffs) - 1 if self._coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def coefficient(self, k: int) -> Fraction:
        if 0 <= k < len(self._coeffs):
            return self._coeffs[k]
        return Fraction(0)

    @property
    def leading_coefficient(self) -> Fraction:
        if not self._coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self._coeffs[-1]

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial((_as_fraction(other),))
        return None

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        # Constant polynomials hash like their Fraction value so that
        # p == 3 implies hash(p) == hash(3).
        if not self._coeffs:
            return hash(Fraction(0))
        if len(self._coeffs) == 1:
            return hash(self._coeffs[0])
        return hash(self._coeffs)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._coeffs, other._coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple(-c for c in self._coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if c == 0:
                return Polynomial()
            return Polynomial(tuple(c * x for x in self._coeffs))
        if not isinstance(other, Polynomial):
            return NotImplemented
        if not self._coeffs or not other._coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other._coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            return Polynomial(tuple(x / c for x in self._coeffs))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = Polynomial((Fraction(1),))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        """Euclidean division; ``other`` must be nonzero."""
        if not isinstance(other, Polynomial):
            other = self._coerce(other)
            if other is None:
                return NotImplemented
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._coeffs)
        dq = len(rem) - len(other._coeffs)
        if dq < 0:
            return Polynomial(), self
        quo = [Fraction(0)] * (dq + 1)
        lead = other._coeffs[-1]
        for k in range(dq, -1, -1):
            c = rem[k + len(other._coeffs) - 1] / lead
            quo[k] = c
            if c != 0:
                for i, b in enumerate(other._coeffs):
                    rem[k + i] -= c * b
        return Polynomial(quo), Polynomial(rem)

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        """Divide by ``other``, raising :class:`DivisionNotExact` on remainder."""
        quo, rem = divmod(self, other)
        if rem:
            raise DivisionNotExact(f"{self} is not divisible by {other}")
        return quo

    # -- structural operations ----------------------------------------------

    def shift(self, k: int) -> "Polynomial":
        """Return p(n + k)."""
        if k == 0 or not self._coeffs:
            return self
        # Horner in (n + k): fold coefficients from the top.
        out = Polynomial()
        step = Polynomial((Fraction(k), Fraction(1)))
        for c in reversed(self._coeffs):
            out = out * step + c
        return out

    def evaluate(self, x) -> Fraction:
        x = _as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self._coeffs):
            acc = acc * x + c
        return acc

    def int_coeffs(self):
        """Coefficients as plain ints, or None if any is non-integral."""
        out = []
        for c in self._coeffs:
            if c.denominator != 1:
                return None
            out.append(c.numerator)
        return out

    def monic(self) -> "Polynomial":
        if not self._coeffs:
            raise ZeroPolynomial("cannot normalize the zero polynomial")
        return self / self._coeffs[-1]

    def rational_content(self):
        """Split into ``(c, primitive)`` with ``self == c * primitive``.

        ``primitive`` has coprime integer coefficients and a positive
        leading coefficient; the zero polynomial yields ``(0, 0)``.
        """
        if not self._coeffs:
            return Fraction(0), Polynomial()
        den = lcm(*(c.denominator for c in self._coeffs))
        nums = [c.numerator * (den // c.denominator) for c in self._coeffs]
        g = 0
        for v in nums:
            g = gcd(g, v)
        if nums[-1] < 0:
            g = -g
        content = Fraction(g, den)
        return content, Polynomial([v // g for v in nums])

    def __repr__(self):
        return f"Polynomial({self.text()!r})"

    def __str__(self):
        return self.text()

    def text(self) -> str:
        """Canonical text form, re-parseable by the expression grammar."""
        if not self._coeffs:
            return "0"
        parts = []
        for k in range(len(self._coeffs) - 1, -1, -1):
            c = self._coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = _fraction_text(mag)
            else:
                var = "n" if k == 1 else f"n^{k}"
                body = var if mag == 1 else f"{_fraction_text(mag)}*{var}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)


def _fraction_text(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor of two polynomials over Q."""
    if not a and not b:
        raise BothZero("gcd(0, 0) is undefined")
    while b:
        a, b = b, divmod(a, b)[1]
    return a.monic()


def falling_factorial(k: int) -> Polynomial:
    """The falling factorial s(s-1)...(s-k+1) as a polynomial; k = 0 gives 1."""
    if k < 0:
        raise ValueError("falling factorial order must be nonnegative")
    out = Polynomial((Fraction(1),))
    for i in range(k):
        out = out * Polynomial((Fraction(-i), Fraction(1)))
    return out


def _root_bound(int_coeffs) -> int:
    """Integer bound B with every real root of the poly inside [-B, B].

    Fujiwara-style bound computed from bit lengths only, so it stays sane
    for polynomials with huge coefficients (resultants in particular).
    """
    d = len(int_coeffs) - 1
    lead = abs(int_coeffs[-1])
    bound = 1
    for k in range(1, d + 1):
        a = abs(int_coeffs[d - k])
        if a == 0:
            continue
        # |a/lead|^(1/k) < 2^ceil((bits(a) - bits(lead) + 1) / k)
        delta = a.bit_length() - lead.bit_length() + 1
        if delta > 0:
            bound = max(bound, 1 << -(-delta // k))
    return 2 * bound


def integer_roots(p: Polynomial) -> set:
    """Exact set of integer roots of a nonzero polynomial.

    Candidates are divisors of the integer-cleared constant term (after
    stripping n^k factors), each confirmed by exact evaluation.
    """
    if not p:
        raise ZeroPolynomial("integer_roots of the zero polynomial")
    roots = set()
    coeffs = list(p.coeffs)
    # Strip n^k: zero is a root iff the constant term vanishes.
    k = 0
    while coeffs[k] == 0:
        k += 1
    if k > 0:
        roots.add(0)
        coeffs = coeffs[k:]
    if len(coeffs) == 1:
        return roots
    den = lcm(*(c.denominator for c in coeffs))
    ints = [c.numerator * (den // c.denominator) for c in coeffs]
    const = abs(ints[0])
    bound = _root_bound(ints)
    if bound > 10**7:
        raise ValueError("integer root bound too large for divisor scan")
    stripped = Polynomial(ints)
    for d in range(1, bound + 1):
        if const % d:
            continue
        for r in (d, -d):
            if r not in roots and stripped.evaluate(r) == 0:
                roots.add(r)
    return roots


def interpolate(points) -> Polynomial:
    """Exact polynomial through ``(x, y)`` pairs with distinct x (Newton form)."""
    xs = [_as_fraction(x) for x, _ in points]
    coeffs = [_as_fraction(y) for _, y in points]
    for j in range(1, len(points)):
        for i in range(len(points) - 1, j - 1, -1):
            coeffs[i] = (coeffs[i] - coeffs[i - 1]) / (xs[i] - xs[i - j])
    result = Polynomial()
    for i in range(len(points) - 1, -1, -1):
        result = result * Polynomial((-xs[i], Fraction(1))) + coeffs[i]
    return result


def _int_det(m) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    m = [row[:] for row in m]
    size = len(m)
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            for i in range(k + 1, size):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[-1][-1]


def resultant(p: Polynomial, q: Polynomial) -> Fraction:
    """Resultant of two nonzero polynomials, exact over Q."""
    if not p or not q:
        raise ZeroPolynomial("resultant requires nonzero polynomials")
    m = p.degree
    n = q.degree
    if m == 0:
        return p.leading_coefficient ** n
    if n == 0:
        return q.leading_coefficient ** m
    cp, ip = p.rational_content()
    cq, iq = q.rational_content()
    a = [c.numerator for c in ip.coeffs]
    b = [c.numerator for c in iq.coeffs]
    size = m + n
    rows = []
    for i in range(n):
        row = [0] * size
        for j, c in enumerate(reversed(a)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [0] * size
        for j, c in enumerate(reversed(b)):
            row[i + j] = c
        rows.append(row)
    det = _int_det(rows)
    return det * cp**n * cq**m


class RationalFunction:
    """Reduced quotient of two polynomials with a monic denominator."""

    __slots__ = ("_numer", "_denom")

    def __init__(self, numer, denom=None):
        if not isinstance(numer, Polynomial):
            numer = Polynomial((_as_fraction(numer),))
        if denom is None:
            denom = Polynomial((Fraction(1),))
        elif not isinstance(denom, Polynomial):
            denom = Polynomial((_as_fraction(denom),))
        if not denom:
            raise ZeroDivisionError("rational function with zero denominator")
        if not numer:
            denom = Polynomial((Fraction(1),))
        else:
            g = poly_gcd(numer, denom)
            if g.degree > 0:
                numer = numer.exact_div(g)
                denom = denom.exact_div(g)
            lead = denom.leading_coefficient
            numer = numer / lead
            denom = denom / lead
        self._numer = numer
        self._denom = denom

    @property
    def numer(self) -> Polynomial:
        return self._numer

    @property
    def denom(self) -> Polynomial:
        return self._denom

    def is_polynomial(self) -> bool:
        return self._denom.degree == 0

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise DivisionNotExact(f"{self} is not a polynomial")
        return self._numer

    def is_zero(self) -> bool:
        return self._numer.is_zero()

    def __bool__(self):
        return bool(self._numer)

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction, Polynomial)):
            return RationalFunction(other)
        return None

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._numer == other._numer and self._denom == other._denom

    def __hash__(self):
        if self.is_polynomial():
            return hash(self._numer)
        return hash((self._numer, self._denom))

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalFunction(
            self._numer * other._denom + other._numer * self._denom,
            self._denom * other._denom,
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self._numer, self._denom)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalFunction(self._numer * other._numer, self._denom * other._denom)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other._numer:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self._numer * other._denom, self._denom * other._numer)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def evaluate(self, x) -> Fraction:
        d = self._denom.evaluate(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return self._numer.evaluate(x) / d

    def text(self) -> str:
        if self.is_polynomial():
            return self._numer.text()
        return f"({self._numer.text()})/({self._denom.text()})"

    def __repr__(self):
        return f"RationalFunction({self.text()!r})"

    def __str__(self):
        return self.text()
