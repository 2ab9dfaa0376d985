"""Shift-operator algebra: adjoints, certificates and degree classification.

An operator L = sum_i a_i(n) S^i acts on sequences by
L(F)(n) = sum_i a_i(n) F(n+i).  Its adjoint L*(x)(n) = sum_i a_i(n-i) x(n-i)
produces summable multiples: whenever L annihilates F, the product
L*(x)(n) F(n) telescopes with an explicit certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, lcm

from .errors import (
    InternalInconsistency,
    OrderZero,
    ZeroInput,
    ZeroOperator,
)
from .polynomials import (
    NEG_INF,
    Polynomial,
    falling_factorial,
    integer_roots,
    interpolate,
    resultant,
)


class ShiftOperator:
    """Recurrence operator with polynomial coefficients a_0 .. a_J, a_J != 0."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs):
        cs = []
        for c in coeffs:
            if not isinstance(c, Polynomial):
                c = Polynomial((Fraction(c),)) if c else Polynomial()
            cs.append(c)
        while cs and cs[-1].is_zero():
            cs.pop()
        if not cs:
            raise ZeroOperator("shift operator needs a nonzero coefficient")
        self._coeffs = tuple(cs)

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    def coefficient(self, i: int) -> Polynomial:
        if 0 <= i < len(self._coeffs):
            return self._coeffs[i]
        return Polynomial()

    def __eq__(self, other):
        if not isinstance(other, ShiftOperator):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(self._coeffs)

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        if scalar == 0:
            raise ZeroOperator("cannot scale an operator to zero")
        return ShiftOperator(tuple(c * scalar for c in self._coeffs))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def apply(self, values, n: int) -> Fraction:
        """L(F)(n) given F as a callable from index to Fraction."""
        return sum(
            (a.evaluate(n) * values(n + i) for i, a in enumerate(self._coeffs)),
            Fraction(0),
        )

    def adjoint_apply(self, x: Polynomial) -> Polynomial:
        """L*(x)(n) = sum_i a_i(n-i) x(n-i)."""
        if not isinstance(x, Polynomial):
            x = Polynomial((Fraction(x),)) if x else Polynomial()
        out = Polynomial()
        for i, a in enumerate(self._coeffs):
            if a.is_zero():
                continue
            out = out + a.shift(-i) * x.shift(-i)
        return out

    def certificate(self, x: Polynomial) -> list:
        """Certificate polynomials u_0 .. u_{J-1} for the adjoint product.

        u_i(n) = sum_{j=1}^{J-i} a_{i+j}(n-j) x(n-j), so that
        L*(x)(n) F(n) = Delta(-sum_i u_i(n) F(n+i)) whenever L(F) = 0.
        """
        if self.order == 0:
            raise OrderZero("certificates need an operator of order >= 1")
        if not isinstance(x, Polynomial):
            x = Polynomial((Fraction(x),)) if x else Polynomial()
        us = []
        for i in range(self.order):
            u = Polynomial()
            for j in range(1, self.order - i + 1):
                a = self.coefficient(i + j)
                if a.is_zero():
                    continue
                u = u + a.shift(-j) * x.shift(-j)
            us.append(u)
        return us

    def primitive(self) -> "ShiftOperator":
        """Scale to coprime integer coefficients, positive leading content."""
        den = 1
        for c in self._coeffs:
            for f in c.coeffs:
                den = lcm(den, f.denominator)
        g = 0
        for c in self._coeffs:
            for f in c.coeffs:
                g = gcd(g, f.numerator * (den // f.denominator))
        if self._coeffs[-1].leading_coefficient < 0:
            g = -g
        return ShiftOperator(tuple(c * Fraction(den, g) for c in self._coeffs))

    def text(self) -> str:
        parts = []
        for i, c in enumerate(self._coeffs):
            if c.is_zero():
                continue
            if i == 0:
                parts.append(f"({c.text()})")
            elif i == 1:
                parts.append(f"({c.text()})*S")
            else:
                parts.append(f"({c.text()})*S^{i}")
        return " + ".join(parts)

    def __repr__(self):
        return f"ShiftOperator({self.text()!r})"

    def __str__(self):
        return self.text()


@dataclass(frozen=True)
class DegreeProfile:
    """Full degree/degeneracy classification of a shift operator."""

    deg_l: int
    d_l: int
    b_polys: tuple
    f_poly: Polynomial
    r_l: frozenset
    c_l: int
    degenerated: bool
    strongly_nondegenerated: bool


def adjoint_apply(op: ShiftOperator, x: Polynomial) -> Polynomial:
    return op.adjoint_apply(x)


def certificate_polys(op: ShiftOperator, x: Polynomial) -> list:
    return op.certificate(x)


def degree_profile(op: ShiftOperator) -> DegreeProfile:
    """Compute deg L, d_L, the recombined b_k, f(s), R_L and C_L.

    b_k(n) = sum_{j=k}^{J} C(j, k) a_{J-j}(n + j - J); deg L is the maximum
    of deg b_k - k, and f(s) collects the coefficients of n^(deg L + k)
    against falling factorials s(s-1)...(s-k+1).  The nonnegative integer
    roots R_L of f mark the monomial degrees the adjoint cannot produce at
    full degree; C_L is the least s with L*(n^s) != 0.
    """
    J = op.order
    b_polys = []
    for k in range(J + 1):
        b = Polynomial()
        for j in range(k, J + 1):
            a = op.coefficient(J - j)
            if a.is_zero():
                continue
            b = b + comb(j, k) * a.shift(j - J)
        b_polys.append(b)
    deg_l = max(b.degree - k for k, b in enumerate(b_polys))
    if deg_l == NEG_INF:
        raise InternalInconsistency("all b_k vanish for a nonzero operator")
    deg_l = int(deg_l)
    d_l = int(max(c.degree for c in op.coeffs))

    f = Polynomial()
    for k, b in enumerate(b_polys):
        idx = deg_l + k
        if idx >= 0:
            c = b.coefficient(idx)
            if c != 0:
                f = f + c * falling_factorial(k)
    if f.is_zero():
        raise InternalInconsistency("f(s) vanished identically")
    r_l = frozenset(s for s in integer_roots(f) if s >= 0)

    c_l = None
    for s in range(J + 1):
        if not op.adjoint_apply(Polynomial.monomial(s)).is_zero():
            c_l = s
            break
    if c_l is None:
        raise InternalInconsistency("no s <= J with L*(n^s) != 0")

    return DegreeProfile(
        deg_l=deg_l,
        d_l=d_l,
        b_polys=tuple(b_polys),
        f_poly=f,
        r_l=r_l,
        c_l=c_l,
        degenerated=bool(r_l),
        strongly_nondegenerated=(deg_l == d_l),
    )


def degree_law_check(op: ShiftOperator, x: Polynomial) -> str:
    """Compare deg L*(x) against deg L + deg x; returns "<" or "=".

    The drop "<" happens exactly when L is degenerated and deg x lies in
    R_L; any other outcome indicates a bug and raises.
    """
    if not isinstance(x, Polynomial) or x.is_zero():
        raise ZeroInput("degree law requires a nonzero polynomial")
    prof = degree_profile(op)
    actual = op.adjoint_apply(x).degree
    predicted = prof.deg_l + x.degree
    if prof.degenerated and x.degree in prof.r_l:
        if not actual < predicted:
            raise InternalInconsistency(
                f"expected degree drop, got deg {actual} = {predicted}"
            )
        return "<"
    if actual != predicted:
        raise InternalInconsistency(
            f"expected deg {predicted}, got {actual}"
        )
    return "="


def gcd_condition(a0: Polynomial, a_j: Polynomial, offset: int = 0) -> bool:
    """True iff gcd(a0(n), a_j(n+h)) = 1 for every integer h >= offset.

    Decided exactly: the resultant of a0(n) and a_j(n+h) is a nonzero
    polynomial in h whose integer roots are the colliding shifts.
    """
    if not isinstance(a0, Polynomial) or not isinstance(a_j, Polynomial):
        raise TypeError("gcd_condition expects polynomials")
    if a0.is_zero() or a_j.is_zero():
        raise ZeroInput("gcd condition requires nonzero polynomials")
    m, k = int(a0.degree), int(a_j.degree)
    if m == 0 or k == 0:
        return True
    points = []
    for h in range(m * k + 1):
        points.append((h, resultant(a0, a_j.shift(h))))
    res_in_h = interpolate(points)
    if res_in_h.is_zero():
        raise InternalInconsistency("resultant vanished identically")
    return not any(r >= offset for r in integer_roots(res_in_h))


@dataclass(frozen=True)
class SummableBounds:
    """Degree window for polynomials p with p(n)F(n) summable."""

    upper: int
    witness: Polynomial
    lower_valid: bool
    lower: int | None


def summable_degree_bounds(op: ShiftOperator) -> SummableBounds:
    """Upper bound deg L + C_L with witness L*(n^{C_L}); lower bound when valid.

    The lower bound deg L + C_L applies when gcd(a_0(n), a_J(n+h)) = 1 for
    all h >= 0 (so summable multiples are exactly the adjoint image) and
    the degenerate degrees cannot leak low-degree images: either R_L is
    empty, or every s in R_L has L*(n^s) = 0 identically.
    """
    if op.order == 0:
        raise OrderZero("summability bounds need an operator of order >= 1")
    prof = degree_profile(op)
    witness = op.adjoint_apply(Polynomial.monomial(prof.c_l))
    upper = prof.deg_l + prof.c_l

    lower_valid = False
    a0 = op.coefficient(0)
    if not a0.is_zero() and gcd_condition(a0, op.coeffs[-1], 0):
        if not prof.degenerated:
            lower_valid = True
        else:
            lower_valid = all(
                op.adjoint_apply(Polynomial.monomial(s)).is_zero()
                for s in prof.r_l
            )
    return SummableBounds(
        upper=upper,
        witness=witness,
        lower_valid=lower_valid,
        lower=upper if lower_valid else None,
    )
