"""Turn reductions into checked mathematics.

Three verification channels:

* exact telescoping over windows of indices, all in rational arithmetic;
* high-precision floating-point partial sums against pi-linear targets;
* exact residue sums modulo p^2 for the congruence fixtures.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath

from .errors import (
    DomainViolation,
    MismatchedSequence,
    NonInvertibleDenominator,
    PrecisionLoss,
    PrimeFilterViolation,
)
from .exprio import parse_polynomial
from .operators import ShiftOperator
from .polynomials import Polynomial, integer_roots
from .reduction import RationalReductionResult, rational_reduce, sp_expand
from .sequences import HolonomicSequence, get_sequence

PRECISION_ENV = "HOLOREDUCE_PRECISION_BITS"
DEFAULT_PRECISION_BITS = 96


def precision_bits() -> int:
    raw = os.environ.get(PRECISION_ENV, "")
    try:
        bits = int(raw)
    except ValueError:
        return DEFAULT_PRECISION_BITS
    return max(bits, 64)


@dataclass(frozen=True)
class ReductionRecipe:
    """How a fixture was generated: reduce ``source_numer`` against the
    sequence operator with (factor, side, order); the published numerator
    times ``scalar`` equals the reduction remainder."""

    source_numer: Polynomial
    factor: Polynomial
    side: str
    order: int
    scalar: Fraction


@dataclass(frozen=True)
class IdentityFixture:
    """A series sum_{n>=start} numer/denom * F(n) = r0 + r1/pi."""

    sequence_key: str
    numer: Polynomial
    denom: Polynomial
    start_index: int
    target_r0: Fraction
    target_r1: Fraction
    label: str = ""
    recipe: ReductionRecipe | None = None


@dataclass(frozen=True)
class CongruenceFixture:
    """A residue identity sum_{n=start}^{p-1} numer/denom * F(n) = target
    mod p^2, for primes p in the residue class ``prime_residue``."""

    sequence_key: str
    numer: Polynomial
    denom: Polynomial
    start_index: int
    target: Fraction
    prime_residue: tuple = (1, 3)
    modulus_power: int = 2
    label: str = ""
    recipe: ReductionRecipe | None = None


def _parse_target(text: str):
    """Parse 'r0 + r1/pi' (identity) or 'a/b mod p^2' (congruence)."""
    text = text.strip()
    if text.endswith("mod p^2"):
        return ("congruence", Fraction(text[: -len("mod p^2")].strip()))
    if not text.endswith("/pi"):
        raise ValueError(f"unrecognized target {text!r}")
    body = text[: -len("/pi")].rstrip()
    # split off the trailing rational coefficient of 1/pi
    split = -1
    for i in range(len(body) - 1, 0, -1):
        if body[i] in "+-" and body[i - 1] in " 0123456789/":
            split = i
            break
    if split == -1:
        return ("identity", Fraction(0), Fraction(body))
    r0 = Fraction(body[:split].strip() or "0")
    sign = -1 if body[split] == "-" else 1
    r1 = sign * Fraction(body[split + 1:].strip())
    return ("identity", r0, r1)


def load_fixture(path):
    """Read a key = value fixture file; '#' starts a comment."""
    fields = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, _, val = line.partition("=")
            fields[key.strip()] = val.strip()

    recipe = None
    if "source_numer" in fields:
        recipe = ReductionRecipe(
            source_numer=parse_polynomial(fields["source_numer"]),
            factor=parse_polynomial(fields["factor"]),
            side=fields["side"],
            order=int(fields["order"]),
            scalar=Fraction(fields["scalar"]),
        )
    common = dict(
        sequence_key=fields["sequence"],
        numer=parse_polynomial(fields["numer"]),
        denom=parse_polynomial(fields.get("denom", "1")),
        start_index=int(fields.get("start", "0")),
        label=fields.get("label", ""),
        recipe=recipe,
    )
    target = _parse_target(fields["target"])
    if target[0] == "congruence":
        residue = (1, 3)
        if "primes" in fields:
            lhs, _, mod = fields["primes"].partition("mod")
            residue = (int(lhs), int(mod))
        return CongruenceFixture(target=target[1], prime_residue=residue, **common)
    return IdentityFixture(target_r0=target[1], target_r1=target[2], **common)


def _resolve(seq):
    return get_sequence(seq) if isinstance(seq, str) else seq


def check_telescoping(seq, op: ShiftOperator, x: Polynomial, window) -> bool:
    """Exact check of the boundary form of the adjoint product over
    [a, b]:  sum_{n=a}^{b-1} L*(x)(n) F(n) = U(a) - U(b)  with
    U(m) = sum_i u_i(m) F(m+i)."""
    seq = _resolve(seq)
    a, b = window
    if b < a or a < seq.start_index:
        raise DomainViolation(f"window [{a}, {b}] outside domain of {seq.name}")
    image = op.adjoint_apply(x)
    us = op.certificate(x)
    lhs = sum((image.evaluate(m) * seq.eval(m) for m in range(a, b)), Fraction(0))

    def boundary(m):
        return sum(
            (u.evaluate(m) * seq.eval(m + i) for i, u in enumerate(us)),
            Fraction(0),
        )

    return lhs == boundary(a) - boundary(b)


def first_valid_index(fix, rr: RationalReductionResult) -> int:
    """Smallest index where the reduced summand and certificate are defined."""
    sp = sp_expand(rr.denom_spec)
    start = fix.start_index
    roots = [r for r in integer_roots(sp) if r >= start] if not sp.is_zero() else []
    if roots:
        start = max(roots) + 1
    return start


def verify_identity_exact(fix, source, rr: RationalReductionResult,
                          window_length: int = 200) -> bool:
    """Exact windowed check that the source summand minus the reduced
    summand telescopes through the certificate, and that the fixture's
    published numerator matches the reduction remainder up to its
    recorded scalar."""
    if fix.sequence_key != source.sequence_key:
        raise MismatchedSequence(
            f"{fix.sequence_key} vs {source.sequence_key}")
    seq = _resolve(fix.sequence_key)
    sp = sp_expand(rr.denom_spec)

    if fix.recipe is not None:
        if rr.remainder_numer != fix.recipe.scalar * fix.numer:
            return False
        if sp != fix.denom:
            return False
    q = source.numer * sp
    if rr.derived_operator.adjoint_apply(rr.reduction.multiplier) \
            + rr.remainder_numer != q:
        return False

    us = rr.reduction.certificate
    a = max(first_valid_index(fix, rr), source.start_index, seq.start_index)

    def g(m):
        return seq.eval(m) / sp.evaluate(m)

    def t_value(m):
        return -sum(
            (u.evaluate(m) * g(m + i) for i, u in enumerate(us)), Fraction(0)
        )

    diff_sum = Fraction(0)
    t_a = t_value(a)
    for b in range(a, a + window_length + 1):
        diff_sum += (
            source.numer.evaluate(b) / source.denom.evaluate(b) * seq.eval(b)
            - rr.remainder_numer.evaluate(b) / sp.evaluate(b) * seq.eval(b)
        )
        if diff_sum != t_value(b + 1) - t_a:
            return False
    return True


def rederive(fix, source) -> RationalReductionResult:
    """Re-run the rational reduction recorded in the fixture's recipe."""
    if fix.recipe is None:
        raise ValueError(f"fixture {fix.label or fix.sequence_key} has no recipe")
    seq = _resolve(fix.sequence_key)
    return rational_reduce(
        fix.recipe.source_numer,
        seq.operator,
        fix.recipe.factor,
        fix.recipe.side,
        fix.recipe.order,
    )


def _to_mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def _int_horner(coeffs, m):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * m + c
    return acc


def _numeric_sequence_values(seq: HolonomicSequence, upto: int):
    """F(start), ..., F(upto) as mpf values via the forward recurrence."""
    if seq.operator is None:
        return [_to_mpf(seq.eval(m)) for m in range(seq.start_index, upto + 1)]
    j_ord = seq.operator.order
    coeffs = seq.operator.coeffs
    values = []
    for i in range(min(j_ord, upto - seq.start_index + 1)):
        values.append(_to_mpf(seq.eval(seq.start_index + i)))
    int_coeffs = [c.int_coeffs() for c in coeffs]
    fast = all(ic is not None for ic in int_coeffs)
    base = seq.start_index
    m = base
    while len(values) <= upto - seq.start_index:
        if fast:
            cs = [_int_horner(ic, m) for ic in int_coeffs]
        else:
            cs = [c.evaluate(m) for c in coeffs]
        lead = cs[j_ord]
        if lead == 0:
            values.append(_to_mpf(seq.eval(m + j_ord)))
        else:
            acc = mpmath.mpf(0)
            for i in range(j_ord):
                ci = cs[i]
                if ci:
                    acc += (ci if fast else _to_mpf(ci)) * values[m + i - base]
            acc = -acc / lead if fast else -acc / _to_mpf(lead)
            values.append(acc)
        m += 1
    return values


def numeric_series_check(fix: IdentityFixture, n_terms: int,
                         accel: str = "average1",
                         precision: int | None = None) -> dict:
    """Partial sum of the fixture series in >= 64-bit binary floating
    point, optionally averaging the last two partial sums, compared
    against r0 + r1/pi."""
    if n_terms < 100:
        raise ValueError("need at least 100 terms")
    if accel not in ("none", "average1"):
        raise ValueError(f"unknown acceleration {accel!r}")
    bits = precision if precision is not None else precision_bits()
    seq = _resolve(fix.sequence_key)
    if fix.start_index < seq.start_index:
        raise DomainViolation(
            f"fixture starts at {fix.start_index}, sequence at {seq.start_index}")
    with mpmath.workprec(bits):
        last = fix.start_index + n_terms - 1
        values = _numeric_sequence_values(seq, last)
        num_ints = fix.numer.int_coeffs()
        den_ints = fix.denom.int_coeffs()
        fast = num_ints is not None and den_ints is not None
        total = mpmath.mpf(0)
        prev = total
        max_mag = mpmath.mpf(0)
        for n in range(fix.start_index, last + 1):
            if fast:
                coef = mpmath.mpf(_int_horner(num_ints, n)) / _int_horner(den_ints, n)
            else:
                num = fix.numer.evaluate(n)
                den = fix.denom.evaluate(n)
                coef = mpmath.mpf(num.numerator * den.denominator) / (
                    num.denominator * den.numerator)
            prev = total
            total += coef * values[n - seq.start_index]
            max_mag = max(max_mag, abs(total))
        value = (total + prev) / 2 if accel == "average1" else total
        if max_mag > (abs(value) + 1) * mpmath.mpf(2) ** (bits - 20):
            raise PrecisionLoss(
                f"partial sums reached {max_mag} against result {value}")
        target = mpmath.mpf(fix.target_r0.numerator) / fix.target_r0.denominator
        target += (mpmath.mpf(fix.target_r1.numerator)
                   / fix.target_r1.denominator) / mpmath.pi
        return {
            "value": value,
            "target": target,
            "abs_error": abs(value - target),
            "terms": n_terms,
            "precision_bits": bits,
            "accel": accel,
        }


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _residue(q: Fraction, modulus: int) -> int:
    if gcd(q.denominator, modulus) != 1:
        raise NonInvertibleDenominator(
            f"denominator {q.denominator} shares a factor with {modulus}")
    return (q.numerator * pow(q.denominator % modulus, -1, modulus)) % modulus


def verify_congruence(fix: CongruenceFixture, primes) -> list:
    """Exact residue sums mod p^2 for each prime, against the target."""
    reports = []
    seq = _resolve(fix.sequence_key)
    r, mod = fix.prime_residue
    for p in sorted(primes):
        if not is_prime(p) or p % mod != r % mod:
            raise PrimeFilterViolation(
                f"{p} is not a prime with p = {r} mod {mod}")
        modulus = p**fix.modulus_power
        acc = 0
        for n in range(fix.start_index, p):
            den = fix.denom.evaluate(n)
            if den == 0:
                raise NonInvertibleDenominator(f"denominator vanishes at n = {n}")
            term = fix.numer.evaluate(n) / den * seq.eval(n)
            acc = (acc + _residue(term, modulus)) % modulus
        target = _residue(fix.target, modulus)
        reports.append({
            "prime": p,
            "modulus": modulus,
            "residue": acc,
            "target": target,
            "ok": acc == target,
        })
    return reports
