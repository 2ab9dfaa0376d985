"""Exact holonomic sequences: recurrence evaluation, a catalog of the
sequences used throughout the package, and ansatz-based annihilator
guessing from term lists.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import (
    IndexBelowStart,
    InsufficientTerms,
    SingularLeadingCoefficient,
)
from .operators import ShiftOperator
from .polynomials import Polynomial

_n = Polynomial.variable()


class HolonomicSequence:
    """A sequence determined by a recurrence operator and initial values.

    Evaluation runs the recurrence forward from ``start_index`` with a
    cache shared by all callers (guarded by a lock, so concurrent eval is
    linearizable).  ``oracle`` is an optional direct evaluator used for
    cross-checks and for override values at singular points; sequences
    may also be oracle-only (``operator=None``).
    """

    def __init__(self, operator, start_index, initial_values, name="",
                 oracle=None, overrides=None):
        if operator is None and oracle is None:
            raise ValueError("sequence needs an operator or an oracle")
        self.operator = operator
        self.start_index = int(start_index)
        self.name = name
        self.oracle = oracle
        self.overrides = dict(overrides or {})
        values = [Fraction(v) for v in initial_values]
        if operator is not None and len(values) < operator.order:
            raise ValueError(
                f"need {operator.order} initial values, got {len(values)}"
            )
        self._cache = values
        self._lock = threading.Lock()

    def eval(self, n: int) -> Fraction:
        if n < self.start_index:
            raise IndexBelowStart(f"{n} is below start index {self.start_index}")
        idx = n - self.start_index
        with self._lock:
            self._fill(idx)
            return self._cache[idx]

    def _fill(self, idx: int) -> None:
        if self.operator is None:
            while len(self._cache) <= idx:
                t = self.start_index + len(self._cache)
                self._cache.append(Fraction(self.oracle(t)))
            return
        j_ord = self.operator.order
        coeffs = self.operator.coeffs
        while len(self._cache) <= idx:
            t = self.start_index + len(self._cache)  # index being produced
            if t in self.overrides:
                self._cache.append(Fraction(self.overrides[t]))
                continue
            m = t - j_ord  # recurrence base point
            lead = coeffs[j_ord].evaluate(m)
            if lead == 0:
                if self.oracle is not None:
                    self._cache.append(Fraction(self.oracle(t)))
                    continue
                raise SingularLeadingCoefficient(
                    f"a_J({m}) = 0 and no override value for index {t}"
                )
            acc = Fraction(0)
            for i in range(j_ord):
                acc += coeffs[i].evaluate(m) * self._cache[m + i - self.start_index]
            self._cache.append(-acc / lead)

    def values(self, a: int, b: int) -> list:
        """Exact values F(a), ..., F(b) inclusive."""
        return [self.eval(m) for m in range(a, b + 1)]


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    sequence: HolonomicSequence
    provenance: str


def domb_number(n: int) -> int:
    """sum_k C(n,k)^2 C(2k,k) C(2(n-k),n-k)."""
    return sum(
        comb(n, k) ** 2 * comb(2 * k, k) * comb(2 * (n - k), n - k)
        for k in range(n + 1)
    )


def franel_number(n: int) -> int:
    """sum_k C(n,k)^3."""
    return sum(comb(n, k) ** 3 for k in range(n + 1))


def harmonic_number(n: int, m: int = 1) -> Fraction:
    """H_n^(m) = sum_{k=1..n} 1/k^m."""
    return sum((Fraction(1, k**m) for k in range(1, n + 1)), Fraction(0))


def central_trinomial_t(n: int, b: int, c: int) -> int:
    """Coefficient of x^n in (x^2 + b x + c)^n."""
    return sum(
        comb(n, 2 * i) * comb(2 * i, i) * b ** (n - 2 * i) * c**i
        for i in range(n // 2 + 1)
    )


# Recurrence operators for the catalog.  The Domb forms are related by
# geometric substitutions: scaling F by r^n multiplies a_i by r^i.
DOMB_16N_OPERATOR = ShiftOperator([
    2 * (1 + _n) ** 3,
    -(3 + 2 * _n) * (12 + 15 * _n + 5 * _n**2),
    8 * (2 + _n) ** 3,
])

DOMB_NEG32N_OPERATOR = ShiftOperator([
    (_n + 1) ** 3,
    (2 * _n + 3) * (5 * _n**2 + 15 * _n + 12),
    16 * (_n + 2) ** 3,
])

DOMB_OPERATOR = ShiftOperator([
    64 * (1 + _n) ** 3,
    -2 * (3 + 2 * _n) * (12 + 15 * _n + 5 * _n**2),
    (2 + _n) ** 3,
])

FRANEL_OPERATOR = ShiftOperator([
    8 * (_n + 1) ** 2,
    7 * _n**2 + 21 * _n + 16,
    -((_n + 2) ** 2),
])

FRANEL_SIGNED_OPERATOR = ShiftOperator([
    8 * _n * (_n**2 - 1),
    -_n * (7 * _n**2 + 21 * _n + 16),
    -((_n + 2) ** 3),
])

HARMONIC_RATIO_OPERATOR = ShiftOperator([
    _n * (_n + 1) ** 2,
    -(_n + 1) * (_n + 2) * (2 * _n + 3),
    (_n + 2) ** 2 * (_n + 3),
])

CENTRAL_BINOMIAL_OPERATOR = ShiftOperator([
    (2 * _n - 1) ** 4,
    -16 * (_n + 1) ** 4,
])


def _harmonic_operator(m: int) -> ShiftOperator:
    return ShiftOperator([
        (_n + 1) ** m,
        -((_n + 1) ** m) - (_n + 2) ** m,
        (_n + 2) ** m,
    ])


def _build_catalog() -> dict:
    entries = {}

    def add(key, seq, provenance):
        entries[key] = CatalogEntry(key=key, sequence=seq, provenance=provenance)

    add(
        "domb",
        HolonomicSequence(DOMB_OPERATOR, 0, [1, 4], name="domb",
                          oracle=domb_number),
        "Domb numbers; order-2 recurrence matching the binomial double sum",
    )
    add(
        "franel",
        HolonomicSequence(FRANEL_OPERATOR, 0, [1, 2], name="franel",
                          oracle=franel_number),
        "Franel numbers sum_k C(n,k)^3 with their classical recurrence",
    )
    add(
        "domb_over_16n",
        HolonomicSequence(DOMB_16N_OPERATOR, 0, [1, Fraction(1, 4)],
                          name="domb_over_16n",
                          oracle=lambda n: Fraction(domb_number(n), 16**n)),
        "Domb(n)/16^n; Domb recurrence conjugated by 16^-n",
    )
    add(
        "domb_over_neg32n",
        HolonomicSequence(DOMB_NEG32N_OPERATOR, 0, [1, Fraction(-1, 8)],
                          name="domb_over_neg32n",
                          oracle=lambda n: Fraction(domb_number(n), (-32) ** n)),
        "Domb(n)/(-32)^n; Domb recurrence conjugated by (-32)^-n",
    )
    add(
        "franel_example22",
        HolonomicSequence(
            FRANEL_SIGNED_OPERATOR, 2, [5, Fraction(-28, 3)],
            name="franel_example22",
            oracle=lambda n: Fraction((-1) ** n * franel_number(n), n * (n - 1)),
        ),
        "(-1)^n franel(n)/(n(n-1)) from n = 2 with its order-2 annihilator",
    )
    add(
        "harmonic_example23",
        HolonomicSequence(
            HARMONIC_RATIO_OPERATOR, 1, [Fraction(1, 2), Fraction(1, 4)],
            name="harmonic_example23",
            oracle=lambda n: harmonic_number(n) / (n * (n + 1)),
        ),
        "H_n/(n(n+1)) from n = 1 with its order-2 annihilator",
    )
    add(
        "central_binomial_example27",
        HolonomicSequence(
            CENTRAL_BINOMIAL_OPERATOR, 0, [1],
            name="central_binomial_example27",
            oracle=lambda n: Fraction(comb(2 * n, n) ** 4,
                                      (2 * n - 1) ** 4 * 256**n),
        ),
        "C(2n,n)^4/((2n-1)^4 256^n), a first-order hypergeometric ratio",
    )
    for m in (1, 2, 3):
        add(
            f"harmonic_m{m}",
            HolonomicSequence(
                _harmonic_operator(m), 0, [0, 1], name=f"harmonic_m{m}",
                oracle=lambda n, m=m: harmonic_number(n, m),
            ),
            f"harmonic numbers of order {m} via the telescoped recurrence",
        )
    add(
        "t_poly",
        HolonomicSequence(
            None, 0, [], name="t_poly",
            oracle=lambda n: central_trinomial_t(n, 62, 1),
        ),
        "coefficient of x^n in (x^2 + 62x + 1)^n, direct expansion only",
    )
    return entries


_CATALOG = None
_CATALOG_LOCK = threading.Lock()


def _catalog_map() -> dict:
    global _CATALOG
    with _CATALOG_LOCK:
        if _CATALOG is None:
            _CATALOG = _build_catalog()
        return _CATALOG


def catalog() -> list:
    """All catalog entries, in a stable order."""
    return [_catalog_map()[k] for k in sorted(_catalog_map())]


def get_sequence(key: str) -> HolonomicSequence:
    try:
        return _catalog_map()[key].sequence
    except KeyError:
        raise KeyError(f"unknown sequence {key!r}; known: {sorted(_catalog_map())}")


def _nullspace_vectors(rows, width):
    """Basis of the exact nullspace of the given row matrix over Q."""
    mat = [row[:] for row in rows]
    pivots = []
    r = 0
    for c in range(width):
        pivot = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = mat[r][c]
        mat[r] = [v / inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * width
        vec[fc] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            vec[pc] = -mat[row_idx][fc]
        basis.append(vec)
    return basis


def guess_annihilator(terms, start_index: int, max_order: int, max_deg: int):
    """Guess a recurrence operator annihilating the supplied terms.

    Solves the exact linear system sum_{i,d} c_{i,d} n^d F(n+i) = 0 for
    ascending (order, degree) pairs, holding out the last 10 usable
    positions; the first candidate that also annihilates the held-out
    terms is returned in primitive integer form.  Returns None when no
    candidate fits.
    """
    need = (max_order + 1) * (max_deg + 2) + max_order + 10
    if len(terms) < need:
        raise InsufficientTerms(f"need at least {need} terms, got {len(terms)}")
    terms = [Fraction(t) for t in terms]

    def annihilates(op: ShiftOperator) -> bool:
        j_ord = op.order
        for j in range(len(terms) - j_ord):
            m = start_index + j
            acc = Fraction(0)
            for i, a in enumerate(op.coeffs):
                acc += a.evaluate(m) * terms[j + i]
            if acc != 0:
                return False
        return True

    for order in range(1, max_order + 1):
        usable = len(terms) - order
        train = usable - 10
        for deg in range(0, max_deg + 1):
            width = (order + 1) * (deg + 1)
            if train < width:
                continue
            rows = []
            for j in range(train):
                m = start_index + j
                row = []
                for i in range(order + 1):
                    val = terms[j + i]
                    power = Fraction(1)
                    for _ in range(deg + 1):
                        row.append(power * val)
                        power *= m
                rows.append(row)
            for vec in _nullspace_vectors(rows, width):
                coeffs = []
                for i in range(order + 1):
                    block = vec[i * (deg + 1): (i + 1) * (deg + 1)]
                    coeffs.append(Polynomial(block))
                if all(c.is_zero() for c in coeffs):
                    continue
                candidate = ShiftOperator(coeffs).primitive()
                if annihilates(candidate):
                    return candidate
    return None


def load_terms(path) -> list:
    """Read a term list: one rational per line, '#' starts a comment."""
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                values.append(Fraction(line))
            except (ValueError, ZeroDivisionError) as err:
                raise ValueError(f"{path}:{lineno}: bad term {line!r}") from err
    return values
