import random
from fractions import Fraction

import pytest

from holoreduce import Polynomial, ShiftOperator

N = Polynomial.variable()


def rand_fraction(rng, height=10, allow_zero=True):
    num = rng.randint(-height, height)
    while not allow_zero and num == 0:
        num = rng.randint(-height, height)
    return Fraction(num, rng.randint(1, height))


def rand_polynomial(rng, max_deg=4, height=10, nonzero=False, integer=True):
    deg = rng.randint(0, max_deg)
    draw = (lambda: Fraction(rng.randint(-height, height))) if integer \
        else (lambda: rand_fraction(rng, height))
    coeffs = [draw() for _ in range(deg + 1)]
    if nonzero:
        while coeffs[-1] == 0:
            coeffs[-1] = draw()
    return Polynomial(coeffs)


def rand_operator(rng, max_order=3, max_deg=3, height=5):
    order = rng.randint(1, max_order)
    coeffs = [rand_polynomial(rng, max_deg, height) for _ in range(order)]
    coeffs.append(rand_polynomial(rng, max_deg, height, nonzero=True))
    return ShiftOperator(coeffs)


@pytest.fixture
def rng():
    return random.Random(0x5EED)
