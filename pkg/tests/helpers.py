"""Shared generators for randomized identity tests.

Everything is seeded, so failures reproduce; coefficients are small
rationals to keep exact arithmetic fast.
"""

import random
from fractions import Fraction

from opcalc import (
    D,
    Delta,
    J,
    Poly,
    PolyInX,
    SeriesInD,
    Shift,
    SSeries,
    Substitute,
    X,
)

COEFFS = [Fraction(n, d) for n in range(-3, 4) for d in (1, 2, 3)]
NONZERO = [c for c in COEFFS if c != 0]


def random_poly(rng: random.Random, max_deg: int, nonzero: bool = False) -> Poly:
    deg = rng.randint(0, max_deg)
    coeffs = [rng.choice(COEFFS) for _ in range(deg + 1)]
    p = Poly(coeffs)
    if nonzero and p.is_zero():
        return Poly.monomial(deg, rng.choice(NONZERO))
    return p


def random_atom(rng: random.Random):
    kind = rng.randrange(8)
    if kind == 0:
        return D()
    if kind == 1:
        return X()
    if kind == 2:
        return J()
    if kind == 3:
        return Delta()
    if kind == 4:
        return Shift(rng.choice(NONZERO))
    if kind == 5:
        return PolyInX(random_poly(rng, 2))
    if kind == 6:
        return Substitute(random_poly(rng, 2, nonzero=True))
    tpoly = random_poly(rng, 3)
    trunc = max(int(tpoly.degree), 0) if not tpoly.is_zero() else 0
    return SeriesInD(SSeries.from_poly(tpoly, trunc), exact=True)


def random_operator(rng: random.Random, depth: int = 2):
    """Random expression tree over the DSL atom set; exact at any degree."""
    if depth == 0 or rng.random() < 0.4:
        return random_atom(rng)
    kind = rng.randrange(3)
    if kind == 0:
        return random_operator(rng, depth - 1) + random_operator(rng, depth - 1)
    if kind == 1:
        return random_operator(rng, depth - 1) * random_operator(rng, depth - 1)
    return rng.choice(NONZERO) * random_operator(rng, depth - 1)


def random_dx_atom(rng: random.Random):
    """Atoms whose diagonals are polynomial: DX-operators by construction."""
    kind = rng.randrange(5)
    if kind == 0:
        return D()
    if kind == 1:
        return X()
    if kind == 2:
        return Shift(rng.choice([Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2)]))
    if kind == 3:
        return PolyInX(random_poly(rng, 2, nonzero=True))
    tpoly = random_poly(rng, 3, nonzero=True)
    trunc = max(int(tpoly.degree), 0)
    return SeriesInD(SSeries.from_poly(tpoly, trunc), exact=True)


def random_dx_operator(rng: random.Random):
    """A DX-operator: an atom, a sum, a scalar multiple, or one composition."""
    kind = rng.randrange(4)
    if kind == 0:
        return random_dx_atom(rng)
    if kind == 1:
        return random_dx_atom(rng) + random_dx_atom(rng)
    if kind == 2:
        return rng.choice(NONZERO) * random_dx_atom(rng)
    return random_dx_atom(rng) * random_dx_atom(rng)
