import random
from fractions import Fraction

import pytest

from jetflow import VectorFieldJet, reduced_hamiltonian
from jetflow.poly import EXACT, MultiPoly, PolyMap, monomials_of_degree


def rand_fraction(rng, lo=-5, hi=5):
    num = rng.randint(lo, hi)
    den = rng.randint(1, 3)
    return Fraction(num, den)


def rand_poly(rng, nvars, max_deg, min_deg=0, density=0.6, mode=EXACT, nonzero=False):
    while True:
        terms = {}
        for d in range(min_deg, max_deg + 1):
            for mono in monomials_of_degree(nvars, d):
                if rng.random() < density:
                    c = rand_fraction(rng)
                    if c:
                        terms[mono] = float(c) if mode == "float" else c
        p = MultiPoly(nvars, terms, mode)
        if not nonzero or not p.is_zero():
            return p


def rand_homog(rng, nvars, d, nonzero=True):
    while True:
        terms = {m: rand_fraction(rng) for m in monomials_of_degree(nvars, d)
                 if rng.random() < 0.7}
        terms = {m: c for m, c in terms.items() if c}
        p = MultiPoly(nvars, terms)
        if not nonzero or not p.is_zero():
            return p.homogeneous_part(d)


def rand_field(rng, nvars, p, extra=2, max_coord_deg=None):
    """Random field with flat order exactly p."""
    top = max_coord_deg if max_coord_deg is not None else p + extra
    while True:
        coords = [rand_poly(rng, nvars, top, min_deg=p, density=0.5)
                  for _ in range(nvars)]
        fmap = PolyMap(coords)
        if any(not c.homogeneous_part(p).is_zero() for c in coords):
            return VectorFieldJet(fmap)


@pytest.fixture
def xy():
    return MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)


@pytest.fixture
def quartic_field():
    """Reduced Hamiltonian of (x^2+y^2)(x^2+2y^2); flat order 3."""
    x = MultiPoly.variable(2, 0)
    y = MultiPoly.variable(2, 1)
    g = (x ** 2 + y ** 2) * (x ** 2 + y ** 2 * 2)
    _, field = reduced_hamiltonian(g)
    return VectorFieldJet(field)
