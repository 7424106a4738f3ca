import random
from fractions import Fraction

import pytest

from orbitcert.exact import ComplexRational
from orbitcert.measures import FiniteMeasure
from orbitcert.shift import SparseVector

SEED = 20260823


@pytest.fixture
def rng():
    return random.Random(SEED)


def rand_rational(rng, height=8):
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def rand_scalar(rng, height=8):
    return ComplexRational(rand_rational(rng, height), rand_rational(rng, height))


def rand_vector(rng, lo=-8, hi=8, height=6, max_terms=5):
    return SparseVector({rng.randint(lo, hi): rand_scalar(rng, height) for _ in range(rng.randint(1, max_terms))})


def rand_measure(rng, lo=-6, hi=6, height=6, max_terms=5):
    return FiniteMeasure({rng.randint(lo, hi): rand_scalar(rng, height) for _ in range(rng.randint(1, max_terms))})
