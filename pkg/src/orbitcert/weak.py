"""Basic weak-topology neighborhoods of l2(Z) and a canonical countable base.

A basic neighborhood is (center, finite list of test vectors, rational eps);
membership means every seminorm gap |<u - center, w>| is strictly below eps,
decided on squared quantities so the comparison stays rational.

The canonical base is enumerated in height classes: at height h the centers
have support in [-h, h] with Gaussian-rational coefficients of height at most
h, the tests are canonical basis vectors with index in [-h, h], and eps = 1/m
with m <= h.  Within a height class the order is (test subset, center, eps)
with the mixed-radix layout documented below; classes are concatenated in
increasing h.  A spec of height h' < h reappears inside class h, so the
enumeration is surjective and injective within each class (not globally).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

from orbitcert.errors import PreconditionError
from orbitcert.exact import ComplexRational, rational_from_str, rational_height, rational_to_str
from orbitcert.shift import SparseVector, inner


@dataclass(frozen=True)
class NeighborhoodSpec:
    center: SparseVector
    tests: Tuple[SparseVector, ...]
    eps: Fraction

    def __init__(self, center: SparseVector, tests, eps):
        eps = Fraction(eps)
        tests = tuple(tests)
        if eps <= 0:
            raise PreconditionError("eps must be positive")
        if not tests:
            raise PreconditionError("tests must be non-empty")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "tests", tests)
        object.__setattr__(self, "eps", eps)

    def radius(self) -> int:
        """Largest |index| touched by the center or any test vector."""
        r = self.center.max_abs_index()
        for w in self.tests:
            r = max(r, w.max_abs_index())
        return r

    def to_json(self) -> dict:
        return {
            "center": self.center.to_json(),
            "tests": [w.to_json() for w in self.tests],
            "eps": rational_to_str(self.eps),
        }

    @staticmethod
    def from_json(obj: dict) -> "NeighborhoodSpec":
        return NeighborhoodSpec(
            SparseVector.from_json(obj["center"]),
            [SparseVector.from_json(w) for w in obj["tests"]],
            rational_from_str(obj["eps"]),
        )


def weak_gap2(u: SparseVector, v: SparseVector, w: SparseVector) -> Fraction:
    """Squared seminorm gap |<u - v, w>|**2, exact."""
    return inner(u - v, w).abs2()


def in_neighborhood(u: SparseVector, spec: NeighborhoodSpec) -> bool:
    """Strict membership: every squared gap below eps**2, exact comparison."""
    eps2 = spec.eps * spec.eps
    return all(weak_gap2(u, spec.center, w) < eps2 for w in spec.tests)


# ---------------------------------------------------------------------------
# Canonical enumeration.
# ---------------------------------------------------------------------------


def _spiral(h: int) -> List[int]:
    """Index order 0, -1, 1, -2, 2, ..., -h, h."""
    out = [0]
    for k in range(1, h + 1):
        out.extend([-k, k])
    return out


@lru_cache(maxsize=None)
def _scalars(h: int) -> Tuple[Fraction, ...]:
    """Rationals of height <= h: 0 first, then sorted by (height, value)."""
    vals = set()
    for q in range(1, h + 1):
        for p in range(-h, h + 1):
            x = Fraction(p, q)
            if rational_height(x) <= h:
                vals.add(x)
    vals.discard(Fraction(0))
    ordered = sorted(vals, key=lambda x: (rational_height(x), x))
    return (Fraction(0),) + tuple(ordered)


@lru_cache(maxsize=None)
def _gaussians(h: int) -> Tuple[ComplexRational, ...]:
    """Gaussian rationals of height <= h, ordered lexicographically in the
    scalar order of their (re, im) parts; the zero scalar comes first."""
    sc = _scalars(h)
    return tuple(ComplexRational(re, im) for re in sc for im in sc)


@lru_cache(maxsize=None)
def _gaussian_rank(h: int):
    return {(z.re, z.im): r for r, z in enumerate(_gaussians(h))}


@lru_cache(maxsize=None)
def _subsets(h: int) -> Tuple[Tuple[int, ...], ...]:
    """Non-empty subsets of the spiral index list, ordered by (size, lex)."""
    spiral = _spiral(h)
    out = []
    for size in range(1, len(spiral) + 1):
        out.extend(itertools.combinations(spiral, size))
    return tuple(out)


@lru_cache(maxsize=None)
def _subset_rank(h: int):
    return {s: r for r, s in enumerate(_subsets(h))}


def _class_dims(h: int) -> Tuple[int, int, int]:
    """(number of test subsets, number of centers, number of eps values)."""
    n_slots = 2 * h + 1
    n_vals = len(_gaussians(h))
    return (2**n_slots - 1, n_vals**n_slots, h)


def class_size(h: int) -> int:
    s, c, m = _class_dims(h)
    return s * c * m


def class_offset(h: int) -> int:
    """Index at which height class h starts (h >= 1)."""
    return sum(class_size(j) for j in range(1, h))


def enumerate_base(i: int) -> NeighborhoodSpec:
    """The i-th spec of the canonical base (deterministic, documented order).

    Within height class h the rank decomposes as
    rank = subset_rank * (centers * h) + center_rank * h + (eps_rank)
    where center_rank is read in mixed radix over the spiral slots (slot 0
    most significant, values ranked by the documented Gaussian order) and
    eps_rank = m - 1 for eps = 1/m.
    """
    if i < 0:
        raise PreconditionError("base index must be non-negative")
    h = 1
    rank = i
    while rank >= class_size(h):
        rank -= class_size(h)
        h += 1
    n_subsets, n_centers, n_eps = _class_dims(h)
    subset_rank, rest = divmod(rank, n_centers * n_eps)
    center_rank, eps_rank = divmod(rest, n_eps)

    spiral = _spiral(h)
    values = _gaussians(h)
    digits = []
    r = center_rank
    for _ in spiral:
        r, d = divmod(r, len(values))
        digits.append(d)
    digits.reverse()  # slot 0 is most significant
    center = SparseVector({idx: values[d] for idx, d in zip(spiral, digits)})

    tests = tuple(SparseVector.basis(k) for k in _subsets(h)[subset_rank])
    eps = Fraction(1, eps_rank + 1)
    return NeighborhoodSpec(center, tests, eps)


def spec_height(spec: NeighborhoodSpec) -> int:
    """Smallest h whose height class contains the spec; error if the spec is
    not of canonical shape (tests must be single basis vectors, eps = 1/m)."""
    from orbitcert.exact import gaussian_height

    if spec.eps.numerator != 1:
        raise PreconditionError("canonical specs have eps = 1/m")
    h = spec.eps.denominator
    h = max(h, spec.center.max_abs_index())
    for c in spec.center.entries.values():
        h = max(h, gaussian_height(c))
    for w in spec.tests:
        supp = w.support()
        if len(supp) != 1 or w[supp[0]] != ComplexRational(1):
            raise PreconditionError("canonical specs use basis-vector tests")
        h = max(h, abs(supp[0]))
    return max(h, 1)


def spec_index(spec: NeighborhoodSpec, h: int | None = None) -> int:
    """Index of a canonical-shape spec inside height class h (default: its
    minimal height class).  Inverse of enumerate_base on that class."""
    if h is None:
        h = spec_height(spec)
    elif h < spec_height(spec):
        raise PreconditionError("spec does not fit in the requested height class")
    n_subsets, n_centers, n_eps = _class_dims(h)
    spiral = _spiral(h)
    vrank = _gaussian_rank(h)
    center_rank = 0
    for idx in spiral:
        c = spec.center[idx]
        center_rank = center_rank * len(_gaussians(h)) + vrank[(c.re, c.im)]
    key = tuple(w.support()[0] for w in spec.tests)
    order = {idx: pos for pos, idx in enumerate(spiral)}
    key = tuple(sorted(key, key=lambda k: order[k]))
    subset_rank = _subset_rank(h)[key]
    eps_rank = spec.eps.denominator - 1
    rank = subset_rank * (n_centers * n_eps) + center_rank * n_eps + eps_rank
    return class_offset(h) + rank
