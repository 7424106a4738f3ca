"""Exact character arithmetic for the maps n -> z**n on the integers.

Three arithmetic classes are covered: |z| != 1 (exact Gaussian-rational
powers), roots of unity (exact residue arithmetic), and irrational rotations
(continued-fraction convergents giving exact rational interval enclosures of
frac(n * alpha)).  Floats never appear; undecidable interval questions raise
or report indeterminate rather than guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Tuple, Union

from orbitcert.errors import ConstraintKindError, InsufficientDepthError, PreconditionError
from orbitcert.exact import ComplexRational, rational_from_str, rational_to_str


@dataclass(frozen=True)
class OffCircle:
    """z with |z|**2 != 1 and z != 0; positions are exact powers."""

    z: ComplexRational

    def __post_init__(self):
        if self.z.is_zero():
            raise PreconditionError("z = 0 is excluded")
        if self.z.abs2() == 1:
            raise PreconditionError("|z| = 1 requires a root-of-unity or rotation character")

    def to_json(self) -> dict:
        return {"kind": "off_circle", "payload": {"z": self.z.to_json()}}


@dataclass(frozen=True)
class RootOfUnity:
    """exp(2*pi*i*r/q); positions are residues n*r mod q."""

    q: int
    r: int

    def __post_init__(self):
        if self.q < 2:
            raise PreconditionError("order q must be at least 2")
        if gcd(self.r % self.q, self.q) != 1:
            raise PreconditionError("rotation number must be coprime to q")

    def to_json(self) -> dict:
        return {"kind": "root_of_unity", "payload": {"q": self.q, "r": self.r}}


@dataclass(frozen=True)
class IrrationalRotation:
    """exp(2*pi*i*alpha), alpha in (0,1) known through a continued-fraction
    prefix [a1, a2, ...]; evaluations carry exact rational interval bounds."""

    cf: Tuple[int, ...]

    def __init__(self, cf):
        cf = tuple(int(a) for a in cf)
        if len(cf) < 2:
            raise PreconditionError("need at least two continued-fraction coefficients")
        if any(a < 1 for a in cf):
            raise PreconditionError("continued-fraction coefficients must be positive")
        object.__setattr__(self, "cf", cf)

    def convergents(self) -> List[Fraction]:
        ps, qs = [0, 1], [1, self.cf[0]]
        for a in self.cf[1:]:
            ps.append(a * ps[-1] + ps[-2])
            qs.append(a * qs[-1] + qs[-2])
        return [Fraction(p, q) for p, q in zip(ps, qs)]

    def alpha_interval(self) -> Tuple[Fraction, Fraction]:
        """Open interval certainly containing alpha, from the deepest
        convergent p/q and the mediant with its predecessor: the true value
        of any continuation lies strictly between them."""
        ps, qs = [0, 1], [1, self.cf[0]]
        for a in self.cf[1:]:
            ps.append(a * ps[-1] + ps[-2])
            qs.append(a * qs[-1] + qs[-2])
        last = Fraction(ps[-1], qs[-1])
        mediant = Fraction(ps[-1] + ps[-2], qs[-1] + qs[-2])
        return (last, mediant) if last < mediant else (mediant, last)

    def to_json(self) -> dict:
        return {"kind": "irrational_rotation", "payload": {"cf": list(self.cf)}}


Character = Union[OffCircle, RootOfUnity, IrrationalRotation]


def character_from_json(obj: dict) -> Character:
    kind = obj["kind"]
    payload = obj["payload"]
    if kind == "off_circle":
        return OffCircle(ComplexRational.from_json(payload["z"]))
    if kind == "root_of_unity":
        return RootOfUnity(int(payload["q"]), int(payload["r"]))
    if kind == "irrational_rotation":
        return IrrationalRotation(payload["cf"])
    raise ValueError(f"unknown character kind {kind!r}")


def char_position(ch: Character, n: int):
    """Position of the character at time n.

    OffCircle -> exact ComplexRational power; RootOfUnity -> exact residue;
    IrrationalRotation -> open rational interval containing frac(n * alpha),
    or InsufficientDepthError when the enclosure straddles an integer.
    """
    if isinstance(ch, OffCircle):
        return ch.z**n
    if isinstance(ch, RootOfUnity):
        return (n * ch.r) % ch.q
    if isinstance(ch, IrrationalRotation):
        return rotation_interval(ch, n)
    raise TypeError("not a character")


def rotation_interval(ch: IrrationalRotation, n: int) -> Tuple[Fraction, Fraction]:
    """Open interval containing frac(n * alpha), reduced into [0, 1)."""
    lo, hi = ch.alpha_interval()
    a, b = n * lo, n * hi
    if a > b:
        a, b = b, a
    fa, fb = a.__floor__(), b.__floor__()
    if fa != fb:
        # The enclosure of n*alpha straddles an integer; deeper convergents
        # shrink it at least geometrically (Fibonacci lower bound on q).
        needed = len(ch.cf) + max(2, abs(n).bit_length())
        raise InsufficientDepthError(needed)
    return a - fa, b - fa


# ---------------------------------------------------------------------------
# Constraints attached to builder goals.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Congruence:
    """Character residue constraint: the position n*r mod q must equal
    residue.  For rotation number 1 this is a congruence on the time itself."""

    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1 or not 0 <= self.residue < self.modulus:
            raise PreconditionError("residue must lie in [0, modulus)")

    def admits(self, ch: Character, n: int) -> bool:
        if not isinstance(ch, RootOfUnity) or ch.q != self.modulus:
            raise ConstraintKindError("congruence constraints require a matching root of unity")
        return char_position(ch, n) == self.residue

    def to_json(self) -> dict:
        return {"kind": "congruence", "payload": {"residue": self.residue, "modulus": self.modulus}}


@dataclass(frozen=True)
class Arc:
    """Arc [lo, hi) on the unit interval parameterizing the circle.

    Membership is asserted only when the whole position interval lies inside
    the arc; a straddling enclosure never certifies.
    """

    lo: Fraction
    hi: Fraction

    def __init__(self, lo, hi):
        lo, hi = Fraction(lo), Fraction(hi)
        if not (0 <= lo < hi <= 1):
            raise PreconditionError("arc must satisfy 0 <= lo < hi <= 1")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def admits(self, ch: Character, n: int) -> bool:
        if not isinstance(ch, IrrationalRotation):
            raise ConstraintKindError("arc constraints require an irrational rotation")
        try:
            a, b = rotation_interval(ch, n)
        except InsufficientDepthError:
            return False
        return self.lo <= a and b <= self.hi

    def to_json(self) -> dict:
        return {"kind": "arc", "payload": {"lo": rational_to_str(self.lo), "hi": rational_to_str(self.hi)}}


CharConstraint = Union[Congruence, Arc]


def constraint_from_json(obj: dict) -> CharConstraint:
    kind = obj["kind"]
    payload = obj["payload"]
    if kind == "congruence":
        return Congruence(int(payload["residue"]), int(payload["modulus"]))
    if kind == "arc":
        return Arc(rational_from_str(payload["lo"]), rational_from_str(payload["hi"]))
    raise ValueError(f"unknown constraint kind {kind!r}")


# ---------------------------------------------------------------------------
# Rational chord bounds on the circle.
# ---------------------------------------------------------------------------


def circular_distance(s: Fraction, t: Fraction) -> Fraction:
    """Arc distance on the circle of circumference 1."""
    d = (s - t) % 1
    return min(d, 1 - d)


def chord2_lower_bound(arc_dist: Fraction) -> Fraction:
    """Rational lower bound on |exp(2*pi*i*s) - exp(2*pi*i*t)|**2 when the
    arc distance between s and t is at least arc_dist.

    The chord length is 2*sin(pi*d) >= 4*d for d in [0, 1/2] (tight at both
    ends), so the squared chord is at least 16*d**2.
    """
    d = Fraction(arc_dist)
    if not 0 <= d <= Fraction(1, 2):
        raise PreconditionError("arc distance must lie in [0, 1/2]")
    return 16 * d * d


def arc_gap(a: Arc, b: Arc) -> Fraction:
    """Smallest circular distance between points of two arcs (closures)."""
    # Overlap test on representatives in [0, 1).
    if a.lo < b.hi and b.lo < a.hi:
        return Fraction(0)
    return min(
        circular_distance(x, y)
        for x in (a.lo, a.hi)
        for y in (b.lo, b.hi)
    )
