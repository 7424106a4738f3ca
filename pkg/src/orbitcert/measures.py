"""Finite-support measures on Z, test functions, and the shift lifting.

Measures are formal finite linear combinations of point masses delta_n; the
translation n -> n + 1 lifts to a pushforward on measures and, dually, to a
shift on test functions.  The pairing of a function with a measure is the
finite sum of coefficient * value and is bilinear, with no conjugation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from orbitcert.errors import EvaluationDomainError, PreconditionError
from orbitcert.exact import ComplexRational, rational_from_str, rational_to_str
from orbitcert.shift import SparseVector, inner, shift_apply


class FiniteMeasure:
    """Finite association n -> coefficient; zero coefficients are pruned."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Dict[int, ComplexRational] | None = None):
        cleaned = {}
        if coeffs:
            for n, c in coeffs.items():
                if not isinstance(c, ComplexRational):
                    c = ComplexRational(c)
                if not c.is_zero():
                    cleaned[int(n)] = c
        self.coeffs = cleaned

    @staticmethod
    def delta(n: int) -> "FiniteMeasure":
        return FiniteMeasure({n: ComplexRational(1)})

    def __getitem__(self, n: int) -> ComplexRational:
        return self.coeffs.get(n, ComplexRational(0))

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteMeasure) and self.coeffs == other.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def support(self) -> List[int]:
        return sorted(self.coeffs)

    def to_json(self) -> dict:
        return {
            "type": "measure",
            "entries": [
                [n, rational_to_str(c.re), rational_to_str(c.im)]
                for n, c in sorted(self.coeffs.items())
            ],
        }

    @staticmethod
    def from_json(obj: dict) -> "FiniteMeasure":
        if obj.get("type") != "measure":
            raise ValueError("expected a measure record")
        return FiniteMeasure(
            {
                int(n): ComplexRational(rational_from_str(re), rational_from_str(im))
                for n, re, im in obj["entries"]
            }
        )

    def __repr__(self) -> str:
        items = ", ".join(f"{n}: {c!r}" for n, c in sorted(self.coeffs.items()))
        return f"FiniteMeasure({{{items}}})"


def measure_combine(
    a: ComplexRational, mu: FiniteMeasure, b: ComplexRational, nu: FiniteMeasure
) -> FiniteMeasure:
    """a*mu + b*nu with zero coefficients pruned."""
    out: Dict[int, ComplexRational] = {}
    for n, c in mu.coeffs.items():
        out[n] = a * c
    for n, c in nu.coeffs.items():
        out[n] = out.get(n, ComplexRational(0)) + b * c
    return FiniteMeasure(out)


def total_mass(mu: FiniteMeasure) -> ComplexRational:
    """Sum of all coefficients; mu lies in the zero-mass hyperplane iff 0."""
    total = ComplexRational(0)
    for c in mu.coeffs.values():
        total = total + c
    return total


def pushforward(mu: FiniteMeasure, k: int) -> FiniteMeasure:
    """k-th power of the translation lifting: coefficient moves n -> n + k."""
    return FiniteMeasure({n + k: c for n, c in mu.coeffs.items()})


# ---------------------------------------------------------------------------
# Test functions: a closed union of four exactly evaluable representations,
# so that every certificate is replayable from files.
# ---------------------------------------------------------------------------


class TestFunction:
    """Base for the closed union; subclasses implement __call__ and shift."""

    kind = "abstract"
    certified = False  # continuity on the embedded topology is certified

    def __call__(self, n: int) -> ComplexRational:
        raise NotImplementedError

    def shift(self, k: int) -> "TestFunction":
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_json(obj: dict, x: Optional[SparseVector] = None) -> "TestFunction":
        kind = obj["kind"]
        payload = obj["payload"]
        if kind == "table":
            return TableFunction(
                {
                    int(n): ComplexRational(rational_from_str(re), rational_from_str(im))
                    for n, re, im in payload["values"]
                }
            )
        if kind == "constant":
            return ConstantFunction(ComplexRational.from_json(payload["value"]))
        if kind == "character":
            return CharacterFunction(
                ComplexRational.from_json(payload["scale"]),
                ComplexRational.from_json(payload["base"]),
            )
        if kind == "pullback":
            if x is None:
                raise PreconditionError("pullback function needs a realized vector context")
            return PullbackFunction(
                x,
                SparseVector.from_json(payload["w"]),
                int(payload.get("offset", 0)),
            )
        raise ValueError(f"unknown test-function kind {kind!r}")


class TableFunction(TestFunction):
    """Finite table n -> value; evaluation outside the table is an error.

    Tables carry no continuity certificate and are demo-only in verdicts.
    """

    kind = "table"
    certified = False

    def __init__(self, values: Dict[int, ComplexRational]):
        self.values = {int(n): v for n, v in values.items()}

    def __call__(self, n: int) -> ComplexRational:
        try:
            return self.values[n]
        except KeyError:
            raise EvaluationDomainError(n) from None

    def shift(self, k: int) -> "TableFunction":
        return TableFunction({n - k: v for n, v in self.values.items()})

    def domain(self) -> List[int]:
        return sorted(self.values)

    def to_json(self) -> dict:
        return {
            "kind": "table",
            "payload": {
                "values": [
                    [n, rational_to_str(v.re), rational_to_str(v.im)]
                    for n, v in sorted(self.values.items())
                ]
            },
        }


class ConstantFunction(TestFunction):
    kind = "constant"
    certified = True

    def __init__(self, value: ComplexRational):
        self.value = value if isinstance(value, ComplexRational) else ComplexRational(value)

    def __call__(self, n: int) -> ComplexRational:
        return self.value

    def shift(self, k: int) -> "ConstantFunction":
        return ConstantFunction(self.value)

    def to_json(self) -> dict:
        return {"kind": "constant", "payload": {"value": self.value.to_json()}}


class CharacterFunction(TestFunction):
    """The rule n -> scale * z**n.  Shifting scales by z**k (eigen-relation)."""

    kind = "character"
    certified = False  # this is exactly the kind of map the workbench refutes

    def __init__(self, scale: ComplexRational, base: ComplexRational):
        self.scale = scale if isinstance(scale, ComplexRational) else ComplexRational(scale)
        self.base = base if isinstance(base, ComplexRational) else ComplexRational(base)

    def __call__(self, n: int) -> ComplexRational:
        return self.scale * (self.base**n)

    def shift(self, k: int) -> "CharacterFunction":
        return CharacterFunction(self.scale * (self.base**k), self.base)

    def to_json(self) -> dict:
        return {
            "kind": "character",
            "payload": {"scale": self.scale.to_json(), "base": self.base.to_json()},
        }


class PullbackFunction(TestFunction):
    """The rule n -> <shift^(n+offset) x, w> for a stored vector w.

    These are the certified-continuous functions on the embedded topology:
    they are pullbacks of weak-topology seminorm functionals along the orbit.
    """

    kind = "pullback"
    certified = True

    def __init__(self, x: SparseVector, w: SparseVector, offset: int = 0):
        self.x = x
        self.w = w
        self.offset = offset

    def __call__(self, n: int) -> ComplexRational:
        return inner(shift_apply(self.x, n + self.offset), self.w)

    def shift(self, k: int) -> "PullbackFunction":
        return PullbackFunction(self.x, self.w, self.offset + k)

    def to_json(self) -> dict:
        return {
            "kind": "pullback",
            "payload": {"w": self.w.to_json(), "offset": self.offset},
        }


def pair(g: TestFunction, mu: FiniteMeasure) -> ComplexRational:
    """The dual pairing: sum over the support of coefficient * g(point)."""
    total = ComplexRational(0)
    for n, c in sorted(mu.coeffs.items()):
        total = total + c * g(n)
    return total


def dual_shift(g: TestFunction, k: int) -> TestFunction:
    """The dual of the pushforward: the result evaluates to g(n + k)."""
    return g.shift(k)


# ---------------------------------------------------------------------------
# Polynomials in the shift lifting and the decomposition of a measure.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Polynomial:
    """Coefficient list, constant term first; trailing zeros stripped."""

    coeffs: Tuple[ComplexRational, ...]

    def __init__(self, coeffs):
        cs = [c if isinstance(c, ComplexRational) else ComplexRational(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_json(self) -> list:
        return [c.to_json() for c in self.coeffs]

    @staticmethod
    def from_json(obj: list) -> "Polynomial":
        return Polynomial([ComplexRational.from_json(c) for c in obj])


def apply_poly(p: Polynomial, mu: FiniteMeasure) -> FiniteMeasure:
    """Evaluate the polynomial in the pushforward on a measure."""
    out = FiniteMeasure()
    for j, c in enumerate(p.coeffs):
        out = measure_combine(ComplexRational(1), out, c, pushforward(mu, j))
    return out


def decompose(mu: FiniteMeasure) -> Tuple[int, Polynomial]:
    """Write mu as p applied to delta_{-l} with the symmetric support bound.

    l = max(|min support|, |max support|) and the j-th coefficient of p is
    the coefficient of delta_{j-l} in mu, so the round trip through
    apply_poly(p, delta_{-l}) is exact by construction.
    """
    if not mu:
        raise PreconditionError("cannot decompose the zero measure")
    supp = mu.support()
    l = max(abs(supp[0]), abs(supp[-1]))
    coeffs = [mu[j - l] for j in range(2 * l + 1)]
    return l, Polynomial(coeffs)
