"""Cyclicity obstruction probe.

Given a non-zero measure of total mass zero and a finite family of test
functions, search for exact annihilators of the orbit pairings, reduce any
candidate through the successive-difference chain to a character
eigenfunction, and refute that character by a discontinuity witness.  The
result is stage-limited evidence, never a proof, and says so.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import List, Optional, Sequence, Tuple

from orbitcert.builder import StagePlan, realize
from orbitcert.characters import IrrationalRotation, OffCircle, RootOfUnity
from orbitcert.errors import NotEigenChainError, PreconditionError, UnsatisfiableGoalError
from orbitcert.exact import ComplexRational
from orbitcert.linalg import nullspace, row_reduce_basis
from orbitcert.measures import (
    CharacterFunction,
    ConstantFunction,
    FiniteMeasure,
    Polynomial,
    PullbackFunction,
    TableFunction,
    TestFunction,
    decompose,
    pair,
    pushforward,
    total_mass,
)
from orbitcert.shift import SparseVector
from orbitcert.witness import discontinuity_witness

DISCLAIMER = (
    "Stage-limited evidence: the family is finite and annihilation was checked "
    "only up to the stated stage; a 'no obstruction' verdict is not a proof."
)


class FunctionFamily:
    """Ordered list of test functions serving as candidate annihilators.

    Outside demo mode only certified-continuous kinds are allowed: constants
    and orbit pullbacks.  Demo mode admits tables and character rules for
    pedagogy; verdicts over demo families are flagged.
    """

    def __init__(self, members: Sequence[Tuple[str, TestFunction]], demo: bool = False):
        members = list(members)
        if not members:
            raise PreconditionError("family must be non-empty")
        if not demo:
            for name, fn in members:
                if not fn.certified:
                    raise PreconditionError(
                        f"member {name!r} of kind {fn.kind!r} is not certified-continuous; "
                        "use demo mode"
                    )
        self.members = members
        self.demo = demo

    def __len__(self):
        return len(self.members)

    @property
    def certified(self) -> bool:
        return all(fn.certified for _, fn in self.members)

    def constant_indices(self) -> List[int]:
        return [i for i, (_, fn) in enumerate(self.members) if isinstance(fn, ConstantFunction)]

    def to_json(self) -> dict:
        return {
            "demo": self.demo,
            "members": [{"name": name, "fn": fn.to_json()} for name, fn in self.members],
        }

    @staticmethod
    def from_json(obj: dict, x: Optional[SparseVector] = None) -> "FunctionFamily":
        return FunctionFamily(
            [(m["name"], TestFunction.from_json(m["fn"], x=x)) for m in obj["members"]],
            demo=bool(obj["demo"]),
        )


def pullback_family(plan: StagePlan, vectors: Sequence[Tuple[str, SparseVector]]) -> FunctionFamily:
    """Family of orbit pullbacks of seminorm functionals for the plan's x."""
    x = realize(plan)
    return FunctionFamily([(name, PullbackFunction(x, w)) for name, w in vectors])


def orbit_matrix(mu: FiniteMeasure, family: FunctionFamily, N: int) -> List[List[ComplexRational]]:
    """Row i, column n: the pairing of family[i] with the n-th pushforward."""
    if N < 0:
        raise PreconditionError("stage must be non-negative")
    rows = []
    for _, fn in family.members:
        row = [pair(fn, pushforward(mu, n)) for n in range(N + 1)]
        rows.append(row)
    return rows


def annihilator_basis(
    M: List[List[ComplexRational]], family: FunctionFamily
) -> List[List[ComplexRational]]:
    """Exact basis of coefficient vectors c with sum_i c_i M[i][n] = 0 for
    all n, quotiented by the span of constant members (constants always
    annihilate the zero-mass hyperplane and are not obstructions)."""
    F = len(family)
    columns = [[M[i][n] for i in range(F)] for n in range(len(M[0]))] if M and M[0] else []
    basis = nullspace(columns, F)
    const = family.constant_indices()
    if not const:
        return row_reduce_basis(basis)
    const_set = set(const)
    projected = []
    for v in basis:
        w = [ComplexRational(0) if i in const_set else c for i, c in enumerate(v)]
        projected.append(w)
    return row_reduce_basis(projected)


# ---------------------------------------------------------------------------
# Eigen chain extraction.
# ---------------------------------------------------------------------------


def eigen_extract(
    g: TestFunction, roots: Sequence[ComplexRational], window: Tuple[int, int]
) -> Tuple[TestFunction, ComplexRational]:
    """Run the successive-difference chain through the supplied roots.

    Forms the chain g_0 = g, g_{k+1}(n) = g_k(n+1) - roots[k] * g_k(n) on a
    window that shrinks by one per step.  When some g_{k+1} vanishes on its
    window, the last non-vanishing g_k is forced into the eigenfunction shape
    h(n) = z**n * h(0) with z = roots[k]; this shape is verified across the
    window and the result returned as an exact character rule.
    """
    lo, hi = window
    if hi - lo < len(roots) + 1:
        raise PreconditionError("window too small for the chain")
    values = [g(n) for n in range(lo, hi + 1)]
    for k, z in enumerate(roots):
        z = z if isinstance(z, ComplexRational) else ComplexRational(z)
        nxt = [values[i + 1] - z * values[i] for i in range(len(values) - 1)]
        if all(v.is_zero() for v in nxt):
            h_table = values
            h_hi = hi - k
            if z.is_zero():
                raise NotEigenChainError(nxt, "forcing eigenvalue 0 is impossible")
            h0 = h_table[0] * (z ** (-lo))
            for i, v in enumerate(h_table):
                if v != h0 * (z ** (lo + i)):
                    raise NotEigenChainError(h_table, "chain does not have character shape")
            if h0.is_zero():
                raise NotEigenChainError(h_table, "vanishing chain stage")
            return CharacterFunction(h0, z), z
        values = nxt
    raise NotEigenChainError(values)


# ---------------------------------------------------------------------------
# Exact root extraction for decomposition polynomials.
# ---------------------------------------------------------------------------


def _sqrt_fraction(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def gaussian_sqrt(w: ComplexRational) -> Optional[ComplexRational]:
    """Exact square root inside the Gaussian rationals, if one exists."""
    a, b = w.re, w.im
    if b == 0:
        s = _sqrt_fraction(a)
        if s is not None:
            return ComplexRational(s)
        s = _sqrt_fraction(-a)
        if s is not None:
            return ComplexRational(0, s)
        return None
    n = _sqrt_fraction(a * a + b * b)
    if n is None:
        return None
    c2 = (a + n) / 2
    c = _sqrt_fraction(c2)
    if c is None or c == 0:
        return None
    d = b / (2 * c)
    return ComplexRational(c, d)


def poly_roots_exact(p: Polynomial) -> Optional[List[ComplexRational]]:
    """Roots when exactly representable: zero roots are factored out, the
    remainder is solved by radicals up to degree 2 with a Gaussian-rational
    discriminant square root.  None means 'unresolved'."""
    if p.is_zero():
        return None
    coeffs = list(p.coeffs)
    roots: List[ComplexRational] = []
    while coeffs and coeffs[0].is_zero():
        roots.append(ComplexRational(0))
        coeffs.pop(0)
    deg = len(coeffs) - 1
    if deg == 0:
        return roots
    if deg == 1:
        roots.append((ComplexRational(0) - coeffs[0]) / coeffs[1])
        return roots
    if deg == 2:
        c0, c1, c2 = coeffs
        disc = c1 * c1 - 4 * c2 * c0
        s = gaussian_sqrt(disc)
        if s is None:
            return None
        two_a = 2 * c2
        r1 = ((ComplexRational(0) - c1) - s) / two_a
        r2 = ((ComplexRational(0) - c1) + s) / two_a
        roots.extend(sorted([r1, r2], key=lambda z: (z.re, z.im)))
        return roots
    return None


# ---------------------------------------------------------------------------
# The full refutation chain.
# ---------------------------------------------------------------------------


@dataclass
class CandidateOutcome:
    coefficients: List[ComplexRational]
    status: str  # refuted | reduces-to-constant | unresolved: ... | not-an-eigen-chain
    eigenvalue: Optional[ComplexRational] = None
    witness_times: Optional[Tuple[int, int]] = None
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "coefficients": [c.to_json() for c in self.coefficients],
            "status": self.status,
            "eigenvalue": None if self.eigenvalue is None else self.eigenvalue.to_json(),
            "witness_times": None if self.witness_times is None else list(self.witness_times),
            "detail": self.detail,
        }


@dataclass
class ObstructionReport:
    stage: int
    shift_order: int  # the l of the decomposition
    polynomial: Polynomial
    basis: List[List[ComplexRational]]
    outcomes: List[CandidateOutcome]
    verdict: str
    certified: bool
    disclaimer: str = DISCLAIMER
    inputs: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "stage": self.stage,
            "shift_order": self.shift_order,
            "polynomial": self.polynomial.to_json(),
            "basis": [[c.to_json() for c in v] for v in self.basis],
            "outcomes": [o.to_json() for o in self.outcomes],
            "verdict": self.verdict,
            "certified": self.certified,
            "disclaimer": self.disclaimer,
            "inputs": self.inputs,
        }


def cyclicity_report(
    mu: FiniteMeasure, family: FunctionFamily, plan: StagePlan, N: int
) -> ObstructionReport:
    """Decompose, build the orbit matrix, extract annihilators modulo
    constants, and run the eigen-chain refutation on each candidate."""
    if not mu:
        raise PreconditionError("measure must be non-zero")
    if not total_mass(mu).is_zero():
        raise PreconditionError("measure must have total mass zero")
    if len(family) == 0:
        raise PreconditionError("family must be non-empty")

    l, p = decompose(mu)
    M = orbit_matrix(mu, family, N)
    basis = annihilator_basis(M, family)

    outcomes: List[CandidateOutcome] = []
    roots = poly_roots_exact(p)
    window = (0, N)
    for coeffs in basis:
        if roots is None:
            outcomes.append(CandidateOutcome(coeffs, "unresolved: root extraction"))
            continue
        combined = TableFunction(
            {
                n: sum(
                    (c * fn(n) for c, (_, fn) in zip(coeffs, family.members)),
                    ComplexRational(0),
                )
                for n in range(window[0], window[1] + 1)
            }
        )
        try:
            h, z = eigen_extract(combined, roots, window)
        except NotEigenChainError as exc:
            outcomes.append(CandidateOutcome(coeffs, "not-an-eigen-chain", detail=str(exc)))
            continue
        if z == ComplexRational(1):
            outcomes.append(
                CandidateOutcome(coeffs, "reduces-to-constant", eigenvalue=z)
            )
            continue
        character = None
        if z.abs2() != 1:
            character = OffCircle(z)
        elif z == ComplexRational(-1):
            character = RootOfUnity(2, 1)
        elif z == ComplexRational(0, 1):
            character = RootOfUnity(4, 1)
        elif z == ComplexRational(0, -1):
            character = RootOfUnity(4, 3)
        if character is None:
            outcomes.append(
                CandidateOutcome(coeffs, "unresolved: character class", eigenvalue=z)
            )
            continue
        try:
            _, report = discontinuity_witness(
                plan, character, [SparseVector.basis(0)], Fraction(1, 2), None
            )
        except UnsatisfiableGoalError as exc:
            outcomes.append(
                CandidateOutcome(coeffs, "unresolved: witness search", eigenvalue=z, detail=str(exc))
            )
            continue
        outcomes.append(
            CandidateOutcome(
                coeffs,
                "refuted" if report.valid else "unresolved: witness invalid",
                eigenvalue=z,
                witness_times=report.times,
            )
        )

    clean = not basis or all(o.status in ("refuted", "reduces-to-constant") for o in outcomes)
    verdict = (
        f"no obstruction found at stage {N}"
        if clean
        else f"unresolved candidates remain at stage {N}"
    )
    return ObstructionReport(
        stage=N,
        shift_order=l,
        polynomial=p,
        basis=basis,
        outcomes=outcomes,
        verdict=verdict,
        certified=family.certified,
        inputs={
            "measure": mu.to_json(),
            "family": family.to_json(),
            "plan": plan.to_json(),
            "stage": N,
        },
    )


def replay_report(obj: dict) -> ObstructionReport:
    """Re-run a serialized report from its embedded inputs."""
    inputs = obj["inputs"]
    plan = StagePlan.from_json(inputs["plan"])
    x = realize(plan)
    family = FunctionFamily.from_json(inputs["family"], x=x)
    mu = FiniteMeasure.from_json(inputs["measure"])
    return cyclicity_report(mu, family, plan, int(inputs["stage"]))
