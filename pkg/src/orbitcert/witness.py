"""Discontinuity witnesses and joint density probes for characters.

A witness is a pair of certified orbit hits of one shared weak neighborhood
whose character positions are provably separated: the checkable kernel of the
argument that n -> z**n cannot be continuous on the embedded topology.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from orbitcert.builder import (
    ConstrainedHitGoal,
    HitCertificate,
    HitGoal,
    StagePlan,
    certify,
    plan_extend,
)
from orbitcert.characters import (
    Arc,
    CharConstraint,
    Character,
    Congruence,
    IrrationalRotation,
    OffCircle,
    RootOfUnity,
    arc_gap,
    character_from_json,
    chord2_lower_bound,
    circular_distance,
)
from orbitcert.errors import ConstraintKindError, UnsatisfiableGoalError
from orbitcert.exact import rational_from_str, rational_to_str
from orbitcert.shift import SparseVector
from orbitcert.weak import NeighborhoodSpec

# Arcs used for rotation witnesses: separated by 3/8 of a turn, giving the
# rational chord bound 16 * (3/8)**2 = 9/4 on the squared separation.
_WITNESS_ARCS = (Arc(Fraction(0), Fraction(1, 8)), Arc(Fraction(1, 2), Fraction(5, 8)))


@dataclass(frozen=True)
class WitnessReport:
    character: Character
    times: Tuple[int, int]
    spec: NeighborhoodSpec
    delta: Optional[Fraction]
    separation2: Fraction  # exact lower bound on |z**n - z**m|**2
    certificates: Tuple[HitCertificate, HitCertificate]
    plan: StagePlan

    @property
    def valid(self) -> bool:
        ok = all(c.valid for c in self.certificates)
        if self.delta is not None:
            ok = ok and self.separation2 >= self.delta * self.delta
        return ok and self.separation2 > 0

    def to_json(self) -> dict:
        return {
            "character": self.character.to_json(),
            "times": list(self.times),
            "spec": self.spec.to_json(),
            "delta": None if self.delta is None else rational_to_str(self.delta),
            "separation2": rational_to_str(self.separation2),
            "certificates": [c.to_json() for c in self.certificates],
            "valid": self.valid,
            "plan": self.plan.to_json(),
        }


def _two_new_certs(plan: StagePlan) -> Tuple[HitCertificate, HitCertificate]:
    certs = certify(plan)
    return certs[-2], certs[-1]


def discontinuity_witness(
    plan: StagePlan,
    ch: Character,
    tests: List[SparseVector],
    eps: Fraction,
    delta: Optional[Fraction] = None,
) -> Tuple[StagePlan, WitnessReport]:
    """Schedule two hits of one neighborhood with separated character values.

    delta = None asks only for a positive exact separation; otherwise the
    certified separation lower bound must reach delta**2.
    """
    eps = Fraction(eps)
    if delta is not None:
        delta = Fraction(delta)
        if delta <= 0:
            raise ValueError("delta must be positive")
    spec = NeighborhoodSpec(SparseVector(), tests, eps)

    if isinstance(ch, OffCircle):
        plan1 = plan_extend(plan, HitGoal(spec))
        m = plan1.blocks[-1].hit_time
        zm = ch.z**m
        if delta is None:
            admissible = lambda n: not (ch.z**n - zm).is_zero()
        else:
            d2 = delta * delta
            admissible = lambda n: (ch.z**n - zm).abs2() >= d2
        plan2 = plan_extend(plan1, HitGoal(spec), _admissible=admissible)
        n = plan2.blocks[-1].hit_time
        separation2 = (ch.z**n - zm).abs2()
        times = (m, n)
    elif isinstance(ch, RootOfUnity):
        s1, s2 = 0, ch.q // 2
        gap = circular_distance(Fraction(s1, ch.q), Fraction(s2, ch.q))
        separation2 = chord2_lower_bound(gap)
        if delta is not None and separation2 < delta * delta:
            raise UnsatisfiableGoalError(
                ch.q, f"maximal residue separation bound {separation2} below delta**2"
            )
        plan1 = plan_extend(plan, ConstrainedHitGoal(spec, Congruence(s1, ch.q), ch))
        plan2 = plan_extend(plan1, ConstrainedHitGoal(spec, Congruence(s2, ch.q), ch))
        times = (plan1.blocks[-1].hit_time, plan2.blocks[-1].hit_time)
    elif isinstance(ch, IrrationalRotation):
        a1, a2 = _WITNESS_ARCS
        separation2 = chord2_lower_bound(arc_gap(a1, a2))
        if delta is not None and separation2 < delta * delta:
            raise UnsatisfiableGoalError(
                len(ch.cf), f"arc separation bound {separation2} below delta**2"
            )
        plan1 = plan_extend(plan, ConstrainedHitGoal(spec, a1, ch))
        plan2 = plan_extend(plan1, ConstrainedHitGoal(spec, a2, ch))
        times = (plan1.blocks[-1].hit_time, plan2.blocks[-1].hit_time)
    else:
        raise TypeError("not a character")

    report = WitnessReport(ch, times, spec, delta, separation2, _two_new_certs(plan2), plan2)
    return plan2, report


def joint_density_probe(
    plan: StagePlan,
    ch: Character,
    spec: NeighborhoodSpec,
    target: CharConstraint,
) -> Tuple[StagePlan, int]:
    """One constrained hit: the returned time satisfies both the exact
    neighborhood membership and the character constraint."""
    if isinstance(target, Congruence) and not isinstance(ch, RootOfUnity):
        raise ConstraintKindError("congruence targets require a root-of-unity character")
    if isinstance(target, Arc) and not isinstance(ch, IrrationalRotation):
        raise ConstraintKindError("arc targets require an irrational-rotation character")
    if isinstance(ch, OffCircle):
        raise ConstraintKindError("characters off the unit circle admit no circle target")
    plan2 = plan_extend(plan, ConstrainedHitGoal(spec, target, ch))
    return plan2, plan2.blocks[-1].hit_time


def replay_witness(obj: dict) -> bool:
    """Recompute a serialized witness from its embedded plan; True iff the
    stored gaps, separation bound, and verdict reproduce bit-exactly."""
    plan = StagePlan.from_json(obj["plan"])
    ch = character_from_json(obj["character"])
    m, n = obj["times"]
    certs = {c.hit_time: c for c in certify(plan)}
    for stored in obj["certificates"]:
        fresh = certs.get(int(stored["hit_time"]))
        if fresh is None or fresh.to_json() != stored:
            return False
    if isinstance(ch, OffCircle):
        separation2 = (ch.z**n - ch.z**m).abs2()
    elif isinstance(ch, RootOfUnity):
        s1 = (m * ch.r) % ch.q
        s2 = (n * ch.r) % ch.q
        separation2 = chord2_lower_bound(circular_distance(Fraction(s1, ch.q), Fraction(s2, ch.q)))
    else:
        a1, a2 = _WITNESS_ARCS
        separation2 = chord2_lower_bound(arc_gap(a1, a2))
    return rational_to_str(separation2) == obj["separation2"]
