"""Finite-stage construction of a vector whose orbit hits prescribed goals.

Instead of citing an abstract existence result for a weakly dense orbit, the
builder schedules one block per goal: the block payload is the windowed
target content and it is stored pre-shifted so that at the block's hit time
the orbit reproduces the payload exactly.  Hit times are kept at least one
separation gap apart, so shifted blocks never overlap the test window of any
other certified time and every certified gap is exactly zero, forever.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Tuple, Union

from orbitcert.characters import (
    Arc,
    CharConstraint,
    Character,
    Congruence,
    character_from_json,
    constraint_from_json,
)
from orbitcert.errors import PreconditionError, UnsatisfiableGoalError
from orbitcert.exact import rational_from_str, rational_to_str
from orbitcert.shift import SparseVector, shift_apply
from orbitcert.weak import NeighborhoodSpec, weak_gap2

DEFAULT_WINDOW_RADIUS = 4
DEFAULT_SEPARATION_GAP = 10  # must exceed 2 * radius + 1
DEFAULT_SEARCH_BOUND = 100_000


@dataclass(frozen=True)
class HitGoal:
    spec: NeighborhoodSpec

    def to_json(self) -> dict:
        return {"kind": "hit", "payload": {"spec": self.spec.to_json()}}


@dataclass(frozen=True)
class DensityGoal:
    """Ask for a non-negative orbit time close (weakly) to the orbit point at
    time m; the finite-stage form of density of the non-negative orbit."""

    m: int
    tests: Tuple[SparseVector, ...]
    eps: Fraction

    def __init__(self, m: int, tests, eps):
        eps = Fraction(eps)
        tests = tuple(tests)
        if eps <= 0:
            raise PreconditionError("eps must be positive")
        if not tests:
            raise PreconditionError("tests must be non-empty")
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "tests", tests)
        object.__setattr__(self, "eps", eps)

    def to_json(self) -> dict:
        return {
            "kind": "zplus_density",
            "payload": {
                "m": self.m,
                "tests": [w.to_json() for w in self.tests],
                "eps": rational_to_str(self.eps),
            },
        }


@dataclass(frozen=True)
class ConstrainedHitGoal:
    spec: NeighborhoodSpec
    constraint: CharConstraint
    character: Character

    def to_json(self) -> dict:
        return {
            "kind": "constrained_hit",
            "payload": {
                "spec": self.spec.to_json(),
                "constraint": self.constraint.to_json(),
                "character": self.character.to_json(),
            },
        }


Goal = Union[HitGoal, DensityGoal, ConstrainedHitGoal]


def goal_from_json(obj: dict) -> Goal:
    kind = obj["kind"]
    payload = obj["payload"]
    if kind == "hit":
        return HitGoal(NeighborhoodSpec.from_json(payload["spec"]))
    if kind == "zplus_density":
        return DensityGoal(
            payload["m"],
            [SparseVector.from_json(w) for w in payload["tests"]],
            rational_from_str(payload["eps"]),
        )
    if kind == "constrained_hit":
        return ConstrainedHitGoal(
            NeighborhoodSpec.from_json(payload["spec"]),
            constraint_from_json(payload["constraint"]),
            character_from_json(payload["character"]),
        )
    raise ValueError(f"unknown goal kind {kind!r}")


@dataclass(frozen=True)
class Block:
    goal: Goal
    hit_time: int
    payload: SparseVector

    def to_json(self) -> dict:
        return {
            "goal": self.goal.to_json(),
            "hit_time": self.hit_time,
            "payload": self.payload.to_json(),
        }

    @staticmethod
    def from_json(obj: dict) -> "Block":
        return Block(
            goal_from_json(obj["goal"]),
            int(obj["hit_time"]),
            SparseVector.from_json(obj["payload"]),
        )


@dataclass(frozen=True)
class GrowthEvent:
    block_index: int
    old_radius: int
    old_gap: int
    new_radius: int
    new_gap: int

    def to_json(self) -> dict:
        return {
            "block_index": self.block_index,
            "old_radius": self.old_radius,
            "old_gap": self.old_gap,
            "new_radius": self.new_radius,
            "new_gap": self.new_gap,
        }

    @staticmethod
    def from_json(obj: dict) -> "GrowthEvent":
        return GrowthEvent(
            int(obj["block_index"]),
            int(obj["old_radius"]),
            int(obj["old_gap"]),
            int(obj["new_radius"]),
            int(obj["new_gap"]),
        )


@dataclass(frozen=True)
class StagePlan:
    blocks: Tuple[Block, ...]
    window_radius: int
    separation_gap: int
    growth_events: Tuple[GrowthEvent, ...]

    def __post_init__(self):
        if self.window_radius < 1:
            raise PreconditionError("window radius must be positive")
        if self.separation_gap <= 2 * self.window_radius + 1:
            raise PreconditionError("separation gap must exceed 2 * radius + 1")

    @staticmethod
    def new(
        window_radius: int = DEFAULT_WINDOW_RADIUS,
        separation_gap: int = DEFAULT_SEPARATION_GAP,
    ) -> "StagePlan":
        return StagePlan((), window_radius, separation_gap, ())

    def hit_times(self) -> List[int]:
        return [b.hit_time for b in self.blocks]

    def referenced_times(self) -> List[int]:
        """All times a certificate mentions: hit times and density anchors."""
        out = set(self.hit_times())
        for b in self.blocks:
            if isinstance(b.goal, DensityGoal):
                out.add(b.goal.m)
        return sorted(out)

    def to_json(self) -> dict:
        return {
            "version": 1,
            "window_radius": self.window_radius,
            "separation_gap": self.separation_gap,
            "growth_events": [e.to_json() for e in self.growth_events],
            "blocks": [b.to_json() for b in self.blocks],
        }

    @staticmethod
    def from_json(obj: dict) -> "StagePlan":
        return StagePlan(
            tuple(Block.from_json(b) for b in obj["blocks"]),
            int(obj["window_radius"]),
            int(obj["separation_gap"]),
            tuple(GrowthEvent.from_json(e) for e in obj["growth_events"]),
        )


def realize(plan: StagePlan) -> SparseVector:
    """The exact sum of the pre-shifted block payloads.

    Each block occupies indices [hit_time - R, hit_time + R]; the separation
    gap keeps these ranges pairwise disjoint and strictly positive.
    """
    x = SparseVector()
    for b in plan.blocks:
        x = x + shift_apply(b.payload, -b.hit_time)
    return x


def _goal_radius(goal: Goal) -> int:
    if isinstance(goal, (HitGoal, ConstrainedHitGoal)):
        return goal.spec.radius()
    r = 0
    for w in goal.tests:
        r = max(r, w.max_abs_index())
    return r


def _grown(plan: StagePlan, needed: int) -> Tuple[int, int, bool]:
    radius, gap = plan.window_radius, plan.separation_gap
    grew = False
    while radius < needed:
        radius *= 2
        grew = True
    gap = max(gap, 2 * radius + 2)
    return radius, gap, grew


def plan_extend(
    plan: StagePlan,
    goal: Goal,
    _admissible: Optional[Callable[[int], bool]] = None,
    search_bound: int = DEFAULT_SEARCH_BOUND,
) -> StagePlan:
    """Append one block realizing the goal at the smallest admissible time.

    Admissibility: separation of at least the gap from every existing hit
    time and every certificate-referenced time, plus any character constraint
    attached to the goal (and an optional extra predicate used by witness
    scheduling).  All previously issued certificates remain exactly valid.
    """
    radius, gap, grew = _grown(plan, _goal_radius(goal))
    events = plan.growth_events
    if grew or gap != plan.separation_gap:
        events = events + (
            GrowthEvent(
                len(plan.blocks),
                plan.window_radius,
                plan.separation_gap,
                radius,
                gap,
            ),
        )

    if isinstance(goal, (HitGoal, ConstrainedHitGoal)):
        payload = goal.spec.center.restrict(-radius, radius)
    else:
        x_cur = realize(plan)
        payload = shift_apply(x_cur, goal.m).restrict(-radius, radius)

    referenced = plan.referenced_times()
    last = max(plan.hit_times(), default=0)
    start = last + gap if plan.blocks else gap
    start = max(start, gap)

    constraint = goal.constraint if isinstance(goal, ConstrainedHitGoal) else None
    n = start
    while n < start + search_bound:
        ok = all(abs(n - t) >= gap for t in referenced)
        if ok and constraint is not None:
            ok = constraint.admits(goal.character, n)
        if ok and _admissible is not None:
            ok = _admissible(n)
        if ok:
            block = Block(goal, n, payload)
            return StagePlan(plan.blocks + (block,), radius, gap, events)
        n += 1
    raise UnsatisfiableGoalError(start + search_bound)


@dataclass(frozen=True)
class HitCertificate:
    """Exact proof that the orbit point at hit_time lies in the prescribed
    neighborhood (or near the anchor orbit point, for density goals)."""

    goal_index: int
    goal: Goal
    hit_time: int
    eps: Fraction
    gaps2: Tuple[Fraction, ...]
    valid: bool
    failure: Optional[str] = None

    def to_json(self) -> dict:
        out = {
            "goal_index": self.goal_index,
            "goal": self.goal.to_json(),
            "hit_time": self.hit_time,
            "eps": rational_to_str(self.eps),
            "gaps2": [rational_to_str(g) for g in self.gaps2],
            "valid": self.valid,
        }
        if self.failure is not None:
            out["failure"] = self.failure
        return out


def certify(plan: StagePlan) -> List[HitCertificate]:
    """Recompute every certificate from the realized vector, independently of
    how the plan was produced.  Any gap failure marks the certificate invalid
    with the offending test; plans built by plan_extend never fail."""
    x = realize(plan)
    certs: List[HitCertificate] = []
    for idx, b in enumerate(plan.blocks):
        orbit = shift_apply(x, b.hit_time)
        failure = None
        if isinstance(b.goal, DensityGoal):
            anchor = shift_apply(x, b.goal.m)
            eps = b.goal.eps
            gaps = tuple(weak_gap2(orbit, anchor, w) for w in b.goal.tests)
            if b.hit_time < 0:
                failure = "hit time is negative"
        else:
            spec = b.goal.spec
            eps = spec.eps
            gaps = tuple(weak_gap2(orbit, spec.center, w) for w in spec.tests)
            if isinstance(b.goal, ConstrainedHitGoal):
                if not b.goal.constraint.admits(b.goal.character, b.hit_time):
                    failure = "character constraint not satisfied at hit time"
        eps2 = eps * eps
        for i, g in enumerate(gaps):
            if not g < eps2:
                failure = f"test {i}: gap2 {g} >= eps2 {eps2}"
                break
        certs.append(
            HitCertificate(idx, b.goal, b.hit_time, eps, gaps, failure is None, failure)
        )
    return certs
