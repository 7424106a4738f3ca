from fractions import Fraction

import pytest

from orbitcert.builder import (
    Block,
    DensityGoal,
    HitGoal,
    StagePlan,
    certify,
    goal_from_json,
    plan_extend,
    realize,
)
from orbitcert.errors import PreconditionError, UnsatisfiableGoalError
from orbitcert.exact import CR
from orbitcert.jsonio import canonical_json
from orbitcert.shift import SparseVector, norm2, shift_apply
from orbitcert.weak import NeighborhoodSpec, enumerate_base

e = SparseVector.basis


def hit(center, tests, eps):
    return HitGoal(NeighborhoodSpec(center, tests, Fraction(eps)))


def test_first_hit_example():
    plan = plan_extend(StagePlan.new(), hit(e(0), [e(0), e(1)], Fraction(1, 2)))
    assert len(plan.blocks) == 1
    b = plan.blocks[0]
    assert b.payload == e(0)
    assert b.hit_time == plan.separation_gap
    cert = certify(plan)[0]
    assert cert.valid and all(g == 0 for g in cert.gaps2)


def test_density_extension_example():
    plan = plan_extend(StagePlan.new(), hit(e(0), [e(0), e(1)], Fraction(1, 2)))
    plan = plan_extend(plan, DensityGoal(-1, [e(0)], Fraction(1, 4)))
    b = plan.blocks[-1]
    x_before = realize(StagePlan(plan.blocks[:1], plan.window_radius, plan.separation_gap, ()))
    R = plan.window_radius
    assert b.payload == shift_apply(x_before, -1).restrict(-R, R)
    cert = certify(plan)[-1]
    assert cert.valid and cert.hit_time >= 0 and all(g == 0 for g in cert.gaps2)


def test_empty_plan():
    plan = StagePlan.new()
    assert realize(plan) == SparseVector()
    assert certify(plan) == []


def test_realize_single_block():
    plan = plan_extend(StagePlan.new(), hit(e(0), [e(0)], Fraction(1, 2)))
    G = plan.blocks[0].hit_time
    x = realize(plan)
    assert x == SparseVector({G: CR(Fraction(1, 2 ** G))})


def test_realize_disjoint_supports():
    plan = StagePlan.new()
    plan = plan_extend(plan, hit(e(0) + e(1), [e(0)], Fraction(1, 2)))
    plan = plan_extend(plan, hit(e(-1), [e(-1)], Fraction(1, 3)))
    x = realize(plan)
    supports = [
        set(shift_apply(b.payload, -b.hit_time).support()) for b in plan.blocks
    ]
    assert supports[0].isdisjoint(supports[1])
    assert set(x.support()) == supports[0] | supports[1]


def test_colliding_plan_reports_nonzero_gap():
    # two hand-placed blocks closer than the gap: the second leaks into the
    # first hit's test window and certify reports the exact non-zero gap
    goal = hit(e(0), [e(0), e(2)], Fraction(1, 4))
    blocks = (
        Block(goal, 10, e(0)),
        Block(goal, 12, e(0)),
    )
    plan = StagePlan(blocks, 4, 10, ())
    certs = certify(plan)
    assert not certs[0].valid
    assert certs[0].gaps2[1] == Fraction(1, 16)
    assert "gap2" in certs[0].failure


def test_plan_validation():
    with pytest.raises(PreconditionError):
        StagePlan((), 4, 9, ())  # gap must exceed 2R + 1


def test_certificate_stability():
    plan = StagePlan.new()
    for i in range(6):
        plan = plan_extend(plan, HitGoal(enumerate_base(i)))
    frozen = [canonical_json(c.to_json()) for c in certify(plan)]
    extended = plan_extend(plan, DensityGoal(-2, [e(0), e(1)], Fraction(1, 8)))
    later = [canonical_json(c.to_json()) for c in certify(extended)[:6]]
    assert later == frozen


def test_norm_control_per_block():
    plan = StagePlan.new()
    for i in range(6):
        plan = plan_extend(plan, HitGoal(enumerate_base(i)))
    R = plan.window_radius
    for b in plan.blocks:
        v, n = b.payload, b.hit_time
        assert norm2(shift_apply(v, -n)) <= norm2(v)
        if n >= R + 1:
            assert norm2(shift_apply(v, -n)) <= Fraction(1, 4 ** (n - R)) * norm2(v)


def test_window_growth_event():
    wide = hit(e(7), [e(7)], Fraction(1, 2))  # radius 7 > default 4
    plan = plan_extend(StagePlan.new(), wide)
    assert plan.window_radius == 8
    assert plan.separation_gap >= 2 * plan.window_radius + 2
    assert len(plan.growth_events) == 1
    ev = plan.growth_events[0]
    assert (ev.old_radius, ev.new_radius) == (4, 8)
    assert certify(plan)[0].valid


def test_determinism():
    def build():
        plan = StagePlan.new()
        for i in range(5):
            plan = plan_extend(plan, HitGoal(enumerate_base(i)))
        return plan

    p1, p2 = build(), build()
    assert canonical_json(p1.to_json()) == canonical_json(p2.to_json())
    assert canonical_json([c.to_json() for c in certify(p1)]) == canonical_json(
        [c.to_json() for c in certify(p2)]
    )


def test_unsatisfiable_search_bound():
    with pytest.raises(UnsatisfiableGoalError):
        plan_extend(
            StagePlan.new(),
            hit(e(0), [e(0)], Fraction(1, 2)),
            _admissible=lambda n: False,
            search_bound=50,
        )


def test_plan_serialization_round_trip():
    plan = StagePlan.new()
    plan = plan_extend(plan, hit(e(0), [e(0)], Fraction(1, 2)))
    plan = plan_extend(plan, DensityGoal(-1, [e(0)], Fraction(1, 4)))
    back = StagePlan.from_json(plan.to_json())
    assert canonical_json(back.to_json()) == canonical_json(plan.to_json())
    assert realize(back) == realize(plan)


def test_goal_serialization_round_trip():
    goals = [
        hit(e(0), [e(0), e(1)], Fraction(1, 2)),
        DensityGoal(-3, [e(-1)], Fraction(1, 8)),
    ]
    for g in goals:
        assert goal_from_json(g.to_json()) == g
    with pytest.raises(ValueError):
        goal_from_json({"kind": "bogus", "payload": {}})
