import json
from fractions import Fraction

import pytest

from orbitcert.builder import StagePlan, certify
from orbitcert.characters import Arc, Congruence, IrrationalRotation, OffCircle, RootOfUnity
from orbitcert.errors import ConstraintKindError, UnsatisfiableGoalError
from orbitcert.exact import CR
from orbitcert.shift import SparseVector
from orbitcert.weak import NeighborhoodSpec, enumerate_base
from orbitcert.witness import discontinuity_witness, joint_density_probe, replay_witness

e = SparseVector.basis
GOLDEN = IrrationalRotation([1] * 12)


def test_off_circle_witness():
    plan, rep = discontinuity_witness(
        StagePlan.new(), OffCircle(CR(2)), [e(0), e(1)], Fraction(1, 2), Fraction(1)
    )
    assert rep.valid
    m, n = rep.times
    assert rep.separation2 == (CR(2) ** n - CR(2) ** m).abs2()
    assert rep.separation2 >= 1
    for c in rep.certificates:
        assert c.valid and all(g == 0 for g in c.gaps2)
    assert replay_witness(rep.to_json())


def test_root_of_unity_witness():
    plan, rep = discontinuity_witness(
        StagePlan.new(), RootOfUnity(4, 1), [e(0)], Fraction(1, 2), Fraction(1)
    )
    assert rep.valid
    m, n = rep.times
    assert m % 4 == 0 and n % 4 == 2  # residues 0 and 2: z^n - z^m = -2
    assert rep.separation2 == 4
    assert replay_witness(rep.to_json())


def test_root_of_unity_delta_unreachable():
    # residues of order 2 are at most chord 2 apart; delta = 3 is impossible
    with pytest.raises(UnsatisfiableGoalError):
        discontinuity_witness(
            StagePlan.new(), RootOfUnity(2, 1), [e(0)], Fraction(1, 2), Fraction(3)
        )


def test_rotation_witness():
    plan, rep = discontinuity_witness(
        StagePlan.new(), GOLDEN, [e(0)], Fraction(1, 2), Fraction(1)
    )
    assert rep.valid
    assert rep.separation2 == Fraction(9, 4)  # arcs 3/8 of a turn apart
    assert all(c.valid for c in rep.certificates)
    assert replay_witness(rep.to_json())


def test_witness_tamper_detection():
    _, rep = discontinuity_witness(
        StagePlan.new(), OffCircle(CR(2)), [e(0)], Fraction(1, 2), None
    )
    obj = json.loads(json.dumps(rep.to_json()))
    assert replay_witness(obj)
    obj["certificates"][0]["gaps2"][0] = "1/3"
    assert not replay_witness(obj)
    obj2 = json.loads(json.dumps(rep.to_json()))
    obj2["separation2"] = "17"
    assert not replay_witness(obj2)


def test_joint_probe_congruence():
    spec = NeighborhoodSpec.from_json(enumerate_base(0).to_json())
    plan, t = joint_density_probe(StagePlan.new(), RootOfUnity(4, 1), spec, Congruence(3, 4))
    assert t % 4 == 3
    assert t == 11  # smallest admissible time at the default gap 10
    assert certify(plan)[-1].valid


def test_joint_probe_all_residues():
    spec = NeighborhoodSpec(SparseVector(), [e(0)], Fraction(1, 2))
    plan = StagePlan.new()
    times = []
    for s in range(4):
        plan, t = joint_density_probe(plan, RootOfUnity(4, 1), spec, Congruence(s, 4))
        times.append(t)
    assert sorted(t % 4 for t in times) == [0, 1, 2, 3]
    for c in certify(plan):
        assert c.valid and all(g == 0 for g in c.gaps2)


def test_joint_probe_arc():
    spec = NeighborhoodSpec(SparseVector(), [e(0)], Fraction(1, 2))
    plan, t = joint_density_probe(StagePlan.new(), GOLDEN, spec, Arc(Fraction(1, 3), Fraction(1, 2)))
    assert Arc(Fraction(1, 3), Fraction(1, 2)).admits(GOLDEN, t)
    assert certify(plan)[-1].valid


def test_joint_probe_trivial_arc():
    spec = NeighborhoodSpec(SparseVector(), [e(0)], Fraction(1, 2))
    plan, t = joint_density_probe(StagePlan.new(), GOLDEN, spec, Arc(Fraction(0), Fraction(1)))
    assert t == plan.separation_gap  # first admissible time qualifies


def test_joint_probe_kind_mismatch():
    spec = NeighborhoodSpec(SparseVector(), [e(0)], Fraction(1, 2))
    with pytest.raises(ConstraintKindError):
        joint_density_probe(StagePlan.new(), GOLDEN, spec, Congruence(0, 4))
    with pytest.raises(ConstraintKindError):
        joint_density_probe(StagePlan.new(), RootOfUnity(4, 1), spec, Arc(Fraction(0), Fraction(1, 2)))
    with pytest.raises(ConstraintKindError):
        joint_density_probe(StagePlan.new(), OffCircle(CR(2)), spec, Arc(Fraction(0), Fraction(1, 2)))


def test_invalid_delta():
    with pytest.raises(ValueError):
        discontinuity_witness(StagePlan.new(), OffCircle(CR(2)), [e(0)], Fraction(1, 2), Fraction(-1))
