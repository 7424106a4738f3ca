import json
from fractions import Fraction

import pytest

from orbitcert.builder import HitGoal, StagePlan, plan_extend, realize
from orbitcert.errors import NotEigenChainError, PreconditionError
from orbitcert.exact import CR, ComplexRational
from orbitcert.jsonio import canonical_json
from orbitcert.linalg import nullspace, row_reduce_basis
from orbitcert.measures import (
    CharacterFunction,
    ConstantFunction,
    FiniteMeasure,
    Polynomial,
    TableFunction,
    dual_shift,
    pair,
    pushforward,
)
from orbitcert.probe import (
    FunctionFamily,
    annihilator_basis,
    cyclicity_report,
    eigen_extract,
    gaussian_sqrt,
    orbit_matrix,
    poly_roots_exact,
    pullback_family,
    replay_report,
)
from orbitcert.shift import SparseVector
from orbitcert.weak import enumerate_base

e = SparseVector.basis
d = FiniteMeasure.delta


def small_plan(k=6):
    plan = StagePlan.new()
    for i in range(k):
        plan = plan_extend(plan, HitGoal(enumerate_base(i)))
    return plan


# ---------------------------------------------------------------------------
# linear algebra kernel
# ---------------------------------------------------------------------------


def test_nullspace_exact():
    rows = [
        [CR(1), CR(2), CR(3)],
        [CR(2), CR(4), CR(6)],
    ]
    basis = row_reduce_basis(nullspace(rows, 3))
    assert len(basis) == 2
    for v in basis:
        for row in rows:
            s = sum((a * b for a, b in zip(row, v)), CR(0))
            assert s.is_zero()


def test_nullspace_trivial():
    rows = [[CR(1), CR(0)], [CR(0), CR(1)]]
    assert nullspace(rows, 2) == []


# ---------------------------------------------------------------------------
# orbit matrix and annihilators
# ---------------------------------------------------------------------------


def test_orbit_matrix_constant_row():
    mu = FiniteMeasure({1: CR(1), 0: CR(-1)})
    fam = FunctionFamily([("one", ConstantFunction(CR(1)))])
    M = orbit_matrix(mu, fam, 8)
    assert all(v.is_zero() for v in M[0])


def test_orbit_matrix_demo_identity_row():
    mu = FiniteMeasure({1: CR(1), 0: CR(-1)})
    fam = FunctionFamily([("n", TableFunction({n: CR(n) for n in range(0, 12)}))], demo=True)
    M = orbit_matrix(mu, fam, 8)
    assert M[0] == [CR(1)] * 9  # (n+1) - n


def test_orbit_matrix_pullback_row():
    plan = StagePlan((), 4, 10, ())
    fam = FunctionFamily.from_json(
        {"demo": False, "members": [{"name": "g", "fn": {"kind": "pullback", "payload": {"w": e(0).to_json(), "offset": 0}}}]},
        x=e(0),
    )
    M = orbit_matrix(d(0), fam, 5)
    assert M[0] == [CR(1)] + [CR(0)] * 5  # T^n e0 moves negative for n >= 1


def test_annihilator_zero_matrix():
    fam = FunctionFamily(
        [(f"g{k}", CharacterFunction(CR(1), CR(k))) for k in (2, 3, 5)], demo=True
    )
    M = [[CR(0)] * 4 for _ in range(3)]
    assert len(annihilator_basis(M, fam)) == 3


def test_annihilator_independent_rows():
    fam = FunctionFamily(
        [(f"g{k}", CharacterFunction(CR(1), CR(k))) for k in (2, 3)], demo=True
    )
    M = [[CR(1), CR(0)], [CR(0), CR(1)]]
    assert annihilator_basis(M, fam) == []


def test_annihilator_constant_quotient():
    mu = FiniteMeasure({1: CR(1), 0: CR(-1)})
    fam = FunctionFamily(
        [("one", ConstantFunction(CR(1))), ("n", TableFunction({n: CR(n) for n in range(0, 12)}))],
        demo=True,
    )
    M = orbit_matrix(mu, fam, 8)
    assert annihilator_basis(M, fam) == []


def test_row_shift_equivariance():
    mu = FiniteMeasure({2: CR(1), 0: CR(-1)})
    g = TableFunction({n: CR(n * n) for n in range(-2, 20)})
    fam = FunctionFamily([("g", g), ("sg", dual_shift(g, 1))], demo=True)
    M = orbit_matrix(mu, fam, 8)
    for n in range(8):
        assert M[1][n] == M[0][n + 1]


# ---------------------------------------------------------------------------
# eigen chain
# ---------------------------------------------------------------------------


def test_eigen_extract_already_eigen():
    g = CharacterFunction(CR(1), CR(2))
    h, z = eigen_extract(g, [CR(2)], (-20, 20))
    assert z == CR(2)
    assert all(h(n) == g(n) for n in range(-20, 21))


def test_eigen_extract_collapse_to_constant():
    g = TableFunction({n: CR(n) for n in range(-20, 21)})
    h, z = eigen_extract(g, [CR(1), CR(1)], (-20, 20))
    assert z == CR(1)
    assert all(h(n) == CR(1) for n in range(-18, 19))


def test_eigen_extract_mixed_characters():
    g = TableFunction({n: CR(2) ** n + CR(3) ** n for n in range(-20, 21)})
    h, z = eigen_extract(g, [CR(2), CR(3)], (-20, 20))
    assert z == CR(3)
    assert all(h(n) == CR(3) ** n for n in range(-19, 20))


def test_eigen_extract_forced_shape():
    for g, roots in (
        (CharacterFunction(CR(5), CR(2)), [CR(2)]),
        (TableFunction({n: CR(n) for n in range(-20, 21)}), [CR(1), CR(1)]),
    ):
        h, z = eigen_extract(g, roots, (-20, 20))
        h0 = h(0)
        assert all(h(n) == h0 * z**n for n in range(-15, 16))


def test_eigen_extract_failure():
    g = TableFunction({n: CR(n * n) for n in range(-5, 6)})
    with pytest.raises(NotEigenChainError):
        eigen_extract(g, [CR(2)], (-5, 5))
    with pytest.raises(PreconditionError):
        eigen_extract(g, [CR(1)] * 20, (-5, 5))


# ---------------------------------------------------------------------------
# exact roots
# ---------------------------------------------------------------------------


def test_gaussian_sqrt():
    assert gaussian_sqrt(CR(Fraction(9, 4))) == CR(Fraction(3, 2))
    assert gaussian_sqrt(CR(-4)) == CR(0, 2)
    assert gaussian_sqrt(CR(0, 2)) == CR(1, 1)  # (1+i)^2 = 2i
    assert gaussian_sqrt(CR(2)) is None


def test_poly_roots_exact():
    # t^2 - 1 -> roots -1, 1
    assert poly_roots_exact(Polynomial([CR(-1), CR(0), CR(1)])) == [CR(-1), CR(1)]
    # 2t^4: zero roots then constant
    roots = poly_roots_exact(Polynomial([CR(0), CR(0), CR(0), CR(0), CR(2)]))
    assert roots == [CR(0)] * 4
    # t^2 - 2 has no Gaussian-rational roots
    assert poly_roots_exact(Polynomial([CR(-2), CR(0), CR(1)])) is None
    # degree 3 unresolved
    assert poly_roots_exact(Polynomial([CR(1), CR(0), CR(0), CR(1)])) is None


# ---------------------------------------------------------------------------
# full reports
# ---------------------------------------------------------------------------


def test_family_certification_gate():
    with pytest.raises(PreconditionError):
        FunctionFamily([("t", TableFunction({0: CR(1)}))])
    with pytest.raises(PreconditionError):
        FunctionFamily([])


def test_cyclicity_preconditions():
    plan = small_plan()
    fam = pullback_family(plan, [("e0", e(0))])
    with pytest.raises(PreconditionError):
        cyclicity_report(FiniteMeasure(), fam, plan, 8)
    with pytest.raises(PreconditionError):
        cyclicity_report(d(0), fam, plan, 8)  # mass 1, not in the hyperplane


def test_cyclicity_no_obstruction():
    plan = small_plan()
    fam = pullback_family(plan, [(f"e{k}", e(k)) for k in range(-2, 3)])
    mu = FiniteMeasure({1: CR(1), 0: CR(-1)})
    report = cyclicity_report(mu, fam, plan, 64)
    assert report.basis == []
    assert report.verdict == "no obstruction found at stage 64"
    assert report.certified
    assert report.shift_order == 1
    assert "not a proof" in report.disclaimer


def test_cyclicity_demo_refutation_chain():
    # family containing the rule 2^n with a measure whose pairing follows the
    # geometric recurrence: the candidate reduces to z = 2 and is refuted
    plan = small_plan()
    mu = FiniteMeasure({2: CR(1), 1: CR(-3), 0: CR(2)})  # (t-1)(t-2) at delta_0... shifted
    fam = FunctionFamily([("geo", CharacterFunction(CR(1), CR(2)))], demo=True)
    report = cyclicity_report(mu, fam, plan, 16)
    assert not report.certified  # demo family
    assert len(report.outcomes) == 1
    out = report.outcomes[0]
    assert out.status == "refuted"
    assert out.eigenvalue == CR(2)
    assert out.witness_times is not None
    assert report.verdict == "no obstruction found at stage 16"


def test_report_replay_bit_exact():
    plan = small_plan()
    fam = pullback_family(plan, [(f"e{k}", e(k)) for k in range(-2, 3)])
    mu = FiniteMeasure({1: CR(1), 0: CR(-1)})
    report = cyclicity_report(mu, fam, plan, 64)
    obj = json.loads(canonical_json(report.to_json()))
    fresh = replay_report(obj)
    assert canonical_json(fresh.to_json()) == canonical_json(obj)
