"""The acceptance battery: every finitely verifiable claim, run end to end.

Each item recomputes its claim from scratch at the stated scale and compares
bit-exactly.  Verdicts are stage-limited evidence; the genuinely infinite
statements (weak hypercyclicity of the limit vector, completeness of the
hyperplane, full absence of invariant subspaces) are out of reach by design
and the envelope says so.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from orbitcert import __version__
from orbitcert.builder import (
    DensityGoal,
    HitGoal,
    StagePlan,
    certify,
    plan_extend,
    realize,
)
from orbitcert.characters import Arc, Congruence, IrrationalRotation, OffCircle, RootOfUnity
from orbitcert.exact import ComplexRational
from orbitcert.jsonio import canonical_json
from orbitcert.measures import (
    CharacterFunction,
    ConstantFunction,
    FiniteMeasure,
    TableFunction,
    apply_poly,
    decompose,
    dual_shift,
    pair,
    pushforward,
)
from orbitcert.probe import FunctionFamily, cyclicity_report, eigen_extract, pullback_family, replay_report
from orbitcert.shift import SparseVector, inner, norm2, norm_monotonicity_report, shift_apply
from orbitcert.weak import NeighborhoodSpec, enumerate_base
from orbitcert.witness import discontinuity_witness, joint_density_probe, replay_witness

DEFAULT_SEED = 20260823
DEFAULT_STAGE = 64

NOT_REPRODUCIBLE = (
    "Not certified at desk scale (infinite statements): weak hypercyclicity of "
    "the limit vector, completeness of the zero-mass hyperplane, and the full "
    "absence of non-trivial closed invariant subspaces.  All verdicts above are "
    "stage-limited evidence for finite instances."
)


def _random_rational(rng: random.Random, height: int) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def _random_scalar(rng: random.Random, height: int) -> ComplexRational:
    return ComplexRational(_random_rational(rng, height), _random_rational(rng, height))


def _random_vector(rng: random.Random, lo: int, hi: int, height: int, max_terms: int = 6) -> SparseVector:
    entries = {}
    for _ in range(rng.randint(1, max_terms)):
        entries[rng.randint(lo, hi)] = _random_scalar(rng, height)
    return SparseVector(entries)


def _random_measure(rng: random.Random, lo: int, hi: int, height: int, max_terms: int = 5) -> FiniteMeasure:
    coeffs = {}
    for _ in range(rng.randint(1, max_terms)):
        coeffs[rng.randint(lo, hi)] = _random_scalar(rng, height)
    return FiniteMeasure(coeffs)


class _Shared:
    """Artifacts reused across items (built once per run)."""

    def __init__(self):
        self._plan32: Optional[StagePlan] = None
        self._plan48: Optional[StagePlan] = None

    def plan32(self) -> StagePlan:
        if self._plan32 is None:
            plan = StagePlan.new()
            for i in range(32):
                plan = plan_extend(plan, HitGoal(enumerate_base(i)))
            self._plan32 = plan
        return self._plan32

    def plan48(self) -> StagePlan:
        if self._plan48 is None:
            plan = self.plan32()
            for i in range(32, 48):
                plan = plan_extend(plan, HitGoal(enumerate_base(i)))
            self._plan48 = plan
        return self._plan48


def item_energy_identity(seed: int) -> Tuple[bool, dict]:
    rng = random.Random(seed)
    checked = 0
    for _ in range(200):
        u = _random_vector(rng, -16, 16, 8)
        lhs = norm2(shift_apply(u, 1)) - norm2(u)
        rhs = 3 * sum((c.abs2() for n, c in u.entries.items() if n > 0), Fraction(0))
        if lhs != rhs:
            return False, {"counterexample": u.to_json()}
        if shift_apply(shift_apply(u, 1), -1) != u or shift_apply(shift_apply(u, -1), 1) != u:
            return False, {"counterexample": u.to_json(), "where": "round trip"}
        checked += 1
    return True, {"samples": checked}


def _random_function(rng: random.Random):
    kind = rng.randint(0, 2)
    if kind == 0:
        return TableFunction({n: _random_scalar(rng, 6) for n in range(-12, 13)})
    if kind == 1:
        return ConstantFunction(_random_scalar(rng, 6))
    base = _random_scalar(rng, 4)
    if base.is_zero():
        base = ComplexRational(2)
    return CharacterFunction(_random_scalar(rng, 4), base)


def item_adjointness(seed: int) -> Tuple[bool, dict]:
    rng = random.Random(seed + 1)
    for _ in range(200):
        g = _random_function(rng)
        mu = _random_measure(rng, -8, 8, 6)
        if pair(g, pushforward(mu, 1)) != pair(dual_shift(g, 1), mu):
            return False, {"counterexample": mu.to_json()}
    return True, {"samples": 200}


def item_decompose_round_trip(seed: int) -> Tuple[bool, dict]:
    rng = random.Random(seed + 2)
    done = 0
    while done < 500:
        mu = _random_measure(rng, -4, 4, 6)
        if not mu:
            continue
        l, p = decompose(mu)
        supp = mu.support()
        if l != max(abs(supp[0]), abs(supp[-1])):
            return False, {"counterexample": mu.to_json(), "where": "symmetric bound"}
        if apply_poly(p, FiniteMeasure.delta(-l)) != mu:
            return False, {"counterexample": mu.to_json(), "where": "round trip"}
        done += 1
    return True, {"samples": done}


def item_builder(shared: _Shared) -> Tuple[bool, dict]:
    plan32 = shared.plan32()
    certs32 = certify(plan32)
    if len(certs32) != 32:
        return False, {"where": "certificate count"}
    for c in certs32:
        if not c.valid or any(g != 0 for g in c.gaps2):
            return False, {"where": f"goal {c.goal_index} gaps", "cert": c.to_json()}
    frozen = [canonical_json(c.to_json()) for c in certs32]
    plan48 = shared.plan48()
    certs48 = certify(plan48)
    for c in certs48:
        if not c.valid or any(g != 0 for g in c.gaps2):
            return False, {"where": f"goal {c.goal_index} gaps after extension"}
    later = [canonical_json(c.to_json()) for c in certs48[:32]]
    if later != frozen:
        return False, {"where": "stability: first 32 certificates changed"}
    return True, {"certificates": 48, "stable_prefix": 32}


def item_density(shared: _Shared) -> Tuple[bool, dict]:
    tests = [SparseVector.basis(k) for k in range(-2, 3)]
    plan = shared.plan48()
    base = len(plan.blocks)
    for m in range(-5, 0):
        plan = plan_extend(plan, DensityGoal(m, tests, Fraction(1, 8)))
    certs = certify(plan)[base:]
    times = []
    for c in certs:
        if not c.valid or c.hit_time < 0 or any(g != 0 for g in c.gaps2):
            return False, {"cert": c.to_json()}
        times.append(c.hit_time)
    return True, {"hit_times": times}


def item_norm_growth(shared: _Shared) -> Tuple[bool, dict]:
    plan = shared.plan48()
    x = realize(plan)
    last = max(plan.hit_times())
    hi = last - plan.window_radius - 1
    report = norm_monotonicity_report(x, -10, hi)
    flat = [n for n, _, strict in report if not strict]
    if flat:
        return False, {"flat_at": flat[:5], "window": [-10, hi]}
    return True, {"window": [-10, hi], "positions": len(report)}


def item_character_witnesses() -> Tuple[bool, dict]:
    details: Dict[str, object] = {}
    # (a) |z| > 1: two hits of one neighborhood, separation at least 1.
    plan, rep = discontinuity_witness(
        StagePlan.new(),
        OffCircle(ComplexRational(2)),
        [SparseVector.basis(0), SparseVector.basis(1)],
        Fraction(1, 2),
        Fraction(1),
    )
    if not rep.valid or rep.separation2 < 1 or not replay_witness(rep.to_json()):
        return False, {"where": "off-circle witness", "report": rep.to_json()}
    details["off_circle_times"] = list(rep.times)
    # (b) z = i: all four residues hit the same neighborhood.
    spec = NeighborhoodSpec(SparseVector(), [SparseVector.basis(0)], Fraction(1, 2))
    ch = RootOfUnity(4, 1)
    plan = StagePlan.new()
    times = []
    for s in range(4):
        plan, t = joint_density_probe(plan, ch, spec, Congruence(s, 4))
        times.append(t)
    certs = certify(plan)
    if sorted(t % 4 for t in times) != [0, 1, 2, 3]:
        return False, {"where": "residues", "times": times}
    for c in certs:
        if not c.valid or any(g != 0 for g in c.gaps2):
            return False, {"where": "root-of-unity certificates"}
    details["residue_times"] = times
    # (c) golden rotation, depth 12: arc hits with small times.
    golden = IrrationalRotation([1] * 12)
    plan = StagePlan.new()
    arc_times = []
    for arc in (Arc(Fraction(0), Fraction(1, 4)), Arc(Fraction(1, 2), Fraction(3, 4))):
        plan, t = joint_density_probe(plan, golden, spec, arc)
        arc_times.append(t)
    if any(t > 10_000 for t in arc_times):
        return False, {"where": "arc hit times", "times": arc_times}
    for c in certify(plan):
        if not c.valid:
            return False, {"where": "rotation certificates"}
    details["arc_times"] = arc_times
    return True, details


def item_cyclicity(shared: _Shared, stage: int) -> Tuple[bool, dict]:
    plan = shared.plan48()
    vectors = [(f"e{k}", SparseVector.basis(k)) for k in range(-3, 4)]
    w1 = SparseVector({0: ComplexRational(1), 4: ComplexRational(Fraction(1, 2))})
    w2 = SparseVector({-4: ComplexRational(1), 5: ComplexRational(Fraction(-1, 3))})
    vectors += [("mixed1", w1), ("mixed2", w2)]
    family = pullback_family(plan, vectors)
    mu = FiniteMeasure({1: ComplexRational(1), 0: ComplexRational(-1)})
    report = cyclicity_report(mu, family, plan, stage)
    expected = f"no obstruction found at stage {stage}"
    if report.basis or report.verdict != expected:
        return False, {"verdict": report.verdict, "basis_size": len(report.basis)}
    replayed = replay_report(report.to_json())
    if canonical_json(replayed.to_json()) != canonical_json(report.to_json()):
        return False, {"where": "replay mismatch"}
    return True, {"verdict": report.verdict, "family_size": len(family)}


def item_eigen_chain() -> Tuple[bool, dict]:
    window = (-20, 20)
    cases = []
    # already an eigenfunction
    g1 = CharacterFunction(ComplexRational(1), ComplexRational(2))
    h1, z1 = eigen_extract(g1, [ComplexRational(2)], window)
    cases.append(z1 == ComplexRational(2) and all(h1(n) == g1(n) for n in range(-20, 21)))
    # two-step collapse to a constant
    g2 = TableFunction({n: ComplexRational(n) for n in range(-20, 21)})
    h2, z2 = eigen_extract(g2, [ComplexRational(1), ComplexRational(1)], window)
    cases.append(z2 == ComplexRational(1) and all(h2(n) == ComplexRational(1) for n in range(-20, 21)))
    # mixed characters: the chain peels off the first base
    g3 = TableFunction({n: ComplexRational(2) ** n + ComplexRational(3) ** n for n in range(-20, 21)})
    h3, z3 = eigen_extract(g3, [ComplexRational(2), ComplexRational(3)], window)
    cases.append(z3 == ComplexRational(3) and all(h3(n) == ComplexRational(3) ** n for n in range(-20, 21)))
    # forced shape h(n) = z**n * h(0) across the window
    for h, z in ((h1, z1), (h2, z2), (h3, z3)):
        h0 = h(0)
        cases.append(all(h(n) == h0 * z**n for n in range(-20, 21)))
    ok = all(cases)
    return ok, {"cases": cases}


def item_replay(shared: _Shared, external_certs: Optional[str] = None) -> Tuple[bool, dict]:
    """Serialize the builder certificates and re-derive them from the plan
    file alone; any byte difference (e.g. tampering) fails the item."""
    plan = shared.plan48()
    stored = external_certs
    if stored is None:
        stored = canonical_json([c.to_json() for c in certify(plan)])
    reloaded = StagePlan.from_json(plan.to_json())
    fresh = canonical_json([c.to_json() for c in certify(reloaded)])
    if fresh != stored:
        return False, {"where": "certificate bytes differ from replay"}
    return True, {"certificates": len(plan.blocks)}


ITEM_LIMITS_S = {
    "A1": 1.0,
    "A2": 1.0,
    "A3": 2.0,
    "A4": 10.0,
    "A5": 5.0,
    "A6": 5.0,
    "A7": 10.0,
    "A8": 30.0,
    "A9": 1.0,
    "R1": 30.0,
}


def run_suite(seed: int = DEFAULT_SEED, stage: int = DEFAULT_STAGE) -> dict:
    """Run the whole battery; the report body is bit-stable for a fixed
    config, with timings and timestamps segregated into metadata."""
    shared = _Shared()
    items: List[dict] = []
    timings: Dict[str, float] = {}

    def run(item_id: str, name: str, fn, skip_reason: Optional[str] = None):
        if skip_reason is not None:
            items.append(
                {"id": item_id, "name": name, "status": "skipped", "passed": None, "details": {"reason": skip_reason}}
            )
            return
        t0 = time.perf_counter()
        try:
            passed, details = fn()
        except Exception as exc:  # keep the suite running; the item fails
            passed, details = False, {"error": f"{type(exc).__name__}: {exc}"}
        timings[item_id] = time.perf_counter() - t0
        items.append(
            {
                "id": item_id,
                "name": name,
                "status": "passed" if passed else "failed",
                "passed": passed,
                "details": details,
                "limit_s": ITEM_LIMITS_S[item_id],
            }
        )

    run("A1", "energy identity and shift round trip", lambda: item_energy_identity(seed))
    run("A2", "adjointness of pushforward and dual shift", lambda: item_adjointness(seed))
    run("A3", "decompose round trip", lambda: item_decompose_round_trip(seed))
    run("A4", "builder exactness and stability", lambda: item_builder(shared))
    run("A5", "non-negative orbit density certificates", lambda: item_density(shared))
    run("A6", "strict norm growth of the realized vector", lambda: item_norm_growth(shared))
    run("A7", "character witnesses", item_character_witnesses)
    run(
        "A8",
        "cyclicity obstruction report",
        lambda: item_cyclicity(shared, stage),
        skip_reason=None if stage >= 1 else "degenerate stage 0",
    )
    run("A9", "eigen chain extraction", item_eigen_chain)
    run("R1", "certificate file replay", lambda: item_replay(shared))

    all_passed = all(it["passed"] for it in items if it["passed"] is not None)
    return {
        "version": 1,
        "config": {"seed": seed, "stage": stage},
        "items": items,
        "all_passed": all_passed,
        "not_reproducible": NOT_REPRODUCIBLE,
        "metadata": {
            "package_version": __version__,
            "timings_s": {k: round(v, 6) for k, v in timings.items()},
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        },
    }


def format_suite_text(envelope: dict) -> str:
    lines = []
    for it in envelope["items"]:
        mark = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[it["status"]]
        t = envelope["metadata"]["timings_s"].get(it["id"])
        tpart = f" ({t:.3f}s)" if t is not None else ""
        lines.append(f"[{mark}] {it['id']}: {it['name']}{tpart}")
    lines.append("all passed" if envelope["all_passed"] else "FAILURES present")
    return "\n".join(lines)
