"""FastAPI surface wrapping the certificate workbench.

Request and response bodies carry the canonical JSON records fixed by the
core modules; pydantic validates the envelope shape and the core parsers
validate the exact payloads.  Every verdict in a response is replayable from
the response alone.
"""

from __future__ import annotations

from typing import List, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from orbitcert import __version__
from orbitcert.builder import (
    DensityGoal,
    StagePlan,
    certify,
    goal_from_json,
    plan_extend,
    realize,
)
from orbitcert.characters import character_from_json, constraint_from_json
from orbitcert.errors import OrbitcertError
from orbitcert.exact import rational_from_str
from orbitcert.measures import FiniteMeasure
from orbitcert.probe import FunctionFamily, cyclicity_report, replay_report
from orbitcert.jsonio import canonical_json
from orbitcert.shift import SparseVector
from orbitcert.suite import DEFAULT_SEED, DEFAULT_STAGE, run_suite
from orbitcert.weak import NeighborhoodSpec, enumerate_base
from orbitcert.witness import discontinuity_witness, joint_density_probe

app = FastAPI(title="orbitcert", version=__version__)


def _core(fn):
    try:
        return fn()
    except (OrbitcertError, ValueError, KeyError, ZeroDivisionError, TypeError) as exc:
        raise HTTPException(
            status_code=422,
            detail={"error": type(exc).__name__, "message": str(exc)},
        ) from None


class BuildRequest(BaseModel):
    goals: List[dict] = Field(default_factory=list)
    window_radius: int = 4
    separation_gap: int = 10


class BuildResponse(BaseModel):
    plan: dict
    vector: dict
    certificates: List[dict]
    all_valid: bool


class CertifyRequest(BaseModel):
    plan: dict
    certificates: Optional[List[dict]] = None  # when given, verified byte-exactly


class CertifyResponse(BaseModel):
    certificates: List[dict]
    all_valid: bool
    replay_matches: Optional[bool] = None


class DensityRequest(BaseModel):
    plan: Optional[dict] = None
    m: int
    tests: List[dict]
    eps: str


class DensityResponse(BaseModel):
    plan: dict
    certificate: dict


class WitnessRequest(BaseModel):
    plan: Optional[dict] = None
    character: dict
    tests: List[dict]
    eps: str
    delta: Optional[str] = None


class WitnessResponse(BaseModel):
    plan: dict
    report: dict


class JointRequest(BaseModel):
    plan: Optional[dict] = None
    character: dict
    spec: dict
    target: dict


class JointResponse(BaseModel):
    plan: dict
    hit_time: int
    certificate: dict


class CyclicityRequest(BaseModel):
    measure: dict
    family: dict
    plan: dict
    stage: int = DEFAULT_STAGE


class CyclicityReplayRequest(BaseModel):
    report: dict


class SuiteRequest(BaseModel):
    seed: int = DEFAULT_SEED
    stage: int = DEFAULT_STAGE


def _load_plan(obj: Optional[dict]) -> StagePlan:
    if obj is None:
        return StagePlan.new()
    return StagePlan.from_json(obj)


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.get("/base/{index}")
def base_spec(index: int):
    return _core(lambda: enumerate_base(index).to_json())


@app.post("/build", response_model=BuildResponse)
def build(req: BuildRequest):
    def go():
        plan = StagePlan.new(req.window_radius, req.separation_gap)
        for g in req.goals:
            plan = plan_extend(plan, goal_from_json(g))
        certs = certify(plan)
        return BuildResponse(
            plan=plan.to_json(),
            vector=realize(plan).to_json(),
            certificates=[c.to_json() for c in certs],
            all_valid=all(c.valid for c in certs),
        )

    return _core(go)


@app.post("/certify", response_model=CertifyResponse)
def certify_plan(req: CertifyRequest):
    def go():
        plan = StagePlan.from_json(req.plan)
        certs = certify(plan)
        fresh = [c.to_json() for c in certs]
        replay = None
        if req.certificates is not None:
            replay = canonical_json(fresh) == canonical_json(req.certificates)
        return CertifyResponse(
            certificates=fresh,
            all_valid=all(c.valid for c in certs),
            replay_matches=replay,
        )

    return _core(go)


@app.post("/density", response_model=DensityResponse)
def density(req: DensityRequest):
    def go():
        plan = _load_plan(req.plan)
        goal = DensityGoal(
            req.m,
            [SparseVector.from_json(w) for w in req.tests],
            rational_from_str(req.eps),
        )
        plan = plan_extend(plan, goal)
        cert = certify(plan)[-1]
        return DensityResponse(plan=plan.to_json(), certificate=cert.to_json())

    return _core(go)


@app.post("/character/witness", response_model=WitnessResponse)
def character_witness(req: WitnessRequest):
    def go():
        plan = _load_plan(req.plan)
        plan, report = discontinuity_witness(
            plan,
            character_from_json(req.character),
            [SparseVector.from_json(w) for w in req.tests],
            rational_from_str(req.eps),
            None if req.delta is None else rational_from_str(req.delta),
        )
        return WitnessResponse(plan=plan.to_json(), report=report.to_json())

    return _core(go)


@app.post("/character/joint", response_model=JointResponse)
def character_joint(req: JointRequest):
    def go():
        plan = _load_plan(req.plan)
        plan, t = joint_density_probe(
            plan,
            character_from_json(req.character),
            NeighborhoodSpec.from_json(req.spec),
            constraint_from_json(req.target),
        )
        cert = certify(plan)[-1]
        return JointResponse(plan=plan.to_json(), hit_time=t, certificate=cert.to_json())

    return _core(go)


@app.post("/cyclicity")
def cyclicity(req: CyclicityRequest):
    def go():
        plan = StagePlan.from_json(req.plan)
        family = FunctionFamily.from_json(req.family, x=realize(plan))
        mu = FiniteMeasure.from_json(req.measure)
        report = cyclicity_report(mu, family, plan, req.stage)
        return {"report": report.to_json()}

    return _core(go)


@app.post("/cyclicity/replay")
def cyclicity_replay(req: CyclicityReplayRequest):
    def go():
        fresh = replay_report(req.report)
        return {
            "matches": canonical_json(fresh.to_json()) == canonical_json(req.report),
            "verdict": fresh.verdict,
        }

    return _core(go)


@app.post("/suite")
def suite(req: SuiteRequest):
    return run_suite(seed=req.seed, stage=req.stage)
