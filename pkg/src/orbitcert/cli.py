"""Thin command-line client for the workbench service.

All computation lives behind the FastAPI endpoints; the CLI assembles request
bodies from files and flags, talks to an in-process app instance (or a remote
server via --server), and writes the canonical JSON responses to disk.
"""

from __future__ import annotations

import json
import pathlib
import sys
from typing import Optional

import click

from orbitcert.jsonio import canonical_json
from orbitcert.suite import DEFAULT_SEED, DEFAULT_STAGE, format_suite_text


class ServiceClient:
    def __init__(self, server: Optional[str] = None):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=300.0)
        else:
            from fastapi.testclient import TestClient

            from orbitcert.service import app

            self._client = TestClient(app)

    def get(self, path: str) -> dict:
        return self._finish(self._client.get(path))

    def post(self, path: str, body: dict) -> dict:
        return self._finish(self._client.post(path, json=body))

    @staticmethod
    def _finish(resp) -> dict:
        if resp.status_code != 200:
            try:
                detail = resp.json().get("detail", resp.text)
            except ValueError:
                detail = resp.text
            click.echo(canonical_json({"error": detail}), err=True)
            sys.exit(2)
        return resp.json()


def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(canonical_json({"error": "parse", "path": path, "message": str(exc)}), err=True)
        sys.exit(2)


def _write(out_dir: str, name: str, obj) -> pathlib.Path:
    d = pathlib.Path(out_dir)
    d.mkdir(parents=True, exist_ok=True)
    p = d / name
    p.write_text(canonical_json(obj) + "\n", encoding="utf-8")
    return p


def _emit(obj, fmt: str):
    if fmt == "json":
        click.echo(canonical_json(obj))


@click.group()
@click.option("--server", default=None, help="Base URL of a running service; default is in-process.")
@click.pass_context
def main(ctx, server):
    """Exact orbit certificates for the weighted bilateral shift."""
    ctx.obj = {"server": server}


@main.command()
@click.option("--goals", "goals_path", required=True, help="JSON file with a list of goal records.")
@click.option("--out", "out_dir", default=".", show_default=True)
@click.option("--radius", default=4, show_default=True)
@click.option("--gap", default=10, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text")
@click.pass_context
def build(ctx, goals_path, out_dir, radius, gap, fmt):
    """Build a plan from a goal file; write plan, vector, and certificates."""
    goals = _read_json(goals_path)
    if not isinstance(goals, list):
        click.echo(canonical_json({"error": "parse", "message": "goal file must hold a list"}), err=True)
        sys.exit(2)
    client = ServiceClient(ctx.obj["server"])
    resp = client.post("/build", {"goals": goals, "window_radius": radius, "separation_gap": gap})
    _write(out_dir, "plan.json", resp["plan"])
    _write(out_dir, "vector.json", resp["vector"])
    _write(out_dir, "certificates.json", resp["certificates"])
    _emit(resp, fmt)
    if fmt == "text":
        click.echo(f"{len(resp['certificates'])} certificates, all_valid={resp['all_valid']}")
    sys.exit(0 if resp["all_valid"] else 1)


@main.command()
@click.option("--plan", "plan_path", required=True)
@click.option("--certs", "certs_path", default=None, help="Existing certificate file to verify byte-exactly.")
@click.option("--out", "out_dir", default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text")
@click.pass_context
def certify(ctx, plan_path, certs_path, out_dir, fmt):
    """Recompute certificates from a plan file; optionally verify stored ones."""
    body = {"plan": _read_json(plan_path)}
    if certs_path:
        body["certificates"] = _read_json(certs_path)
    client = ServiceClient(ctx.obj["server"])
    resp = client.post("/certify", body)
    if out_dir:
        _write(out_dir, "certificates.json", resp["certificates"])
    _emit(resp, fmt)
    if fmt == "text":
        click.echo(f"all_valid={resp['all_valid']} replay_matches={resp['replay_matches']}")
    ok = resp["all_valid"] and resp["replay_matches"] in (None, True)
    sys.exit(0 if ok else 1)


@main.command()
@click.option("--plan", "plan_path", default=None)
@click.option("-m", "anchor", type=int, required=True, help="Anchor orbit time.")
@click.option("--tests", "tests_path", required=True, help="JSON file with a list of test vectors.")
@click.option("--eps", required=True)
@click.option("--out", "out_dir", default=".", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text")
@click.pass_context
def density(ctx, plan_path, anchor, tests_path, eps, out_dir, fmt):
    """Certify a non-negative orbit time weakly close to the anchor point."""
    body = {
        "plan": _read_json(plan_path) if plan_path else None,
        "m": anchor,
        "tests": _read_json(tests_path),
        "eps": eps,
    }
    client = ServiceClient(ctx.obj["server"])
    resp = client.post("/density", body)
    _write(out_dir, "plan.json", resp["plan"])
    _write(out_dir, "density_certificate.json", resp["certificate"])
    _emit(resp, fmt)
    if fmt == "text":
        click.echo(f"hit_time={resp['certificate']['hit_time']} valid={resp['certificate']['valid']}")
    sys.exit(0 if resp["certificate"]["valid"] else 1)


@main.command()
@click.option("--request", "request_path", required=True, help="JSON request body.")
@click.option("--mode", type=click.Choice(["witness", "joint"]), default="witness", show_default=True)
@click.option("--out", "out_dir", default=".", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text")
@click.pass_context
def character(ctx, request_path, mode, out_dir, fmt):
    """Discontinuity witnesses and joint density probes for characters."""
    body = _read_json(request_path)
    client = ServiceClient(ctx.obj["server"])
    resp = client.post(f"/character/{mode}", body)
    _write(out_dir, "plan.json", resp["plan"])
    if mode == "witness":
        _write(out_dir, "witness_report.json", resp["report"])
        ok = resp["report"]["valid"]
        if fmt == "text":
            click.echo(f"times={resp['report']['times']} separation2={resp['report']['separation2']}")
    else:
        _write(out_dir, "joint_certificate.json", resp["certificate"])
        ok = resp["certificate"]["valid"]
        if fmt == "text":
            click.echo(f"hit_time={resp['hit_time']}")
    _emit(resp, fmt)
    sys.exit(0 if ok else 1)


@main.command()
@click.option("--request", "request_path", required=True, help="JSON body: measure, family, plan, stage.")
@click.option("--stage", type=int, default=None, help="Override the stage in the request.")
@click.option("--out", "out_dir", default=".", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text")
@click.pass_context
def cyclicity(ctx, request_path, stage, out_dir, fmt):
    """Run the obstruction probe and write the report."""
    body = _read_json(request_path)
    if stage is not None:
        body["stage"] = stage
    client = ServiceClient(ctx.obj["server"])
    resp = client.post("/cyclicity", body)
    _write(out_dir, "obstruction_report.json", resp["report"])
    _emit(resp, fmt)
    if fmt == "text":
        click.echo(resp["report"]["verdict"])
    sys.exit(0)


@main.command()
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--stage", type=int, default=DEFAULT_STAGE, show_default=True)
@click.option("--out", "out_dir", default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text")
@click.pass_context
def suite(ctx, seed, stage, out_dir, fmt):
    """Run the full acceptance battery."""
    client = ServiceClient(ctx.obj["server"])
    resp = client.post("/suite", {"seed": seed, "stage": stage})
    if out_dir:
        body = dict(resp)
        body.pop("metadata", None)
        _write(out_dir, "suite_report.json", body)
        _write(out_dir, "suite_metadata.json", resp.get("metadata", {}))
    if fmt == "json":
        click.echo(canonical_json(resp))
    else:
        click.echo(format_suite_text(resp))
    sys.exit(0 if resp["all_passed"] else 1)


@main.command()
@click.argument("index", type=int)
@click.pass_context
def base(ctx, index):
    """Print the canonical base neighborhood at the given index."""
    client = ServiceClient(ctx.obj["server"])
    click.echo(canonical_json(client.get(f"/base/{index}")))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from orbitcert.service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
