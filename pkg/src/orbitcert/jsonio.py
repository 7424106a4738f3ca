"""Canonical JSON rendering: byte-identical output for identical data."""

from __future__ import annotations

import json


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def canonical_bytes(obj) -> bytes:
    return canonical_json(obj).encode("utf-8")
