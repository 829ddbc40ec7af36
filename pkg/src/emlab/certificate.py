"""The JSON record every checker and extractor emits."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any

from . import _backend


def jsonable(obj):
    """Best-effort conversion of emlab values into plain JSON data."""
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "terms"):  # Ordinal
        return str(obj)
    if hasattr(obj, "item"):  # numpy scalar
        return obj.item()
    return str(obj)


@dataclass
class Certificate:
    op: str
    inputs: dict = field(default_factory=dict)
    output: Any = None
    verified: bool = False
    violations: list = field(default_factory=list)
    nominal_preconditions: dict = field(default_factory=dict)
    enforced_preconditions: dict = field(default_factory=dict)
    # density-style records: subject set, query and a True/False/None verdict
    subject: Any = None
    query: dict | None = None
    verdict: bool | None = None
    evidence: Any = None
    mode: str | None = None
    seed: int | None = None
    samples: int | None = None
    error: str | None = None
    started: float = field(default_factory=time.time)

    def to_json(self, stable: bool = False) -> dict:
        out = {
            "op": self.op,
            "inputs": jsonable(self.inputs),
            "nominal_preconditions": jsonable(self.nominal_preconditions),
            "enforced_preconditions": jsonable(self.enforced_preconditions),
            "output": jsonable(self.output),
            "verified": self.verified,
            "violations": jsonable(self.violations),
            "verdict": "unknown" if self.verdict is None else self.verdict,
        }
        for key in ("subject", "query", "evidence", "mode", "seed", "samples", "error"):
            val = getattr(self, key)
            if val is not None:
                out[key] = jsonable(val)
        if not stable:
            out["backend"] = _backend.BACKEND
            out["timestamp"] = self.started
            out["elapsed"] = round(time.time() - self.started, 6)
        return out

    def dumps(self, stable: bool = False) -> str:
        return json.dumps(self.to_json(stable), sort_keys=True)
