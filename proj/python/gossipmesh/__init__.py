"""Deterministic gossip-coordination simulator for agent meshes.

The native core runs scenarios (epidemic dissemination, SWIM-style
membership, replicated state, trust-gated adoption, task allocation,
pairwise averaging) and reports metrics computed from the event trace.
This package wraps the raw JSON-string interface of the extension module
in plain dicts.
"""

from __future__ import annotations

import json as _json
from typing import Any, Optional, Union

from ._core import (
    averaging_step,
    bundled_scenarios,
    ceil_log2,
    decay_weight,
    fact_key,
    forward_probability,
)
from ._core import run as _run_raw
from ._core import run_with_trace as _run_with_trace_raw
from ._core import scenario_json as _scenario_json_raw
from ._core import trace_hash as _trace_hash_raw

__all__ = [
    "averaging_step",
    "bundled_scenarios",
    "ceil_log2",
    "decay_weight",
    "fact_key",
    "forward_probability",
    "run",
    "run_with_trace",
    "scenario",
    "trace_hash",
]

ScenarioRef = Union[str, dict]


def _as_ref(scenario_ref: ScenarioRef) -> str:
    """Bundled name, JSON text, or config dict -> string the core accepts."""
    if isinstance(scenario_ref, dict):
        return _json.dumps(scenario_ref)
    return scenario_ref


def scenario(name: str) -> dict:
    """Full config of a bundled scenario, as a dict (edit and pass to run)."""
    return _json.loads(_scenario_json_raw(name))


def run(scenario_ref: ScenarioRef, seed: Optional[int] = None) -> dict:
    """Run a scenario and return its metrics as a dict.

    `scenario_ref` is a bundled scenario name, a scenario-config JSON
    string, or a config dict as returned by `scenario()`.
    """
    return _json.loads(_run_raw(_as_ref(scenario_ref), seed))


def run_with_trace(
    scenario_ref: ScenarioRef, seed: Optional[int] = None
) -> "tuple[dict, list[dict[str, Any]]]":
    """Run a scenario; return (metrics dict, trace as a list of event dicts)."""
    metrics, ndjson = _run_with_trace_raw(_as_ref(scenario_ref), seed)
    events = [_json.loads(line) for line in ndjson.splitlines() if line]
    return _json.loads(metrics), events


def trace_hash(scenario_ref: ScenarioRef, seed: Optional[int] = None) -> int:
    """64-bit hash of the run's event trace (determinism fingerprint)."""
    return _trace_hash_raw(_as_ref(scenario_ref), seed)
