"""Report documents: a common envelope, JSON cleaning, schema validation, text tables."""

from __future__ import annotations

import json
import math
import time
from fractions import Fraction
from importlib import resources

import jsonschema
import numpy as np

SCHEMA_ID = "hypgrowth-report/1"


def clean(obj):
    """Turn a nested result into plain JSON values (non-finite floats become strings)."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, Fraction):
        return str(obj)
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "to_json"):
        return clean(obj.to_json())
    return str(obj)


def envelope(command: str, params: dict, result=None, status: str = "ok", exit_code: int = 0,
             error: dict | None = None, deterministic: bool = False, started: float | None = None):
    doc = {"schema": SCHEMA_ID, "command": command, "status": status, "exit_code": exit_code,
           "params": clean(params), "result": clean(result) if result is not None else None}
    if error is not None:
        doc["error"] = clean(error)
    if not deterministic:
        doc["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        if started is not None:
            doc["elapsed_seconds"] = round(time.perf_counter() - started, 6)
    return doc


def load_schema() -> dict:
    text = resources.files("hypgrowth").joinpath("schema.json").read_text()
    return json.loads(text)


def validate(doc: dict) -> None:
    jsonschema.validate(doc, load_schema())


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


# ------------------------------------------------------------------ tables


def render_table(doc: dict) -> str:
    res = doc.get("result")
    lines = [f"{doc['command']}: {doc['status']} (exit {doc['exit_code']})"]
    if "error" in doc:
        err = doc["error"]
        lines.append(f"  {err.get('type')}: {err.get('message')}")
        if err.get("witness") is not None:
            lines.append(f"  witness: {json.dumps(err['witness'], sort_keys=True)}")
    if res is None:
        return "\n".join(lines)
    if doc["command"] == "growth":
        lines.append(f"{'k':>4} {'beta':>14} {'beta^(1/k)':>14}")
        for k, (b, u) in enumerate(zip(res["counts"], res["upper_bounds"])):
            lines.append(f"{k:>4} {b:>14} {'' if u is None else f'{u:.10f}':>14}")
        lines.append(f"upper bound on omega: {res['upper']}")
        lines.append(f"lower bound on omega: {res['lower_bound']}")
    elif doc["command"] == "verify-lemmas":
        lines.append(f"{'lemma':<16}{'trials':>8}{'passed':>8}{'failed':>8}{'skipped':>8}  worst_margin")
        for r in res["reports"]:
            wm = "-" if r["worst_margin"] is None else f"{r['worst_margin']:.6g}"
            lines.append(f"{r['lemma']:<16}{r['trials']:>8}{r['passed']:>8}{r['failed']:>8}"
                         f"{r['skipped']:>8}  {wm}")
        lines.append(f"calibrated delta: {res.get('calibrated_delta')}")
    else:
        lines += _flat(res, "  ")
    return "\n".join(lines)


def _flat(obj, pad, depth=0):
    out = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and depth < 2 and _short(v):
                out.append(f"{pad}{k}:")
                out += _flat(v, pad + "  ", depth + 1)
            else:
                s = json.dumps(v, sort_keys=True)
                out.append(f"{pad}{k}: {s if len(s) <= 100 else s[:97] + '...'}")
    elif isinstance(obj, list):
        for v in obj:
            s = json.dumps(v, sort_keys=True)
            out.append(f"{pad}- {s if len(s) <= 100 else s[:97] + '...'}")
    return out


def _short(v) -> bool:
    return len(v) <= 20
