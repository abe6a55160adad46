"""JSON encodings of instances, reports and certificates.

Rationals are always written as ``"num/den"`` strings; JSON numbers are only
used for integers.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .matprops import DeltaCertificate
from .model import Instance, SolveReport, validate
from .numeric import format_rational
from .oracle import Verdict

_KEYS = ("name", "num_vars", "num_cons", "k", "W", "w", "q", "h", "delta", "oracle_box")
_REQUIRED = ("num_vars", "num_cons", "k", "W", "w", "q", "h")


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str

    def __str__(self):
        return f"{self.line}:{self.column}: {self.message}"


class InstanceParseError(ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


def _key_position(text: str, key: str):
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    if m is None:
        return 1, 1
    line = text.count("\n", 0, m.start()) + 1
    col = m.start() - (text.rfind("\n", 0, m.start()) + 1) + 1
    return line, col


def _violation_key(message: str) -> str:
    """The field a validation message is about: the earliest field name it mentions."""
    hits = [(m.start(), key) for key in _KEYS if (m := re.search(r"\b%s\b" % key, message))]
    return min(hits)[1] if hits else ""


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def parse_instance(text: str) -> Instance:
    """Parse and validate an instance document; raises :class:`InstanceParseError`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError([Diagnostic(exc.lineno, exc.colno, exc.msg)]) from None
    if not isinstance(doc, dict):
        raise InstanceParseError([Diagnostic(1, 1, "instance must be a JSON object")])
    diags = []
    for key in _REQUIRED:
        if key not in doc:
            diags.append(Diagnostic(1, 1, f"missing field {key!r}"))
    for key in doc:
        if key not in _KEYS:
            diags.append(Diagnostic(*_key_position(text, key), f"unknown field {key!r}"))
    if diags:
        raise InstanceParseError(diags)

    def shape_error(key, msg):
        diags.append(Diagnostic(*_key_position(text, key), msg))

    for key in ("num_vars", "num_cons", "k"):
        if not _is_int(doc[key]):
            shape_error(key, f"{key} must be an integer")
    if not isinstance(doc["W"], list) or not all(isinstance(r, list) for r in doc["W"]):
        shape_error("W", "W must be a list of rows")
    elif not all(_is_int(v) for r in doc["W"] for v in r):
        shape_error("W", "W has non-integer entries")
    for key in ("w", "q", "h"):
        if not isinstance(doc[key], list):
            shape_error(key, f"{key} must be a list")
        elif not all(_is_int(v) for v in doc[key]):
            shape_error(key, f"{key} has non-integer entries")
    if doc.get("delta") is not None and not _is_int(doc["delta"]):
        shape_error("delta", "delta must be an integer")
    box = doc.get("oracle_box")
    if box is not None and not (isinstance(box, list) and all(
            isinstance(p, list) and len(p) == 2 and all(_is_int(v) for v in p) for p in box)):
        shape_error("oracle_box", "oracle_box must be a list of [lo, hi] integer pairs")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        shape_error("name", "name must be a string")
    if diags:
        raise InstanceParseError(diags)

    inst = Instance(
        num_vars=doc["num_vars"], num_cons=doc["num_cons"], k=doc["k"],
        W=tuple(tuple(r) for r in doc["W"]), w=tuple(doc["w"]), q=tuple(doc["q"]),
        h=tuple(doc["h"]), declared_delta=doc.get("delta"), name=name,
        oracle_box=None if box is None else tuple(tuple(p) for p in box))
    violations = validate(inst)
    if violations:
        raise InstanceParseError(
            [Diagnostic(*_key_position(text, _violation_key(v)), v) for v in violations])
    return inst


def instance_to_dict(inst: Instance) -> dict:
    doc = {}
    if inst.name is not None:
        doc["name"] = inst.name
    doc.update(num_vars=inst.num_vars, num_cons=inst.num_cons, k=inst.k,
               W=[list(r) for r in inst.W], w=list(inst.w), q=list(inst.q), h=list(inst.h))
    if inst.declared_delta is not None:
        doc["delta"] = inst.declared_delta
    if inst.oracle_box is not None:
        doc["oracle_box"] = [list(p) for p in inst.oracle_box]
    return doc


def format_instance(inst: Instance) -> str:
    """Deterministic JSON text; one matrix row per line."""
    doc = instance_to_dict(inst)
    parts = []
    for key, value in doc.items():
        if key in ("W", "oracle_box"):
            rows = ",\n    ".join(json.dumps(r) for r in value)
            body = f"[\n    {rows}\n  ]" if value else "[]"
        else:
            body = json.dumps(value)
        parts.append(f"  {json.dumps(key)}: {body}")
    return "{\n" + ",\n".join(parts) + "\n}\n"


def report_to_dict(report: SolveReport, include_stats: bool = True) -> dict:
    doc = {"status": report.status}
    if report.solution is not None:
        doc["solution"] = list(report.solution)
        doc["objective"] = format_rational(report.objective)
    if include_stats:
        s = report.stats
        doc["mode"] = report.mode
        doc["delta"] = report.delta
        doc["stats"] = {
            "ilp_solves": s.ilp_solves,
            "lp_solves": s.lp_solves,
            "subproblems_created": s.subproblems_created,
            "boxes_solved": s.boxes_solved,
            "grid_size_root": s.grid_size_root,
        }
    return doc


def format_report(report: SolveReport, include_stats: bool = True) -> str:
    return json.dumps(report_to_dict(report, include_stats), separators=(",", ":"))


def format_verdict(v: Verdict) -> str:
    doc = {"verdict": v.kind}
    for key in ("ratio", "f_candidate", "f_star", "f_max"):
        val = getattr(v, key)
        if val is not None:
            doc[key] = format_rational(val)
    return json.dumps(doc, separators=(",", ":"))


def format_certificate(cert: DeltaCertificate, tu_verdict) -> str:
    doc = {
        "delta": cert.delta,
        "witness": {"rows": list(cert.witness[0]), "cols": list(cert.witness[1])},
        "exhaustive": cert.exhaustive,
        "totally_unimodular": bool(tu_verdict),
        "tu_exhaustive": tu_verdict.exhaustive,
    }
    return json.dumps(doc, separators=(",", ":"))
