"""JSON formats for functions, generators, codes and reports.

Output is canonical: sorted keys, fixed separators, trailing newline, so
equal content gives equal bytes.  Exact rationals travel as "num/den".
"""
from __future__ import annotations

import csv
import hashlib
import io as _io
import json
from pathlib import Path

import numpy as np

from .codes import LinearCode
from .constructions import ConstructionRecord
from .core import CONVENTION, CubeFunction
from .dyadic import to_str
from .markov import FiniteSpace, MarkovGenerator
from .verify.report import _plain


class FormatError(ValueError):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, separators=(",", ": "), allow_nan=False) + "\n"


def write_json(obj, path) -> str:
    text = dumps(obj)
    Path(path).write_text(text)
    return text


def read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc.msg})") from exc


def digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _values_out(values, kind):
    if kind != "real":
        return [int(v) for v in values]
    return [float(v) for v in values]


def function_to_json(f: CubeFunction) -> dict:
    return {
        "n": f.n,
        "kind": f.kind,
        "values": _values_out(f.values, f.kind),
        "meta": dict(f.meta),
        "convention": CONVENTION,
    }


def function_from_json(obj) -> CubeFunction:
    try:
        n, kind, values = int(obj["n"]), obj.get("kind", "real"), obj["values"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"function file needs 'n' and 'values' ({exc})") from exc
    if len(values) != 1 << n:
        raise FormatError(f"'values' has {len(values)} entries, expected 2^{n}")
    return CubeFunction(np.asarray(values, dtype=np.float64), kind=kind, meta=dict(obj.get("meta", {})))


def generator_to_json(L: MarkovGenerator) -> dict:
    return {
        "mu": [float(m) for m in L.mu],
        "matrix": [[float(x) for x in row] for row in L.matrix],
        "labels": [x if isinstance(x, (int, float, str)) else float(x) for x in L.space.labels],
    }


def generator_from_json(obj) -> MarkovGenerator:
    try:
        space = FiniteSpace(np.asarray(obj["mu"], dtype=np.float64), tuple(obj.get("labels", ())))
        return MarkovGenerator(space, np.asarray(obj["matrix"], dtype=np.float64))
    except KeyError as exc:
        raise FormatError(f"generator file needs 'mu' and 'matrix' ({exc})") from exc


def code_to_json(C: LinearCode) -> dict:
    return {"length": C.length, "generators": C.to_bitstrings()}


def code_from_json(obj) -> LinearCode:
    try:
        return LinearCode.from_bitstrings(obj["generators"], int(obj["length"]))
    except KeyError as exc:
        raise FormatError(f"code file needs 'length' and 'generators' ({exc})") from exc


def record_to_json(rec: ConstructionRecord) -> dict:
    return {
        "params": _plain(rec.params),
        "claims": [c.to_json() for c in rec.claims],
        "all_hold": rec.all_hold,
        "report": _plain(rec.report),
        "mean": to_str(rec.function.exact_mean()) if rec.function.is_boolean else None,
    }


def reports_to_csv(reports) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check_id", "params", "lhs", "rhs", "slack", "tol", "pass"])
    for r in reports:
        j = r.to_json()
        w.writerow([j["check_id"], json.dumps(j["params"], sort_keys=True), repr(r.lhs), repr(r.rhs),
                    repr(r.slack), repr(r.tol), int(r.passed)])
    return buf.getvalue()
