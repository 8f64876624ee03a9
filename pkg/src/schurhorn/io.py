"""JSON file formats for matrices, vectors, mixing plans, and sequences.

All decoding errors raise :class:`FormatError` so callers (notably the CLI)
can distinguish malformed input from numerical failure.  Formats:

* matrix: ``{"n": int, "data": [[re, im], ...]}`` with ``n**2`` row-major
  entries;
* vector: ``{"values": [float, ...]}``;
* mixing plan: ``{"transforms": [{"j", "k", "t"}, ...], "source_order": [...],
  "placement": [...]}`` with 1-based positions;
* sequence: ``{"prefix": [...], "tail": {"kind": ..., ...}}``;
* truncated projection: a matrix object extended with ``depth``, ``covered``,
  ``residual_bound`` and ``permutation`` (1-based indices, ``null`` for the
  slack position).
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .carpenter import TruncatedProjection
from .majorization import TTransform, TTransformPlan
from .sequences import (
    Certificate,
    DivergentHigh,
    DivergentLow,
    GeometricHigh,
    GeometricLow,
    Interleave,
    OneTail,
    SequenceSpec,
    TailRule,
    ZeroTail,
)

__all__ = [
    "FormatError",
    "load_matrix",
    "save_matrix",
    "load_vector",
    "save_vector",
    "load_plan",
    "save_plan",
    "load_sequence_spec",
    "save_sequence_spec",
    "load_truncated_projection",
    "save_truncated_projection",
    "matrix_to_obj",
    "matrix_from_obj",
    "vector_to_obj",
    "vector_from_obj",
    "plan_to_obj",
    "plan_from_obj",
    "spec_to_obj",
    "spec_from_obj",
    "truncated_projection_to_obj",
    "truncated_projection_from_obj",
]


class FormatError(ValueError):
    """A file or object does not follow one of the documented formats."""


def _read_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from exc


def _write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")


def _require(obj, key, kind, context):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"{context}: missing key {key!r}")
    value = obj[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise FormatError(f"{context}: key {key!r} must be a number")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise FormatError(f"{context}: key {key!r} must be an integer")
        return value
    if not isinstance(value, kind):
        raise FormatError(f"{context}: key {key!r} must be {kind.__name__}")
    return value


def matrix_to_obj(m) -> dict:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise FormatError(f"expected a square matrix, got shape {m.shape}")
    data = [[float(z.real), float(z.imag)] for z in m.reshape(-1)]
    return {"n": int(m.shape[0]), "data": data}


def matrix_from_obj(obj) -> np.ndarray:
    n = _require(obj, "n", int, "matrix")
    data = _require(obj, "data", list, "matrix")
    if n < 0 or len(data) != n * n:
        raise FormatError(f"matrix: expected {n * n} entries, got {len(data)}")
    flat = np.empty(n * n, dtype=np.complex128)
    for pos, pair in enumerate(data):
        if (
            not isinstance(pair, (list, tuple))
            or len(pair) != 2
            or any(isinstance(c, bool) or not isinstance(c, (int, float)) for c in pair)
        ):
            raise FormatError(f"matrix: entry {pos} must be a [re, im] pair")
        flat[pos] = complex(pair[0], pair[1])
    if not np.all(np.isfinite(flat.real)) or not np.all(np.isfinite(flat.imag)):
        raise FormatError("matrix: entries must be finite")
    return flat.reshape(n, n)


def vector_to_obj(v) -> dict:
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise FormatError(f"expected a vector, got shape {v.shape}")
    return {"values": [float(x) for x in v]}


def vector_from_obj(obj) -> np.ndarray:
    values = _require(obj, "values", list, "vector")
    out = np.empty(len(values))
    for pos, x in enumerate(values):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise FormatError(f"vector: entry {pos} must be a number")
        out[pos] = float(x)
    if not np.all(np.isfinite(out)):
        raise FormatError("vector: entries must be finite")
    return out


def plan_to_obj(plan: TTransformPlan) -> dict:
    return {
        "transforms": [
            {"j": tr.j + 1, "k": tr.k + 1, "t": tr.t} for tr in plan.transforms
        ],
        "source_order": [p + 1 for p in plan.source_order],
        "placement": [p + 1 for p in plan.placement],
    }


def plan_from_obj(obj) -> TTransformPlan:
    raw = _require(obj, "transforms", list, "plan")
    transforms = []
    for pos, entry in enumerate(raw):
        j = _require(entry, "j", int, f"plan transform {pos}")
        k = _require(entry, "k", int, f"plan transform {pos}")
        t = _require(entry, "t", float, f"plan transform {pos}")
        if j < 1 or k < 1:
            raise FormatError(f"plan transform {pos}: positions are 1-based")
        try:
            transforms.append(TTransform(j - 1, k - 1, t))
        except ValueError as exc:
            raise FormatError(f"plan transform {pos}: {exc}") from exc
    source = _require(obj, "source_order", list, "plan")
    placement = _require(obj, "placement", list, "plan")

    def positions(name, raw_list):
        out = []
        for pos, p in enumerate(raw_list):
            if isinstance(p, bool) or not isinstance(p, int) or p < 1:
                raise FormatError(f"plan {name}[{pos}] must be a 1-based integer")
            out.append(p - 1)
        return tuple(out)

    return TTransformPlan(tuple(transforms), positions("source_order", source),
                          positions("placement", placement))


_TAIL_KINDS = {
    "zero": ZeroTail,
    "one": OneTail,
    "geometric-low": GeometricLow,
    "geometric-high": GeometricHigh,
    "interleave": Interleave,
    "divergent-low": DivergentLow,
    "divergent-high": DivergentHigh,
}


def _tail_to_obj(tail: TailRule) -> dict:
    if isinstance(tail, ZeroTail):
        return {"kind": "zero"}
    if isinstance(tail, OneTail):
        return {"kind": "one"}
    if isinstance(tail, GeometricLow):
        return {"kind": "geometric-low", "c": tail.c, "r": tail.r}
    if isinstance(tail, GeometricHigh):
        return {"kind": "geometric-high", "c": tail.c, "r": tail.r}
    if isinstance(tail, Interleave):
        return {
            "kind": "interleave",
            "parts": [_tail_to_obj(tail.first), _tail_to_obj(tail.second)],
        }
    if isinstance(tail, (DivergentLow, DivergentHigh)):
        kind = "divergent-low" if isinstance(tail, DivergentLow) else "divergent-high"
        return {
            "kind": kind,
            "generator": tail.generator,
            "certificate": {
                "kind": tail.certificate.kind,
                "p": tail.certificate.p,
                "start": tail.certificate.start,
            },
        }
    raise FormatError(f"unknown tail rule {tail!r}")


def _tail_from_obj(obj) -> TailRule:
    kind = _require(obj, "kind", str, "tail")
    if kind not in _TAIL_KINDS:
        raise FormatError(f"tail: unknown kind {kind!r}")
    try:
        if kind == "zero":
            return ZeroTail()
        if kind == "one":
            return OneTail()
        if kind in ("geometric-low", "geometric-high"):
            c = _require(obj, "c", float, "tail")
            r = _require(obj, "r", float, "tail")
            return _TAIL_KINDS[kind](c, r)
        if kind == "interleave":
            parts = _require(obj, "parts", list, "tail")
            if len(parts) != 2:
                raise FormatError("tail: interleave needs exactly two parts")
            return Interleave(_tail_from_obj(parts[0]), _tail_from_obj(parts[1]))
        generator = _require(obj, "generator", str, "tail")
        cert_obj = _require(obj, "certificate", dict, "tail")
        cert = Certificate(
            _require(cert_obj, "kind", str, "certificate"),
            _require(cert_obj, "p", float, "certificate"),
            _require(cert_obj, "start", int, "certificate"),
        )
        return _TAIL_KINDS[kind](generator, cert)
    except ValueError as exc:
        raise FormatError(f"tail: {exc}") from exc


def spec_to_obj(spec: SequenceSpec) -> dict:
    return {"prefix": list(spec.prefix), "tail": _tail_to_obj(spec.tail)}


def spec_from_obj(obj) -> SequenceSpec:
    prefix = _require(obj, "prefix", list, "sequence")
    for pos, x in enumerate(prefix):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise FormatError(f"sequence: prefix entry {pos} must be a number")
    tail = _tail_from_obj(_require(obj, "tail", dict, "sequence"))
    try:
        return SequenceSpec(tuple(float(x) for x in prefix), tail)
    except ValueError as exc:
        raise FormatError(f"sequence: {exc}") from exc


def truncated_projection_to_obj(t: TruncatedProjection) -> dict:
    obj = matrix_to_obj(t.matrix)
    obj["depth"] = t.depth
    obj["covered"] = list(t.covered)
    obj["residual_bound"] = t.residual_bound
    obj["permutation"] = [i if i is not None else None for i in t.diagonal_map]
    return obj


def truncated_projection_from_obj(obj) -> TruncatedProjection:
    matrix = matrix_from_obj(obj)
    depth = _require(obj, "depth", int, "truncated projection")
    covered = _require(obj, "covered", list, "truncated projection")
    bound = _require(obj, "residual_bound", float, "truncated projection")
    permutation = _require(obj, "permutation", list, "truncated projection")
    if len(permutation) != matrix.shape[0]:
        raise FormatError("truncated projection: permutation length must match n")
    diagonal_map = []
    for pos, idx in enumerate(permutation):
        if idx is None:
            diagonal_map.append(None)
        elif isinstance(idx, bool) or not isinstance(idx, int) or idx < 1:
            raise FormatError(
                f"truncated projection: permutation[{pos}] must be null or a 1-based index"
            )
        else:
            diagonal_map.append(idx)
    for pos, idx in enumerate(covered):
        if isinstance(idx, bool) or not isinstance(idx, int) or idx < 1:
            raise FormatError(f"truncated projection: covered[{pos}] must be a 1-based index")
    if depth < 1 or (bound != math.inf and bound < 0):
        raise FormatError("truncated projection: depth must be >= 1 and bound non-negative")
    return TruncatedProjection(
        matrix=matrix,
        depth=depth,
        diagonal_map=tuple(diagonal_map),
        covered=tuple(covered),
        residual_bound=bound,
    )


def load_matrix(path) -> np.ndarray:
    return matrix_from_obj(_read_json(path))


def save_matrix(path, m) -> None:
    _write_json(path, matrix_to_obj(m))


def load_vector(path) -> np.ndarray:
    return vector_from_obj(_read_json(path))


def save_vector(path, v) -> None:
    _write_json(path, vector_to_obj(v))


def load_plan(path) -> TTransformPlan:
    return plan_from_obj(_read_json(path))


def save_plan(path, plan: TTransformPlan) -> None:
    _write_json(path, plan_to_obj(plan))


def load_sequence_spec(path) -> SequenceSpec:
    return spec_from_obj(_read_json(path))


def save_sequence_spec(path, spec: SequenceSpec) -> None:
    _write_json(path, spec_to_obj(spec))


def load_truncated_projection(path) -> TruncatedProjection:
    return truncated_projection_from_obj(_read_json(path))


def save_truncated_projection(path, t: TruncatedProjection) -> None:
    _write_json(path, truncated_projection_to_obj(t))
