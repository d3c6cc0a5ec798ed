"""JSON formats and a deterministic serializer.

A complex entry is ``[re, im]`` (a bare number is read as real), a matrix is
an array of rows and a quaternion is ``[a, b, c, d]``. Documents carry a
top-level ``"v": 1``. Floats are written with 17 significant digits so equal
inputs always give byte-identical output.
"""
from __future__ import annotations

import json
import math

import jsonschema
import numpy as np

from .algebra import Algebra
from .matalg import quaternion_matrix
from .pert import PertMatrix, TensorElement

__all__ = [
    "SCHEMA_VERSION",
    "SCHEMAS",
    "ValidationError",
    "validate",
    "dumps",
    "matrix_to_json",
    "matrix_from_json",
    "quaternion_matrix_from_json",
    "algebra_from_json",
    "tensor_to_json",
    "tensor_from_json",
    "pert_matrix_to_json",
    "pert_matrix_from_json",
    "element_from_json",
    "dirac_from_json",
]

SCHEMA_VERSION = 1


class ValidationError(ValueError):
    """Input does not match the expected JSON format."""


_NUMBER = {"type": "number"}
_ENTRY = {
    "oneOf": [
        _NUMBER,
        {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2},
        {"type": "array", "items": _NUMBER, "minItems": 4, "maxItems": 4},
    ]
}
_MATRIX = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _ENTRY}}
_ALGEBRA = {
    "type": "array",
    "minItems": 1,
    "items": {
        "type": "object",
        "required": ["field", "n"],
        "properties": {"field": {"enum": ["R", "C", "H"]}, "n": {"type": "integer", "minimum": 1}},
        "additionalProperties": False,
    },
}
_VERSION = {"const": SCHEMA_VERSION}

SCHEMAS = {
    "algebra": _ALGEBRA,
    "matrix": _MATRIX,
    "tensor": {
        "type": "object",
        "required": ["v", "algebra", "terms"],
        "properties": {
            "v": _VERSION,
            "algebra": _ALGEBRA,
            "terms": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "required": ["a", "b"],
                    "properties": {"a": _MATRIX, "b": _MATRIX},
                    "additionalProperties": False,
                },
            },
        },
    },
    "pert_matrix": {
        "type": "object",
        "required": ["v", "algebra", "mat"],
        "properties": {"v": _VERSION, "algebra": _ALGEBRA, "mat": _MATRIX},
    },
    "dirac": {
        "type": "object",
        "required": ["v", "D"],
        "properties": {"v": _VERSION, "D": _MATRIX},
    },
}


def validate(doc, kind):
    try:
        jsonschema.validate(doc, SCHEMAS[kind])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ValidationError(f"invalid {kind} at {where}: {exc.message}") from None


def _format_float(x):
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    text = "%.17g" % x
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def _encode(obj, out):
    if obj is None or isinstance(obj, (bool, np.bool_)):
        out.append(json.dumps(None if obj is None else bool(obj)))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_format_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(k)) + ":")
            _encode(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(",")
            _encode(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj):
    """Compact JSON with every float written to 17 significant digits."""
    out = []
    _encode(obj, out)
    return "".join(out)


def matrix_to_json(m):
    """Nested lists of ``[re, im]``; vectors become a flat list of entries."""
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in m]
    return [matrix_to_json(row) for row in m]


def _rectangular(rows):
    if len({len(r) for r in rows}) != 1:
        raise ValidationError("matrix rows have different lengths")


def matrix_from_json(rows):
    validate(rows, "matrix")
    _rectangular(rows)
    out = np.zeros((len(rows), len(rows[0])), dtype=complex)
    for i, row in enumerate(rows):
        for j, z in enumerate(row):
            if isinstance(z, list):
                if len(z) != 2:
                    raise ValidationError(f"entry ({i},{j}) is not a complex number")
                out[i, j] = complex(z[0], z[1])
            else:
                out[i, j] = z
    return out


def quaternion_matrix_from_json(rows):
    """An ``n x n`` array of ``[a, b, c, d]`` entries, as its ``2n x 2n`` complex image."""
    validate(rows, "matrix")
    _rectangular(rows)
    if any(not isinstance(z, list) or len(z) != 4 for row in rows for z in row):
        raise ValidationError("quaternion matrix entries must be [a, b, c, d]")
    return quaternion_matrix(np.array(rows, dtype=float))


def algebra_from_json(data):
    """Algebra from its block list, or from shorthand such as ``"M2(R)+H"``."""
    if isinstance(data, str):
        try:
            return Algebra.parse(data)
        except ValueError as exc:
            raise ValidationError(str(exc)) from None
    validate(data, "algebra")
    return Algebra.from_json(data)


def _factor(rows, algebra):
    quaternionic = all(isinstance(z, list) and len(z) == 4 for row in rows for z in row)
    if quaternionic:
        if len(algebra.blocks) != 1 or algebra.blocks[0].field != "H":
            raise ValidationError("quaternion entries are only accepted for a single M_n(H) block")
        return quaternion_matrix_from_json(rows)
    return matrix_from_json(rows)


def tensor_to_json(e):
    return {
        "v": SCHEMA_VERSION,
        "algebra": e.algebra.to_json(),
        "terms": [{"a": matrix_to_json(a), "b": matrix_to_json(b)} for a, b in e.terms],
    }


def tensor_from_json(doc):
    validate(doc, "tensor")
    algebra = Algebra.from_json(doc["algebra"])
    left = [_factor(t["a"], algebra) for t in doc["terms"]]
    right = [_factor(t["b"], algebra) for t in doc["terms"]]
    d = algebra.dim
    if any(x.shape != (d, d) for x in left + right):
        raise ValidationError(f"tensor factors must be {d}x{d}")
    try:
        return TensorElement(algebra, np.array(left), np.array(right))
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def pert_matrix_to_json(m):
    return {"v": SCHEMA_VERSION, "algebra": m.algebra.to_json(), "mat": matrix_to_json(m.mat)}


def pert_matrix_from_json(doc):
    validate(doc, "pert_matrix")
    algebra = Algebra.from_json(doc["algebra"])
    try:
        return PertMatrix(algebra, matrix_from_json(doc["mat"]))
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def element_from_json(doc):
    """A tensor or a realized matrix, whichever the document holds."""
    if isinstance(doc, dict) and "terms" in doc:
        return tensor_from_json(doc)
    if isinstance(doc, dict) and "mat" in doc:
        return pert_matrix_from_json(doc)
    raise ValidationError("expected an element with 'terms' or 'mat'")


def dirac_from_json(doc):
    """A Dirac operator document ``{"v": 1, "D": matrix}`` or a bare matrix."""
    if isinstance(doc, list):
        return matrix_from_json(doc)
    validate(doc, "dirac")
    return matrix_from_json(doc["D"])
