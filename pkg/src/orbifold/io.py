"""JSON formats: structural schemas, path-precise validation, loaders and dumpers.

Scalars are exact strings ("5/2", "1/2+1/2*sqrt(5)"), integers, or [re, im]
pairs for C64. Tensors are flat row-major entry lists.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import jsonschema

from .frobenius import FrobeniusAlgebra, builtin_algebras, make_algebra
from .morita import Bimodule, builtin_bimodules
from .scalars import Field, Q, field_from_name, format_scalar, parse_scalar
from .simplicial import Triangulation
from .tensor import Tensor

KINDS = ("algebra", "bimodule", "tri", "fusion", "bordism")

_SCALAR = {"oneOf": [{"type": "string"}, {"type": "integer"},
                     {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}]}
_SCALARS = {"type": "array", "items": _SCALAR}
_ALGEBRA_REF = {"oneOf": [{"type": "string"}, {"type": "object"}]}

_TRI = {
    "type": "object",
    "required": ["n", "simplices"],
    "properties": {
        "n": {"type": "integer", "minimum": 0, "maximum": 3},
        "simplices": {"type": "array", "minItems": 1,
                      "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
        "gluings": {"type": "array", "items": {"type": "array", "items": {
            "oneOf": [{"type": "null"},
                      {"type": "array", "items": {"type": "integer", "minimum": 0},
                       "minItems": 2, "maxItems": 2}]}}},
        "orientations": {"type": "array", "items": {"enum": [1, -1]}},
    },
}

SCHEMAS = {
    "algebra": {
        "type": "object",
        "required": ["dim", "mu", "unit", "counit"],
        "properties": {"dim": {"type": "integer", "minimum": 1}, "field": {"type": "string"},
                       "name": {"type": "string"}, "mu": _SCALARS, "unit": _SCALARS,
                       "counit": _SCALARS, "comul": _SCALARS},
    },
    "bimodule": {
        "type": "object",
        "required": ["left", "right", "dim", "left_action", "right_action"],
        "properties": {"left": _ALGEBRA_REF, "right": _ALGEBRA_REF,
                       "dim": {"type": "integer", "minimum": 1}, "name": {"type": "string"},
                       "field": {"type": "string"},
                       "left_action": _SCALARS, "right_action": _SCALARS},
    },
    "tri": _TRI,
    "fusion": {
        "type": "object",
        "required": ["labels", "dual", "N", "qdim", "F"],
        "properties": {"labels": {"type": "array", "minItems": 1},
                       "dual": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                       "N": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                       "qdim": _SCALARS, "field": {"type": "string"}, "name": {"type": "string"},
                       "F": {"type": "object", "additionalProperties": _SCALARS}},
    },
    "bordism": {
        "type": "object",
        "required": ["tri"],
        "properties": {"tri": _TRI,
                       "in": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                       "out": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
    },
}


class InputError(ValueError):
    """Unreadable file, unknown kind, or a document failing its schema."""


@dataclass
class SchemaReport:
    kind: str
    ok: bool
    errors: list = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {"kind": self.kind, "ok": self.ok, "errors": self.errors}


def _path(p) -> str:
    return "$" + "".join(f"[{x}]" if isinstance(x, int) else f".{x}" for x in p)


def _length(errors, obj, key, want):
    if key in obj and isinstance(obj[key], list) and len(obj[key]) != want:
        errors.append({"path": _path([key]),
                       "message": f"entries length {len(obj[key])} != shape product {want}"})


def _semantic(kind: str, obj: dict) -> list:
    errors: list = []
    if kind == "algebra":
        n = obj["dim"]
        for key, want in (("mu", n ** 3), ("unit", n), ("counit", n), ("comul", n ** 3)):
            _length(errors, obj, key, want)
    elif kind == "bimodule":
        m = obj["dim"]
        for side, key in (("left", "left_action"), ("right", "right_action")):
            ref = obj[side]
            if isinstance(ref, dict) and isinstance(ref.get("dim"), int):
                _length(errors, obj, key, ref["dim"] * m * m)
    elif kind in ("tri", "bordism"):
        t = obj["tri"] if kind == "bordism" else obj
        n = t["n"]
        for s, simp in enumerate(t["simplices"]):
            if len(simp) != n + 1:
                errors.append({"path": _path(["simplices", s]) if kind == "tri" else _path(["tri", "simplices", s]),
                               "message": f"simplex has {len(simp)} vertices, expected {n + 1}"})
        for key in ("gluings", "orientations"):
            if key in t and len(t[key]) != len(t["simplices"]):
                errors.append({"path": _path([key]), "message": f"{key} needs one entry per simplex"})
    elif kind == "fusion":
        r = len(obj["labels"])
        _length(errors, obj, "N", r ** 3)
        for key in ("dual", "qdim"):
            _length(errors, obj, key, r)
        for k in obj["F"]:
            try:
                tup = tuple(int(x) for x in k.strip("()").split(","))
                assert len(tup) == 6 and all(0 <= x < r for x in tup)
            except (ValueError, AssertionError):
                errors.append({"path": _path(["F", k]), "message": "F keys must be '(i,j,k,l,m,n)' label indices"})
    return errors


def schema_validate_obj(obj, kind: str) -> SchemaReport:
    if kind not in SCHEMAS:
        raise InputError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    v = jsonschema.Draft202012Validator(SCHEMAS[kind])
    errors = [{"path": _path(e.absolute_path), "message": e.message}
              for e in sorted(v.iter_errors(obj), key=lambda e: list(map(str, e.absolute_path)))]
    if not errors:
        errors = _semantic(kind, obj)
    return SchemaReport(kind, not errors, errors)


def read_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None


def schema_validate(path, kind: str) -> SchemaReport:
    return schema_validate_obj(read_json(path), kind)


def _checked(obj, kind: str, where: str = "") -> dict:
    rep = schema_validate_obj(obj, kind)
    if not rep.ok:
        e = rep.errors[0]
        raise InputError(f"{where}{e['path']}: {e['message']}")
    return obj


def _field(obj: dict, field: Field | None) -> Field:
    if field is not None:
        return field
    try:
        return field_from_name(obj.get("field", "Q"))
    except ValueError as e:
        raise InputError(str(e)) from None


def _tensor(vals, shape, field: Field) -> Tensor:
    try:
        return Tensor([parse_scalar(x, field) for x in vals], field, shape=shape)
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"bad scalar: {e}") from None


# ---------------------------------------------------------------------------
# algebras


def algebra_from_obj(obj: dict, field: Field | None = None) -> FrobeniusAlgebra:
    _checked(obj, "algebra")
    fld = _field(obj, field)
    n = obj["dim"]
    mu = _tensor(obj["mu"], (n, n, n), fld)
    comul = _tensor(obj["comul"], (n, n, n), fld) if "comul" in obj else None
    return make_algebra(mu, _tensor(obj["unit"], (n,), fld), _tensor(obj["counit"], (n,), fld),
                        comul, obj.get("name", ""))


def algebra_to_obj(A: FrobeniusAlgebra) -> dict:
    return {"dim": A.dim, "field": A.field.name, "name": A.name,
            "mu": [format_scalar(x) for x in A.mu.entries],
            "unit": [format_scalar(x) for x in A.unit.entries],
            "counit": [format_scalar(x) for x in A.counit.entries],
            "comul": [format_scalar(x) for x in A.comul.entries]}


def _resolve_algebra(ref, base: Path, field: Field | None) -> FrobeniusAlgebra:
    """Inline object, ``builtin:<name>``, or a path relative to ``base``."""
    if isinstance(ref, dict):
        return algebra_from_obj(ref, field)
    if ref.startswith("builtin:"):
        name = ref.split(":", 1)[1]
        algs = builtin_algebras(field or Q)
        if name not in algs:
            raise InputError(f"unknown built-in algebra {name!r}")
        return algs[name]
    return algebra_from_obj(read_json(base / ref), field)


def load_algebra(path, field: Field | None = None) -> FrobeniusAlgebra:
    if str(path).startswith("builtin:"):
        return _resolve_algebra(str(path), Path("."), field)
    return algebra_from_obj(read_json(path), field)


# ---------------------------------------------------------------------------
# bimodules


def bimodule_from_obj(obj: dict, base: Path = Path("."), field: Field | None = None) -> Bimodule:
    _checked(obj, "bimodule")
    fld = field or (field_from_name(obj["field"]) if "field" in obj else None)
    A = _resolve_algebra(obj["left"], base, fld)
    B = _resolve_algebra(obj["right"], base, fld)
    m = obj["dim"]
    for key, d in (("left_action", A.dim), ("right_action", B.dim)):
        if len(obj[key]) != d * m * m:
            raise InputError(f"$.{key}: entries length {len(obj[key])} != shape product {d * m * m}")
    L = _tensor(obj["left_action"], (A.dim, m, m), A.field)
    R = _tensor(obj["right_action"], (m, B.dim, m), A.field)
    return Bimodule(A, B, m, L, R, obj.get("name", ""))


def bimodule_to_obj(X: Bimodule) -> dict:
    return {"name": X.name, "field": X.left_algebra.field.name,
            "left": algebra_to_obj(X.left_algebra), "right": algebra_to_obj(X.right_algebra),
            "dim": X.dim,
            "left_action": [format_scalar(x) for x in X.left_action.entries],
            "right_action": [format_scalar(x) for x in X.right_action.entries]}


def load_bimodule(path, field: Field | None = None) -> Bimodule:
    if str(path).startswith("builtin:"):
        name = str(path).split(":", 1)[1]
        mods = builtin_bimodules(field or Q)
        if name not in mods:
            raise InputError(f"unknown built-in bimodule {name!r}")
        return mods[name]
    return bimodule_from_obj(read_json(path), Path(path).parent, field)


# ---------------------------------------------------------------------------
# triangulations, bordisms, fusion data


def load_triangulation(path) -> Triangulation:
    from .library import LIBRARY_NAMES, standard_library
    if str(path).startswith("library:"):
        try:
            return standard_library(str(path).split(":", 1)[1])
        except (KeyError, ValueError) as e:
            raise InputError(f"{e}; known: {', '.join(LIBRARY_NAMES)}") from None
    obj = _checked(read_json(path), "tri")
    return Triangulation.from_json(obj)


def load_bordism(path):
    from .tqft2d import Bordism2
    obj = _checked(read_json(path), "bordism")
    return Bordism2.from_json(obj)


def load_fusion(path, field: Field | None = None):
    from .tqft3d import SphericalFusionData, builtin_fusion
    if str(path).startswith("builtin:"):
        name = str(path).split(":", 1)[1]
        data = builtin_fusion()
        if name not in data:
            raise InputError(f"unknown built-in fusion data {name!r}")
        return data[name]
    obj = _checked(read_json(path), "fusion")
    try:
        return SphericalFusionData.from_json(obj, field)
    except (ValueError, SyntaxError) as e:
        raise InputError(str(e)) from None


def dump(obj) -> str:
    """Canonical JSON text: sorted keys, exact scalars."""
    return json.dumps(obj, sort_keys=True, default=_default)


def _default(x):
    try:
        return format_scalar(x)
    except (TypeError, ValueError):
        pass
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    if hasattr(x, "item"):
        return x.item()
    raise TypeError(f"not JSON serializable: {type(x).__name__}")
