"""JSON file formats for instances, point sets and match reports.

Numbers are read from their literal text (``parse_float``/``parse_int``
hooks), so ``0.1`` in a file means exactly 1/10.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import FormatError
from .ksum import KSumInstance, LdtInstance, SolutionTuple
from .model import AffineMap, MatchReport, Pattern, Scene, Similarity
from .numeric import (
    COMPLEX,
    CVECTOR,
    SCALAR,
    ComplexRational,
    Ring,
    format_number,
    parse_number,
)


def loads(text: str):
    try:
        return json.loads(text, parse_float=str, parse_int=str)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def read(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    data = loads(text)
    if not isinstance(data, dict):
        raise FormatError(f"{path}: expected a JSON object")
    return data


def _int(value, name) -> int:
    try:
        return int(str(value))
    except ValueError:
        raise FormatError(f"{name} must be an integer, got {value!r}") from None


# ---------------------------------------------------------- ring elements

def _complex(value) -> ComplexRational:
    if not isinstance(value, list) or len(value) != 2:
        raise FormatError(f"complex numbers are [re, im] pairs, got {value!r}")
    return ComplexRational(parse_number(value[0]), parse_number(value[1]))


def element_from_json(ring: Ring, value):
    if ring.tag == SCALAR:
        return ring.element(parse_number(value))
    if ring.tag == COMPLEX:
        return ring.element(_complex(value))
    if not isinstance(value, list):
        raise FormatError(f"vector elements are lists, got {value!r}")
    if ring.tag == CVECTOR:
        return ring.element([_complex(v) for v in value])
    return ring.element([parse_number(v) for v in value])


def _complex_json(c: ComplexRational):
    return [format_number(c.re), format_number(c.im)]


def element_to_json(a):
    ring = a.ring
    if ring.tag == SCALAR:
        return format_number(a.value)
    if ring.tag == COMPLEX:
        return _complex_json(a.value)
    if ring.tag == CVECTOR:
        return [_complex_json(c) for c in a.items]
    return [format_number(x) for x in a.items]


# -------------------------------------------------------------- instances

def instance_from_json(data: dict):
    """KSumInstance, or LdtInstance when ``beta`` is present."""
    try:
        ring_data = data.get("ring", {"tag": SCALAR, "arity": 1})
        ring = Ring(str(ring_data.get("tag", SCALAR)), _int(ring_data.get("arity", 1), "arity"))
        sets = data["sets"]
        if not isinstance(sets, list) or not all(isinstance(s, list) for s in sets):
            raise FormatError("sets must be a list of lists")
        parsed = [[element_from_json(ring, v) for v in s] for s in sets]
        if "k" in data and _int(data["k"], "k") != len(parsed):
            raise FormatError(f"k={data['k']} but {len(parsed)} sets given")
        if data.get("beta") is not None:
            beta = [element_from_json(ring, v) for v in data["beta"]]
            return LdtInstance(ring, beta, parsed)
        return KSumInstance(ring, parsed)
    except KeyError as exc:
        raise FormatError(f"missing field {exc}") from None
    except (TypeError, AttributeError) as exc:
        raise FormatError(f"malformed instance: {exc}") from None
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(str(exc)) from None


def instance_to_json(inst) -> dict:
    out = {
        "k": inst.k,
        "ring": {"tag": inst.ring.tag, "arity": inst.ring.arity},
        "sets": [[element_to_json(a) for a in s] for s in inst.sets],
    }
    if isinstance(inst, LdtInstance):
        out["beta"] = [element_to_json(b) for b in inst.beta]
    return out


# ------------------------------------------------------------- point sets

def _points(data: dict):
    if "points" not in data or not isinstance(data["points"], list):
        raise FormatError("point file needs a 'points' list")
    pts = []
    for p in data["points"]:
        if not isinstance(p, list):
            raise FormatError(f"points are coordinate lists, got {p!r}")
        pts.append(tuple(parse_number(x) for x in p))
    d = _int(data["d"], "d") if "d" in data else (len(pts[0]) if pts else 2)
    return tuple(pts), d


def scene_from_json(data: dict) -> Scene:
    pts, d = _points(data)
    return Scene(pts, d)


def pattern_from_json(data: dict, kind: str) -> Pattern:
    pts, d = _points(data)
    return Pattern(pts, d, kind)


def points_to_json(obj) -> dict:
    return {"d": obj.d, "points": [[format_number(x) for x in p] for p in obj.points]}


# ---------------------------------------------------------------- reports

def transform_to_json(t) -> dict:
    if isinstance(t, Similarity):
        return {"kind": "similarity", "w": _complex_json(t.w), "z": _complex_json(t.z),
                "mirrored": t.mirrored}
    if isinstance(t, AffineMap):
        return {"kind": "affine",
                "F": [[format_number(x) for x in row] for row in t.F],
                "t": [format_number(x) for x in t.t]}
    raise TypeError(f"unknown transform {t!r}")


def transform_from_json(data: dict):
    if data["kind"] == "similarity":
        return Similarity(_complex(data["w"]), _complex(data["z"]), bool(data["mirrored"]))
    return AffineMap(tuple(tuple(parse_number(x) for x in row) for row in data["F"]),
                     tuple(parse_number(x) for x in data["t"]))


def report_to_json(r: MatchReport) -> dict:
    return {"indices": list(r.indices), "transform": transform_to_json(r.transform)}


def report_from_json(data: dict) -> MatchReport:
    return MatchReport(tuple(int(str(i)) for i in data["indices"]),
                       transform_from_json(data["transform"]))


def solution_to_json(sol: SolutionTuple) -> dict:
    return {"indices": list(sol.indices),
            "witness": [element_to_json(a) for a in sol.witness]}
