"""Scene files: a labeled complex plus its fiber types, ring and options.

Scenes are UTF-8 JSON objects.  The layout is documented by the JSON schema
shipped at ``reebcert/schemas/scene.schema.json``; unknown keys are errors,
because a scene is a certificate and a misspelled key would silently change
what it certifies.  Integers are JSON numbers when ``|v| < 2**53`` and decimal
strings otherwise; both spellings are accepted on input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any, Sequence

import jsonschema

from .algebra import RingSpec, Vector
from .complex import LabeledComplex, validate
from .errors import RegistryError, SceneParseError, ValidationError
from .fibers import Classifier, FiberType, TypeRegistry

JSON_INT_BOUND = 2 ** 53


@dataclass
class Scene:
    complex: LabeledComplex
    registry: TypeRegistry
    ring: RingSpec = field(default_factory=RingSpec.integers)
    extra_relations: tuple[tuple[tuple[int, str], ...], ...] = ()
    classifier: Classifier | None = None

    def extra_vectors(self) -> list[Vector]:
        return [self.registry.vector(terms) for terms in self.extra_relations]


@lru_cache(maxsize=None)
def load_schema(name: str = "scene") -> dict:
    text = resources.files("reebcert.schemas").joinpath(f"{name}.schema.json").read_text("utf-8")
    return json.loads(text)


def _int(v) -> int:
    return int(v) if isinstance(v, str) else v


def _enc(v: int):
    return v if abs(v) < JSON_INT_BOUND else str(v)


def _pointer(path) -> str:
    out = "$"
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _classifier_from(obj: dict) -> Classifier:
    grp = obj["group"]
    return Classifier(
        _int(grp.get("free_rank", 0)),
        tuple(_int(d) for d in grp.get("torsion", [])),
        {k: tuple(_int(x) for x in v) for k, v in obj["assignment"].items()},
    )


def classifier_to_json(cl: Classifier) -> dict:
    return {
        "group": {"free_rank": cl.free_rank, "torsion": list(cl.torsion)},
        "assignment": {k: [_enc(x) for x in v] for k, v in cl.assignment.items()},
    }


def _fiber_from(obj: dict) -> FiberType:
    return FiberType(
        id=obj["id"],
        kind=obj["kind"],
        orientable=obj.get("orientable"),
        genus=obj.get("genus"),
        convention=obj.get("convention"),
        group_tag=obj.get("group_tag"),
        name=obj.get("name"),
        oriented=obj.get("oriented", False),
    )


def _fiber_to(t: FiberType) -> dict:
    out: dict[str, Any] = {"id": t.id, "kind": t.kind}
    for key in ("orientable", "genus", "convention", "group_tag", "name"):
        v = getattr(t, key)
        if v is not None:
            out[key] = v
    if t.oriented:
        out["oriented"] = True
    return out


def _loads(text: str, schema: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    errors = sorted(jsonschema.Draft202012Validator(load_schema(schema)).iter_errors(data),
                    key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = errors[0]
        raise SceneParseError(err.message, _pointer(err.absolute_path))
    return data


def parse_classifier(text: str) -> Classifier:
    """Parse a standalone classifier file (the scene's ``classifier`` block)."""
    data = _loads(text, "classifier")
    try:
        return _classifier_from(data)
    except ValueError as exc:
        raise SceneParseError(str(exc), "$") from None


def parse_scene(text: str, check: bool = True) -> Scene:
    """Parse scene JSON; with ``check`` the complex must validate cleanly."""
    data = _loads(text, "scene")
    ring = RingSpec("integers")
    if "ring" in data:
        r = data["ring"]
        try:
            ring = RingSpec(r["kind"], r.get("k"))
        except ValueError as exc:
            raise SceneParseError(str(exc), "$.ring") from None
    registry = TypeRegistry()
    for i, obj in enumerate(data["fiber_types"]):
        try:
            registry.register(_fiber_from(obj))
        except (ValueError, RegistryError) as exc:
            raise SceneParseError(str(exc), f"$.fiber_types[{i}]") from None
    n = data["dimension"]
    cells = {int(k): tuple(v) for k, v in data["cells"].items()}
    incid = {}
    for k, entries in data["boundary"].items():
        seen = set()
        for j, (face, cell, coeff) in enumerate(entries):
            if (face, cell) in seen:
                raise SceneParseError(f"repeated incidence ({face}, {cell})",
                                      f"$.boundary.{k}[{j}]")
            seen.add((face, cell))
        incid[int(k)] = [(f, c, _int(v)) for f, c, v in entries]
    bad_dims = [k for k in list(cells) + list(incid) if not 0 <= k <= n]
    if bad_dims:
        raise SceneParseError(f"dimension {bad_dims[0]} outside 0..{n}", "$.cells")
    try:
        cx = LabeledComplex.build(
            n, cells, incid, data["labels"], data.get("face_marks", {}),
            fiber_dim=data.get("fiber_dim"),
            radial_base=tuple(data.get("radial_base", ())),
            metadata=data.get("metadata", {}),
        )
    except ValueError as exc:
        raise SceneParseError(str(exc), "$.boundary") from None
    extra = []
    for i, terms in enumerate(data.get("extra_relations", [])):
        for c, t in terms:
            if t not in registry:
                raise SceneParseError(f"unknown fiber type id {t!r}", f"$.extra_relations[{i}]")
        extra.append(tuple((_int(c), t) for c, t in terms))
    classifier = None
    if "classifier" in data:
        try:
            classifier = _classifier_from(data["classifier"])
        except ValueError as exc:
            raise SceneParseError(str(exc), "$.classifier") from None
    scene = Scene(cx, registry, ring, tuple(extra), classifier)
    if check:
        rep = validate(cx, registry)
        if not rep.ok:
            raise ValidationError(rep)
    return scene


def scene_to_json(scene: Scene) -> dict:
    c = scene.complex
    out: dict[str, Any] = {}
    out["ring"] = ({"kind": "integers"} if scene.ring.is_integers
                   else {"kind": "integers_mod", "k": scene.ring.modulus})
    out["dimension"] = c.n
    if c.fiber_dim is not None:
        out["fiber_dim"] = c.fiber_dim
    out["fiber_types"] = [_fiber_to(t) for t in scene.registry]
    out["cells"] = {str(k): list(c.cells.get(k, ())) for k in range(c.n + 1)}
    out["boundary"] = {str(k): [[f, s, _enc(v)] for f, s, v in c.incidences(k)]
                       for k in range(1, c.n + 1)}
    out["labels"] = {s: c.labels[s] for s in c.top_cells if s in c.labels}
    out["face_marks"] = {f: c.face_marks[f] for f in c.faces if f in c.face_marks}
    out["extra_relations"] = [[[_enc(k), t] for k, t in terms] for terms in scene.extra_relations]
    if scene.classifier is not None:
        out["classifier"] = classifier_to_json(scene.classifier)
    if c.radial_base:
        out["radial_base"] = list(c.radial_base)
    if c.metadata:
        out["metadata"] = dict(c.metadata)
    return out


def emit_scene(scene: Scene) -> str:
    return json.dumps(scene_to_json(scene), indent=2) + "\n"
