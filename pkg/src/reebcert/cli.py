"""Command-line interface.

Exit codes: 0 success, 2 parse or validation failure, 3 incompatible
classifier, 4 usage error.  ``--json`` switches every command to the
machine-readable report described by ``schemas/report.schema.json``.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from . import __version__
from .algebra import RingSpec
from .complex import (
    STRICT,
    VISIBILITY,
    classifier_compatible,
    classifier_verdict,
    curve_relations,
    theorem1_verdict,
    universal_quotient,
    validate,
)
from .errors import ReebcertError, SceneParseError, ValidationError
from .fibers import classifier_quotient
from .generators import GENERATORS, spin_scene
from .homology import homology_over, top_homology_with_quotient
from .scene import emit_scene, parse_classifier, parse_scene

EXIT_OK, EXIT_INVALID, EXIT_INCOMPATIBLE, EXIT_USAGE = 0, 2, 3, 4
STATUS = {EXIT_OK: "ok", EXIT_INVALID: "invalid", EXIT_INCOMPATIBLE: "incompatible",
          EXIT_USAGE: "usage_error"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _relations_json(registry, rels) -> list[dict]:
    return [{"site": r.site, "vector": list(r.vector), "text": registry.format(r.vector)}
            for r in rels]


def _module_json(q) -> dict:
    return {"ring": str(q.ring), "ambient_rank": q.ambient_rank, "free_rank": q.free_rank,
            "torsion": list(q.torsion_factors), "description": q.describe()}


def _classes_json(registry, q) -> list[dict]:
    out = []
    for t in registry.ids:
        e = registry.unit(t)
        out.append({"type": t, "coordinates": list(q.coordinates(e)), "zero": q.is_zero(e)})
    return out


def _verdict_json(v) -> dict:
    return {
        "status": v.status,
        "nonvanishing": v.nonvanishing,
        "witness_cell": v.witness_cell,
        "witness": {k: list(x) for k, x in v.witness.items()},
        "source": v.source,
        "group": {"free_rank": v.free_rank, "torsion": list(v.torsion)},
    }


def _top_json(th) -> dict:
    return {"free_rank": th.free_rank, "torsion": list(th.torsion),
            "description": th.describe(), "canonical_class": list(th.canonical_class),
            "canonical_nonzero": th.canonical_nonzero,
            "canonical_generates": th.canonical_generates}


def _homology_json(h) -> list[dict]:
    return [{"dim": k, "free_rank": f, "torsion": list(t), "description": h.describe(k)}
            for k, (f, t) in enumerate(h.groups)]


def cmd_validate(args, rep):
    scene = parse_scene(_read(args.scene), check=False)
    v = validate(scene.complex, scene.registry)
    rep["validation"] = [{"code": x.code, "message": x.message, "cells": list(x.cells)}
                         for x in v.violations]
    return EXIT_OK if v.ok else EXIT_INVALID


def cmd_relations(args, rep):
    scene = parse_scene(_read(args.scene))
    rep["validation"] = []
    rels = curve_relations(scene.complex, scene.registry, args.mode)
    rep["relations"] = _relations_json(scene.registry, rels)
    return EXIT_OK


def cmd_module(args, rep):
    scene = parse_scene(_read(args.scene))
    rep["validation"] = []
    rels = curve_relations(scene.complex, scene.registry, args.mode)
    rep["relations"] = _relations_json(scene.registry, rels)
    q = universal_quotient(scene.complex, scene.registry, scene.ring,
                           scene.extra_vectors(), args.mode)
    rep["module"] = _module_json(q)
    rep["classes"] = _classes_json(scene.registry, q)
    return EXIT_OK


def cmd_check(args, rep):
    scene = parse_scene(_read(args.scene))
    rep["validation"] = []
    c, reg = scene.complex, scene.registry
    cl = parse_classifier(_read(args.classifier)) if args.classifier else scene.classifier
    if cl is not None:
        compat = classifier_compatible(c, reg, cl)
        rep["classifier"] = {
            "group": cl.describe(),
            "compatible": compat.compatible,
            "offending": None if compat.compatible else {
                "site": compat.offending.site,
                "vector": list(compat.offending.vector),
                "text": reg.format(compat.offending.vector),
                "image": list(cl.evaluate(reg, compat.offending.vector)),
            },
        }
        if not compat.compatible:
            return EXIT_INCOMPATIBLE
        q = classifier_quotient(cl, reg)
        rep["module"] = _module_json(q)
        rep["classes"] = _classes_json(reg, q)
        rep["verdict"] = _verdict_json(classifier_verdict(c, reg, cl))
    else:
        rep["relations"] = _relations_json(reg, curve_relations(c, reg, args.mode))
        q = universal_quotient(c, reg, scene.ring, scene.extra_vectors(), args.mode)
        rep["module"] = _module_json(q)
        rep["classes"] = _classes_json(reg, q)
        rep["verdict"] = _verdict_json(theorem1_verdict(c, reg, q))
    rep["top_homology"] = _top_json(top_homology_with_quotient(c, reg, q))
    return EXIT_OK


def cmd_homology(args, rep):
    scene = parse_scene(_read(args.scene))
    rep["validation"] = []
    try:
        ring = RingSpec.parse(args.ring)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep["homology"] = _homology_json(homology_over(scene.complex, ring))
    rep["homology_ring"] = str(ring)
    q = universal_quotient(scene.complex, scene.registry, scene.ring, scene.extra_vectors())
    rep["module"] = _module_json(q)
    rep["top_homology"] = _top_json(top_homology_with_quotient(scene.complex, scene.registry, q))
    return EXIT_OK


def cmd_generate(args, rep):
    params = {}
    for key in ("g", "seed", "size", "types", "surface"):
        val = getattr(args, key)
        if val is not None:
            params[key] = val
    try:
        scene = GENERATORS[args.name](**params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(args.output, emit_scene(scene))
    rep["output"] = args.output or "-"
    return EXIT_OK


def cmd_spin(args, rep):
    scene = parse_scene(_read(args.scene))
    try:
        out = spin_scene(scene, args.base or None)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(args.output, emit_scene(out))
    rep["output"] = args.output or "-"
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="reebcert", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"reebcert {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("validate", help="check a scene's structural invariants")
    s.add_argument("scene")
    s.set_defaults(func=cmd_validate)

    for name, func, hlp in (("relations", cmd_relations, "list relation vectors"),
                            ("module", cmd_module, "present the universal quotient")):
        s = sub.add_parser(name, help=hlp)
        s.add_argument("scene")
        s.add_argument("--mode", choices=[STRICT, VISIBILITY], default=STRICT)
        s.set_defaults(func=func)

    s = sub.add_parser("check", help="top-homology non-vanishing verdict")
    s.add_argument("scene")
    s.add_argument("--classifier", help="classifier JSON file (overrides the scene's)")
    s.add_argument("--mode", choices=[STRICT, VISIBILITY], default=STRICT)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("homology", help="cellular homology of the underlying complex")
    s.add_argument("scene")
    s.add_argument("--ring", default="z", help="z, z2 or z<k>")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("generate", help="write one of the built-in scenes")
    s.add_argument("name", choices=sorted(GENERATORS))
    s.add_argument("--g", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--size", type=int)
    s.add_argument("--types", type=int)
    s.add_argument("--surface", choices=["crosscap", "torus"])
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("spin", help="spin a graph scene into a round-fold 2-complex")
    s.add_argument("scene")
    s.add_argument("--base", action="append", help="radial base vertex (repeatable)")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_spin)
    return p


def _render_human(rep: dict[str, Any]) -> str:
    lines = [f"command: {' '.join(rep['command'])}", f"status: {rep['status']}"]
    if "error" in rep:
        lines.append(f"error: {rep['error']}")
    if "validation" in rep:
        if rep["validation"]:
            lines.append("validation:")
            lines += [f"  [{v['code']}] {v['message']}" for v in rep["validation"]]
        else:
            lines.append("validation: clean")
    if "relations" in rep:
        lines.append(f"relations ({len(rep['relations'])}):")
        lines += [f"  {r['site']}: {r['text']}" for r in rep["relations"]]
    if "classifier" in rep:
        cl = rep["classifier"]
        lines.append(f"classifier: group {cl['group']}, "
                     f"{'compatible' if cl['compatible'] else 'incompatible'}")
        if cl["offending"]:
            o = cl["offending"]
            lines.append(f"  offending relation at {o['site']}: {o['text']} -> {o['image']}")
    if "module" in rep:
        m = rep["module"]
        lines.append(f"module: {m['description']} (free rank {m['free_rank']}, "
                     f"torsion {m['torsion']}, ring {m['ring']})")
    if "classes" in rep:
        lines.append("classes:")
        lines += [f"  {c['type']}: {c['coordinates']}{' (zero)' if c['zero'] else ''}"
                  for c in rep["classes"]]
    if "verdict" in rep:
        v = rep["verdict"]
        lines.append(f"verdict: {v['status']} (witness cell: {v['witness_cell']}, "
                     f"source: {v['source']})")
        lines += [f"  {k}: {x}" for k, x in v["witness"].items()]
    if "homology" in rep:
        lines.append(f"homology over {rep['homology_ring']}:")
        lines += [f"  H_{h['dim']} = {h['description']}" for h in rep["homology"]]
    if "top_homology" in rep:
        t = rep["top_homology"]
        lines.append(f"top homology with module coefficients: {t['description']}; "
                     f"canonical class {t['canonical_class']}"
                     f"{' (generator)' if t['canonical_generates'] else ''}")
    if "output" in rep and rep["output"] != "-":
        lines.append(f"wrote: {rep['output']}")
    return "\n".join(lines) + "\n"


def run(argv: Sequence[str]) -> tuple[int, dict[str, Any]]:
    """Execute a command line; returns the exit code and the report."""
    argv = list(argv)
    as_json = "--json" in argv
    argv = [a for a in argv if a != "--json"]
    rep: dict[str, Any] = {"command": argv}
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("no command given")
        code = args.func(args, rep)
    except UsageError as exc:
        code, rep["error"] = EXIT_USAGE, str(exc)
    except ValidationError as exc:
        code = EXIT_INVALID
        rep["validation"] = [{"code": v.code, "message": v.message, "cells": list(v.cells)}
                             for v in exc.report.violations]
        rep["error"] = "scene failed validation"
    except SceneParseError as exc:
        code, rep["error"] = EXIT_INVALID, str(exc)
    except ReebcertError as exc:
        code, rep["error"] = EXIT_INVALID, str(exc)
    rep["status"] = STATUS[code]
    rep["exit_code"] = code
    rep["format"] = "json" if as_json else "text"
    return code, rep


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, rep = run(argv)
    writes_scene = rep["command"][:1] in (["generate"], ["spin"]) and rep.get("output") == "-"
    out = sys.stderr if writes_scene else sys.stdout
    if rep["format"] == "json":
        rep = {k: v for k, v in rep.items() if k != "format"}
        out.write(json.dumps(rep, indent=2) + "\n")
    else:
        out.write(_render_human(rep))
    return code


if __name__ == "__main__":
    sys.exit(main())
