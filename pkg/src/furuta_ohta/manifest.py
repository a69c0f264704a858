"""JSON manifests: knots, manifold expression trees, pillowcase scenes, flow batches.

Everything is parsed and cross-checked up front, so a manifest that loads
cleanly never fails later on a dangling reference.

Expression nodes are objects with a ``type`` tag::

    {"type": "mapping_torus", "n": 2, "knot": "trefoil"}
    {"type": "torus_surgery", "base": {"type": "product", "y": {"type": "s3"}},
     "torus": {"type": "product", "knot": "trefoil"}, "p": 1, "q": 3}
    {"ref": "other-manifold-name"}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .catalog import builtin_catalog, lookup, parse_catalog
from .csflow import FlowParams, SuTriple
from .errors import ValidationError
from .knots import SeifertMatrix
from .manifolds import (
    FIBER_SUM_MATRIX,
    S3,
    AbstractTorus,
    Excision,
    FiberSum,
    GluingMatrix,
    KnotInSphere,
    MappingTorus,
    MappingTorusOfBranchLocus,
    NamedSphere,
    Product,
    ProductTorus,
    Splice,
    SurgeryCore,
    SurgeryOneOverQ,
    TorusSurgery,
    ZeroSurgery,
    dehn_twist_matrix,
)
from .pillowcase import PlaneImage, PLCurve, standard_planes, to_fraction

THREE_TAGS = {"s3", "named_sphere", "surgery_1q", "splice", "zero_surgery"}
FOUR_TAGS = {"product", "mapping_torus", "torus_surgery", "fiber_sum", "excision"}


def parse_rational(x, where: str = "value") -> Fraction:
    if isinstance(x, bool):
        raise ValidationError(f"{where}: expected a rational, got {x!r}")
    if isinstance(x, (int, str)):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"{where}: bad rational {x!r}") from exc
    if isinstance(x, float):
        return to_fraction(x)
    raise ValidationError(f"{where}: expected a rational, got {x!r}")


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ValidationError(f"{where}: expected an integer, got {x!r}")
    return x


def _field(node: Mapping, key: str, where: str):
    if key not in node:
        raise ValidationError(f"{where}: missing field {key!r}")
    return node[key]


class ExpressionParser:
    def __init__(self, knots: Mapping[str, KnotInSphere], named: Mapping[str, Any] | None = None):
        self.knots = knots
        self.named = dict(named or {})
        self._resolved: dict[str, Any] = {}
        self._stack: list[str] = []

    def knot(self, ref, where: str) -> KnotInSphere:
        if isinstance(ref, str):
            return lookup(self.knots, ref)
        if isinstance(ref, Mapping):
            label = str(_field(ref, "label", where))
            ambient = self.three(ref.get("ambient", {"type": "s3"}), f"{where}.ambient")
            try:
                v = SeifertMatrix(_field(ref, "seifert", where))
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"{where}: {exc}") from exc
            return KnotInSphere(ambient, v, label)
        raise ValidationError(f"{where}: knot must be a catalog label or an inline object")

    def _deref(self, node, where: str):
        if isinstance(node, Mapping) and "ref" in node:
            name = node["ref"]
            if name not in self.named:
                raise ValidationError(f"{where}: unknown manifold reference {name!r}")
            if name in self._stack:
                raise ValidationError(f"{where}: circular reference through {name!r}")
            if name not in self._resolved:
                self._stack.append(name)
                try:
                    self._resolved[name] = self.any(self.named[name], f"manifolds.{name}")
                finally:
                    self._stack.pop()
            return self._resolved[name]
        return None

    def any(self, node, where: str = "expr"):
        hit = self._deref(node, where)
        if hit is not None:
            return hit
        if not isinstance(node, Mapping) or "type" not in node:
            raise ValidationError(f"{where}: expected an expression object with a 'type' tag")
        tag = node["type"]
        if tag in THREE_TAGS:
            return self.three(node, where)
        if tag in FOUR_TAGS:
            return self.four(node, where)
        raise ValidationError(f"{where}: unknown expression type {tag!r}")

    def three(self, node, where: str):
        hit = self._deref(node, where)
        if hit is not None:
            if not isinstance(hit, (S3, NamedSphere, SurgeryOneOverQ, Splice, ZeroSurgery)):
                raise ValidationError(f"{where}: {node['ref']!r} is not a three-manifold")
            return hit
        tag = node.get("type") if isinstance(node, Mapping) else None
        if tag == "s3":
            return S3()
        if tag == "named_sphere":
            return NamedSphere(str(_field(node, "label", where)),
                               parse_rational(_field(node, "casson", where), f"{where}.casson"))
        if tag == "surgery_1q":
            base = self.three(_field(node, "base", where), f"{where}.base")
            return SurgeryOneOverQ(base, self.knot(_field(node, "knot", where), f"{where}.knot"),
                                   _int(_field(node, "q", where), f"{where}.q"))
        if tag == "splice":
            return Splice(self.knot(_field(node, "k1", where), f"{where}.k1"),
                          self.knot(_field(node, "k2", where), f"{where}.k2"))
        if tag == "zero_surgery":
            return ZeroSurgery(self.knot(_field(node, "knot", where), f"{where}.knot"))
        raise ValidationError(f"{where}: expected a three-manifold expression, got type {tag!r}")

    def torus(self, node, where: str):
        if not isinstance(node, Mapping) or "type" not in node:
            raise ValidationError(f"{where}: expected a torus object with a 'type' tag")
        tag = node["type"]
        if tag == "product":
            return ProductTorus(self.knot(_field(node, "knot", where), f"{where}.knot"))
        if tag == "branch_locus":
            return MappingTorusOfBranchLocus()
        if tag == "surgery_core":
            return SurgeryCore()
        if tag == "abstract":
            return AbstractTorus(str(node.get("label", "T")))
        raise ValidationError(f"{where}: unknown torus type {tag!r}")

    def glue(self, node, where: str) -> GluingMatrix:
        if isinstance(node, str):
            if node == "fiber_sum":
                return FIBER_SUM_MATRIX
            raise ValidationError(f"{where}: unknown named gluing matrix {node!r}")
        if isinstance(node, Mapping) and node.get("type") == "dehn_twist":
            return dehn_twist_matrix(_int(_field(node, "p", where), f"{where}.p"),
                                     _int(_field(node, "q", where), f"{where}.q"))
        if not isinstance(node, list):
            raise ValidationError(f"{where}: gluing matrix must be a 3x3 integer array")
        return GluingMatrix(node)

    def four(self, node, where: str):
        hit = self._deref(node, where)
        if hit is not None:
            if isinstance(hit, (S3, NamedSphere, SurgeryOneOverQ, Splice, ZeroSurgery)):
                raise ValidationError(f"{where}: {node['ref']!r} is not a four-manifold")
            return hit
        tag = node.get("type") if isinstance(node, Mapping) else None
        if tag == "product":
            return Product(self.three(_field(node, "y", where), f"{where}.y"))
        if tag == "mapping_torus":
            return MappingTorus(_int(_field(node, "n", where), f"{where}.n"),
                                self.knot(_field(node, "knot", where), f"{where}.knot"))
        if tag == "torus_surgery":
            return TorusSurgery(self.four(_field(node, "base", where), f"{where}.base"),
                                self.torus(_field(node, "torus", where), f"{where}.torus"),
                                _int(_field(node, "p", where), f"{where}.p"),
                                _int(_field(node, "q", where), f"{where}.q"))
        if tag in ("fiber_sum", "excision"):
            parts = (self.four(_field(node, "a", where), f"{where}.a"),
                     self.torus(_field(node, "ta", where), f"{where}.ta"),
                     self.four(_field(node, "b", where), f"{where}.b"),
                     self.torus(_field(node, "tb", where), f"{where}.tb"))
            if tag == "fiber_sum":
                return FiberSum(*parts)
            return Excision(*parts, self.glue(_field(node, "glue", where), f"{where}.glue"))
        raise ValidationError(f"{where}: expected a four-manifold expression, got type {tag!r}")


# -- encoding -------------------------------------------------------------------

def knot_to_json(k: KnotInSphere, catalog: Mapping[str, KnotInSphere] | None = None):
    if catalog is not None and catalog.get(k.label) == k:
        return k.label
    out = {"label": k.label, "seifert": k.seifert.as_lists()}
    if not isinstance(k.ambient, S3):
        out["ambient"] = expr_to_json(k.ambient, catalog)
    return out


def torus_to_json(t, catalog=None) -> dict:
    if isinstance(t, ProductTorus):
        return {"type": "product", "knot": knot_to_json(t.knot, catalog)}
    if isinstance(t, MappingTorusOfBranchLocus):
        return {"type": "branch_locus"}
    if isinstance(t, SurgeryCore):
        return {"type": "surgery_core"}
    return {"type": "abstract", "label": t.label}


def expr_to_json(x, catalog: Mapping[str, KnotInSphere] | None = None) -> dict:
    k = lambda kn: knot_to_json(kn, catalog)  # noqa: E731
    if isinstance(x, S3):
        return {"type": "s3"}
    if isinstance(x, NamedSphere):
        return {"type": "named_sphere", "label": x.label, "casson": str(x.casson)}
    if isinstance(x, SurgeryOneOverQ):
        return {"type": "surgery_1q", "base": expr_to_json(x.base, catalog), "knot": k(x.knot), "q": x.q}
    if isinstance(x, Splice):
        return {"type": "splice", "k1": k(x.k1), "k2": k(x.k2)}
    if isinstance(x, ZeroSurgery):
        return {"type": "zero_surgery", "knot": k(x.knot)}
    if isinstance(x, Product):
        return {"type": "product", "y": expr_to_json(x.y, catalog)}
    if isinstance(x, MappingTorus):
        return {"type": "mapping_torus", "n": x.n, "knot": k(x.knot)}
    if isinstance(x, TorusSurgery):
        return {"type": "torus_surgery", "base": expr_to_json(x.base, catalog),
                "torus": torus_to_json(x.torus, catalog), "p": x.p, "q": x.q}
    if isinstance(x, (FiberSum, Excision)):
        out = {"type": "fiber_sum" if isinstance(x, FiberSum) else "excision",
               "a": expr_to_json(x.a, catalog), "ta": torus_to_json(x.ta, catalog),
               "b": expr_to_json(x.b, catalog), "tb": torus_to_json(x.tb, catalog)}
        if isinstance(x, Excision):
            out["glue"] = x.glue.as_lists()
        return out
    raise ValidationError(f"cannot encode {x!r}")


# -- scenes -----------------------------------------------------------------------

@dataclass
class Scene:
    planes: list[PlaneImage]
    curves: list[PLCurve]
    matrices: dict[str, GluingMatrix | tuple] = field(default_factory=dict)
    checks: list[dict] = field(default_factory=list)

    def plane(self, label: str) -> PlaneImage:
        for p in self.planes:
            if p.label == label:
                return p
        std = standard_planes()
        if label in std:
            return std[label]
        raise ValidationError(f"scene: unknown plane {label!r}")


def parse_plane(node, where: str) -> PlaneImage:
    if isinstance(node, str):
        std = standard_planes()
        if node not in std:
            raise ValidationError(f"{where}: unknown standard plane {node!r}")
        return std[node]
    if not isinstance(node, Mapping):
        raise ValidationError(f"{where}: plane must be an object or a standard label")
    bp = [parse_rational(c, f"{where}.basepoint") for c in _field(node, "basepoint", where)]
    return PlaneImage(bp, tuple(_field(node, "spanning", where)), tuple(_field(node, "normal", where)),
                      str(node.get("label", "")))


def parse_curve(node, where: str) -> PLCurve:
    if not isinstance(node, Mapping):
        raise ValidationError(f"{where}: curve must be an object")
    verts = [[parse_rational(c, f"{where}.vertices") for c in v] for v in _field(node, "vertices", where)]
    curve = PLCurve(verts)
    if "closed" in node and bool(node["closed"]) != curve.closed:
        raise ValidationError(f"{where}: closed flag {node['closed']} disagrees with the vertices")
    return curve


def parse_scene(node, where: str = "scene") -> Scene:
    if not isinstance(node, Mapping):
        raise ValidationError(f"{where}: scene must be an object")
    planes = [parse_plane(p, f"{where}.planes[{i}]") for i, p in enumerate(node.get("planes", []))]
    curves = [parse_curve(c, f"{where}.curves[{i}]") for i, c in enumerate(node.get("curves", []))]
    matrices = {}
    for label, m in dict(node.get("matrices", {})).items():
        if not isinstance(m, list) or len(m) != 3 or any(not isinstance(r, list) or len(r) != 3 for r in m):
            raise ValidationError(f"{where}.matrices.{label}: expected a 3x3 integer array")
        if any(isinstance(v, bool) or not isinstance(v, int) for r in m for v in r):
            raise ValidationError(f"{where}.matrices.{label}: entries must be integers")
        matrices[label] = tuple(tuple(r) for r in m)
    scene = Scene(planes, curves, matrices, list(node.get("checks", [])))
    for i, chk in enumerate(scene.checks):
        w = f"{where}.checks[{i}]"
        if not isinstance(chk, Mapping) or chk.get("kind") != "gluing":
            raise ValidationError(f"{w}: only checks of kind 'gluing' are supported")
        if _field(chk, "matrix", w) not in matrices:
            raise ValidationError(f"{w}: unknown matrix {chk['matrix']!r}")
        scene.plane(_field(chk, "plane", w))
        scene.plane(_field(chk, "expect", w))
    return scene


# -- flows --------------------------------------------------------------------------

@dataclass
class FlowBatch:
    params: FlowParams
    initial: list[SuTriple]


def parse_params(node, where: str = "params") -> FlowParams:
    if not isinstance(node, Mapping):
        raise ValidationError(f"{where}: params must be an object")
    allowed = {"step", "t_max", "truncation_radius", "sign_convention", "clock", "sample_every"}
    unknown = set(node) - allowed
    if unknown:
        raise ValidationError(f"{where}: unknown flow parameters {sorted(unknown)}")
    kw = dict(node)
    for key in ("step", "t_max", "truncation_radius"):
        if key in kw and isinstance(kw[key], str):
            kw[key] = float(parse_rational(kw[key], f"{where}.{key}"))
    return FlowParams(**kw)


def parse_triple(values, where: str) -> SuTriple:
    if not isinstance(values, list) or len(values) != 9:
        raise ValidationError(f"{where}: initial condition must be nine numbers")
    return SuTriple.from_flat([float(parse_rational(v, where)) for v in values])


def parse_flow_batch(node, where: str = "flow") -> FlowBatch:
    if isinstance(node, list):
        node = {"initial": node}
    if not isinstance(node, Mapping):
        raise ValidationError(f"{where}: flow batch must be an object or an array")
    params = parse_params(node.get("params", {}), f"{where}.params")
    initial = [parse_triple(v, f"{where}.initial[{i}]")
               for i, v in enumerate(_field(node, "initial", where))]
    return FlowBatch(params, initial)


# -- manifest -----------------------------------------------------------------------

@dataclass
class Manifest:
    knots: dict[str, KnotInSphere]
    manifolds: dict[str, Any]
    scenes: dict[str, Scene]
    flows: dict[str, FlowBatch]
    source: dict = field(default_factory=dict)

    def manifold(self, name: str):
        if name not in self.manifolds:
            raise ValidationError(f"unknown manifold {name!r}; known: {sorted(self.manifolds)}")
        return self.manifolds[name]


def _knots_section(node, base: Path | None) -> dict[str, KnotInSphere]:
    knots = builtin_catalog()
    if node is None or node == "builtin":
        return knots
    if isinstance(node, Mapping) and "catalog" in node:
        path = Path(node["catalog"])
        if base is not None and not path.is_absolute():
            path = base / path
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ValidationError(f"knots: cannot read catalog {path}: {exc}") from exc
        node = data
    extra = parse_catalog(node)
    clash = set(extra) & set(knots)
    for label in clash:
        if extra[label] != knots[label]:
            raise ValidationError(f"knots: {label!r} conflicts with the built-in entry")
    knots.update(extra)
    return knots


def parse_manifest(data, base: Path | None = None) -> Manifest:
    if not isinstance(data, Mapping):
        raise ValidationError("manifest must be a JSON object")
    unknown = set(data) - {"knots", "manifolds", "scenes", "flows"}
    if unknown:
        raise ValidationError(f"manifest: unknown sections {sorted(unknown)}")
    knots = _knots_section(data.get("knots"), base)
    raw = data.get("manifolds", {})
    if not isinstance(raw, Mapping):
        raise ValidationError("manifest.manifolds must be an object of named expressions")
    parser = ExpressionParser(knots, raw)
    manifolds = {name: parser.any({"ref": name}, f"manifolds.{name}") for name in raw}
    scenes = {}
    for name, node in dict(data.get("scenes", {})).items():
        if isinstance(node, str):
            path = Path(node) if base is None or Path(node).is_absolute() else base / node
            try:
                node = json.loads(path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise ValidationError(f"scenes.{name}: cannot read {path}: {exc}") from exc
        scenes[name] = parse_scene(node, f"scenes.{name}")
    flows = {name: parse_flow_batch(node, f"flows.{name}")
             for name, node in dict(data.get("flows", {})).items()}
    return Manifest(knots, manifolds, scenes, flows, dict(data))


def load_manifest(path: str | Path) -> Manifest:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ValidationError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"manifest {path} is not valid JSON: {exc}") from exc
    return parse_manifest(data, path.parent)
