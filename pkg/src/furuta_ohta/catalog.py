"""Built-in knot catalog and the JSON catalog file format.

A catalog file is a JSON array of ``{"label": str, "seifert": [[int]]}``
objects; every entry is validated as a Seifert matrix on load.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Mapping

from .errors import UnknownKnot, ValidationError
from .knots import SeifertMatrix, torus_knot_2
from .manifolds import S3, KnotInSphere

UNKNOT = KnotInSphere(S3(), SeifertMatrix(), "unknot")
TREFOIL = KnotInSphere(S3(), SeifertMatrix([[-1, 1], [0, -1]]), "trefoil")
FIGURE_EIGHT = KnotInSphere(S3(), SeifertMatrix([[1, 1], [0, -1]]), "figure-eight")


def torus_knot(k: int) -> KnotInSphere:
    """T(2, 2k+1) in S^3."""
    return KnotInSphere(S3(), torus_knot_2(k), f"T(2,{2 * k + 1})")


def builtin_catalog() -> dict[str, KnotInSphere]:
    knots = [UNKNOT, TREFOIL, FIGURE_EIGHT, torus_knot(2), torus_knot(3)]
    return {k.label: k for k in knots}


def parse_catalog(data) -> dict[str, KnotInSphere]:
    if not isinstance(data, list):
        raise ValidationError("knot catalog must be a JSON array")
    out: dict[str, KnotInSphere] = {}
    for i, item in enumerate(data):
        if not isinstance(item, Mapping) or "label" not in item or "seifert" not in item:
            raise ValidationError(f"catalog entry {i} needs 'label' and 'seifert'")
        label = str(item["label"])
        if label in out:
            raise ValidationError(f"duplicate knot label {label!r}")
        try:
            v = SeifertMatrix(item["seifert"])
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"catalog entry {label!r}: {exc}") from exc
        out[label] = KnotInSphere(S3(), v, label)
    return out


def load_catalog(path: str | Path) -> dict[str, KnotInSphere]:
    with open(path, encoding="utf-8") as fh:
        return parse_catalog(json.load(fh))


def dump_catalog(knots: Iterable[KnotInSphere]) -> str:
    return json.dumps([{"label": k.label, "seifert": k.seifert.as_lists()} for k in knots],
                      indent=2)


def lookup(catalog: Mapping[str, KnotInSphere], label: str) -> KnotInSphere:
    try:
        return catalog[label]
    except KeyError:
        raise UnknownKnot(f"unknown knot {label!r}; known: {sorted(catalog)}") from None
