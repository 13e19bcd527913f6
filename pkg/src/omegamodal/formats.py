"""JSON documents for frames, relations, models, algebras and ordinal elements.

Frame::

    {"worlds": 2, "modalities": ["box"], "neighborhoods": {"box": [[[0, 1], [1]], [[]]]}}

The outer list is indexed by world and each inner list is a world-set.
A relational frame uses ``{"worlds": n, "edges": {"E": [[0, 1], ...]}}``
instead and is converted to neighborhoods by upward closure.

Model: a frame document plus
``{"domain": d, "interpretation": {"P": {"arity": 1, "true_at": [[world, [tuple]], ...]}}}``.

Algebra: ``{"atoms": k, "modalities": [...], "box": {"E": [t_0, ..., t_(2^k - 1)]}}``.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any

from .algebra import ModalAlgebra
from .frames import NeighborhoodFrame, members, relation_to_frame, to_mask
from .ordinal import OrdinalElement, parse_ordinal
from .semantics import NeighborhoodModel
from .syntax import Formula, parse


class FormatError(ValueError):
    """A document does not match the expected shape."""


def _need(doc: Any, key: str, kind: type | tuple, where: str):
    if not isinstance(doc, dict):
        raise FormatError(f"{where}: expected a JSON object")
    if key not in doc:
        raise FormatError(f"{where}: missing {key!r}")
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise FormatError(f"{where}: {key!r} has the wrong type")
    return value


def frame_from_json(doc: dict) -> NeighborhoodFrame:
    n = _need(doc, "worlds", int, "frame")
    if "edges" in doc:
        edges = _need(doc, "edges", dict, "frame")
        try:
            rels = {m: [(int(x), int(y)) for x, y in pairs] for m, pairs in edges.items()}
            return relation_to_frame(rels, n)
        except (TypeError, ValueError) as e:
            raise FormatError(f"frame edges: {e}") from None
    neigh = _need(doc, "neighborhoods", dict, "frame")
    mods = doc.get("modalities", list(neigh))
    if set(mods) != set(neigh):
        raise FormatError(f"frame: modalities {mods} do not match neighborhoods {sorted(neigh)}")
    try:
        fams = {m: tuple(frozenset(to_mask(int(w) for w in X) for X in fam) for fam in neigh[m]) for m in mods}
        return NeighborhoodFrame(n, fams)
    except (TypeError, ValueError) as e:
        raise FormatError(f"frame: {e}") from None


def frame_to_json(frame: NeighborhoodFrame) -> dict:
    return {
        "worlds": frame.worlds,
        "modalities": list(frame.modalities),
        "neighborhoods": {
            m: [[members(X) for X in sorted(fam)] for fam in frame.neighborhoods[m]] for m in frame.modalities
        },
    }


def relations_to_json(worlds: int, relations: dict) -> dict:
    return {"worlds": worlds, "edges": {m: sorted([x, y] for x, y in rel) for m, rel in relations.items()}}


def model_from_json(doc: dict) -> NeighborhoodModel:
    frame = frame_from_json(doc)
    d = _need(doc, "domain", int, "model")
    interp = _need(doc, "interpretation", dict, "model")
    spec = {}
    for pred, entry in interp.items():
        arity = _need(entry, "arity", int, f"predicate {pred}")
        true_at = _need(entry, "true_at", list, f"predicate {pred}")
        try:
            spec[pred] = (arity, [(int(w), tuple(int(v) for v in t)) for w, t in true_at])
        except (TypeError, ValueError) as e:
            raise FormatError(f"predicate {pred}: {e}") from None
    try:
        return NeighborhoodModel.from_true_at(frame, d, spec)
    except (ValueError, IndexError) as e:
        raise FormatError(f"model: {e}") from None


def model_to_json(model: NeighborhoodModel) -> dict:
    doc = frame_to_json(model.frame)
    doc["domain"] = model.domain
    doc["interpretation"] = {
        p: {"arity": model.arity[p],
            "true_at": [[c, list(t)] for c, rel in enumerate(per_world) for t in sorted(rel)]}
        for p, per_world in model.extension.items()
    }
    return doc


def algebra_from_json(doc: dict) -> ModalAlgebra:
    k = _need(doc, "atoms", int, "algebra")
    boxes = _need(doc, "box", dict, "algebra")
    mods = doc.get("modalities", list(boxes))
    if set(mods) != set(boxes):
        raise FormatError(f"algebra: modalities {mods} do not match box tables {sorted(boxes)}")
    try:
        return ModalAlgebra(k, {m: tuple(int(t) for t in boxes[m]) for m in mods})
    except (TypeError, ValueError) as e:
        raise FormatError(f"algebra: {e}") from None


def algebra_to_json(alg: ModalAlgebra) -> dict:
    return {"atoms": alg.atoms, "modalities": list(alg.modalities), "box": {m: list(t) for m, t in alg.boxes.items()}}


def element_from_json(doc: dict) -> OrdinalElement:
    ones = _need(doc, "ones", list, "ordinal element")
    try:
        return OrdinalElement(tuple((parse_ordinal(str(lo)), parse_ordinal(str(hi))) for lo, hi in ones))
    except (TypeError, ValueError) as e:
        raise FormatError(f"ordinal element: {e}") from None


def element_to_json(x: OrdinalElement) -> dict:
    return {"ones": [[str(lo), str(hi)] for lo, hi in x.ones]}


def read_json(path: str | Path) -> Any:
    """Load a JSON file; missing files and bad JSON raise FormatError."""
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise FormatError(f"{path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: line {e.lineno}: {e.msg}") from None


def write_json(doc: Any, path: str | Path) -> None:
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


def read_corpus(text: str) -> list[Formula]:
    """One formula per line; blank lines and ``#`` comments are skipped."""
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(parse(line))
    return out


def data_path(name: str) -> Path:
    return Path(str(resources.files("omegamodal") / "data" / name))


def bundled_corpus() -> list[Formula]:
    return read_corpus(data_path("corpus.txt").read_text(encoding="utf-8"))
