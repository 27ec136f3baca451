"""
JSON files for structures, products and colourings.

Structure document:
    {"signature": {"lt": 2}, "universe": ["0", "1"], "relations": {"lt": [["0", "1"]]}}
A product document adds {"product": {"base": ..., "fibers": {a: ...}, "with_s": true}}.
A colouring document is {"colors": {"elem": "red", ...}}.
"""
from __future__ import annotations

import json
import os
from typing import Any, Mapping, Union

from ..core.errors import InputError
from ..core.structures import Signature, Structure
from ..products.product import ProductStructure, product_from_parts

PathLike = Union[str, "os.PathLike[str]"]

_STRUCTURE_KEYS = {"signature", "universe", "relations"}


def structure_to_dict(M: Structure) -> dict[str, Any]:
    return {
        "signature": M.signature.as_dict(),
        "universe": list(M.universe),
        "relations": {name: sorted(list(t) for t in M.rel(name)) for name in M.signature.names},
    }


def structure_from_dict(doc: Mapping[str, Any], allowed: frozenset[str] = frozenset()) -> Structure:
    if not isinstance(doc, Mapping):
        raise InputError("structure document must be a JSON object")
    unknown = set(doc) - _STRUCTURE_KEYS - allowed
    if unknown:
        raise InputError(f"unknown keys in structure document: {sorted(unknown)}")
    missing = {"signature", "universe"} - set(doc)
    if missing:
        raise InputError(f"structure document lacks {sorted(missing)}")
    try:
        signature = Signature.of({str(k): int(v) for k, v in doc["signature"].items()})
        universe = tuple(str(e) for e in doc["universe"])
        relations = {
            str(name): frozenset(tuple(str(x) for x in t) for t in tuples)
            for name, tuples in (doc.get("relations") or {}).items()
        }
    except (AttributeError, TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"malformed structure document: {e}") from e
    return Structure(signature, universe, relations)


def product_to_dict(P: ProductStructure) -> dict[str, Any]:
    doc = structure_to_dict(P.structure)
    doc["product"] = {
        "base": structure_to_dict(P.base),
        "fibers": {a: structure_to_dict(N) for a, N in P.fibers},
        "with_s": P.with_s,
    }
    return doc


def product_from_dict(doc: Mapping[str, Any]) -> ProductStructure:
    meta = doc.get("product") if isinstance(doc, Mapping) else None
    if not isinstance(meta, Mapping):
        raise InputError("not a product document (no 'product' key)")
    unknown = set(meta) - {"base", "fibers", "with_s"}
    if unknown:
        raise InputError(f"unknown keys in product metadata: {sorted(unknown)}")
    structure = structure_from_dict(doc, allowed=frozenset({"product"}))
    base = structure_from_dict(meta["base"])
    fibers = {str(a): structure_from_dict(N) for a, N in meta["fibers"].items()}
    return product_from_parts(base, fibers, bool(meta.get("with_s", True)), expected=structure)


def _read_json(path: PathLike) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as e:
        raise InputError(f"file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}") from e


def write_json(path: PathLike, doc: Any) -> None:
    d = os.path.dirname(os.fspath(path))
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")


def load_structure(path: PathLike) -> Structure:
    doc = _read_json(path)
    if isinstance(doc, Mapping) and "product" in doc:
        return product_from_dict(doc).structure
    return structure_from_dict(doc)


def load_product(path: PathLike) -> ProductStructure:
    return product_from_dict(_read_json(path))


def dump_structure(path: PathLike, M: Union[Structure, ProductStructure]) -> None:
    write_json(path, product_to_dict(M) if isinstance(M, ProductStructure) else structure_to_dict(M))


def coloring_to_dict(colors: Mapping[str, str]) -> dict[str, Any]:
    return {"colors": dict(colors)}


def load_coloring(path: PathLike) -> dict[str, str]:
    doc = _read_json(path)
    if not isinstance(doc, Mapping) or set(doc) != {"colors"} or not isinstance(doc["colors"], Mapping):
        raise InputError("colouring document must be {\"colors\": {element: colour}}")
    return {str(k): str(v) for k, v in doc["colors"].items()}


def dump_coloring(path: PathLike, colors: Mapping[str, str]) -> None:
    write_json(path, coloring_to_dict(colors))


def load_any(path: PathLike) -> Union[Structure, ProductStructure]:
    doc = _read_json(path)
    if isinstance(doc, Mapping) and "product" in doc:
        return product_from_dict(doc)
    return structure_from_dict(doc)
