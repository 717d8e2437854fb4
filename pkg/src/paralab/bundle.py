"""Experiment bundles: one JSON file holding named, cross-referenced objects.

Layout::

    {
      "schema": "paralab-bundle/1",
      "categories":      {name: {"fixture": id, "params": [...]} | category table},
      "fragments":       {name: [sizes]},
      "difunctors":      {name: {"base": cat, "expr": tree} | {"base": cat, "values": ..., "mapNeg": ..., "mapPos": ...}},
      "transformations": {name: {"source": dif, "target": dif, "components": {obj: {x: y}}}},
      "coalgebras":      {name: {"functor": poly, "carrier": [...], "structure": {x: value}}},
      "relations":       {name: {"left": coalg, "right": coalg, "pairs": [[x, y], ...]}},
      "candidates":      {name: {"type": text, "term": text} | {"type": text, "table": {...}}}
    }

Everything is validated on load; errors carry a JSON pointer.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .difun import difunctor_from_json, eval_difunctor_expr, expr_from_json, validate_difunctor
from .errors import InputError
from .fincat import FIXTURES, build_fixture, category_from_json, finset_fragment, validate_category
from .paranat import make_paranatural
from .poly import apply_set, poly_from_json
from .values import Fn, from_json, label

SCHEMA = "paralab-bundle/1"
SECTIONS = ("categories", "fragments", "difunctors", "transformations", "coalgebras", "relations", "candidates")


class BundleError(InputError):
    def __init__(self, pointer: str, message: str, witness=None):
        super().__init__(f"{pointer}: {message}")
        self.pointer = pointer
        self.witness = witness


def _ptr(*parts) -> str:
    return "/" + "/".join(str(p).replace("~", "~0").replace("/", "~1") for p in parts)


@dataclass
class Coalgebra:
    functor: object
    carrier: tuple
    structure: Fn


@dataclass
class Bundle:
    path: str | None = None
    categories: dict = field(default_factory=dict)
    fragments: dict = field(default_factory=dict)
    difunctors: dict = field(default_factory=dict)
    expressions: dict = field(default_factory=dict)
    transformations: dict = field(default_factory=dict)
    coalgebras: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)
    candidates: dict = field(default_factory=dict)

    def get(self, section: str, name: str, pointer: str | None = None):
        table = getattr(self, section)
        if name not in table:
            raise BundleError(pointer or _ptr(section, name), f"unknown {section[:-1]} {name!r}")
        return table[name]

    def summary(self) -> dict:
        return {s: sorted(getattr(self, s)) for s in SECTIONS}


def _load_category(j, ptr: str, name: str):
    if not isinstance(j, Mapping):
        raise BundleError(ptr, "expected an object")
    if "fixture" in j:
        fx = j["fixture"]
        if fx not in FIXTURES:
            raise BundleError(_ptr_join(ptr, "fixture"), f"unknown fixture {fx!r}")
        params = j.get("params", [])
        try:
            c = build_fixture(fx, *params)
        except InputError as e:
            raise BundleError(ptr, str(e)) from None
        except TypeError as e:
            raise BundleError(_ptr_join(ptr, "params"), f"bad fixture parameters: {e}") from None
    else:
        try:
            c = category_from_json(j, name=name)
        except InputError as e:
            raise BundleError(ptr, str(e)) from None
    rep = validate_category(c)
    if not rep.ok:
        v = rep.violations[0]
        raise BundleError(ptr, f"category law violated: {v.get('law', v)}", witness=v)
    return c


def _ptr_join(ptr: str, *parts) -> str:
    return ptr + _ptr(*parts)


def _resolve_labels(values, ptr: str, what: str) -> dict:
    return {label(v): v for v in values}


def load_bundle_json(j: Mapping, path: str | None = None) -> Bundle:
    if not isinstance(j, Mapping):
        raise BundleError("", "a bundle must be a JSON object")
    schema = j.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise BundleError(_ptr("schema"), f"unsupported schema {schema!r}")
    unknown = set(j) - set(SECTIONS) - {"schema", "description"}
    if unknown:
        raise BundleError(_ptr(sorted(unknown)[0]), "unknown section")
    b = Bundle(path=path)

    for name, cj in j.get("categories", {}).items():
        b.categories[name] = _load_category(cj, _ptr("categories", name), name)

    for name, sizes in j.get("fragments", {}).items():
        ptr = _ptr("fragments", name)
        if not isinstance(sizes, list) or not all(isinstance(n, int) and n >= 0 for n in sizes):
            raise BundleError(ptr, "a fragment is a list of non-negative sizes")
        b.fragments[name] = finset_fragment(sizes)

    def category(ref, ptr):
        if ref in b.categories:
            return b.categories[ref]
        if ref in b.fragments:
            return b.fragments[ref]
        raise BundleError(ptr, f"unknown category {ref!r}")

    for name, dj in j.get("difunctors", {}).items():
        ptr = _ptr("difunctors", name)
        if not isinstance(dj, Mapping) or "base" not in dj:
            raise BundleError(ptr, "a difunctor needs a base")
        C = category(dj["base"], _ptr_join(ptr, "base"))

        def resolve(ref, _ptr_here=_ptr_join(ptr, "expr")):
            if ref not in b.difunctors:
                raise BundleError(_ptr_here, f"unknown difunctor {ref!r}")
            return b.difunctors[ref]

        try:
            if "expr" in dj:
                e = expr_from_json(dj["expr"], resolve)
                b.expressions[name] = e
                d = eval_difunctor_expr(e, C)
                d.name = name
            else:
                d = difunctor_from_json(dj, C, name=name)
        except BundleError:
            raise
        except InputError as e:
            raise BundleError(ptr, str(e)) from None
        rep = validate_difunctor(d)
        if not rep.ok:
            v = rep.violations[0]
            raise BundleError(ptr, f"difunctor law violated: {v.get('law', v)}", witness=v)
        b.difunctors[name] = d

    for name, tj in j.get("transformations", {}).items():
        ptr = _ptr("transformations", name)
        src = b.get("difunctors", tj.get("source"), _ptr_join(ptr, "source"))
        tgt = b.get("difunctors", tj.get("target"), _ptr_join(ptr, "target"))
        C = src.base
        objs = {label(o): o for o in C.objects}
        comps = {}
        for oname, table in tj.get("components", {}).items():
            cptr = _ptr_join(ptr, "components", oname)
            if oname not in objs:
                raise BundleError(cptr, f"unknown object {oname!r}")
            I = objs[oname]
            dom = _resolve_labels(src.values[(I, I)], cptr, "source")
            cod = _resolve_labels(tgt.values[(I, I)], cptr, "target")
            t = {}
            for x, y in table.items():
                if x not in dom:
                    raise BundleError(_ptr_join(cptr, x), f"{x!r} is not in the source diagonal")
                if y not in cod:
                    raise BundleError(_ptr_join(cptr, x), f"{y!r} is not in the target diagonal")
                t[dom[x]] = cod[y]
            comps[I] = Fn(t)
        try:
            b.transformations[name] = make_paranatural(src, tgt, comps)
        except InputError as e:
            raise BundleError(ptr, str(e)) from None

    for name, cj in j.get("coalgebras", {}).items():
        ptr = _ptr("coalgebras", name)
        try:
            T = poly_from_json(cj["functor"])
            X = tuple(str(x) for x in cj["carrier"])
            struct = {str(k): from_json(v) for k, v in cj["structure"].items()}
        except (KeyError, TypeError) as e:
            raise BundleError(ptr, f"malformed coalgebra: {e}") from None
        except InputError as e:
            raise BundleError(ptr, str(e)) from None
        if set(struct) != set(X):
            raise BundleError(_ptr_join(ptr, "structure"), "structure map must be total on the carrier")
        TX = set(apply_set(T, X))
        for k, v in struct.items():
            if v not in TX:
                raise BundleError(_ptr_join(ptr, "structure", k), f"{label(v)} is not in T(carrier)")
        b.coalgebras[name] = Coalgebra(T, X, Fn(struct))

    for name, rj in j.get("relations", {}).items():
        ptr = _ptr("relations", name)
        left = b.get("coalgebras", rj.get("left"), _ptr_join(ptr, "left"))
        right = b.get("coalgebras", rj.get("right"), _ptr_join(ptr, "right"))
        pairs = set()
        for k, p in enumerate(rj.get("pairs", [])):
            if not (isinstance(p, list) and len(p) == 2):
                raise BundleError(_ptr_join(ptr, "pairs", k), "a pair is a 2-element list")
            x, y = str(p[0]), str(p[1])
            if x not in left.carrier or y not in right.carrier:
                raise BundleError(_ptr_join(ptr, "pairs", k), f"({x}, {y}) is outside the carriers")
            pairs.add((x, y))
        b.relations[name] = (rj["left"], rj["right"], pairs)

    from .freethm import load_candidate, parse_type

    for name, cj in j.get("candidates", {}).items():
        ptr = _ptr("candidates", name)
        if not isinstance(cj, Mapping) or "type" not in cj:
            raise BundleError(ptr, "a candidate needs a type")
        try:
            parse_type(cj["type"])
            cand = load_candidate(cj)
        except InputError as e:
            raise BundleError(ptr, str(e)) from None
        b.candidates[name] = (cj["type"], cand)
    return b


def load_bundle(path) -> Bundle:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise InputError(f"cannot read bundle {path}: {e.strerror}") from None
    try:
        j = json.loads(text)
    except json.JSONDecodeError as e:
        raise BundleError("", f"JSON parse error at line {e.lineno} column {e.colno}: {e.msg}") from None
    return load_bundle_json(j, path=str(p))
