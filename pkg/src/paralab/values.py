"""Hashable element values and their canonical labels.

Every element living in a difunctor cell is one of:

* ``str`` - an atom (carrier element, morphism label, constant)
* ``tuple`` - a pair / product element
* :class:`Inj` - a sum injection
* :class:`Lst` - a bounded list
* :class:`Fn` - a finite function table

``label`` renders any value to a string; two values are equal exactly when
their labels are equal (provided atoms avoid the characters ``()[]{},:``).
All ordering in the package is by label.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Iterator, Mapping

RESERVED = set("()[]{},:")


@dataclass(frozen=True)
class Inj:
    side: int  # 0 = inl, 1 = inr
    value: Any

    def __repr__(self) -> str:
        return label(self)


@dataclass(frozen=True)
class Lst:
    items: tuple

    def __repr__(self) -> str:
        return label(self)

    def __len__(self) -> int:
        return len(self.items)


class Fn:
    """Immutable finite function given by its graph."""

    __slots__ = ("_table", "_key", "_hash")

    def __init__(self, table: Mapping[Hashable, Any]):
        self._table = dict(table)
        self._key = frozenset(self._table.items())
        self._hash = hash(self._key)

    def __call__(self, x):
        return self._table[x]

    def __eq__(self, other) -> bool:
        return isinstance(other, Fn) and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return label(self)

    def __len__(self) -> int:
        return len(self._table)

    def items(self):
        return self._table.items()

    def keys(self):
        return self._table.keys()

    def get(self, x, default=None):
        return self._table.get(x, default)

    def as_dict(self) -> dict:
        return dict(self._table)


def inl(x) -> Inj:
    return Inj(0, x)


def inr(x) -> Inj:
    return Inj(1, x)


def label(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, tuple):
        return "(" + ",".join(label(x) for x in v) + ")"
    if isinstance(v, Inj):
        return ("inl(" if v.side == 0 else "inr(") + label(v.value) + ")"
    if isinstance(v, Lst):
        return "[" + ",".join(label(x) for x in v.items) + "]"
    if isinstance(v, Fn):
        pairs = sorted((label(k), label(x)) for k, x in v.items())
        return "{" + ",".join(f"{k}:{x}" for k, x in pairs) + "}"
    if hasattr(v, "canonical_label"):
        return v.canonical_label()
    if v is None:
        return "none"
    raise TypeError(f"no canonical label for {type(v).__name__}")


def canon(values: Iterable) -> tuple:
    """Distinct values sorted by label."""
    seen = {}
    for v in values:
        seen.setdefault(v, None)
    return tuple(sorted(seen, key=label))


def all_functions(dom: tuple, cod: tuple) -> Iterator[Fn]:
    """Every function dom -> cod, in lexicographic order of outputs."""
    for outs in itertools.product(cod, repeat=len(dom)):
        yield Fn(zip(dom, outs))


def count_functions(dom_size: int, cod_size: int) -> int:
    return cod_size ** dom_size


def compose_fn(g: Fn, f: Fn) -> Fn:
    return Fn({x: g(y) for x, y in f.items()})


def identity_fn(elements: Iterable) -> Fn:
    return Fn({x: x for x in elements})


# JSON encoding: atoms as strings, pairs as 2-lists, injections as
# {"inl": v}, lists as {"list": [...]}, functions as {"fn": [[k, v], ...]}.

def to_json(v):
    if isinstance(v, str):
        return v
    if isinstance(v, int) and not isinstance(v, bool):
        return v
    if isinstance(v, tuple):
        return [to_json(x) for x in v]
    if isinstance(v, Inj):
        return {("inl" if v.side == 0 else "inr"): to_json(v.value)}
    if isinstance(v, Lst):
        return {"list": [to_json(x) for x in v.items]}
    if isinstance(v, Fn):
        pairs = sorted(v.items(), key=lambda kv: label(kv[0]))
        return {"fn": [[to_json(k), to_json(x)] for k, x in pairs]}
    if hasattr(v, "canonical_label"):
        return v.canonical_label()
    raise TypeError(f"cannot encode {type(v).__name__}")


def from_json(j):
    if isinstance(j, str):
        return j
    if isinstance(j, (int, bool)):
        return label(j)
    if isinstance(j, list):
        return tuple(from_json(x) for x in j)
    if isinstance(j, dict) and len(j) == 1:
        (k, x), = j.items()
        if k == "inl":
            return Inj(0, from_json(x))
        if k == "inr":
            return Inj(1, from_json(x))
        if k == "list":
            return Lst(tuple(from_json(y) for y in x))
        if k == "fn":
            return Fn({from_json(a): from_json(b) for a, b in x})
    raise ValueError(f"unrecognised value encoding: {j!r}")
