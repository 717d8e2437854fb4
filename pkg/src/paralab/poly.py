"""Polynomial endofunctors on finite sets."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Union

from .errors import InputError
from .values import Fn, Inj, all_functions, canon, label


@dataclass(frozen=True)
class PConst:
    elements: tuple

    def __str__(self):
        return "Const{" + ",".join(label(e) for e in self.elements) + "}"


@dataclass(frozen=True)
class PId:
    def __str__(self):
        return "Id"


@dataclass(frozen=True)
class PSum:
    left: "PolyFunctor"
    right: "PolyFunctor"

    def __str__(self):
        return f"Sum({self.left},{self.right})"


@dataclass(frozen=True)
class PProd:
    left: "PolyFunctor"
    right: "PolyFunctor"

    def __str__(self):
        return f"Prod({self.left},{self.right})"


@dataclass(frozen=True)
class PPower:
    base: "PolyFunctor"
    exponent: tuple

    def __str__(self):
        return f"Power({self.base},{{{','.join(label(e) for e in self.exponent)}}})"


PolyFunctor = Union[PConst, PId, PSum, PProd, PPower]


def maybe() -> PolyFunctor:
    """``1 + Id``."""
    return PSum(PConst(("*",)), PId())


def apply_set(T: PolyFunctor, X: tuple) -> tuple:
    """``T(X)`` as a canonically ordered tuple."""
    if isinstance(T, PConst):
        return canon(T.elements)
    if isinstance(T, PId):
        return canon(X)
    if isinstance(T, PSum):
        return canon([Inj(0, a) for a in apply_set(T.left, X)] + [Inj(1, b) for b in apply_set(T.right, X)])
    if isinstance(T, PProd):
        return canon(itertools.product(apply_set(T.left, X), apply_set(T.right, X)))
    if isinstance(T, PPower):
        return canon(all_functions(canon(T.exponent), apply_set(T.base, X)))
    raise InputError(f"not a polynomial functor: {T!r}")


def apply_value(T: PolyFunctor, f: Callable, v):
    """Action of ``T(f)`` on a single element ``v`` of ``T(X)``."""
    if isinstance(T, PConst):
        return v
    if isinstance(T, PId):
        return f(v)
    if isinstance(T, PSum):
        if not isinstance(v, Inj):
            raise InputError(f"expected an injection, got {label(v)}")
        return Inj(v.side, apply_value(T.left if v.side == 0 else T.right, f, v.value))
    if isinstance(T, PProd):
        return (apply_value(T.left, f, v[0]), apply_value(T.right, f, v[1]))
    if isinstance(T, PPower):
        if not isinstance(v, Fn) or set(v.keys()) != set(T.exponent):
            raise InputError(f"exponent-set mismatch for Power at {label(v)}")
        return Fn({e: apply_value(T.base, f, y) for e, y in v.items()})
    raise InputError(f"not a polynomial functor: {T!r}")


def apply_fn(T: PolyFunctor, f: Fn, X: tuple) -> Fn:
    """``T(f)`` as a table on ``T(X)``, where ``X`` is the domain of ``f``."""
    return Fn({v: apply_value(T, f, v) for v in apply_set(T, X)})


def id_positions(T: PolyFunctor, v) -> list:
    """Elements sitting in ``Id`` positions of ``v``, left to right."""
    out: list = []
    apply_value(T, lambda x: out.append(x) or x, v)
    return out


def relation_lift(T: PolyFunctor, related: Callable, a, b) -> bool:
    """``T(R)`` membership for a relation given as a predicate."""
    if isinstance(T, PConst):
        return a == b
    if isinstance(T, PId):
        return related(a, b)
    if isinstance(T, PSum):
        return a.side == b.side and relation_lift(T.left if a.side == 0 else T.right, related, a.value, b.value)
    if isinstance(T, PProd):
        return relation_lift(T.left, related, a[0], b[0]) and relation_lift(T.right, related, a[1], b[1])
    if isinstance(T, PPower):
        return all(relation_lift(T.base, related, a(e), b(e)) for e in T.exponent)
    raise InputError(f"not a polynomial functor: {T!r}")


def poly_to_json(T: PolyFunctor):
    if isinstance(T, PConst):
        return {"op": "Const", "set": [label(e) for e in T.elements]}
    if isinstance(T, PId):
        return {"op": "Id"}
    if isinstance(T, (PSum, PProd)):
        return {"op": "Sum" if isinstance(T, PSum) else "Prod", "args": [poly_to_json(T.left), poly_to_json(T.right)]}
    if isinstance(T, PPower):
        return {"op": "Power", "args": [poly_to_json(T.base)], "set": [label(e) for e in T.exponent]}
    raise InputError(f"not a polynomial functor: {T!r}")


def poly_from_json(j) -> PolyFunctor:
    try:
        op = j["op"]
        if op == "Const":
            return PConst(tuple(str(e) for e in j["set"]))
        if op == "Id":
            return PId()
        if op in ("Sum", "Prod"):
            a, b = (poly_from_json(x) for x in j["args"])
            return PSum(a, b) if op == "Sum" else PProd(a, b)
        if op == "Power":
            return PPower(poly_from_json(j["args"][0]), tuple(str(e) for e in j["set"]))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed polynomial functor: {e}") from None
    raise InputError(f"unknown polynomial functor constructor {j.get('op')!r}")
