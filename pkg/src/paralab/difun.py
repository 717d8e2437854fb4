"""Difunctors over finite categories: tables, an expression grammar, Struct categories."""
from __future__ import annotations

import itertools
from collections import abc
from dataclasses import dataclass, field
from typing import Any, Mapping, Union

from .errors import InputError, ResourceError, UnsupportedExpression
from .fincat import FinCategory, FinFunctor, ValidationReport
from .poly import PolyFunctor, apply_set, apply_value, poly_from_json, poly_to_json
from .values import Fn, Lst, Inj, all_functions, canon, identity_fn, label

DEFAULT_CELL_BUDGET = 200_000


class TabulatedDifunctor:
    """A difunctor ``base^op x base -> Set`` given by explicit tables.

    ``values[(I, J)]`` is a label-sorted tuple; ``neg[(m, J)]`` is the table of
    ``map- m : D(I1, J) -> D(I0, J)`` for ``m : I0 -> I1``; ``pos[(I, m)]`` is
    ``map+ m : D(I, J0) -> D(I, J1)`` for ``m : J0 -> J1``.
    """

    def __init__(self, base: FinCategory, values: Mapping, neg: Mapping, pos: Mapping, name: str = ""):
        self.base = base
        self.values = {k: tuple(v) for k, v in values.items()}
        self.neg = dict(neg)
        self.pos = dict(pos)
        self.name = name

    def diag(self, I) -> tuple:
        return self.values[(I, I)]

    def map_neg(self, m, J, x):
        return self.neg[(m, J)](x)

    def map_pos(self, I, m, x):
        return self.pos[(I, m)](x)

    def tables_equal(self, other: "TabulatedDifunctor") -> bool:
        return (
            self.values == other.values
            and self.neg == other.neg
            and self.pos == other.pos
        )

    def __repr__(self) -> str:
        return f"TabulatedDifunctor({self.name or '?'} over {self.base.name or '?'})"


def _tabulate(base: FinCategory, cell, act_neg, act_pos, name: str) -> TabulatedDifunctor:
    """Build tables from a cell function and elementwise actions."""
    values = {(I, J): cell(I, J) for I in base.objects for J in base.objects}
    neg = {}
    pos = {}
    for m in base.morphisms:
        i0, i1 = base.dom[m], base.cod[m]
        for J in base.objects:
            neg[(m, J)] = Fn({x: act_neg(m, J, x) for x in values[(i1, J)]})
        for I in base.objects:
            pos[(I, m)] = Fn({x: act_pos(I, m, x) for x in values[(I, i0)]})
    return TabulatedDifunctor(base, values, neg, pos, name)


class _View(abc.Mapping):
    """Read-only table ``k -> table[key(k)]`` over a fixed key list."""

    __slots__ = ("table", "key", "keys_")

    def __init__(self, table, key, keys):
        self.table, self.key, self.keys_ = table, key, keys

    def __getitem__(self, k):
        return self.table[self.key(k)]

    def __iter__(self):
        return iter(self.keys_())

    def __len__(self) -> int:
        return sum(1 for _ in self.keys_())


class ReindexedDifunctor(TabulatedDifunctor):
    """``d`` precomposed with a functor ``F``; tables are looked up on demand."""

    def __init__(self, d: TabulatedDifunctor, F: FinFunctor, name: str = ""):
        self.inner, self.functor = d, F
        self.base = C = F.source
        self.name = name or f"{d.name}[F]"
        ob, mo = F.obj_map, F.mor_map
        objs, mors = C.objects, C.morphisms
        self.values = _View(d.values, lambda k: (ob[k[0]], ob[k[1]]), lambda: ((I, J) for I in objs for J in objs))
        self.neg = _View(d.neg, lambda k: (mo[k[0]], ob[k[1]]), lambda: ((m, J) for m in mors for J in objs))
        self.pos = _View(d.pos, lambda k: (ob[k[0]], mo[k[1]]), lambda: ((I, m) for m in mors for I in objs))

    def tables_equal(self, other: TabulatedDifunctor) -> bool:
        # equal functors out of the same data give equal tables
        if isinstance(other, ReindexedDifunctor) and other.inner is self.inner and self.functor.tables_equal(other.functor):
            return True
        return super().tables_equal(other)


def reindex(d: TabulatedDifunctor, F: FinFunctor, name: str = "") -> TabulatedDifunctor:
    """Precompose ``d`` (over ``F.target``) with ``F`` in both arguments."""
    if F.target is not d.base and not F.target.tables_equal(d.base):
        raise InputError("functor target does not match difunctor base")
    if isinstance(d, ReindexedDifunctor):
        G = d.functor
        F = FinFunctor(
            F.source,
            G.target,
            {o: G.obj_map[x] for o, x in F.obj_map.items()},
            {m: G.mor_map[x] for m, x in F.mor_map.items()},
        )
        d = d.inner
    return ReindexedDifunctor(d, F, name)


# -- expression grammar ----------------------------------------------------


@dataclass(frozen=True)
class Hom:
    pass


@dataclass(frozen=True)
class Const:
    elements: tuple


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Prod:
    left: Any
    right: Any


@dataclass(frozen=True)
class Sum:
    left: Any
    right: Any


@dataclass(frozen=True)
class Arrow:
    dom: Any
    cod: Any


@dataclass(frozen=True)
class DiYo:
    """Direpresentable difunctor; diagonal at K is ``hom(J, K) x hom(K, I)``."""

    J: Any
    I: Any


@dataclass(frozen=True)
class FromPresheaf:
    sets: Any  # object -> elements
    maps: Any  # morphism m: A -> B  ->  table P(B) -> P(A)


@dataclass(frozen=True)
class FromCovariant:
    sets: Any
    maps: Any  # morphism m: A -> B  ->  table F(A) -> F(B)


@dataclass(frozen=True)
class AlgOf:
    functor: PolyFunctor


@dataclass(frozen=True)
class CoalgOf:
    functor: PolyFunctor


@dataclass(frozen=True)
class ListOf:
    elem: Any
    bound: int


@dataclass(frozen=True, eq=False)
class Given:
    """An already tabulated difunctor used inside an expression."""

    difunctor: TabulatedDifunctor


DifunctorExpr = Union[Hom, Const, Var, Prod, Sum, Arrow, DiYo, FromPresheaf, FromCovariant, AlgOf, CoalgOf, ListOf, Given]

_FRAGMENT_ONLY = (Arrow, Var, AlgOf, CoalgOf, ListOf)


def _cell_guard(n: int, budget: int, what: str) -> None:
    if n > budget:
        raise ResourceError(f"{what}: cell of size {n} exceeds budget {budget}")


def eval_difunctor_expr(e, base: FinCategory, budget: int = DEFAULT_CELL_BUDGET) -> TabulatedDifunctor:
    if isinstance(e, _FRAGMENT_ONLY) and not base.is_fragment:
        raise UnsupportedExpression(f"{type(e).__name__} is only evaluable over a finite-set fragment")
    C = base
    if isinstance(e, Given):
        if e.difunctor.base is not base and not e.difunctor.base.tables_equal(base):
            raise InputError("embedded difunctor lives over a different base")
        return e.difunctor
    if isinstance(e, Hom):
        return _tabulate(
            C,
            lambda I, J: C.hom(I, J),
            lambda m, J, x: C.compose[(x, m)],
            lambda I, m, x: C.compose[(m, x)],
            "Hom",
        )
    if isinstance(e, Const):
        S = canon(e.elements)
        return _tabulate(C, lambda I, J: S, lambda m, J, x: x, lambda I, m, x: x, "Const")
    if isinstance(e, Var):
        return _tabulate(
            C,
            lambda I, J: canon(C.elements(J)),
            lambda m, J, x: x,
            lambda I, m, x: C.function(m)(x),
            "Var",
        )
    if isinstance(e, (Prod, Sum)):
        a = eval_difunctor_expr(e.left, C, budget)
        b = eval_difunctor_expr(e.right, C, budget)
        if isinstance(e, Prod):
            def cell(I, J):
                _cell_guard(len(a.values[(I, J)]) * len(b.values[(I, J)]), budget, "Prod")
                return canon(itertools.product(a.values[(I, J)], b.values[(I, J)]))
            return _tabulate(
                C, cell,
                lambda m, J, x: (a.neg[(m, J)](x[0]), b.neg[(m, J)](x[1])),
                lambda I, m, x: (a.pos[(I, m)](x[0]), b.pos[(I, m)](x[1])),
                "Prod",
            )
        parts = (a, b)
        return _tabulate(
            C,
            lambda I, J: canon([Inj(0, x) for x in a.values[(I, J)]] + [Inj(1, y) for y in b.values[(I, J)]]),
            lambda m, J, x: Inj(x.side, parts[x.side].neg[(m, J)](x.value)),
            lambda I, m, x: Inj(x.side, parts[x.side].pos[(I, m)](x.value)),
            "Sum",
        )
    if isinstance(e, Arrow):
        a = eval_difunctor_expr(e.dom, C, budget)
        b = eval_difunctor_expr(e.cod, C, budget)

        def cell(I, J):
            dom, cod = a.values[(J, I)], b.values[(I, J)]
            _cell_guard(len(cod) ** len(dom), budget, "Arrow")
            return tuple(all_functions(dom, cod))

        def act_neg(m, J, f):
            i0 = C.dom[m]
            return Fn({x: b.neg[(m, J)](f(a.pos[(J, m)](x))) for x in a.values[(J, i0)]})

        def act_pos(I, m, f):
            j1 = C.cod[m]
            return Fn({x: b.pos[(I, m)](f(a.neg[(m, I)](x))) for x in a.values[(j1, I)]})

        return _tabulate(C, lambda I, J: canon(cell(I, J)), act_neg, act_pos, "Arrow")
    if isinstance(e, DiYo):
        J0, I0 = e.J, e.I
        if J0 not in C.identities or I0 not in C.identities:
            raise InputError(f"DiYo indices must be objects of the base: {label(J0)}, {label(I0)}")
        return _tabulate(
            C,
            lambda K, L: canon(itertools.product(C.hom(J0, L), C.hom(K, I0))),
            lambda m, L, x: (x[0], C.compose[(x[1], m)]),
            lambda K, m, x: (C.compose[(m, x[0])], x[1]),
            f"DiYo({label(J0)},{label(I0)})",
        )
    if isinstance(e, FromPresheaf):
        sets = {o: canon(v) for o, v in dict(e.sets).items()}
        maps = {m: t if isinstance(t, Fn) else Fn(t) for m, t in dict(e.maps).items()}
        _check_functor_data(C, sets, maps, contravariant=True)
        return _tabulate(
            C,
            lambda I, J: sets[I],
            lambda m, J, x: maps[m](x),
            lambda I, m, x: x,
            "FromPresheaf",
        )
    if isinstance(e, FromCovariant):
        sets = {o: canon(v) for o, v in dict(e.sets).items()}
        maps = {m: t if isinstance(t, Fn) else Fn(t) for m, t in dict(e.maps).items()}
        _check_functor_data(C, sets, maps, contravariant=False)
        return _tabulate(
            C,
            lambda I, J: sets[J],
            lambda m, J, x: x,
            lambda I, m, x: maps[m](x),
            "FromCovariant",
        )
    if isinstance(e, AlgOf):
        T = e.functor
        TX = {o: apply_set(T, C.elements(o)) for o in C.objects}

        def cell(I, J):
            _cell_guard(len(C.elements(J)) ** len(TX[I]), budget, "AlgOf")
            return canon(all_functions(TX[I], canon(C.elements(J))))

        return _tabulate(
            C, cell,
            lambda m, J, g: Fn({t: g(apply_value(T, C.function(m), t)) for t in TX[C.dom[m]]}),
            lambda I, m, g: Fn({t: C.function(m)(y) for t, y in g.items()}),
            "AlgOf",
        )
    if isinstance(e, CoalgOf):
        T = e.functor
        TX = {o: apply_set(T, C.elements(o)) for o in C.objects}

        def cell(I, J):
            _cell_guard(len(TX[J]) ** len(C.elements(I)), budget, "CoalgOf")
            return canon(all_functions(canon(C.elements(I)), TX[J]))

        return _tabulate(
            C, cell,
            lambda m, J, g: Fn({x: g(C.function(m)(x)) for x in C.elements(C.dom[m])}),
            lambda I, m, g: Fn({x: apply_value(T, C.function(m), y) for x, y in g.items()}),
            "CoalgOf",
        )
    if isinstance(e, ListOf):
        a = eval_difunctor_expr(e.elem, C, budget)

        def cell(I, J):
            xs = a.values[(I, J)]
            _cell_guard(sum(len(xs) ** k for k in range(e.bound + 1)), budget, "ListOf")
            return canon(Lst(t) for k in range(e.bound + 1) for t in itertools.product(xs, repeat=k))

        return _tabulate(
            C, cell,
            lambda m, J, x: Lst(tuple(a.neg[(m, J)](y) for y in x.items)),
            lambda I, m, x: Lst(tuple(a.pos[(I, m)](y) for y in x.items)),
            f"ListOf[{e.bound}]",
        )
    raise InputError(f"not a difunctor expression: {e!r}")


def _check_functor_data(C: FinCategory, sets, maps, contravariant: bool) -> None:
    for o in C.objects:
        if o not in sets:
            raise InputError(f"functor table missing object {label(o)}")
    for m in C.morphisms:
        if m in maps:
            continue
        if m in C.identities.values() and C.dom[m] == C.cod[m] and C.identities[C.dom[m]] == m:
            maps[m] = identity_fn(sets[C.dom[m]])
        else:
            raise InputError(f"functor table missing morphism {label(m)}")
    for m in C.morphisms:
        src, tgt = (C.cod[m], C.dom[m]) if contravariant else (C.dom[m], C.cod[m])
        t = maps[m]
        if set(t.keys()) != set(sets[src]) or any(v not in set(sets[tgt]) for _, v in t.items()):
            raise InputError(f"functor table for {label(m)} has the wrong shape")


def prod_difunctor(a: TabulatedDifunctor, b: TabulatedDifunctor, budget: int = DEFAULT_CELL_BUDGET) -> TabulatedDifunctor:
    return eval_difunctor_expr(Prod(Given(a), Given(b)), a.base, budget)


def const_difunctor(base: FinCategory, elements) -> TabulatedDifunctor:
    return eval_difunctor_expr(Const(tuple(elements)), base)


# -- validation -------------------------------------------------------------


def _check_shape(d: TabulatedDifunctor) -> None:
    C = d.base
    for I in C.objects:
        for J in C.objects:
            if (I, J) not in d.values:
                raise InputError(f"missing value cell ({label(I)},{label(J)})")
            if len(set(d.values[(I, J)])) != len(d.values[(I, J)]):
                raise InputError(f"duplicate elements in cell ({label(I)},{label(J)})")
    for m in C.morphisms:
        i0, i1 = C.dom[m], C.cod[m]
        for J in C.objects:
            t = d.neg.get((m, J))
            if t is None:
                raise InputError(f"missing mapNeg table ({label(m)},{label(J)})")
            src, tgt = d.values[(i1, J)], set(d.values[(i0, J)])
            if set(t.keys()) != set(src) or any(v not in tgt for _, v in t.items()):
                raise InputError(f"mapNeg table ({label(m)},{label(J)}) has the wrong shape")
        for I in C.objects:
            t = d.pos.get((I, m))
            if t is None:
                raise InputError(f"missing mapPos table ({label(I)},{label(m)})")
            src, tgt = d.values[(I, i0)], set(d.values[(I, i1)])
            if set(t.keys()) != set(src) or any(v not in tgt for _, v in t.items()):
                raise InputError(f"mapPos table ({label(I)},{label(m)}) has the wrong shape")


def validate_difunctor(d: TabulatedDifunctor, max_violations: int = 50) -> ValidationReport:
    """Identity, functoriality (both variances) and interchange, by exhaustive table scan."""
    _check_shape(d)
    C = d.base
    rep = ValidationReport()

    def add(law, **w):
        if len(rep.violations) < max_violations:
            rep.add(law, **w)

    for o in C.objects:
        i = C.identities[o]
        for X in C.objects:
            for x in d.values[(o, X)]:
                rep.checked += 1
                if d.neg[(i, X)](x) != x:
                    add("identity-neg", morphism=i, object=X, element=x)
            for x in d.values[(X, o)]:
                rep.checked += 1
                if d.pos[(X, i)](x) != x:
                    add("identity-pos", morphism=i, object=X, element=x)
    for g, f in C.composable_pairs():
        gf = C.compose[(g, f)]
        a, c = C.dom[f], C.cod[g]
        for X in C.objects:
            tn_gf, tn_f, tn_g = d.neg[(gf, X)], d.neg[(f, X)], d.neg[(g, X)]
            for x in d.values[(c, X)]:
                rep.checked += 1
                if tn_gf(x) != tn_f(tn_g(x)):
                    add("functoriality-neg", g=g, f=f, object=X, element=x)
            tp_gf, tp_f, tp_g = d.pos[(X, gf)], d.pos[(X, f)], d.pos[(X, g)]
            for x in d.values[(X, a)]:
                rep.checked += 1
                if tp_gf(x) != tp_g(tp_f(x)):
                    add("functoriality-pos", g=g, f=f, object=X, element=x)
    for m1 in C.morphisms:
        i0, i1 = C.dom[m1], C.cod[m1]
        for m2 in C.morphisms:
            j0, j1 = C.dom[m2], C.cod[m2]
            left_a, left_b = d.neg[(m1, j0)], d.pos[(i0, m2)]
            right_a, right_b = d.pos[(i1, m2)], d.neg[(m1, j1)]
            for x in d.values[(i1, j0)]:
                rep.checked += 1
                if left_b(left_a(x)) != right_b(right_a(x)):
                    add("interchange", neg=m1, pos=m2, element=x)
    return rep


# -- Struct categories ------------------------------------------------------


class StructCategory(FinCategory):
    """Category of diagonal structures ``(I, g)`` and structure homomorphisms.

    Objects are tuples ``(I, g)``; morphisms are tuples ``(f, src, tgt)``.
    """

    difunctor: TabulatedDifunctor

    def underlying(self, m):
        return m[0]

    def forgetful(self) -> FinFunctor:
        d = self.difunctor
        return FinFunctor(self, d.base, {o: o[0] for o in self.objects}, {m: m[0] for m in self.morphisms})


def struct_category(d: TabulatedDifunctor) -> StructCategory:
    C = d.base
    objects = [(I, g) for I in C.objects for g in d.values[(I, I)]]
    morphisms = []
    for f in sorted(C.morphisms, key=label):
        I, J = C.dom[f], C.cod[f]
        tp, tn = d.pos[(I, f)], d.neg[(f, J)]
        by_val: dict = {}
        for g2 in d.values[(J, J)]:
            by_val.setdefault(tn(g2), []).append(g2)
        for g in d.values[(I, I)]:
            for g2 in by_val.get(tp(g), ()):
                morphisms.append((f, (I, g), (J, g2)))
    by_src: dict = {}
    for m in morphisms:
        by_src.setdefault(m[1], []).append(m)
    compose = {}
    for f in morphisms:
        for g in by_src.get(f[2], ()):
            compose[(g, f)] = (C.compose[(g[0], f[0])], f[1], g[2])
    identities = {o: (C.identities[o[0]], o, o) for o in objects}
    S = StructCategory(
        objects,
        [(m, m[1], m[2]) for m in morphisms],
        identities,
        compose,
        name=f"Struct({d.name})",
    )
    S.difunctor = d
    return S


def is_structure_hom(d: TabulatedDifunctor, f, src: tuple, tgt: tuple):
    """Return ``(holds, (lhs, rhs))`` for ``map+ f g = map- f g'``."""
    C = d.base
    (I, g), (J, g2) = src, tgt
    if f not in C.dom or C.dom[f] != I or C.cod[f] != J:
        raise InputError(f"{label(f)} is not a morphism {label(I)} -> {label(J)}")
    if g not in set(d.values[(I, I)]):
        raise InputError(f"{label(g)} is not in D({label(I)},{label(I)})")
    if g2 not in set(d.values[(J, J)]):
        raise InputError(f"{label(g2)} is not in D({label(J)},{label(J)})")
    lhs = d.pos[(I, f)](g)
    rhs = d.neg[(f, J)](g2)
    return lhs == rhs, (lhs, rhs)


# -- JSON -----------------------------------------------------------------


def expr_to_json(e):
    if isinstance(e, Hom):
        return {"op": "Hom"}
    if isinstance(e, Var):
        return {"op": "Var"}
    if isinstance(e, Const):
        return {"op": "Const", "set": [label(x) for x in canon(e.elements)]}
    if isinstance(e, (Prod, Sum)):
        return {"op": type(e).__name__, "args": [expr_to_json(e.left), expr_to_json(e.right)]}
    if isinstance(e, Arrow):
        return {"op": "Arrow", "args": [expr_to_json(e.dom), expr_to_json(e.cod)]}
    if isinstance(e, DiYo):
        return {"op": "DiYo", "J": label(e.J), "I": label(e.I)}
    if isinstance(e, (FromPresheaf, FromCovariant)):
        return {
            "op": type(e).__name__,
            "sets": {label(k): [label(x) for x in v] for k, v in dict(e.sets).items()},
            "maps": {label(m): {label(a): label(b) for a, b in dict(t).items()} for m, t in dict(e.maps).items()},
        }
    if isinstance(e, (AlgOf, CoalgOf)):
        return {"op": type(e).__name__, "functor": poly_to_json(e.functor)}
    if isinstance(e, ListOf):
        return {"op": "ListOf", "args": [expr_to_json(e.elem)], "bound": e.bound}
    if isinstance(e, Given):
        return {"op": "Given", "name": e.difunctor.name}
    raise InputError(f"not a difunctor expression: {e!r}")


def expr_from_json(j, resolve=None):
    """Parse the JSON grammar tree; ``resolve(name)`` handles ``{"op": "Ref"}`` nodes."""
    try:
        op = j["op"]
        if op == "Hom":
            return Hom()
        if op == "Var":
            return Var()
        if op == "Const":
            return Const(tuple(str(x) for x in j["set"]))
        if op in ("Prod", "Sum", "Arrow"):
            a, b = (expr_from_json(x, resolve) for x in j["args"])
            return {"Prod": Prod, "Sum": Sum, "Arrow": Arrow}[op](a, b)
        if op == "DiYo":
            return DiYo(str(j["J"]), str(j["I"]))
        if op in ("FromPresheaf", "FromCovariant"):
            sets = {str(k): tuple(str(x) for x in v) for k, v in j["sets"].items()}
            maps = {str(m): Fn({str(a): str(b) for a, b in t.items()}) for m, t in j.get("maps", {}).items()}
            cls = FromPresheaf if op == "FromPresheaf" else FromCovariant
            return cls(tuple(sorted(sets.items())), tuple(sorted(maps.items(), key=lambda kv: kv[0])))
        if op in ("AlgOf", "CoalgOf"):
            T = poly_from_json(j["functor"])
            return AlgOf(T) if op == "AlgOf" else CoalgOf(T)
        if op == "ListOf":
            return ListOf(expr_from_json(j["args"][0], resolve), int(j["bound"]))
        if op == "Ref":
            if resolve is None:
                raise InputError("Ref node outside a bundle")
            return Given(resolve(j["name"]))
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise InputError(f"malformed difunctor expression: {e}") from None
    raise InputError(f"unknown difunctor constructor {op!r}")


def difunctor_to_json(d: TabulatedDifunctor) -> dict:
    C = d.base
    return {
        "values": {f"{label(I)}|{label(J)}": [label(x) for x in d.values[(I, J)]] for I in C.objects for J in C.objects},
        "mapNeg": {
            f"{label(m)}|{label(J)}": {label(a): label(b) for a, b in sorted(d.neg[(m, J)].items(), key=lambda kv: label(kv[0]))}
            for m in C.morphisms for J in C.objects
        },
        "mapPos": {
            f"{label(I)}|{label(m)}": {label(a): label(b) for a, b in sorted(d.pos[(I, m)].items(), key=lambda kv: label(kv[0]))}
            for m in C.morphisms for I in C.objects
        },
    }


def difunctor_from_json(j: Mapping, base: FinCategory, name: str = "") -> TabulatedDifunctor:
    """Load the tabulated form; element labels are plain strings."""
    objs = {label(o): o for o in base.objects}
    mors = {label(m): m for m in base.morphisms}

    def split(key, left, right):
        try:
            a, b = key.split("|")
            return left[a], right[b]
        except (ValueError, KeyError):
            raise InputError(f"dangling or malformed table key {key!r}") from None

    values = {}
    for k, v in j.get("values", {}).items():
        values[split(k, objs, objs)] = canon(str(x) for x in v)
    neg = {split(k, mors, objs): Fn({str(a): str(b) for a, b in t.items()}) for k, t in j.get("mapNeg", {}).items()}
    pos = {split(k, objs, mors): Fn({str(a): str(b) for a, b in t.items()}) for k, t in j.get("mapPos", {}).items()}
    for m in base.morphisms:
        if base.identities.get(base.dom[m]) == m:
            for X in base.objects:
                if (X, base.dom[m]) in values:
                    pos.setdefault((X, m), identity_fn(values[(X, base.dom[m])]))
                if (base.dom[m], X) in values:
                    neg.setdefault((m, X), identity_fn(values[(base.dom[m], X)]))
    d = TabulatedDifunctor(base, values, neg, pos, name)
    _check_shape(d)
    return d
