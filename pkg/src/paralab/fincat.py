"""Finite categories, functors, and finite-set fragments as explicit tables."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Hashable, Iterable, Mapping, Sequence

from .errors import InputError
from .values import Fn, canon, compose_fn, identity_fn, label, all_functions


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, law: str, **witness) -> None:
        self.violations.append({"law": law, "witness": witness})

    def to_json(self) -> dict:
        return {
            "verdict": "ok" if self.ok else "violation",
            "checked": self.checked,
            "violations": [
                {"law": v["law"], "witness": {k: _jsonable(x) for k, x in v["witness"].items()}}
                for v in self.violations
            ],
        }


def _jsonable(x):
    if isinstance(x, (list, tuple)) and not isinstance(x, str):
        return [_jsonable(y) for y in x]
    return label(x)


@dataclass(frozen=True)
class FnMor:
    """A morphism of a finite-set fragment: a function table between two carriers."""

    dom: Hashable
    cod: Hashable
    table: Fn

    def canonical_label(self) -> str:
        outs = ",".join(label(v) for _, v in sorted(self.table.items(), key=lambda kv: label(kv[0])))
        return f"{label(self.dom)}>{label(self.cod)}[{outs}]"

    def __repr__(self) -> str:
        return self.canonical_label()


class FinCategory:
    """A finite category given by a flat morphism table and a dense composition table.

    ``compose`` maps ``(g, f)`` to ``g . f`` (f first).  Finite-set fragments
    additionally carry ``sets`` (object -> elements) and ``functions``
    (morphism -> :class:`Fn`).
    """

    def __init__(
        self,
        objects: Sequence,
        morphisms: Iterable[tuple],
        identities: Mapping,
        compose: Mapping,
        sets: Mapping | None = None,
        functions: Mapping | None = None,
        name: str = "",
    ):
        self.objects = tuple(objects)
        morphisms = list(morphisms)
        self.morphisms = tuple(m for m, _, _ in morphisms)
        self.dom = {m: d for m, d, _ in morphisms}
        self.cod = {m: c for m, _, c in morphisms}
        self.identities = dict(identities)
        self.compose = dict(compose)
        self.sets = None if sets is None else {k: tuple(v) for k, v in sets.items()}
        self.functions = None if functions is None else dict(functions)
        self.name = name
        self._check_wellformed()

    def _check_wellformed(self) -> None:
        objs = set(self.objects)
        if len(objs) != len(self.objects):
            raise InputError("duplicate object labels")
        if len(set(self.morphisms)) != len(self.morphisms):
            raise InputError("duplicate morphism labels")
        for m in self.morphisms:
            if self.dom[m] not in objs or self.cod[m] not in objs:
                raise InputError(f"morphism {label(m)} has dangling dom/cod")
        for o in self.objects:
            if o not in self.identities:
                raise InputError(f"identities entry missing for object {label(o)}")
        for o, m in self.identities.items():
            if o not in objs:
                raise InputError(f"identities entry for unknown object {label(o)}")
            if m not in self.dom:
                raise InputError(f"identity of {label(o)} is unknown morphism {label(m)}")
        for (g, f), h in self.compose.items():
            for x in (g, f, h):
                if x not in self.dom:
                    raise InputError(f"compose table mentions unknown morphism {label(x)}")
        if self.sets is not None:
            for o, elems in self.sets.items():
                if o not in objs:
                    raise InputError(f"element table for unknown object {label(o)}")
                if len(set(elems)) != len(elems):
                    raise InputError(f"element labels of {label(o)} are not distinct")
            if set(self.sets) != objs:
                raise InputError("every fragment object needs an element table")
        if self.functions is not None:
            if set(self.functions) != set(self.morphisms):
                raise InputError("every fragment morphism needs a function table")

    # -- derived views -------------------------------------------------

    @cached_property
    def _homs(self) -> dict:
        homs: dict = {}
        for m in self.morphisms:
            homs.setdefault((self.dom[m], self.cod[m]), []).append(m)
        return {k: tuple(sorted(v, key=label)) for k, v in homs.items()}

    def hom(self, a, b) -> tuple:
        return self._homs.get((a, b), ())

    def ident(self, o):
        return self.identities[o]

    def comp(self, g, f):
        """``g . f``; raises KeyError for non-composable pairs."""
        return self.compose[(g, f)]

    @property
    def is_fragment(self) -> bool:
        return self.sets is not None and self.functions is not None

    def elements(self, o) -> tuple:
        if self.sets is None:
            raise InputError(f"{self.name or 'category'} is not a finite-set fragment")
        return self.sets[o]

    def function(self, m) -> Fn:
        if self.functions is None:
            raise InputError(f"{self.name or 'category'} is not a finite-set fragment")
        return self.functions[m]

    def composable_pairs(self):
        for f in self.morphisms:
            for g in self.morphisms:
                if self.dom[g] == self.cod[f]:
                    yield g, f

    def tables_equal(self, other: "FinCategory") -> bool:
        return (
            self.objects == other.objects
            and set(self.morphisms) == set(other.morphisms)
            and all(self.dom[m] == other.dom[m] and self.cod[m] == other.cod[m] for m in self.morphisms)
            and self.identities == other.identities
            and self.compose == other.compose
        )

    def __repr__(self) -> str:
        return f"FinCategory({self.name or '?'}: {len(self.objects)} objects, {len(self.morphisms)} morphisms)"


def validate_category(c: FinCategory) -> ValidationReport:
    """Exhaustively check the composition table, identity laws and associativity."""
    rep = ValidationReport()
    dom, cod, comp = c.dom, c.cod, c.compose
    for (g, f), h in comp.items():
        rep.checked += 1
        if dom[g] != cod[f]:
            rep.add("compose-on-noncomposable", g=g, f=f)
        elif dom[h] != dom[f] or cod[h] != cod[g]:
            rep.add("compose-dom-cod", g=g, f=f, gf=h)
    for o, i in c.identities.items():
        if dom[i] != o or cod[i] != o:
            rep.add("identity-dom-cod", object=o, morphism=i)
    pairs = list(c.composable_pairs())
    for g, f in pairs:
        rep.checked += 1
        if (g, f) not in comp:
            rep.add("compose-missing", g=g, f=f)
    if not rep.ok:
        return rep
    for f in c.morphisms:
        rep.checked += 2
        if comp[(c.identities[cod[f]], f)] != f:
            rep.add("left-identity", f=f)
        if comp[(f, c.identities[dom[f]])] != f:
            rep.add("right-identity", f=f)
    by_dom: dict = {}
    for m in c.morphisms:
        by_dom.setdefault(dom[m], []).append(m)
    for g, f in pairs:
        gf = comp[(g, f)]
        for h in by_dom.get(cod[g], ()):
            rep.checked += 1
            if comp[(h, gf)] != comp[(comp[(h, g)], f)]:
                rep.add("associativity", f=f, g=g, h=h)
    if c.is_fragment:
        for m in c.morphisms:
            t = c.functions[m]
            if set(t.keys()) != set(c.sets[dom[m]]) or any(v not in set(c.sets[cod[m]]) for _, v in t.items()):
                rep.add("fragment-function-shape", morphism=m)
        for o, i in c.identities.items():
            if c.functions[i] != identity_fn(c.sets[o]):
                rep.add("fragment-identity-table", object=o)
        for g, f in pairs:
            if c.functions[comp[(g, f)]] != compose_fn(c.functions[g], c.functions[f]):
                rep.add("fragment-compose-table", g=g, f=f)
    return rep


# -- functors -------------------------------------------------------------


@dataclass
class FinFunctor:
    source: FinCategory
    target: FinCategory
    obj_map: dict
    mor_map: dict

    def __call__(self, x):
        return self.obj_map[x] if x in self.obj_map else self.mor_map[x]

    def tables_equal(self, other: "FinFunctor") -> bool:
        return self.obj_map == other.obj_map and self.mor_map == other.mor_map


def validate_functor(F: FinFunctor) -> ValidationReport:
    S, T = F.source, F.target
    for o in S.objects:
        if o not in F.obj_map:
            raise InputError(f"objMap missing {label(o)}")
        if F.obj_map[o] not in T.identities:
            raise InputError(f"objMap sends {label(o)} to unknown object {label(F.obj_map[o])}")
    for m in S.morphisms:
        if m not in F.mor_map:
            raise InputError(f"morMap missing {label(m)}")
        if F.mor_map[m] not in T.dom:
            raise InputError(f"morMap sends {label(m)} to unknown morphism {label(F.mor_map[m])}")
    rep = ValidationReport()
    for m in S.morphisms:
        rep.checked += 1
        fm = F.mor_map[m]
        if T.dom[fm] != F.obj_map[S.dom[m]] or T.cod[fm] != F.obj_map[S.cod[m]]:
            rep.add("dom-cod", morphism=m)
    if not rep.ok:
        return rep
    for o in S.objects:
        rep.checked += 1
        if F.mor_map[S.identities[o]] != T.identities[F.obj_map[o]]:
            rep.add("identity", object=o)
    for g, f in S.composable_pairs():
        rep.checked += 1
        if F.mor_map[S.compose[(g, f)]] != T.compose[(F.mor_map[g], F.mor_map[f])]:
            rep.add("composition", g=g, f=f)
    return rep


def identity_functor(c: FinCategory) -> FinFunctor:
    return FinFunctor(c, c, {o: o for o in c.objects}, {m: m for m in c.morphisms})


def compose_functors(G: FinFunctor, F: FinFunctor) -> FinFunctor:
    """``G . F``."""
    return FinFunctor(
        F.source,
        G.target,
        {o: G.obj_map[x] for o, x in F.obj_map.items()},
        {m: G.mor_map[x] for m, x in F.mor_map.items()},
    )


# -- fixtures -------------------------------------------------------------


def _from_monoid(elements: Sequence, mult: Mapping, obj="*", name="monoid") -> FinCategory:
    elements = list(elements)
    for a in elements:
        for b in elements:
            if (a, b) not in mult or mult[(a, b)] not in elements:
                raise InputError(f"monoid table not total/closed at ({label(a)},{label(b)})")
    units = [u for u in elements if all(mult[(u, a)] == a and mult[(a, u)] == a for a in elements)]
    if not units:
        raise InputError("monoid table has no unit")
    for a, b, c in itertools.product(elements, repeat=3):
        if mult[(mult[(a, b)], c)] != mult[(a, mult[(b, c)])]:
            raise InputError(f"monoid table not associative at ({label(a)},{label(b)},{label(c)})")
    return FinCategory(
        [obj],
        [(m, obj, obj) for m in elements],
        {obj: units[0]},
        dict(mult),
        name=name,
    )


def terminal() -> FinCategory:
    return _from_monoid(["id"], {("id", "id"): "id"}, name="terminal")


def discrete(n: int) -> FinCategory:
    objs = [str(i) for i in range(n)]
    return FinCategory(
        objs,
        [(f"id{o}", o, o) for o in objs],
        {o: f"id{o}" for o in objs},
        {(f"id{o}", f"id{o}"): f"id{o}" for o in objs},
        name=f"discrete({n})",
    )


def arrow() -> FinCategory:
    return FinCategory(
        ["0", "1"],
        [("id0", "0", "0"), ("id1", "1", "1"), ("u", "0", "1")],
        {"0": "id0", "1": "id1"},
        {("id0", "id0"): "id0", ("id1", "id1"): "id1", ("u", "id0"): "u", ("id1", "u"): "u"},
        name="arrow",
    )


def walking_idempotent() -> FinCategory:
    mult = {("1", "1"): "1", ("1", "e"): "e", ("e", "1"): "e", ("e", "e"): "e"}
    return _from_monoid(["1", "e"], mult, name="walking_idempotent")


def monoid(elements: Sequence, table: Mapping) -> FinCategory:
    return _from_monoid(elements, table, name="monoid")


def poset(elements: Sequence, relation: Iterable[tuple]) -> FinCategory:
    """Thin category of the reflexive-transitive closure of ``relation``."""
    elements = [str(e) for e in elements]
    le = {(a, a) for a in elements}
    for a, b in relation:
        a, b = str(a), str(b)
        if a not in elements or b not in elements:
            raise InputError(f"relation mentions unknown element ({a},{b})")
        le.add((a, b))
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(le), repeat=2):
            if b == c and (a, d) not in le:
                le.add((a, d))
                changed = True
    for a, b in le:
        if a != b and (b, a) in le:
            raise InputError(f"relation is not antisymmetric: {a} <= {b} <= {a}")

    def mor(a, b):
        return f"id{a}" if a == b else f"{a}<{b}"

    morphisms = [(mor(a, b), a, b) for a, b in sorted(le)]
    compose = {}
    for a, b in le:
        for c, d in le:
            if b == c:
                compose[(mor(c, d), mor(a, b))] = mor(a, d)
    return FinCategory(elements, morphisms, {a: mor(a, a) for a in elements}, compose, name="poset")


def chain(n: int) -> FinCategory:
    c = poset([str(i) for i in range(n)], [(str(i), str(i + 1)) for i in range(n - 1)])
    c.name = f"chain({n})"
    return c


def op(c: FinCategory) -> FinCategory:
    return FinCategory(
        c.objects,
        [(m, c.cod[m], c.dom[m]) for m in c.morphisms],
        c.identities,
        {(f, g): h for (g, f), h in c.compose.items()},
        sets=None,
        functions=None,
        name=f"op({c.name})",
    )


def product(c: FinCategory, d: FinCategory) -> FinCategory:
    objs = [(a, b) for a in c.objects for b in d.objects]
    mors = [((f, g), (c.dom[f], d.dom[g]), (c.cod[f], d.cod[g])) for f in c.morphisms for g in d.morphisms]
    compose = {}
    for (g1, f1), h1 in c.compose.items():
        for (g2, f2), h2 in d.compose.items():
            compose[((g1, g2), (f1, f2))] = (h1, h2)
    return FinCategory(
        objs,
        mors,
        {(a, b): (c.identities[a], d.identities[b]) for a, b in objs},
        compose,
        name=f"product({c.name},{d.name})",
    )


def fragment_from_sets(sets: Mapping, morphisms: Iterable | None = None, name: str = "") -> FinCategory:
    """Finite-set fragment on the given carriers.

    With ``morphisms=None`` every function between carriers is a morphism.
    Otherwise ``morphisms`` is an iterable of ``(dom, cod, table)``; identities
    are added and the selection must be closed under composition.
    """
    sets = {str(k): tuple(v) for k, v in sets.items()}
    for k, elems in sets.items():
        if len(set(elems)) != len(elems):
            raise InputError(f"element labels of {k} are not distinct")
    mors: dict = {}
    if morphisms is None:
        for a, b in itertools.product(sets, repeat=2):
            for t in all_functions(sets[a], sets[b]):
                mors[FnMor(a, b, t)] = None
    else:
        for a in sets:
            mors[FnMor(a, a, identity_fn(sets[a]))] = None
        for a, b, t in morphisms:
            t = t if isinstance(t, Fn) else Fn(t)
            if a not in sets or b not in sets:
                raise InputError(f"selected morphism between unknown carriers {a},{b}")
            mors[FnMor(a, b, t)] = None
    mors = list(mors)
    mset = set(mors)
    compose = {}
    for f in mors:
        for g in mors:
            if g.dom == f.cod:
                h = FnMor(f.dom, g.cod, compose_fn(g.table, f.table))
                if h not in mset:
                    raise InputError(f"selected morphisms not closed under composition: {label(g)} . {label(f)}")
                compose[(g, f)] = h
    mors.sort(key=label)
    return FinCategory(
        list(sets),
        [(m, m.dom, m.cod) for m in mors],
        {a: FnMor(a, a, identity_fn(sets[a])) for a in sets},
        compose,
        sets=sets,
        functions={m: m.table for m in mors},
        name=name or f"fragment({','.join(sets)})",
    )


def fragment_object_name(size: int, index: int) -> str:
    return f"S{size}" if index == 0 else f"S{size}_{index}"


def finset_fragment(sizes: Sequence[int]) -> FinCategory:
    """Fragment with one carrier ``{0..n-1}`` per requested size, all functions as morphisms."""
    sets = {}
    seen: dict = {}
    for n in sizes:
        i = seen.get(n, 0)
        seen[n] = i + 1
        sets[fragment_object_name(n, i)] = tuple(str(k) for k in range(n))
    c = fragment_from_sets(sets, name=f"finset_fragment({','.join(map(str, sizes))})")
    return c


FIXTURES = {
    "terminal": terminal,
    "discrete": discrete,
    "arrow": arrow,
    "walking_idempotent": walking_idempotent,
    "poset": poset,
    "chain": chain,
    "monoid": monoid,
    "op": op,
    "product": product,
    "finset_fragment": finset_fragment,
}


def build_fixture(name: str, *params) -> FinCategory:
    try:
        builder = FIXTURES[name]
    except KeyError:
        raise InputError(f"unknown fixture {name!r}") from None
    return builder(*params)


# -- JSON -----------------------------------------------------------------


def category_to_json(c: FinCategory) -> dict:
    out = {
        "objects": [label(o) for o in c.objects],
        "morphisms": [
            {"id": label(m), "dom": label(c.dom[m]), "cod": label(c.cod[m])}
            for m in sorted(c.morphisms, key=label)
        ],
        "identities": {label(o): label(m) for o, m in c.identities.items()},
        "compose": sorted([label(g), label(f), label(h)] for (g, f), h in c.compose.items()),
    }
    if c.is_fragment:
        out["sets"] = {label(o): [label(x) for x in c.sets[o]] for o in c.objects}
        out["functions"] = {
            label(m): {label(k): label(v) for k, v in c.functions[m].items()} for m in c.morphisms
        }
    return out


def category_from_json(d: Mapping, name: str = "") -> FinCategory:
    try:
        objects = [str(o) for o in d["objects"]]
        morphisms = [(str(m["id"]), str(m["dom"]), str(m["cod"])) for m in d["morphisms"]]
        identities = {str(k): str(v) for k, v in d["identities"].items()}
        compose = {(str(g), str(f)): str(h) for g, f, h in d["compose"]}
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed category table: {e}") from None
    sets = functions = None
    if "sets" in d:
        sets = {str(k): [str(x) for x in v] for k, v in d["sets"].items()}
        functions = {str(m): Fn({str(a): str(b) for a, b in t.items()}) for m, t in d.get("functions", {}).items()}
    return FinCategory(objects, morphisms, identities, compose, sets=sets, functions=functions, name=name)
