"""Paranatural transformations: checking, composition, enumeration, Struct functors."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

from .difun import StructCategory, TabulatedDifunctor, struct_category
from .errors import InputError, NotParanaturalError
from .fincat import FinFunctor
from .values import Fn, compose_fn, identity_fn, label


@dataclass(eq=False)
class Paranatural:
    source: TabulatedDifunctor
    target: TabulatedDifunctor
    components: dict  # object -> Fn on the source diagonal

    def __call__(self, I, x):
        return self.components[I](x)

    def key(self) -> tuple:
        """Hashable identity of the component family (object order of the base)."""
        return tuple(self.components[I] for I in self.source.base.objects)

    def same_components(self, other: "Paranatural") -> bool:
        return self.key() == other.key()

    def to_json(self) -> dict:
        return {
            "components": {
                label(I): {label(a): label(b) for a, b in sorted(t.items(), key=lambda kv: label(kv[0]))}
                for I, t in self.components.items()
            }
        }


@dataclass
class ChevronReport:
    ok: bool
    witness: dict | None = None
    checked: int = 0
    witnesses: list = field(default_factory=list)
    formulation: str = "elementwise"

    @property
    def verdict(self) -> str:
        return "ok" if self.ok else "violation"

    def to_json(self) -> dict:
        w = None if self.witness is None else {k: label(v) for k, v in self.witness.items()}
        return {"verdict": self.verdict, "witness": w, "checked": self.checked}


def _same_base(a: TabulatedDifunctor, b: TabulatedDifunctor) -> None:
    if a.base is not b.base and not a.base.tables_equal(b.base):
        raise InputError("difunctors live over different base categories")


def _check_components(delta, gamma, components: Mapping) -> None:
    _same_base(delta, gamma)
    for I in delta.base.objects:
        if I not in components:
            raise InputError(f"component missing at object {label(I)}")
        t = components[I]
        dom = delta.values[(I, I)]
        cod = set(gamma.values[(I, I)])
        if set(t.keys()) != set(dom):
            raise InputError(f"component at {label(I)} is not total on the source diagonal")
        for x, y in t.items():
            if y not in cod:
                raise InputError(f"component at {label(I)} sends {label(x)} outside the target diagonal")


def make_paranatural(delta, gamma, components: Mapping) -> Paranatural:
    comps = {I: (t if isinstance(t, Fn) else Fn(t)) for I, t in components.items()}
    _check_components(delta, gamma, comps)
    return Paranatural(delta, gamma, comps)


def _morphisms_in_order(C):
    return sorted(C.morphisms, key=label)


def check_paranatural(
    delta: TabulatedDifunctor,
    gamma: TabulatedDifunctor,
    phi: Paranatural | Mapping,
    formulation: str = "elementwise",
    collect_all: bool = False,
) -> ChevronReport:
    """Check every commutative chevron.

    ``elementwise`` scans spans out of a one-point set; ``pullback`` builds the
    pullback of ``map+ i2`` and ``map- i2`` explicitly and compares the two
    composites into ``gamma(I0, I1)``.  Both report the first failure in the
    same scan order (morphisms by label, then d0, then d1).
    """
    comps = phi.components if isinstance(phi, Paranatural) else {I: Fn(t) if not isinstance(t, Fn) else t for I, t in phi.items()}
    _check_components(delta, gamma, comps)
    if formulation == "elementwise":
        return _check_elementwise(delta, gamma, comps, collect_all)
    if formulation == "pullback":
        return _check_pullback(delta, gamma, comps, collect_all)
    raise InputError(f"unknown formulation {formulation!r}")


def _check_elementwise(delta, gamma, comps, collect_all) -> ChevronReport:
    C = delta.base
    rep = ChevronReport(ok=True, formulation="elementwise")
    for i2 in _morphisms_in_order(C):
        i0, i1 = C.dom[i2], C.cod[i2]
        dp, dn = delta.pos[(i0, i2)], delta.neg[(i2, i1)]
        gp, gn = gamma.pos[(i0, i2)], gamma.neg[(i2, i1)]
        for d0 in delta.values[(i0, i0)]:
            for d1 in delta.values[(i1, i1)]:
                if dp(d0) != dn(d1):
                    continue
                rep.checked += 1
                lhs = gp(comps[i0](d0))
                rhs = gn(comps[i1](d1))
                if lhs != rhs:
                    w = {"i2": i2, "d0": d0, "d1": d1, "lhs": lhs, "rhs": rhs}
                    if rep.ok:
                        rep.ok, rep.witness = False, w
                    if not collect_all:
                        return rep
                    rep.witnesses.append(w)
    return rep


def pullback(f: Fn, g: Fn, A: Sequence, B: Sequence) -> list:
    """``{(a, b) | f a = g b}`` as an explicit list, ordered by (a, b)."""
    return [(a, b) for a, b in itertools.product(A, B) if f(a) == g(b)]


def _check_pullback(delta, gamma, comps, collect_all) -> ChevronReport:
    C = delta.base
    rep = ChevronReport(ok=True, formulation="pullback")
    for i2 in _morphisms_in_order(C):
        i0, i1 = C.dom[i2], C.cod[i2]
        P = pullback(delta.pos[(i0, i2)], delta.neg[(i2, i1)], delta.values[(i0, i0)], delta.values[(i1, i1)])
        rep.checked += len(P)
        gp, gn = gamma.pos[(i0, i2)], gamma.neg[(i2, i1)]
        upper = Fn({p: gp(comps[i0](p[0])) for p in P})
        lower = Fn({p: gn(comps[i1](p[1])) for p in P})
        if upper == lower:
            continue
        for p in P:
            if upper(p) != lower(p):
                w = {"i2": i2, "d0": p[0], "d1": p[1], "lhs": upper(p), "rhs": lower(p)}
                if rep.ok:
                    rep.ok, rep.witness = False, w
                if not collect_all:
                    return rep
                rep.witnesses.append(w)
    return rep


def identity_paranatural(delta: TabulatedDifunctor) -> Paranatural:
    return Paranatural(delta, delta, {I: identity_fn(delta.values[(I, I)]) for I in delta.base.objects})


def _same_difunctor(a: TabulatedDifunctor, b: TabulatedDifunctor) -> bool:
    return a is b or (a.base.tables_equal(b.base) and a.tables_equal(b))


def compose_paranatural(psi: Paranatural, phi: Paranatural) -> Paranatural:
    """``psi . phi`` with pointwise composite components."""
    if not _same_difunctor(phi.target, psi.source):
        raise InputError("cannot compose: target of the first is not the source of the second")
    return Paranatural(
        phi.source,
        psi.target,
        {I: compose_fn(psi.components[I], phi.components[I]) for I in phi.source.base.objects},
    )


# -- enumeration ---------------------------------------------------------------


@dataclass
class Enumeration:
    families: list
    truncated: bool
    explored: int = 0

    def __len__(self) -> int:
        return len(self.families)

    def __iter__(self):
        return iter(self.families)


class _EqConstraint:
    """Binary constraint ``key_u(value_u) == key_v(value_v)``."""

    __slots__ = ("u", "v", "ku", "kv", "tag")

    def __init__(self, u, v, ku, kv, tag=None):
        self.u, self.v, self.ku, self.kv, self.tag = u, v, ku, kv, tag


def backtrack(
    variables: Sequence,
    domains: Mapping,
    constraints: Sequence[_EqConstraint],
    limit: int | None = None,
):
    """Depth-first search with forward checking over equality-of-keys constraints.

    Variables are assigned in the given order and values tried in domain
    order, so solutions come out lexicographically.  Returns
    ``(solutions, truncated, nodes)``; each solution maps variable -> value.
    """
    doms = {v: list(domains[v]) for v in variables}
    touching: dict = {v: [] for v in variables}
    for c in constraints:
        if c.u == c.v:
            doms[c.u] = [a for a in doms[c.u] if c.ku(a) == c.kv(a)]
        else:
            touching[c.u].append(c)
            touching[c.v].append(c)
    order = list(variables)
    assignment: dict = {}
    solutions: list = []
    nodes = 0
    truncated = False

    def prune(var, value, current):
        changed = {}
        for c in touching[var]:
            other = c.v if c.u == var else c.u
            if other in assignment:
                if c.u == var:
                    ok = c.ku(value) == c.kv(assignment[other])
                else:
                    ok = c.ku(assignment[other]) == c.kv(value)
                if not ok:
                    return None
                continue
            dom = changed.get(other, current[other])
            if c.u == var:
                want = c.ku(value)
                new = [b for b in dom if c.kv(b) == want]
            else:
                want = c.kv(value)
                new = [b for b in dom if c.ku(b) == want]
            if not new:
                return None
            changed[other] = new
        return changed

    def go(k, current):
        nonlocal nodes, truncated
        if limit is not None and len(solutions) >= limit:
            truncated = True
            return
        if k == len(order):
            solutions.append(dict(assignment))
            return
        var = order[k]
        for value in current[var]:
            nodes += 1
            changed = prune(var, value, current)
            if changed is None:
                continue
            assignment[var] = value
            nxt = dict(current)
            nxt.update(changed)
            go(k + 1, nxt)
            del assignment[var]
            if truncated:
                return

    go(0, doms)
    if limit is not None and len(solutions) > limit:
        solutions = solutions[:limit]
    return solutions, truncated, nodes


def chevron_constraints(delta, gamma):
    """One equality constraint per chevron instance (i2, d0, d1)."""
    C = delta.base
    out = []
    for i2 in _morphisms_in_order(C):
        i0, i1 = C.dom[i2], C.cod[i2]
        dp, dn = delta.pos[(i0, i2)], delta.neg[(i2, i1)]
        by_val: dict = {}
        for d1 in delta.values[(i1, i1)]:
            by_val.setdefault(dn(d1), []).append(d1)
        gp, gn = gamma.pos[(i0, i2)], gamma.neg[(i2, i1)]
        for d0 in delta.values[(i0, i0)]:
            for d1 in by_val.get(dp(d0), ()):
                out.append(_EqConstraint((i0, d0), (i1, d1), gp, gn, tag=i2))
    return out


def enumerate_paranaturals(delta, gamma, limit: int | None = None) -> Enumeration:
    """All component families passing the chevron check, lexicographic by label."""
    _same_base(delta, gamma)
    C = delta.base
    objs = sorted(C.objects, key=label)
    variables = [(I, d) for I in objs for d in delta.values[(I, I)]]
    domains = {(I, d): gamma.values[(I, I)] for I, d in variables}
    sols, truncated, nodes = backtrack(variables, domains, chevron_constraints(delta, gamma), limit)
    fams = []
    for s in sols:
        comps = {I: Fn({d: s[(I, d)] for d in delta.values[(I, I)]}) for I in C.objects}
        fams.append(Paranatural(delta, gamma, comps))
    return Enumeration(fams, truncated, nodes)


# -- Struct functors -------------------------------------------------------------


def as_struct_functor(
    phi: Paranatural,
    source_struct: StructCategory | None = None,
    target_struct: StructCategory | None = None,
) -> FinFunctor:
    """The functor ``Struct(source) -> Struct(target)`` transforming structures by ``phi``.

    Raises :class:`NotParanaturalError` naming the first Struct morphism whose
    image is not a structure homomorphism.
    """
    S = source_struct or struct_category(phi.source)
    T = target_struct or struct_category(phi.target)
    tmors = set(T.morphisms)
    obj_map = {(I, g): (I, phi.components[I](g)) for (I, g) in S.objects}
    mor_map = {}
    for m in sorted(S.morphisms, key=label):
        f, src, tgt = m
        image = (f, obj_map[src], obj_map[tgt])
        if image not in tmors:
            raise NotParanaturalError(
                f"Struct morphism {label(m)} would be dropped",
                witness={"morphism": m, "image": image},
            )
        mor_map[m] = image
    return FinFunctor(S, T, obj_map, mor_map)


# -- classical naturality (independent oracle for the presheaf case) ------------


def check_natural_presheaf(base, P_sets, P_maps, Q_sets, Q_maps, components) -> dict | None:
    """First failure of ``Q(m) . phi_B = phi_A . P(m)`` for ``m : A -> B``, else None."""
    for m in sorted(base.morphisms, key=label):
        a, b = base.dom[m], base.cod[m]
        for x in sorted(P_sets[b], key=label):
            lhs = Q_maps[m][components[b][x]]
            rhs = components[a][P_maps[m][x]]
            if lhs != rhs:
                return {"morphism": m, "element": x, "lhs": lhs, "rhs": rhs}
    return None


def enumerate_natural_presheaf(base, P_sets, P_maps, Q_sets, Q_maps) -> list:
    """Brute force over all component families."""
    objs = sorted(base.objects, key=label)
    per_obj = []
    for o in objs:
        dom = sorted(P_sets[o], key=label)
        cod = sorted(Q_sets[o], key=label)
        per_obj.append([dict(zip(dom, outs)) for outs in itertools.product(cod, repeat=len(dom))])
    out = []
    for choice in itertools.product(*per_obj):
        comps = dict(zip(objs, choice))
        if check_natural_presheaf(base, P_sets, P_maps, Q_sets, Q_maps, comps) is None:
            out.append(comps)
    return out
