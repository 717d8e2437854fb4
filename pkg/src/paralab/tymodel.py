"""The difunctor model of dependent types at desk scale.

Contexts are difunctors ``G`` over a base category; types over ``G`` are small
difunctors over ``Struct(G)``; terms are dependent paranatural families.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from .difun import Const, StructCategory, TabulatedDifunctor, eval_difunctor_expr, reindex, struct_category, validate_difunctor
from .diyoneda import diyo, diyo_forward
from .errors import InputError, NotParanaturalError, ResourceError
from .fincat import FinCategory
from .paranat import (
    ChevronReport,
    Paranatural,
    as_struct_functor,
    check_paranatural,
    compose_paranatural,
    enumerate_paranaturals,
    _morphisms_in_order,
)
from .values import Fn, label

DEFAULT_BUDGET = 200_000


def struct_of(d: TabulatedDifunctor) -> StructCategory:
    """``Struct(d)``, built once per difunctor object."""
    S = getattr(d, "_struct", None)
    if S is None:
        S = struct_category(d)
        d._struct = S
    return S


def _same_base(a: FinCategory, b: FinCategory) -> bool:
    return a is b or a.tables_equal(b)


# -- types ----------------------------------------------------------------------


@dataclass
class TyOver:
    context: TabulatedDifunctor
    difunctor: TabulatedDifunctor
    bound: int | None = None

    def cell(self, a, b) -> tuple:
        return self.difunctor.values[(a, b)]

    def tables_equal(self, other: "TyOver") -> bool:
        return _same_base(self.difunctor.base, other.difunctor.base) and self.difunctor.tables_equal(other.difunctor)


def make_ty(gamma: TabulatedDifunctor, difunctor: TabulatedDifunctor, bound: int | None = None,
            validate: bool = True) -> TyOver:
    """Wrap a difunctor over ``Struct(gamma)`` as a type, enforcing the size bound."""
    if not _same_base(difunctor.base, struct_of(gamma)):
        raise InputError("type is not a difunctor over the Struct category of its context")
    if bound is not None:
        for k, v in difunctor.values.items():
            if len(v) > bound:
                raise InputError(f"size bound exceeded: cell {label(k)} has {len(v)} > {bound} elements")
    if validate:
        rep = validate_difunctor(difunctor)
        if not rep.ok:
            raise InputError(f"type fails the difunctor laws: {rep.violations[0]}")
    return TyOver(gamma, difunctor, bound)


def const_ty(gamma: TabulatedDifunctor, elements, bound: int | None = None) -> TyOver:
    return make_ty(gamma, eval_difunctor_expr(Const(tuple(elements)), struct_of(gamma)), bound, validate=False)


def weaken(gamma: TabulatedDifunctor, d: TabulatedDifunctor, bound: int | None = None) -> TyOver:
    """A difunctor over the base, read as a type that ignores its structure arguments."""
    if not _same_base(d.base, gamma.base):
        raise InputError("base mismatch")
    S = struct_of(gamma)
    return make_ty(gamma, reindex(d, S.forgetful(), name=f"{d.name}[wk]"), bound, validate=False)


def _check_subst_target(A: TyOver, sigma: Paranatural) -> None:
    if sigma.target is not A.context and not (
        _same_base(sigma.target.base, A.context.base) and sigma.target.tables_equal(A.context)
    ):
        raise InputError("base mismatch: the substitution does not land in the type's context")


def subst_ty(A: TyOver, sigma: Paranatural) -> TyOver:
    """``A[sigma]``: reindex along the Struct functor of ``sigma``."""
    _check_subst_target(A, sigma)
    F = as_struct_functor(sigma, struct_of(sigma.source), A.difunctor.base)
    return TyOver(sigma.source, reindex(A.difunctor, F, name=f"{A.difunctor.name}[s]"), A.bound)


# -- terms ----------------------------------------------------------------------


@dataclass
class DepParanatural:
    context: TabulatedDifunctor
    ty: TyOver
    components: dict  # I -> Fn(c -> a)

    def __call__(self, I, c):
        return self.components[I](c)

    def key(self) -> tuple:
        return tuple(sorted((label(I), label(t)) for I, t in self.components.items()))

    def same_components(self, other: "DepParanatural") -> bool:
        return self.components == other.components


def make_tm(A: TyOver, components: Mapping) -> DepParanatural:
    gamma = A.context
    comps = {I: (t if isinstance(t, Fn) else Fn(t)) for I, t in components.items()}
    for I in gamma.base.objects:
        if I not in comps:
            raise InputError(f"component missing at object {label(I)}")
        t = comps[I]
        if set(t.keys()) != set(gamma.values[(I, I)]):
            raise InputError(f"component at {label(I)} is not total on the context diagonal")
        for c, a in t.items():
            if a not in set(A.cell((I, c), (I, c))):
                raise InputError(f"component at {label(I)} sends {label(c)} outside A(({label(I)},{label(c)}))")
    return DepParanatural(gamma, A, comps)


def check_tm(gamma: TabulatedDifunctor, A: TyOver, tau: DepParanatural | Mapping,
             collect_all: bool = False) -> ChevronReport:
    """Dependent chevron check, scanned in the same order as :func:`check_paranatural`."""
    if not isinstance(tau, DepParanatural):
        tau = make_tm(A, tau)
    comps = tau.components
    C = gamma.base
    D = A.difunctor
    rep = ChevronReport(ok=True, formulation="dependent")
    for i2 in _morphisms_in_order(C):
        i0, i1 = C.dom[i2], C.cod[i2]
        gp, gn = gamma.pos[(i0, i2)], gamma.neg[(i2, i1)]
        for c0 in gamma.values[(i0, i0)]:
            for c1 in gamma.values[(i1, i1)]:
                if gp(c0) != gn(c1):
                    continue
                rep.checked += 1
                s, t = (i0, c0), (i1, c1)
                m = (i2, s, t)
                lhs = D.pos[(s, m)](comps[i0](c0))
                rhs = D.neg[(m, t)](comps[i1](c1))
                if lhs != rhs:
                    w = {"i2": i2, "d0": c0, "d1": c1, "lhs": lhs, "rhs": rhs}
                    if rep.ok:
                        rep.ok, rep.witness = False, w
                    if not collect_all:
                        return rep
                    rep.witnesses.append(w)
    return rep


def _unit_over(S: FinCategory) -> TabulatedDifunctor:
    return eval_difunctor_expr(Const(("*",)), S)


def enumerate_tm(A: TyOver, limit: int | None = None) -> list:
    """All terms of ``A``, as paranaturals from the terminal difunctor over ``Struct``."""
    S = A.difunctor.base
    fams = enumerate_paranaturals(_unit_over(S), A.difunctor, limit=limit)
    if fams.truncated:
        raise ResourceError(f"term enumeration exceeded the limit of {limit}")
    gamma = A.context
    out = []
    for f in fams:
        comps = {I: Fn({c: f.components[(I, c)]("*") for c in gamma.values[(I, I)]}) for I in gamma.base.objects}
        out.append(DepParanatural(gamma, A, comps))
    return out


def subst_tm(t: DepParanatural, sigma: Paranatural) -> DepParanatural:
    """``t[sigma]``, typed in ``A[sigma]``."""
    A = subst_ty(t.ty, sigma)
    comps = {
        I: Fn({d: t.components[I](sigma.components[I](d)) for d in sigma.source.values[(I, I)]})
        for I in sigma.source.base.objects
    }
    return DepParanatural(sigma.source, A, comps)


def _flat(components: Mapping) -> Fn:
    return Fn({(K, s): v for K, t in components.items() for s, v in t.items()})


# -- comprehension --------------------------------------------------------------


def _splice_neg(base, J, m) -> Paranatural:
    """``DiYo(J, I0) => DiYo(J, I1)`` postcomposing the ``from`` leg with ``m : I0 -> I1``."""
    i0, i1 = base.dom[m], base.cod[m]
    src, tgt = diyo(base, J, i0), diyo(base, J, i1)
    comps = {K: Fn({(a, b): (a, base.compose[(m, b)]) for (a, b) in src.values[(K, K)]}) for K in base.objects}
    return Paranatural(src, tgt, comps)


def _splice_pos(base, I, m) -> Paranatural:
    """``DiYo(J1, I) => DiYo(J0, I)`` precomposing the ``into`` leg with ``m : J0 -> J1``."""
    j0, j1 = base.dom[m], base.cod[m]
    src, tgt = diyo(base, j1, I), diyo(base, j0, I)
    comps = {K: Fn({(a, b): (base.compose[(a, m)], b) for (a, b) in src.values[(K, K)]}) for K in base.objects}
    return Paranatural(src, tgt, comps)


class _DiyoCache:
    """One DiYo difunctor (and Struct category) per cell, so functor targets are shared."""

    def __init__(self, base):
        self.base = base
        self.cache: dict = {}

    def __call__(self, J, I) -> TabulatedDifunctor:
        if (J, I) not in self.cache:
            self.cache[(J, I)] = diyo(self.base, J, I)
        return self.cache[(J, I)]

    def leg_neg(self, J, m) -> Paranatural:
        p = _splice_neg(self.base, J, m)
        return Paranatural(self(J, self.base.dom[m]), self(J, self.base.cod[m]), p.components)

    def leg_pos(self, I, m) -> Paranatural:
        p = _splice_pos(self.base, I, m)
        return Paranatural(self(self.base.cod[m], I), self(self.base.dom[m], I), p.components)


@dataclass
class Comprehension:
    context: TabulatedDifunctor  # G.A
    p: Paranatural
    q: DepParanatural | None  # None when p is not paranatural
    gamma: TabulatedDifunctor
    ty: TyOver
    elements: dict = field(default_factory=dict)  # element -> (gamma family, term)
    projection: ChevronReport | None = None


def comprehension(gamma: TabulatedDifunctor, A: TyOver, limit: int = DEFAULT_BUDGET) -> Comprehension:
    """Context extension ``G.A`` with its projection ``p`` and variable ``q``.

    ``G.A(I, J)`` is the set of pairs ``(g, t)`` of a paranatural
    ``g : DiYo(J, I) => G`` and a term ``t`` of ``A[g]`` over ``DiYo(J, I)``.
    The actions precompose ``g`` and ``t`` with the splice legs.
    """
    if not _same_base(A.difunctor.base, struct_of(gamma)):
        raise InputError("type is not over this context")
    if A.bound is not None and any(len(v) > A.bound for v in A.difunctor.values.values()):
        raise InputError("size bound exceeded")
    C = gamma.base
    dy = _DiyoCache(C)
    info: dict = {}
    values: dict = {}
    total = 0
    for I in C.objects:
        for J in C.objects:
            src = dy(J, I)
            fams = enumerate_paranaturals(src, gamma, limit=limit)
            if fams.truncated:
                raise ResourceError(f"cell ({label(I)},{label(J)}) of the extended context exceeds {limit}")
            cell = []
            for g in fams:
                for t in enumerate_tm(subst_ty(A, g), limit=limit):
                    e = (_flat(g.components), _flat(t.components))
                    info[(I, J, e)] = (g, t)
                    cell.append(e)
                    total += 1
                    if total > limit:
                        raise ResourceError(f"extended context exceeds {limit} elements")
            values[(I, J)] = tuple(sorted(cell, key=label))
    neg, pos = {}, {}
    for m in C.morphisms:
        i0, i1 = C.dom[m], C.cod[m]
        for J in C.objects:
            L = dy.leg_neg(J, m)
            tab = {}
            for e in values[(i1, J)]:
                g, t = info[(i1, J, e)]
                tab[e] = (_flat(compose_paranatural(g, L).components), _flat(subst_tm(t, L).components))
            neg[(m, J)] = Fn(tab)
        for I in C.objects:
            L = dy.leg_pos(I, m)
            tab = {}
            for e in values[(I, i0)]:
                g, t = info[(I, i0, e)]
                tab[e] = (_flat(compose_paranatural(g, L).components), _flat(subst_tm(t, L).components))
            pos[(I, m)] = Fn(tab)
    ext = TabulatedDifunctor(C, values, neg, pos, name=f"{gamma.name}.{A.difunctor.name}")
    p_comps, q_comps = {}, {}
    for I in C.objects:
        i = C.identities[I]
        p_comps[I] = Fn({e: e[0]((I, (i, i))) for e in values[(I, I)]})
        q_comps[I] = Fn({e: e[1]((I, (i, i))) for e in values[(I, I)]})
    p = Paranatural(ext, gamma, p_comps)
    proj = check_paranatural(ext, gamma, p)
    q = DepParanatural(ext, subst_ty(A, p), q_comps) if proj.ok else None
    return Comprehension(ext, p, q, gamma, A, {e[2]: info[e] for e in info}, proj)


def _from_pair(cx: Comprehension, sigma: Paranatural, t: DepParanatural) -> dict:
    """Components of ``<sigma, t> : D => G.A``."""
    delta = sigma.source
    C = delta.base
    dy = _DiyoCache(C)
    comps = {}
    for I in C.objects:
        src = dy(I, I)
        tab = {}
        for d in delta.values[(I, I)]:
            dd = diyo_forward(delta, I, I, d, source=src)
            tab[d] = (_flat(compose_paranatural(sigma, dd).components), _flat(subst_tm(t, dd).components))
        comps[I] = Fn(tab)
    return comps


def comprehension_correspondence(delta: TabulatedDifunctor, cx: Comprehension,
                                 limit: int = DEFAULT_BUDGET) -> dict:
    """Compare substitutions ``D => G.A`` with pairs ``(sigma, t)`` by enumeration."""
    ext, gamma, A = cx.context, cx.gamma, cx.ty
    proj = cx.projection or check_paranatural(ext, gamma, cx.p)
    if not proj.ok:
        # without a paranatural projection neither direction is defined
        return {
            "substitutions": None,
            "pairs": None,
            "projection_paranatural": False,
            "projection_witness": proj.to_json()["witness"],
            "verdict": "not-bijection",
        }
    subs = enumerate_paranaturals(delta, ext, limit=limit)
    sigmas = enumerate_paranaturals(delta, gamma, limit=limit)
    if subs.truncated or sigmas.truncated:
        raise ResourceError(f"substitution enumeration exceeded {limit}")
    pairs = [(s, t) for s in sigmas for t in enumerate_tm(subst_ty(A, s), limit=limit)]
    sub_keys = {r.key(): r for r in subs}
    pair_keys = {(s.key(), t.key()) for s, t in pairs}

    def to_pair(rho):
        s = compose_paranatural(cx.p, rho)
        t = {I: Fn({d: cx.q.components[I](rho.components[I](d)) for d in delta.values[(I, I)]}) for I in delta.base.objects}
        return s, DepParanatural(delta, subst_ty(A, s), t)

    to_lands = True
    rt_subst = True
    for rho in subs:
        try:
            s, t = to_pair(rho)
        except NotParanaturalError:
            to_lands = rt_subst = False
            continue
        if (s.key(), t.key()) not in pair_keys:
            to_lands = False
        back = _from_pair(cx, s, t)
        if back != rho.components:
            rt_subst = False
    from_lands = True
    rt_pair = True
    for s, t in pairs:
        comps = _from_pair(cx, s, t)
        rho = Paranatural(delta, ext, comps)
        if any(e not in set(ext.values[(I, I)]) for I in comps for e in comps[I]._table.values()):
            from_lands = False
            rt_pair = False
            continue
        if rho.key() not in sub_keys:
            from_lands = False
        s2, t2 = to_pair(rho)
        if s2.key() != s.key() or t2.key() != t.key():
            rt_pair = False
    bij = to_lands and from_lands and rt_pair and rt_subst and len(subs) == len(pairs)
    return {
        "substitutions": len(subs),
        "pairs": len(pairs),
        "projection_paranatural": True,
        "to_pair_lands": to_lands,
        "from_pair_lands": from_lands,
        "roundtrip_pair": rt_pair,
        "roundtrip_subst": rt_subst,
        "verdict": "bijection" if bij else "not-bijection",
    }


def comprehension_diagonal(cx: Comprehension) -> list:
    """Per object: size of the extended diagonal against the sum of the type's diagonal cells."""
    gamma, A = cx.gamma, cx.ty
    out = []
    for I in sorted(gamma.base.objects, key=label):
        expect = sum(len(A.cell((I, c), (I, c))) for c in gamma.values[(I, I)])
        out.append({"I": label(I), "extended": len(cx.context.values[(I, I)]), "sum": expect})
    return out


# -- small difunctors and canonical codes --------------------------------------


@dataclass(frozen=True)
class TypeCode:
    """Iso-class of a small difunctor over a fixed category, in canonical form.

    ``sizes`` follow the cell order (objects sorted by label, row-major) and
    ``tables`` give one index table per action slot of :class:`_Shape`.
    """

    sizes: tuple
    tables: tuple

    def canonical_label(self) -> str:
        s = ".".join(map(str, self.sizes))
        t = "|".join("-".join(map(str, x)) for x in self.tables)
        return f"ty<{s};{t}>"

    def __repr__(self) -> str:
        return self.canonical_label()


class _Shape:
    """Index bookkeeping for difunctors over a fixed small category.

    A slot is one action table of a non-identity morphism: ``neg`` slots map
    ``cell(cod m, o) -> cell(dom m, o)``, ``pos`` slots map
    ``cell(o, dom m) -> cell(o, cod m)``.
    """

    def __init__(self, S: FinCategory):
        self.S = S
        self.objs = sorted(S.objects, key=label)
        self.oidx = {o: k for k, o in enumerate(self.objs)}
        self.ids = set(S.identities.values())
        self.mors = [m for m in sorted(S.morphisms, key=label) if m not in self.ids]
        n = len(self.objs)
        self.cells = [(a, b) for a in range(n) for b in range(n)]
        self.cidx = {c: k for k, c in enumerate(self.cells)}
        self.slots = []
        for m in self.mors:
            d, c = self.oidx[S.dom[m]], self.oidx[S.cod[m]]
            for o in range(n):
                self.slots.append(("neg", m, o, self.cidx[(c, o)], self.cidx[(d, o)]))
        for m in self.mors:
            d, c = self.oidx[S.dom[m]], self.oidx[S.cod[m]]
            for o in range(n):
                self.slots.append(("pos", m, o, self.cidx[(o, d)], self.cidx[(o, c)]))
        self.slot_of = {(s[0], s[1], s[2]): k for k, s in enumerate(self.slots)}
        self.laws = self._laws()
        self.by_last: dict = {}
        for last, law in self.laws:
            self.by_last.setdefault(last, []).append(law)

    def slot(self, kind, m, o):
        return None if m in self.ids else self.slot_of[(kind, m, o)]

    def _laws(self):
        """``(last slot, (src cell, left chain, right chain))``; chains apply right to left."""
        S, n, oi = self.S, len(self.objs), self.oidx
        out = []

        def add(src, left, right):
            real = [s for s in left + right if s is not None]
            if real:
                out.append((max(real), (src, tuple(left), tuple(right))))

        for (g, f), gf in S.compose.items():
            a, c = oi[S.dom[f]], oi[S.cod[g]]
            for o in range(n):
                # neg(gf) = neg(f) . neg(g)   on cell(c, o)
                add(self.cidx[(c, o)], [self.slot("neg", gf, o)], [self.slot("neg", f, o), self.slot("neg", g, o)])
                # pos(gf) = pos(g) . pos(f)   on cell(o, a)
                add(self.cidx[(o, a)], [self.slot("pos", gf, o)], [self.slot("pos", g, o), self.slot("pos", f, o)])
        for m1 in self.mors:
            i0, i1 = oi[S.dom[m1]], oi[S.cod[m1]]
            for m2 in self.mors:
                j0, j1 = oi[S.dom[m2]], oi[S.cod[m2]]
                add(self.cidx[(i1, j0)],
                    [self.slot("pos", m2, i0), self.slot("neg", m1, j0)],
                    [self.slot("neg", m1, j1), self.slot("pos", m2, i1)])
        return out

    @staticmethod
    def holds(law, tabs, sizes) -> bool:
        src, left, right = law

        def run(chain, x):
            for s in reversed(chain):
                if s is not None:
                    x = tabs[s][x]
            return x

        return all(run(left, x) == run(right, x) for x in range(sizes[src]))

    # conversion ------------------------------------------------------------

    def encode(self, d: TabulatedDifunctor):
        """``(sizes, tables)`` of a tabulated difunctor, indexing elements by position."""
        cellvals = [d.values[(self.objs[a], self.objs[b])] for a, b in self.cells]
        index = [{x: k for k, x in enumerate(v)} for v in cellvals]
        tabs = []
        for kind, m, o, sc, tc in self.slots:
            t = d.neg[(m, self.objs[o])] if kind == "neg" else d.pos[(self.objs[o], m)]
            tabs.append(tuple(index[tc][t(x)] for x in cellvals[sc]))
        return tuple(len(v) for v in cellvals), tuple(tabs)

    def decode(self, code: TypeCode, name: str = "") -> TabulatedDifunctor:
        S, objs = self.S, self.objs
        if len(code.sizes) != len(self.cells) or len(code.tables) != len(self.slots):
            raise InputError(f"code {code.canonical_label()} does not fit this category")
        elems = [tuple(str(k) for k in range(n)) for n in code.sizes]
        values = {(objs[a], objs[b]): elems[k] for k, (a, b) in enumerate(self.cells)}
        neg, pos = {}, {}
        for k, (kind, m, o, sc, tc) in enumerate(self.slots):
            t = Fn({elems[sc][x]: elems[tc][y] for x, y in enumerate(code.tables[k])})
            if kind == "neg":
                neg[(m, objs[o])] = t
            else:
                pos[(objs[o], m)] = t
        for o in objs:
            i = S.identities[o]
            for X in objs:
                neg[(i, X)] = Fn({x: x for x in values[(o, X)]})
                pos[(X, i)] = Fn({x: x for x in values[(X, o)]})
        return TabulatedDifunctor(S, values, neg, pos, name=name or code.canonical_label())

    def canonical(self, sizes, tabs, budget: int = DEFAULT_BUDGET) -> TypeCode:
        """Least relabeling over all per-cell permutations."""
        perms_per_cell = [list(itertools.permutations(range(n))) for n in sizes]
        total = 1
        for p in perms_per_cell:
            total *= len(p)
        if total > budget:
            raise ResourceError(f"canonical labeling needs {total} relabelings (budget {budget})")
        best = None
        for perms in itertools.product(*perms_per_cell):
            new = []
            for (kind, m, o, sc, tc), t in zip(self.slots, tabs):
                ps, pt = perms[sc], perms[tc]
                out = [0] * len(t)
                for x, y in enumerate(t):
                    out[ps[x]] = pt[y]
                new.append(tuple(out))
            new = tuple(new)
            if best is None or new < best:
                best = new
        return TypeCode(tuple(sizes), best)

    def code_of(self, d: TabulatedDifunctor) -> TypeCode:
        return self.canonical(*self.encode(d))


_SHAPES: dict = {}


def shape_of(S: FinCategory) -> _Shape:
    key = id(S)
    hit = _SHAPES.get(key)
    if hit is None or hit[0] is not S:
        hit = (S, _Shape(S))
        _SHAPES[key] = hit
    return hit[1]


def canonical_code(d: TabulatedDifunctor) -> TypeCode:
    return shape_of(d.base).code_of(d)


def decode_code(code: TypeCode, S: FinCategory) -> TabulatedDifunctor:
    return shape_of(S).decode(code)


def small_difunctor_codes(S: FinCategory, bound: int, budget: int = DEFAULT_BUDGET) -> list:
    """Canonical codes of all difunctors over ``S`` with every cell of size at most ``bound``."""
    sh = shape_of(S)
    explored = 0
    codes = set()
    for sizes in itertools.product(range(bound + 1), repeat=len(sh.cells)):
        tabs: list = [None] * len(sh.slots)

        def go(k):
            nonlocal explored
            explored += 1
            if explored > budget:
                raise ResourceError(f"small-difunctor enumeration over {S.name or 'the category'} exceeded {budget} nodes")
            if k == len(sh.slots):
                yield tuple(tabs)
                return
            _, _, _, sc, tc = sh.slots[k]
            for t in itertools.product(range(sizes[tc]), repeat=sizes[sc]):
                tabs[k] = t
                if all(sh.holds(law, tabs, sizes) for law in sh.by_last.get(k, ())):
                    yield from go(k + 1)
            tabs[k] = None

        for t in go(0):
            codes.add(sh.canonical(sizes, t, budget))
    return sorted(codes, key=lambda c: (c.sizes, c.tables))


def enumerate_types(gamma: TabulatedDifunctor, bound: int, budget: int = DEFAULT_BUDGET) -> list:
    """One representative per iso-class of types over ``gamma`` within the bound."""
    S = struct_of(gamma)
    sh = shape_of(S)
    return [TyOver(gamma, sh.decode(c), bound) for c in small_difunctor_codes(S, bound, budget)]


# -- universe -------------------------------------------------------------------


class LazyCell:
    """A universe cell too large to list, represented by its membership test."""

    def __init__(self, S: FinCategory, bound: int):
        self.S = S
        self.bound = bound

    def __contains__(self, code) -> bool:
        if not isinstance(code, TypeCode) or any(n > self.bound for n in code.sizes):
            return False
        sh = shape_of(self.S)
        try:
            d = sh.decode(code)
        except InputError:
            return False
        return validate_difunctor(d).ok and sh.code_of(d) == code

    def __repr__(self) -> str:
        return f"LazyCell(bound={self.bound})"


@dataclass
class Universe:
    base: FinCategory
    bound: int
    cells: dict  # (I, J) -> tuple of codes | LazyCell
    structs: dict  # (I, J) -> Struct(DiYo(J, I))
    diyos: _DiyoCache
    difunctor: TabulatedDifunctor | None = None

    @property
    def lazy(self) -> bool:
        return any(isinstance(c, LazyCell) for c in self.cells.values())

    def contains(self, I, J, code) -> bool:
        return code in self.cells[(I, J)]

    def act_neg(self, m, J, code: TypeCode) -> TypeCode:
        C = self.base
        i0, i1 = C.dom[m], C.cod[m]
        F = as_struct_functor(self.diyos.leg_neg(J, m), self.structs[(i0, J)], self.structs[(i1, J)])
        return canonical_code(reindex(decode_code(code, self.structs[(i1, J)]), F))

    def act_pos(self, I, m, code: TypeCode) -> TypeCode:
        C = self.base
        j0, j1 = C.dom[m], C.cod[m]
        F = as_struct_functor(self.diyos.leg_pos(I, m), self.structs[(I, j1)], self.structs[(I, j0)])
        return canonical_code(reindex(decode_code(code, self.structs[(I, j0)]), F))

    def sizes(self) -> list:
        out = []
        for (I, J), cell in sorted(self.cells.items(), key=lambda kv: (label(kv[0][0]), label(kv[0][1]))):
            if isinstance(cell, LazyCell):
                out.append({"I": label(I), "J": label(J), "size": None, "lazy": True})
            else:
                out.append({"I": label(I), "J": label(J), "size": len(cell), "lazy": False})
        return out


def build_universe(base: FinCategory, bound: int, budget: int = DEFAULT_BUDGET) -> Universe:
    """``U(I, J)``: codes of small difunctors over the splice category ``Struct(DiYo(J, I))``.

    A cell whose enumeration exceeds ``budget`` is kept as a :class:`LazyCell`;
    the tabulated difunctor is only built when every cell is listed.
    """
    if bound < 0:
        raise InputError("bound must be non-negative")
    dy = _DiyoCache(base)
    cells, structs = {}, {}
    for I in base.objects:
        for J in base.objects:
            S = struct_of(dy(J, I))
            structs[(I, J)] = S
            try:
                cells[(I, J)] = tuple(small_difunctor_codes(S, bound, budget))
            except ResourceError:
                cells[(I, J)] = LazyCell(S, bound)
    U = Universe(base, bound, cells, structs, dy)
    if not U.lazy:
        neg, pos = {}, {}
        for m in base.morphisms:
            i0, i1 = base.dom[m], base.cod[m]
            for J in base.objects:
                neg[(m, J)] = Fn({c: U.act_neg(m, J, c) for c in cells[(i1, J)]})
            for I in base.objects:
                pos[(I, m)] = Fn({c: U.act_pos(I, m, c) for c in cells[(I, i0)]})
        values = {k: tuple(sorted(v, key=label)) for k, v in cells.items()}
        U.difunctor = TabulatedDifunctor(base, values, neg, pos, name=f"U{bound}")
    return U


def weakened_universe(gamma: TabulatedDifunctor, U: Universe) -> TyOver:
    if U.difunctor is None:
        raise ResourceError("the universe has lazy cells; weakening needs every diagonal cell listed")
    return weaken(gamma, U.difunctor)


def code_of_type(A: TyOver, U: Universe) -> dict:
    """Components ``I -> (c -> canonical(A[delta_c]))`` of the code of ``A``."""
    gamma = A.context
    SG = A.difunctor.base
    comps = {}
    for I in gamma.base.objects:
        src = U.diyos(I, I)
        tab = {}
        for c in gamma.values[(I, I)]:
            dc = diyo_forward(gamma, I, I, c, source=src)
            F = as_struct_functor(dc, U.structs[(I, I)], SG)
            tab[c] = canonical_code(reindex(A.difunctor, F))
        comps[I] = Fn(tab)
    return comps


def decode_term(gamma: TabulatedDifunctor, components: Mapping, U: Universe):
    """Read a type back from a code family; returns ``(TyOver | None, reason | None)``.

    The value at ``(I, c)`` is the code's cell at the identity splice on ``I``;
    cells between distinct structures are empty.
    """
    C = gamma.base
    S = struct_of(gamma)
    diag = {}
    for I in C.objects:
        i = C.identities[I]
        top = (I, (i, i))
        for c in gamma.values[(I, I)]:
            B = decode_code(components[I](c), U.structs[(I, I)])
            diag[(I, c)] = B.values[(top, top)]
    values = {(a, b): (diag[a] if a == b else ()) for a in S.objects for b in S.objects}
    neg, pos = {}, {}
    ids = set(S.identities.values())
    for m in S.morphisms:
        s, t = S.dom[m], S.cod[m]
        for o in S.objects:
            for key, src, tgt, store in (((m, o), values[(t, o)], values[(s, o)], neg),
                                         ((o, m), values[(o, s)], values[(o, t)], pos)):
                if m in ids:
                    store[key] = Fn({x: x for x in src})
                elif not src:
                    store[key] = Fn({})
                elif s == t:
                    return None, f"structure endomorphism {label(m[0])} on {label(s)} acts on a nonempty cell"
                else:
                    return None, f"structure morphism {label(m[0])} needs a map into an empty cell"
    d = TabulatedDifunctor(S, values, neg, pos, name="El")
    rep = validate_difunctor(d)
    if not rep.ok:
        return None, "decoded tables fail the difunctor laws"
    return TyOver(gamma, d, U.bound), None


def _diagonal_supported(A: TyOver) -> bool:
    return all(not v for (a, b), v in A.difunctor.values.items() if a != b)


def probe_universe(gamma: TabulatedDifunctor, bound: int, budget: int = DEFAULT_BUDGET) -> dict:
    """Enumerate types and code-valued terms over ``gamma`` and test both round trips."""
    U = build_universe(gamma.base, bound, budget)
    UW = weakened_universe(gamma, U)
    sh = shape_of(struct_of(gamma))
    types = enumerate_types(gamma, bound, budget)
    groups = {"diagonal": {"total": 0, "ok": 0}, "off_diagonal": {"total": 0, "ok": 0}}
    codes_are_terms = True
    for A in types:
        comps = code_of_type(A, U)
        if not check_tm(gamma, UW, DepParanatural(gamma, UW, comps)).ok:
            codes_are_terms = False
        back, _ = decode_term(gamma, comps, U)
        ok = back is not None and sh.code_of(back.difunctor) == sh.code_of(A.difunctor)
        g = groups["diagonal" if _diagonal_supported(A) else "off_diagonal"]
        g["total"] += 1
        g["ok"] += ok
    terms = enumerate_tm(UW, limit=budget)
    tm_ok = 0
    invalid = 0
    for t in terms:
        back, _ = decode_term(gamma, t.components, U)
        if back is None:
            invalid += 1
            continue
        tm_ok += code_of_type(back, U) == t.components
    ty_total = len(types)
    ty_ok = groups["diagonal"]["ok"] + groups["off_diagonal"]["ok"]
    return {
        "bound": bound,
        "cells": U.sizes(),
        "roundtrip_ty_to_tm": {
            "total": ty_total,
            "ok": ty_ok,
            "identity": ty_ok == ty_total,
            "diagonal_supported": groups["diagonal"],
            "off_diagonal_supported": groups["off_diagonal"],
            "codes_are_terms": codes_are_terms,
        },
        "roundtrip_tm_to_ty": {
            "total": len(terms),
            "ok": tm_ok,
            "identity": tm_ok == len(terms),
            "decode_invalid": invalid,
        },
        "sample_size": ty_total + len(terms),
    }
