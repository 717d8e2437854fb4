"""Initial algebras, structural ends and coends over finite-set fragments, bisimulation."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from scipy.cluster.hierarchy import DisjointSet

from . import difun as D
from .errors import InputError, PreconditionError, ResourceError
from .fincat import FinCategory, finset_fragment, fragment_from_sets
from .paranat import enumerate_paranaturals
from .poly import (
    PConst,
    PId,
    PPower,
    PProd,
    PSum,
    PolyFunctor,
    apply_fn,
    apply_set,
    apply_value,
    relation_lift,
)
from .values import Fn, Inj, Lst, all_functions, canon, count_functions, label

DEFAULT_LIMIT = 100_000
DEFAULT_BUDGET = 200_000


def apply_polyfunctor(T: PolyFunctor, arg, domain=None):
    """``T`` on a set (tuple) or on a function table (``Fn``)."""
    if isinstance(arg, Fn):
        return apply_fn(T, arg, canon(domain if domain is not None else arg.keys()))
    return apply_set(T, tuple(arg))


def as_fragment(fragment) -> FinCategory:
    if isinstance(fragment, FinCategory):
        return fragment
    return finset_fragment(list(fragment))


# -- initial algebras ----------------------------------------------------------


@dataclass
class InitialAlgebra:
    functor: PolyFunctor
    stabilized: bool
    chain_sizes: list
    stages: list
    injections: list  # c_k : X_k -> X_{k+1}
    step: int | None = None

    @property
    def carrier(self) -> tuple:
        if not self.stabilized:
            raise PreconditionError("Adamek chain did not stabilize within the bound")
        return self.stages[self.step]

    @property
    def inn(self) -> Fn:
        """``T(mu) -> mu``, the inverse of the connecting bijection."""
        c = self.injections[self.step]
        return Fn({y: x for x, y in c.items()})

    def to_json(self) -> dict:
        out = {"stabilized": self.stabilized, "chain_sizes": self.chain_sizes}
        if self.stabilized:
            out["step"] = self.step
            out["carrier"] = [label(x) for x in self.carrier]
            out["inn"] = {label(k): label(v) for k, v in self.inn.items()}
        return out


def adamek_initial(T: PolyFunctor, bound: int, budget: int = DEFAULT_BUDGET) -> InitialAlgebra:
    if bound < 0:
        raise InputError("bound must be non-negative")
    stages = [()]
    injections = []
    for k in range(bound + 1):
        X = stages[k]
        nxt = apply_set(T, X)
        if len(nxt) > budget:
            raise ResourceError(f"Adamek stage {k + 1} has {len(nxt)} elements, over budget {budget}")
        if k == 0:
            c = Fn({})
        else:
            c = apply_fn(T, injections[k - 1], stages[k - 1])
        stages.append(nxt)
        injections.append(c)
        if len(X) == len(nxt) and len(set(c.as_dict().values())) == len(X):
            return InitialAlgebra(T, True, [len(s) for s in stages[: k + 1]], stages, injections, step=k)
    return InitialAlgebra(T, False, [len(s) for s in stages[: bound + 1]], stages, injections)


def _check_algebra(T, X, u: Fn) -> None:
    TX = apply_set(T, X)
    if set(u.keys()) != set(TX):
        raise InputError("algebra structure is not defined on exactly T(carrier)")
    Xs = set(X)
    for _, v in u.items():
        if v not in Xs:
            raise InputError(f"algebra structure leaves the carrier at {label(v)}")


def fold(T: PolyFunctor, mu: InitialAlgebra, X, u: Fn) -> Fn:
    """The algebra map out of the initial algebra, built stage by stage."""
    X = canon(X)
    _check_algebra(T, X, u)
    h = Fn({})
    for k in range(mu.step):
        h = Fn({t: u(v) for t, v in apply_fn(T, h, mu.stages[k]).items()})
    return h


def is_algebra_hom(T, A, a: Fn, B, b: Fn, h: Fn) -> bool:
    return all(h(a(t)) == b(apply_value(T, h, t)) for t in apply_set(T, A))


def algebra_homs(T, A, a: Fn, B, b: Fn, budget: int = DEFAULT_BUDGET) -> list:
    """Every algebra homomorphism by exhaustive search over all tables ``A -> B``."""
    A, B = canon(A), canon(B)
    if count_functions(len(A), len(B)) > budget:
        raise ResourceError("homomorphism search space over budget")
    return [h for h in all_functions(A, B) if is_algebra_hom(T, A, a, B, b, h)]


# -- structural ends -----------------------------------------------------------


@dataclass
class EndFamily:
    values: dict  # (I, g) -> element of Theta(I, I)
    tags: list = field(default_factory=list)

    def at(self, I, g):
        return self.values[(I, g)]

    def to_json(self) -> dict:
        return {
            "values": {label(k): label(v) for k, v in sorted(self.values.items(), key=lambda kv: label(kv[0]))},
            "tags": list(self.tags),
        }


@dataclass
class EndResult:
    fragment: FinCategory
    gamma: D.TabulatedDifunctor
    theta: D.TabulatedDifunctor
    families: list
    truncated: bool

    def __len__(self) -> int:
        return len(self.families)

    def to_json(self) -> dict:
        return {
            "fragment": list(self.fragment.objects),
            "families": [f.to_json() for f in self.families],
            "count": len(self.families),
            "truncated": self.truncated,
        }


def power_exponent(family: EndFamily, C: FinCategory) -> int | None:
    """Least ``n`` with ``phi(u) = u^n`` for every endomorphism ``u``, if any."""
    keys = sorted(family.values, key=label)
    powers = tuple(C.identities[I] for I, _ in keys)
    seen = set()
    n = 0
    while powers not in seen:
        if all(family.values[k] == p for k, p in zip(keys, powers)):
            return n
        seen.add(powers)
        powers = tuple(C.compose[(u, p)] for (_, u), p in zip(keys, powers))
        n += 1
    return None


def structural_end(gamma_expr, theta_expr, fragment, limit: int = DEFAULT_LIMIT) -> EndResult:
    """Families ``(I, g) -> Theta(I, I)`` compatible with every structure homomorphism."""
    C = as_fragment(fragment)
    gamma = D.eval_difunctor_expr(gamma_expr, C)
    theta = D.eval_difunctor_expr(theta_expr, C)
    enum = enumerate_paranaturals(gamma, theta, limit=limit)
    fams = []
    for phi in enum:
        fam = EndFamily({(I, g): y for I, t in phi.components.items() for g, y in t.items()})
        if isinstance(gamma_expr, D.Hom) and isinstance(theta_expr, D.Hom):
            n = power_exponent(fam, C)
            if n is not None:
                fam.tags.append(f"power:{n}")
        fams.append(fam)
    fams.sort(key=lambda f: label(tuple(label(f.values[k]) for k in sorted(f.values, key=label))))
    return EndResult(C, gamma, theta, fams, enum.truncated)


def _carrier_iso(C: FinCategory, carrier: tuple):
    """Fragment object of the same size, with the order-preserving bijection onto it."""
    for o in C.objects:
        els = C.elements(o)
        if len(els) == len(carrier):
            return o, Fn(dict(zip(carrier, els)))
    return None, None


def probe_uustalu(T: PolyFunctor, F: PolyFunctor, fragment, bound: int = 10, limit: int = DEFAULT_LIMIT) -> dict:
    """Evaluate ``AlgOf(T) => AlgOf(F)`` families at the initial algebra."""
    C = as_fragment(fragment)
    mu = adamek_initial(T, bound)
    if not mu.stabilized:
        raise PreconditionError("initial algebra does not stabilize within the bound")
    o, iso = _carrier_iso(C, mu.carrier)
    if o is None:
        raise PreconditionError(f"no carrier of size {len(mu.carrier)} in the fragment")
    inn = Fn({apply_value(T, iso, t): iso(x) for t, x in mu.inn.items()})
    res = structural_end(D.AlgOf(T), D.AlgOf(F), C, limit=limit)
    carrier = C.elements(o)
    target = canon(all_functions(apply_set(F, carrier), carrier))
    images = [fam.at(o, inn) for fam in res.families]
    out = {
        "fragment": list(C.objects),
        "mu": o,
        "families": len(res.families),
        "target": len(target),
        "image": len(set(images)),
        "truncated": res.truncated,
    }
    if res.truncated:
        out.update(injective=None, surjective=None, verdict="unknown")
        return out
    out["injective"] = len(set(images)) == len(images)
    out["surjective"] = set(images) == set(target)
    out["verdict"] = "bijection" if out["injective"] and out["surjective"] else "not-bijection"
    return out


# -- coalgebra homomorphisms ---------------------------------------------------


def _unify(T: PolyFunctor, a, b, pairs: list) -> bool:
    """Match shapes of ``a`` and ``b``; collect ``Id`` positions into ``pairs``."""
    if isinstance(T, PConst):
        return a == b
    if isinstance(T, PId):
        pairs.append((a, b))
        return True
    if isinstance(T, PSum):
        return a.side == b.side and _unify(T.left if a.side == 0 else T.right, a.value, b.value, pairs)
    if isinstance(T, PProd):
        return _unify(T.left, a[0], b[0], pairs) and _unify(T.right, a[1], b[1], pairs)
    if isinstance(T, PPower):
        return all(_unify(T.base, a(e), b(e), pairs) for e in T.exponent)
    raise InputError(f"not a polynomial functor: {T!r}")


def coalgebra_homs(T: PolyFunctor, X, c: Fn, Y, d: Fn, limit: int = DEFAULT_LIMIT):
    """All ``f`` with ``T(f) . c = d . f``; returns ``(homs, truncated)``.

    Each guess ``f(x) = y`` forces ``f`` on the successors of ``x`` by matching
    ``c(x)`` against ``d(y)``.
    """
    X, Y = canon(X), canon(Y)
    out: list = []

    def assign(f: dict, x, y) -> dict | None:
        f = dict(f)
        todo = [(x, y)]
        while todo:
            a, b = todo.pop()
            if a in f:
                if f[a] != b:
                    return None
                continue
            f[a] = b
            pairs: list = []
            if not _unify(T, c(a), d(b), pairs):
                return None
            todo.extend(pairs)
        return f

    def go(f: dict) -> bool:
        if len(out) >= limit:
            return False
        free = next((x for x in X if x not in f), None)
        if free is None:
            out.append(Fn(f))
            return True
        for y in Y:
            g = assign(f, free, y)
            if g is not None and not go(g):
                return False
        return True

    done = go({})
    return out, not done


# -- structural coends ---------------------------------------------------------


@dataclass
class CoendClasses:
    points: list
    classes: list  # list of sorted point lists
    fragment: list

    def class_of(self, p) -> int:
        for i, cl in enumerate(self.classes):
            if p in cl:
                return i
        raise KeyError(p)

    def same(self, p, q) -> bool:
        return self.class_of(p) == self.class_of(q)

    @property
    def representatives(self) -> list:
        return [cl[0] for cl in self.classes]

    def to_json(self) -> dict:
        return {
            "fragment": self.fragment,
            "classes": [[label(p) for p in cl] for cl in self.classes],
            "count": len(self.classes),
        }


def _classes(points, edges) -> list:
    ds = DisjointSet(sorted(points, key=label))
    for p, q in edges:
        ds.merge(p, q)
    classes = [sorted(s, key=label) for s in ds.subsets()]
    classes.sort(key=lambda cl: label(cl[0]))
    return classes


def structural_coend(gamma_expr, fragment=None, structures: Sequence | None = None, limit: int = DEFAULT_LIMIT) -> CoendClasses:
    """Pointed structures modulo the equivalence generated by homomorphisms.

    Points are ``((I, g), x)`` over a fragment. With ``structures`` given as
    ``(name, carrier, g)`` triples the points are ``(name, x)`` and only those
    structures take part.
    """
    if structures is not None:
        return _coend_of_structures(gamma_expr, structures, limit)
    C = as_fragment(fragment)
    gamma = D.eval_difunctor_expr(gamma_expr, C)
    S = D.struct_category(gamma)
    points = []
    edges = []
    if C.is_fragment:
        for I, g in S.objects:
            points.extend(((I, g), x) for x in C.elements(I))
        for m in S.morphisms:
            f, src, tgt = m
            fn = C.function(f)
            edges.extend(((src, x), (tgt, fn(x))) for x in C.elements(src[0]))
    else:
        points = list(S.objects)
        edges = [(m[1], m[2]) for m in S.morphisms]
    return CoendClasses(points, _classes(points, edges), list(C.objects))


def _coend_of_structures(gamma_expr, structures, limit) -> CoendClasses:
    names = [s[0] for s in structures]
    if len(set(names)) != len(names):
        raise InputError("structure names must be distinct")
    points = [(n, x) for n, X, _ in structures for x in canon(X)]
    edges = []
    if isinstance(gamma_expr, D.CoalgOf):
        T = gamma_expr.functor
        for (n1, X1, g1), (n2, X2, g2) in itertools.product(structures, repeat=2):
            homs, truncated = coalgebra_homs(T, X1, g1, X2, g2, limit=limit)
            if truncated:
                raise ResourceError(f"homomorphism search {n1} -> {n2} exceeded limit {limit}")
            for h in homs:
                edges.extend(((n1, x), (n2, y)) for x, y in h.items())
    else:
        sets = {n: tuple(canon(X)) for n, X, _ in structures}
        if sum(count_functions(len(a), len(b)) for a in sets.values() for b in sets.values()) > limit:
            raise ResourceError("explicit-structure coend needs too many candidate functions")
        C = fragment_from_sets({n: tuple(label(x) for x in X) for n, X in sets.items()})
        back = {n: {label(x): x for x in X} for n, X in sets.items()}
        gamma = D.eval_difunctor_expr(gamma_expr, C)
        S = D.struct_category(gamma)
        given = {n: g for n, _, g in structures}
        for f, (I, g), (J, g2) in S.morphisms:
            if _relabel(given[I]) == g and _relabel(given[J]) == g2:
                fn = C.function(f)
                edges.extend(((I, back[I][x]), (J, back[J][fn(x)])) for x in C.elements(I))
    return CoendClasses(points, _classes(points, edges), names)


def _relabel(v):
    if isinstance(v, Fn):
        return Fn({_relabel(k): _relabel(x) for k, x in v.items()})
    if isinstance(v, tuple):
        return tuple(_relabel(x) for x in v)
    if isinstance(v, Inj):
        return Inj(v.side, _relabel(v.value))
    return label(v) if not isinstance(v, str) else v


def partition_refinement(T: PolyFunctor, X, c: Fn) -> list:
    """Coarsest partition of ``X`` stable under ``T(block) . c``."""
    X = canon(X)
    block = {x: 0 for x in X}
    nblocks = 1 if X else 0
    while True:
        keys = {x: apply_value(T, lambda y: block[y], c(x)) for x in X}
        order = {}
        for x in X:
            order.setdefault(keys[x], len(order))
        new = {x: order[keys[x]] for x in X}
        if len(order) == nblocks:
            break
        block, nblocks = new, len(order)
    groups: dict = {}
    for x in X:
        groups.setdefault(block[x], []).append(x)
    return sorted((sorted(g, key=label) for g in groups.values()), key=lambda g: label(g[0]))


def disjoint_union(coalgebras: Sequence, T: PolyFunctor):
    """Tag each carrier by its name so several coalgebras become one."""
    X = []
    table = {}
    for name, carrier, c in coalgebras:
        for x in carrier:
            X.append((name, x))
            table[(name, x)] = apply_value(T, lambda y, n=name: (n, y), c(x))
    return canon(X), Fn(table)


# -- relation lifting ----------------------------------------------------------


def carrier_values(e, X, budget: int = DEFAULT_BUDGET) -> tuple:
    """Diagonal value ``Gamma(X, X)`` of an expression at an explicit carrier."""
    X = canon(X)
    if isinstance(e, D.Const):
        return canon(e.elements)
    if isinstance(e, D.Var):
        return X
    if isinstance(e, D.Prod):
        return canon(itertools.product(carrier_values(e.left, X, budget), carrier_values(e.right, X, budget)))
    if isinstance(e, D.Sum):
        return canon([Inj(0, a) for a in carrier_values(e.left, X, budget)] + [Inj(1, b) for b in carrier_values(e.right, X, budget)])
    if isinstance(e, (D.Arrow, D.Hom)):
        dom, cod = (X, X) if isinstance(e, D.Hom) else (carrier_values(e.dom, X, budget), carrier_values(e.cod, X, budget))
        if count_functions(len(dom), len(cod)) > budget:
            raise ResourceError("function space over budget")
        return canon(all_functions(dom, cod))
    if isinstance(e, D.AlgOf):
        TX = apply_set(e.functor, X)
        if count_functions(len(TX), len(X)) > budget:
            raise ResourceError("algebra space over budget")
        return canon(all_functions(TX, X))
    if isinstance(e, D.CoalgOf):
        TX = apply_set(e.functor, X)
        if count_functions(len(X), len(TX)) > budget:
            raise ResourceError("coalgebra space over budget")
        return canon(all_functions(X, TX))
    if isinstance(e, D.ListOf):
        xs = carrier_values(e.elem, X, budget)
        return canon(Lst(t) for k in range(e.bound + 1) for t in itertools.product(xs, repeat=k))
    raise InputError(f"relation lifting does not cover {type(e).__name__}")


def lift_witness(e, R, X, Y, a, b, path=()):
    """``None`` if ``a`` and ``b`` are related by the lifting of ``R``, else the failing clause."""
    rel = R if isinstance(R, (set, frozenset)) else set(R)
    if isinstance(e, D.Const):
        return None if a == b else {"clause": "Const", "path": list(path), "lhs": label(a), "rhs": label(b)}
    if isinstance(e, D.Var):
        return None if (a, b) in rel else {"clause": "Var", "path": list(path), "lhs": label(a), "rhs": label(b)}
    if isinstance(e, D.Prod):
        return (lift_witness(e.left, rel, X, Y, a[0], b[0], path + ("fst",))
                or lift_witness(e.right, rel, X, Y, a[1], b[1], path + ("snd",)))
    if isinstance(e, D.Sum):
        if a.side != b.side:
            return {"clause": "Sum", "path": list(path), "lhs": label(a), "rhs": label(b)}
        return lift_witness(e.left if a.side == 0 else e.right, rel, X, Y, a.value, b.value, path + (("inl", "inr")[a.side],))
    if isinstance(e, D.Hom):
        e = D.Arrow(D.Var(), D.Var())
    if isinstance(e, D.Arrow):
        for x in carrier_values(e.dom, X):
            for y in carrier_values(e.dom, Y):
                if lift_witness(e.dom, rel, X, Y, x, y) is None:
                    w = lift_witness(e.cod, rel, X, Y, a(x), b(y), path + (f"app({label(x)},{label(y)})",))
                    if w is not None:
                        return w
        return None
    if isinstance(e, D.AlgOf):
        T = e.functor
        for s in apply_set(T, canon(X)):
            for t in apply_set(T, canon(Y)):
                if relation_lift(T, lambda p, q: (p, q) in rel, s, t) and (a(s), b(t)) not in rel:
                    return {"clause": "AlgOf", "path": list(path) + [f"at({label(s)},{label(t)})"], "lhs": label(a(s)), "rhs": label(b(t))}
        return None
    if isinstance(e, D.CoalgOf):
        for x, y in sorted(rel, key=label):
            w = _poly_witness(e.functor, rel, a(x), b(y), list(path) + [f"at({label(x)},{label(y)})"])
            if w is not None:
                return w
        return None
    if isinstance(e, D.ListOf):
        if len(a.items) != len(b.items):
            return {"clause": "ListOf", "path": list(path), "lhs": label(a), "rhs": label(b)}
        for k, (x, y) in enumerate(zip(a.items, b.items)):
            w = lift_witness(e.elem, rel, X, Y, x, y, path + (f"[{k}]",))
            if w is not None:
                return w
        return None
    raise InputError(f"relation lifting does not cover {type(e).__name__}")


def _poly_witness(T, rel, a, b, path):
    if isinstance(T, PConst):
        return None if a == b else {"clause": "Const", "path": path, "lhs": label(a), "rhs": label(b)}
    if isinstance(T, PId):
        return None if (a, b) in rel else {"clause": "Id", "path": path, "lhs": label(a), "rhs": label(b)}
    if isinstance(T, PSum):
        if a.side != b.side:
            return {"clause": "Sum", "path": path, "lhs": label(a), "rhs": label(b)}
        return _poly_witness(T.left if a.side == 0 else T.right, rel, a.value, b.value, path + [("inl", "inr")[a.side]])
    if isinstance(T, PProd):
        return (_poly_witness(T.left, rel, a[0], b[0], path + ["fst"])
                or _poly_witness(T.right, rel, a[1], b[1], path + ["snd"]))
    if isinstance(T, PPower):
        for x in T.exponent:
            w = _poly_witness(T.base, rel, a(x), b(x), path + [f"@{label(x)}"])
            if w is not None:
                return w
        return None
    raise InputError(f"not a polynomial functor: {T!r}")


def _check_relation(R, X, Y) -> set:
    rel = set(R)
    Xs, Ys = set(X), set(Y)
    for x, y in rel:
        if x not in Xs or y not in Ys:
            raise InputError(f"relation pair ({label(x)},{label(y)}) is outside the carriers")
    return rel


def rel_lift(e, R, X, Y, base: FinCategory | None = None) -> set:
    """Explicit table of the lifted relation between ``Gamma(X, X)`` and ``Gamma(Y, Y)``.

    With ``base`` given, ``X`` and ``Y`` name carriers of that fragment.
    """
    if base is not None:
        for o in (X, Y):
            if o not in base.identities or not base.is_fragment:
                raise InputError(f"carrier {label(o)} is not in the fragment")
        X, Y = base.elements(X), base.elements(Y)
    X, Y = canon(X), canon(Y)
    rel = _check_relation(R, X, Y)
    return {
        (a, b)
        for a in carrier_values(e, X)
        for b in carrier_values(e, Y)
        if lift_witness(e, rel, X, Y, a, b) is None
    }


@dataclass
class BisimVerdict:
    ok: bool
    witness: dict | None = None

    def to_json(self) -> dict:
        return {"verdict": "bisimulation" if self.ok else "not-bisimulation", "witness": self.witness}


def check_bisimulation(e, R, left, right) -> BisimVerdict:
    (X, g), (Y, g2) = left, right
    X, Y = canon(X), canon(Y)
    rel = _check_relation(R, X, Y)
    w = lift_witness(e, rel, X, Y, g, g2)
    return BisimVerdict(w is None, w)


def coinduction_equal(e, left, right, R, fragment=None, limit: int = DEFAULT_LIMIT) -> dict:
    """Equality in the coend from a bisimulation, cross-checked against union-find classes."""
    (X, g, x), (Y, g2, y) = left, right
    rel = set(R)
    v = check_bisimulation(e, rel, (X, g), (Y, g2))
    if not v.ok:
        raise PreconditionError(f"relation is not a bisimulation: {v.witness}")
    if (x, y) not in rel:
        raise PreconditionError(f"({label(x)},{label(y)}) is not in the relation")
    classes = structural_coend(e, structures=[("L", X, g), ("R", Y, g2)], limit=limit)
    agree = classes.same(("L", x), ("R", y))
    return {"equal": True, "same_class": agree, "classes": len(classes.classes)}


# -- fixtures ------------------------------------------------------------------


def stream_functor(alphabet=("0", "1")) -> PolyFunctor:
    return PProd(PConst(tuple(alphabet)), PId())


def stream_coalgebras() -> dict:
    return {
        "P": (("p",), Fn({"p": ("0", "p")})),
        "Q": (("q0", "q1"), Fn({"q0": ("0", "q1"), "q1": ("0", "q0")})),
        "R": (("r",), Fn({"r": ("1", "r")})),
    }


def queue_functor(alphabet=("a", "b")) -> PolyFunctor:
    """``(1 + A x X) x (1 + X)^A``: dequeue and a capacity-checked enqueue."""
    return PProd(
        PSum(PConst(("*",)), PProd(PConst(tuple(alphabet)), PId())),
        PPower(PSum(PConst(("*",)), PId()), tuple(alphabet)),
    )


def _words(alphabet, n):
    return [Lst(t) for k in range(n + 1) for t in itertools.product(alphabet, repeat=k)]


def list_queue(capacity: int = 3, alphabet=("a", "b")):
    states = canon(_words(alphabet, capacity))
    table = {}
    for q in states:
        deq = Inj(0, "*") if not q.items else Inj(1, (q.items[0], Lst(q.items[1:])))
        enq = Fn({a: Inj(0, "*") if len(q.items) >= capacity else Inj(1, Lst(q.items + (a,))) for a in alphabet})
        table[q] = (deq, enq)
    return states, Fn(table)


def batched_queue(capacity: int = 3, alphabet=("a", "b")):
    """States ``(front, back)`` with the back list stored newest first."""
    states = canon(
        (f, b) for f in _words(alphabet, capacity) for b in _words(alphabet, capacity)
        if len(f.items) + len(b.items) <= capacity
    )
    table = {}
    for f, b in states:
        front, back = f.items, b.items
        if not front:
            front, back = tuple(reversed(back)), ()
        deq = Inj(0, "*") if not front else Inj(1, (front[0], (Lst(front[1:]), Lst(back))))
        full = len(f.items) + len(b.items) >= capacity
        enq = Fn({a: Inj(0, "*") if full else Inj(1, (f, Lst((a,) + b.items))) for a in alphabet})
        table[(f, b)] = (deq, enq)
    return states, Fn(table)


def queue_relation(list_states, batched_states) -> set:
    """``front ++ reverse(back) = list``."""
    ls = set(list_states)
    rel = set()
    for f, b in batched_states:
        q = Lst(f.items + tuple(reversed(b.items)))
        if q in ls:
            rel.add((q, (f, b)))
    return rel
