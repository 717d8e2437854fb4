"""diYoneda maps, bijectivity probes, and cartesian closed structure of difunctors."""
from __future__ import annotations

from dataclasses import dataclass, field

from .difun import DiYo, Given, Prod, TabulatedDifunctor, Const, eval_difunctor_expr, prod_difunctor
from .errors import InputError, ResourceError
from .paranat import (
    Paranatural,
    check_paranatural,
    enumerate_paranaturals,
    make_paranatural,
)
from .values import Fn, canon, label

DEFAULT_LIMIT = 100_000


def diyo(gamma_or_base, J, I) -> TabulatedDifunctor:
    base = getattr(gamma_or_base, "base", gamma_or_base)
    return eval_difunctor_expr(DiYo(J, I), base)


def transport(gamma: TabulatedDifunctor, I, J, x, K, into, frm):
    """``map- from (map+ into x)`` landing in ``gamma(K, K)``."""
    return gamma.neg[(frm, K)](gamma.pos[(I, into)](x))


def diyo_forward(gamma: TabulatedDifunctor, I, J, x, source: TabulatedDifunctor | None = None) -> Paranatural:
    """The family ``psi_K(into, from) = map- from (map+ into x)`` out of ``DiYo(J, I)``."""
    if x not in set(gamma.values[(I, J)]):
        raise InputError(f"{label(x)} is not an element of Gamma({label(I)},{label(J)})")
    src = source or diyo(gamma, J, I)
    comps = {}
    for K in gamma.base.objects:
        comps[K] = Fn({s: transport(gamma, I, J, x, K, s[0], s[1]) for s in src.values[(K, K)]})
    return Paranatural(src, gamma, comps)


def diyo_forward_swapped(gamma, I, J, x, K, into, frm):
    """Same evaluation in the other order (negative action first)."""
    return gamma.pos[(K, into)](gamma.neg[(frm, J)](x))


def diyo_reflect(gamma: TabulatedDifunctor, I, psi: Paranatural):
    C = gamma.base
    i = C.identities[I]
    return psi.components[I]((i, i))


@dataclass
class ProbeCell:
    I: object
    J: object
    lhs: int
    rhs: int | None
    injective: bool | None
    surjective: bool | None
    retraction: bool | None = None
    truncated: bool = False

    def to_json(self) -> dict:
        return {
            "I": label(self.I),
            "J": label(self.J),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "injective": self.injective,
            "surjective": self.surjective,
            "retraction": self.retraction,
            "truncated": self.truncated,
        }


@dataclass
class DiYonedaProbe:
    cells: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        if any(c.truncated for c in self.cells):
            return "unknown"
        if all(c.injective and c.surjective for c in self.cells):
            return "bijective"
        return "not-bijective"

    def to_json(self) -> dict:
        return {"cells": [c.to_json() for c in self.cells], "verdict": self.verdict}


def probe_diyoneda(gamma: TabulatedDifunctor, limit: int = DEFAULT_LIMIT) -> DiYonedaProbe:
    """Compare ``gamma(I, J)`` with paranaturals ``DiYo(J, I) => gamma`` cell by cell."""
    C = gamma.base
    probe = DiYonedaProbe()
    for I in sorted(C.objects, key=label):
        for J in sorted(C.objects, key=label):
            src = diyo(gamma, J, I)
            fams = enumerate_paranaturals(src, gamma, limit=limit)
            xs = gamma.values[(I, J)]
            if fams.truncated:
                probe.cells.append(ProbeCell(I, J, len(xs), None, None, None, None, truncated=True))
                continue
            images = [diyo_forward(gamma, I, J, x, source=src).key() for x in xs]
            keys = {f.key() for f in fams}
            injective = len(set(images)) == len(images)
            surjective = keys <= set(images)
            retraction = None
            if I == J:
                retraction = all(
                    diyo_reflect(gamma, I, diyo_forward(gamma, I, I, x, source=src)) == x for x in xs
                )
            probe.cells.append(ProbeCell(I, J, len(xs), len(fams), injective, surjective, retraction))
    return probe


# -- cartesian closed structure ------------------------------------------------


def terminal_difunctor(base) -> TabulatedDifunctor:
    return eval_difunctor_expr(Const(("*",)), base)


def terminal_map(delta: TabulatedDifunctor) -> Paranatural:
    one = terminal_difunctor(delta.base)
    return make_paranatural(delta, one, {I: {d: "*" for d in delta.values[(I, I)]} for I in delta.base.objects})


def projections(a: TabulatedDifunctor, b: TabulatedDifunctor, ab: TabulatedDifunctor | None = None):
    ab = ab or prod_difunctor(a, b)
    objs = a.base.objects
    p1 = make_paranatural(ab, a, {I: {x: x[0] for x in ab.values[(I, I)]} for I in objs})
    p2 = make_paranatural(ab, b, {I: {x: x[1] for x in ab.values[(I, I)]} for I in objs})
    return p1, p2


def pairing(phi: Paranatural, psi: Paranatural, ab: TabulatedDifunctor | None = None) -> Paranatural:
    ab = ab or prod_difunctor(phi.target, psi.target)
    objs = phi.source.base.objects
    return make_paranatural(
        phi.source, ab,
        {I: {d: (phi.components[I](d), psi.components[I](d)) for d in phi.source.values[(I, I)]} for I in objs},
    )


@dataclass
class ExponentialDifunctor:
    """``gamma ^ delta`` with each cell an enumerated set of paranaturals."""

    difunctor: TabulatedDifunctor
    delta: TabulatedDifunctor
    gamma: TabulatedDifunctor
    sources: dict  # (I, J) -> DiYo(J, I) x delta


def _family_fn(fam: Paranatural) -> Fn:
    """Flatten a family into one table keyed by ``(K, ((into, from), d))``."""
    return Fn({(K, s): y for K, t in fam.components.items() for s, y in t.items()})


def exponential(delta: TabulatedDifunctor, gamma: TabulatedDifunctor, limit: int = DEFAULT_LIMIT) -> ExponentialDifunctor:
    C = delta.base
    values = {}
    sources = {}
    for I in C.objects:
        for J in C.objects:
            src = prod_difunctor(diyo(C, J, I), delta)
            fams = enumerate_paranaturals(src, gamma, limit=limit)
            if fams.truncated:
                raise ResourceError(f"exponential cell ({label(I)},{label(J)}) exceeds enumeration limit {limit}")
            sources[(I, J)] = src
            values[(I, J)] = canon(_family_fn(f) for f in fams)
    neg = {}
    pos = {}
    for m in C.morphisms:
        i0, i1 = C.dom[m], C.cod[m]
        for J in C.objects:
            # (map- i2 phi)_K((into, from), d) = phi_K((into, i2 . from), d)
            neg[(m, J)] = Fn({
                phi: Fn({(K, ((s[0][0], s[0][1]), s[1])): phi((K, ((s[0][0], C.compose[(m, s[0][1])]), s[1])))
                         for K in C.objects for s in sources[(i0, J)].values[(K, K)]})
                for phi in values[(i1, J)]
            })
        for I in C.objects:
            # (map+ j2 psi)_K((into, from), d) = psi_K((into . j2, from), d)
            pos[(I, m)] = Fn({
                psi: Fn({(K, s): psi((K, ((C.compose[(s[0][0], m)], s[0][1]), s[1])))
                         for K in C.objects for s in sources[(I, i1)].values[(K, K)]})
                for psi in values[(I, i0)]
            })
    d = TabulatedDifunctor(C, values, neg, pos, name=f"({gamma.name})^({delta.name})")
    return ExponentialDifunctor(d, delta, gamma, sources)


def evaluation(exp: ExponentialDifunctor) -> Paranatural:
    """``ev : gamma^delta x delta => gamma``, ``(psi, d) -> psi_I((id, id), d)``."""
    C = exp.delta.base
    src = prod_difunctor(exp.difunctor, exp.delta)
    comps = {}
    for I in C.objects:
        i = C.identities[I]
        comps[I] = Fn({(psi, d): psi((I, ((i, i), d))) for psi, d in src.values[(I, I)]})
    return Paranatural(src, exp.gamma, comps)


def curry(phi: Paranatural, theta: TabulatedDifunctor, exp: ExponentialDifunctor) -> Paranatural:
    """``Theta x Delta => Gamma``  to  ``Theta => Gamma^Delta``."""
    C = theta.base
    comps = {}
    for I in C.objects:
        table = {}
        for t in theta.values[(I, I)]:
            table[t] = Fn({
                (K, s): phi.components[K]((transport(theta, I, I, t, K, s[0][0], s[0][1]), s[1]))
                for K in C.objects for s in exp.sources[(I, I)].values[(K, K)]
            })
        comps[I] = Fn(table)
    return Paranatural(theta, exp.difunctor, comps)


def uncurry(chi: Paranatural, theta_delta: TabulatedDifunctor, exp: ExponentialDifunctor) -> Paranatural:
    C = theta_delta.base
    comps = {}
    for I in C.objects:
        i = C.identities[I]
        comps[I] = Fn({(t, d): chi.components[I](t)((I, ((i, i), d))) for t, d in theta_delta.values[(I, I)]})
    return Paranatural(theta_delta, exp.gamma, comps)


def probe_exponential(theta, delta, gamma, limit: int = DEFAULT_LIMIT) -> dict:
    """Build currying/uncurrying explicitly and report whether they are inverse bijections."""
    try:
        exp = exponential(delta, gamma, limit=limit)
        theta_delta = prod_difunctor(theta, delta)
        left = enumerate_paranaturals(theta_delta, gamma, limit=limit)
        right = enumerate_paranaturals(theta, exp.difunctor, limit=limit)
    except ResourceError as e:
        return {"verdict": "unknown", "reason": str(e)}
    if left.truncated or right.truncated:
        return {"verdict": "unknown", "reason": "enumeration limit reached"}
    right_keys = {f.key() for f in right}
    left_keys = {f.key() for f in left}
    curried = [curry(f, theta, exp) for f in left]
    curry_lands = all(c.key() in right_keys for c in curried)
    curry_injective = len({c.key() for c in curried}) == len(curried)
    curry_surjective = right_keys <= {c.key() for c in curried}
    uncurried = [uncurry(g, theta_delta, exp) for g in right]
    uncurry_lands = all(u.key() in left_keys for u in uncurried)
    round_left = all(uncurry(c, theta_delta, exp).key() == f.key() for f, c in zip(left, curried))
    round_right = all(curry(u, theta, exp).key() == g.key() for g, u in zip(right, uncurried))
    uncurry_paranatural = all(check_paranatural(theta_delta, gamma, u).ok for u in uncurried)
    bij = curry_lands and uncurry_lands and round_left and round_right
    return {
        "lhs": len(left),
        "rhs": len(right),
        "curry_lands": curry_lands,
        "curry_injective": curry_injective,
        "curry_surjective": curry_surjective,
        "uncurry_lands": uncurry_lands,
        "uncurry_paranatural": uncurry_paranatural,
        "uncurry_curry_identity": round_left,
        "curry_uncurry_identity": round_right,
        "exponential_cells": {f"{label(I)}|{label(J)}": len(v) for (I, J), v in sorted(exp.difunctor.values.items(), key=lambda kv: (label(kv[0][0]), label(kv[0][1])))},
        "verdict": "bijection" if bij else "not-bijection",
    }
