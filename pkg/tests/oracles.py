"""Brute-force reference computations that do not use the library's search code.

Each function here works on plain dicts and tuples so that the library can be
compared against something written independently of it.
"""
import itertools


def compose_tables(outer: dict, inner: dict) -> dict:
    return {x: outer[y] for x, y in inner.items()}


def random_presheaf(rng, base_name: str, max_size: int = 3):
    """Random presheaf on the arrow or on the 3-chain: ``(sets, maps)``."""
    if base_name == "arrow":
        sets = {o: tuple(f"{o}{k}" for k in range(rng.randint(1, max_size))) for o in ("0", "1")}
        u = {z: rng.choice(sets["0"]) for z in sets["1"]}
        maps = {"id0": {x: x for x in sets["0"]}, "id1": {x: x for x in sets["1"]}, "u": u}
        return sets, maps
    if base_name == "chain3":
        sets = {o: tuple(f"{o}{k}" for k in range(rng.randint(1, max_size))) for o in ("0", "1", "2")}
        p01 = {z: rng.choice(sets["0"]) for z in sets["1"]}
        p12 = {z: rng.choice(sets["1"]) for z in sets["2"]}
        maps = {f"id{o}": {x: x for x in sets[o]} for o in sets}
        maps |= {"0<1": p01, "1<2": p12, "0<2": compose_tables(p01, p12)}
        return sets, maps
    raise ValueError(base_name)


def all_families(P_sets: dict, Q_sets: dict, objects):
    """Every choice of functions ``P(o) -> Q(o)``, one per object."""
    per_obj = []
    for o in objects:
        dom = P_sets[o]
        per_obj.append([dict(zip(dom, outs)) for outs in itertools.product(Q_sets[o], repeat=len(dom))])
    for choice in itertools.product(*per_obj):
        yield dict(zip(objects, choice))


def naturality_holds(morphisms, P_maps, Q_maps, fam) -> bool:
    """``Q(m)(phi_B x) = phi_A(P(m) x)`` for every ``m : A -> B`` and ``x``."""
    for m, a, b in morphisms:
        for x, px in P_maps[m].items():
            if Q_maps[m][fam[b][x]] != fam[a][px]:
                return False
    return True


# -- the curried naturals on a 2-element set -----------------------------------


def endos(n: int):
    return [tuple(t) for t in itertools.product(range(n), repeat=n)]


def after(g, f):
    return tuple(g[f[i]] for i in range(len(f)))


def curried_nat_families(n: int = 2):
    """All maps ``phi`` on endomorphisms of ``{0..n-1}`` with
    ``f.u0 = u1.f  =>  f.phi(u0) = phi(u1).f`` for every ``f``."""
    E = endos(n)
    squares = [(f, u0, u1) for f in E for u0 in E for u1 in E if after(f, u0) == after(u1, f)]
    out = []
    for outs in itertools.product(E, repeat=len(E)):
        phi = dict(zip(E, outs))
        if all(after(f, phi[u0]) == after(phi[u1], f) for f, u0, u1 in squares):
            out.append(phi)
    return out


def power(u, k):
    p = tuple(range(len(u)))
    for _ in range(k):
        p = after(u, p)
    return p


# -- diYoneda at a one-object base ----------------------------------------------


def monoid_diyo_hom_count(elements, mult) -> int:
    """Families ``hom(*,*)^2 -> hom(*,*)`` satisfying the chevron condition for
    the direpresentable ``DiYo(*,*)`` and ``Hom`` over a one-object category.

    An element of ``DiYo`` at the single object is ``(into, from)``; ``map+ i``
    sends it to ``(i . into, from)`` and ``map- i`` to ``(into, from . i)``.
    """
    M = list(elements)
    D = [(a, b) for a in M for b in M]
    count = 0
    for outs in itertools.product(M, repeat=len(D)):
        phi = dict(zip(D, outs))
        ok = True
        for i in M:
            for d0 in D:
                for d1 in D:
                    # map+ i d0 = map- i d1 inside DiYo(*, *)
                    if (mult[(i, d0[0])], d0[1]) != (d1[0], mult[(d1[1], i)]):
                        continue
                    if mult[(i, phi[d0])] != mult[(phi[d1], i)]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        count += ok
    return count


# -- universe over a discrete Struct ---------------------------------------------


def discrete_universe_counts(n_structs: int, bound: int):
    """Types over a discrete category with ``n`` objects are families of sets on
    all ``n*n`` cells; up to isomorphism a cell is just its size."""
    sizes = range(bound + 1)
    tuples = list(itertools.product(sizes, repeat=n_structs * n_structs))
    diag = [t for t in tuples
            if all(t[i * n_structs + j] == 0 for i in range(n_structs) for j in range(n_structs) if i != j)]
    return len(tuples), len(diag)


# -- streams ------------------------------------------------------------------


def stream_behaviour(structure: dict, start, depth: int = 8) -> tuple:
    out = []
    x = start
    for _ in range(depth):
        h, x = structure[x]
        out.append(h)
    return tuple(out)
