import itertools

import pytest

from oracles import discrete_universe_counts
from paralab.cli import WILD
from paralab.difun import Const, Hom, Var, eval_difunctor_expr, validate_difunctor
from paralab.errors import InputError
from paralab.fincat import arrow, chain, discrete, finset_fragment, terminal, walking_idempotent
from paralab.paranat import check_paranatural, compose_paranatural, enumerate_paranaturals, identity_paranatural
from paralab.tymodel import (
    build_universe,
    canonical_code,
    check_tm,
    code_of_type,
    comprehension,
    comprehension_correspondence,
    comprehension_diagonal,
    const_ty,
    decode_code,
    enumerate_tm,
    enumerate_types,
    make_ty,
    probe_universe,
    small_difunctor_codes,
    struct_of,
    subst_tm,
    subst_ty,
    weaken,
)

FIXTURES = [terminal(), discrete(2), arrow(), walking_idempotent(), chain(3)]


def _family(C):
    G = eval_difunctor_expr(Hom(), C)
    return G, weaken(G, eval_difunctor_expr(Hom(), C)), enumerate_paranaturals(G, G).families


@pytest.mark.parametrize("C", FIXTURES, ids=lambda c: c.name)
def test_substitution_is_functorial(C):
    G, A, subs = _family(C)
    idt = identity_paranatural(G)
    assert subst_ty(A, idt).tables_equal(A)
    terms = enumerate_tm(A)
    for t in terms:
        assert subst_tm(t, idt).same_components(t)
    for s in subs:
        for r in subs:
            sr = compose_paranatural(s, r)
            assert subst_ty(subst_ty(A, s), r).tables_equal(subst_ty(A, sr))
            for t in terms:
                assert subst_tm(subst_tm(t, s), r).same_components(subst_tm(t, sr))


@pytest.mark.parametrize("C", FIXTURES, ids=lambda c: c.name)
@pytest.mark.parametrize("e", [Hom(), Const(("a", "b"))], ids=repr)
def test_constant_types_degenerate_to_paranaturals(C, e):
    G = eval_difunctor_expr(Hom(), C)
    T = eval_difunctor_expr(e, C)
    A = weaken(G, T)
    objs = list(C.objects)
    for outs in itertools.product(*[itertools.product(T.diag(I), repeat=len(G.diag(I))) for I in objs]):
        fam = {I: dict(zip(G.diag(I), o)) for I, o in zip(objs, outs)}
        a, b = check_tm(G, A, fam), check_paranatural(G, T, fam)
        assert (a.ok, a.witness, a.checked) == (b.ok, b.witness, b.checked)


def test_terms_are_the_checked_families():
    G, A, _ = _family(walking_idempotent())
    terms = enumerate_tm(A)
    assert len(terms) == len(enumerate_paranaturals(G, eval_difunctor_expr(Hom(), G.base)))
    assert all(check_tm(G, A, t).ok for t in terms)


def test_make_ty_enforces_bound_and_base():
    G = eval_difunctor_expr(Hom(), arrow())
    S = struct_of(G)
    with pytest.raises(InputError):
        make_ty(G, eval_difunctor_expr(Const(("a", "b", "c")), S), bound=2)
    with pytest.raises(InputError):
        make_ty(G, eval_difunctor_expr(Hom(), arrow()))


@pytest.mark.parametrize("C", [terminal(), discrete(2), arrow(), chain(3)], ids=lambda c: c.name)
def test_comprehension_of_weakened_hom(C):
    G = eval_difunctor_expr(Hom(), C)
    cx = comprehension(G, weaken(G, eval_difunctor_expr(Hom(), C)))
    assert cx.projection.ok
    assert validate_difunctor(cx.context).ok
    r = comprehension_correspondence(eval_difunctor_expr(Const(("*",)), C), cx)
    assert r["verdict"] == "bijection"
    assert all(row["extended"] == row["sum"] for row in comprehension_diagonal(cx))


def test_comprehension_loses_constraints_off_the_path():
    # no morphism 1 -> 0 in the arrow, so the extended cell (0, 1) is a single point
    C = arrow()
    G = eval_difunctor_expr(Hom(), C)
    cx = comprehension(G, const_ty(G, ("x", "y")))
    assert len(cx.context.values[("0", "1")]) == 1
    r = comprehension_correspondence(eval_difunctor_expr(Const(("*",)), C), cx)
    assert (r["substitutions"], r["pairs"]) == (4, 2)
    assert r["verdict"] == "not-bijection"


def test_comprehension_projection_over_a_constant_context():
    C = arrow()
    G = eval_difunctor_expr(Const(("a", "b")), C)
    cx = comprehension(G, const_ty(G, ("x",)))
    assert not cx.projection.ok and cx.q is None
    r = comprehension_correspondence(eval_difunctor_expr(Const(("*",)), C), cx)
    assert r["projection_paranatural"] is False


def test_small_codes_over_the_point():
    S = terminal()
    codes = small_difunctor_codes(S, 2)
    assert len(codes) == 3
    for c in codes:
        d = decode_code(c, S)
        assert validate_difunctor(d).ok
        assert canonical_code(d) == c


def test_codes_over_the_arrow():
    S = arrow()
    codes = small_difunctor_codes(S, 1)
    # Hom over the arrow has every cell of size at most 1
    assert canonical_code(eval_difunctor_expr(Hom(), S)) in codes
    assert len(set(codes)) == len(codes)


def test_universe_is_a_difunctor():
    U = build_universe(arrow(), 1)
    assert validate_difunctor(U.difunctor).ok


def test_universe_probe_matches_size_tuple_oracle():
    G = eval_difunctor_expr(Const(("a", "b")), terminal())
    r = probe_universe(G, 2)
    total, diag = discrete_universe_counts(2, 2)
    ty = r["roundtrip_ty_to_tm"]
    assert ty["total"] == total == 81
    assert ty["diagonal_supported"] == {"total": diag, "ok": diag}
    assert ty["off_diagonal_supported"]["ok"] == 0
    assert ty["codes_are_terms"]
    assert r["roundtrip_tm_to_ty"] == {"total": 9, "ok": 9, "identity": True, "decode_invalid": 0}


def test_universe_probe_round_trips_on_the_point():
    G = eval_difunctor_expr(Const(("*",)), terminal())
    r = probe_universe(G, 2)
    assert r["roundtrip_ty_to_tm"]["identity"] and r["roundtrip_tm_to_ty"]["identity"]
    assert r["roundtrip_ty_to_tm"]["total"] == 3


def test_code_of_type_is_a_term():
    G = eval_difunctor_expr(Const(("a", "b")), terminal())
    U = build_universe(terminal(), 1)
    for A in enumerate_types(G, 1):
        comps = code_of_type(A, U)
        assert set(comps) == {"*"}


def test_wild_group_unit_is_a_term():
    F = finset_fragment([1, 2])
    W = eval_difunctor_expr(WILD, F)
    carrier = weaken(W, eval_difunctor_expr(Var(), F))
    units = {I: {g: g[1][0] for g in W.diag(I)} for I in F.objects}
    assert check_tm(W, carrier, units).ok
    zero = {I: {g: "0" for g in W.diag(I)} for I in F.objects}
    assert not check_tm(W, carrier, zero).ok


def test_wild_group_substitution_is_functorial():
    F = finset_fragment([1, 2])
    W = eval_difunctor_expr(WILD, F)
    A = weaken(W, eval_difunctor_expr(Var(), F))
    fs = enumerate_paranaturals(W, W, limit=3).families
    for s in fs:
        for r in fs:
            assert subst_ty(subst_ty(A, s), r).tables_equal(subst_ty(A, compose_paranatural(s, r)))
