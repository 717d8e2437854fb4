import pytest

from oracles import monoid_diyo_hom_count
from paralab.difun import Const, Hom, Prod, eval_difunctor_expr
from paralab.diyoneda import (
    curry,
    diyo,
    diyo_forward,
    diyo_forward_swapped,
    diyo_reflect,
    evaluation,
    exponential,
    pairing,
    probe_diyoneda,
    probe_exponential,
    projections,
    terminal_map,
)
from paralab.fincat import arrow, chain, discrete, terminal, walking_idempotent
from paralab.paranat import check_paranatural, enumerate_paranaturals

CORPUS = [terminal(), discrete(2), arrow(), walking_idempotent(), chain(3)]
EXPRS = [Hom(), Const(("a", "b")), Prod(Hom(), Const(("a", "b")))]


@pytest.mark.parametrize("C", CORPUS, ids=lambda c: c.name)
@pytest.mark.parametrize("e", EXPRS, ids=repr)
def test_forward_is_paranatural_and_reflects(C, e):
    G = eval_difunctor_expr(e, C)
    for I in C.objects:
        for J in C.objects:
            src = diyo(G, J, I)
            for x in G.values[(I, J)]:
                phi = diyo_forward(G, I, J, x, source=src)
                assert check_paranatural(src, G, phi).ok
                if I == J:
                    assert diyo_reflect(G, I, phi) == x


@pytest.mark.parametrize("C", CORPUS, ids=lambda c: c.name)
def test_both_evaluation_orders_agree(C):
    G = eval_difunctor_expr(Hom(), C)
    for I in C.objects:
        for J in C.objects:
            for x in G.values[(I, J)]:
                phi = diyo_forward(G, I, J, x)
                for K in C.objects:
                    for into, frm in diyo(G, J, I).diag(K):
                        assert phi(K, (into, frm)) == diyo_forward_swapped(G, I, J, x, K, into, frm)


def test_walking_idempotent_probe_matches_oracle():
    C = walking_idempotent()
    probe = probe_diyoneda(eval_difunctor_expr(Hom(), C))
    (cell,) = probe.cells
    assert cell.lhs == 2
    assert cell.rhs == monoid_diyo_hom_count(["1", "e"], C.compose) == 16
    assert cell.injective and not cell.surjective
    assert probe.verdict == "not-bijective"


def test_arrow_probe_reports_every_cell():
    probe = probe_diyoneda(eval_difunctor_expr(Hom(), arrow()))
    cells = {(c.I, c.J): (c.lhs, c.rhs) for c in probe.cells}
    assert set(cells) == {(a, b) for a in "01" for b in "01"}
    # no path 1 -> 0, so DiYo(0, 1) has an empty diagonal and a unique family
    assert cells[("1", "0")] == (0, 1)


def test_terminal_probe_is_bijective():
    assert probe_diyoneda(eval_difunctor_expr(Const(("a", "b")), terminal())).verdict == "bijective"


def test_products_and_terminal_object():
    C = chain(3)
    A = eval_difunctor_expr(Hom(), C)
    B = eval_difunctor_expr(Const(("a", "b")), C)
    p1, p2 = projections(A, B)
    AB = p1.source
    assert check_paranatural(AB, A, p1).ok and check_paranatural(AB, B, p2).ok
    back = pairing(p1, p2, AB)
    assert all(back(I, x) == x for I in C.objects for x in AB.diag(I))
    t = terminal_map(A)
    assert check_paranatural(A, t.target, t).ok


def test_currying_at_one_object():
    C = terminal()
    two = eval_difunctor_expr(Const(("a", "b")), C)
    r = probe_exponential(two, two, two)
    assert r["verdict"] == "bijection"
    assert r["lhs"] == r["rhs"] == 16


def test_evaluation_after_curry():
    C = terminal()
    two = eval_difunctor_expr(Const(("a", "b")), C)
    exp = exponential(two, two)
    ev = evaluation(exp)
    TD = eval_difunctor_expr(Prod(Const(("a", "b")), Const(("a", "b"))), C)
    for phi in enumerate_paranaturals(TD, two):
        lam = curry(phi, two, exp)
        # ev . (lam x id) = phi
        for t, d in TD.diag("*"):
            assert ev("*", (lam("*", t), d)) == phi("*", (t, d))
