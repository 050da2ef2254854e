import random
from fractions import Fraction

import pytest

from covercheck.groebner import buchberger, eliminate, member, reduce
from covercheck.ideal import Ideal
from covercheck.poly import VarTable, block_order, grevlex, lex, mono_divides
from oracles import bounded_member, random_poly

NODAL = VarTable.of(["x1", "x2"], ["y1", "y2"])
x1, x2, y1, y2 = NODAL.gens()
NODAL_GENS = [y1 - x1 ** 2 + 1, y2 - x1 * x2, x2 ** 2 - (x1 ** 2 - 1) ** 2]
NODAL_ORDER = block_order(grevlex(), grevlex(), 2, 4)


def spoly(f, g, order):
    lf, lg = f.lm(order), g.lm(order)
    L = tuple(max(a, b) for a, b in zip(lf, lg))
    qf = tuple(a - b for a, b in zip(L, lf))
    qg = tuple(a - b for a, b in zip(L, lg))
    return f.mul_term(qf, 1 / f.lc(order)) - g.mul_term(qg, 1 / g.lc(order))


def assert_reduced_gb(gb, gens):
    order = gb.order
    els = gb.elements
    for g in els:
        assert g.lc(order) == 1
    lms = [g.lm(order) for g in els]
    assert lms == sorted(lms, key=order.key, reverse=True)
    for i, g in enumerate(els):
        for j, m in enumerate(lms):
            if i != j:
                assert not any(mono_divides(m, t) for t in g.terms)
    for i in range(len(els)):
        for j in range(i + 1, len(els)):
            _, r = reduce(spoly(els[i], els[j], order), list(els), order)
            assert r.is_zero()
    for f in gens:
        _, r = reduce(f, list(els), order)
        assert r.is_zero()


def test_division_hand_example():
    V = VarTable(("x", "y"))
    x, y = V.gens()
    qs, r = reduce(x ** 2 * y + x * y ** 2 + y ** 2, [x * y - 1, y ** 2 - 1], lex())
    assert r == x + y + 1
    assert qs[0] * (x * y - 1) + qs[1] * (y ** 2 - 1) + r == x ** 2 * y + x * y ** 2 + y ** 2


def test_division_by_self():
    g = x1 ** 2 - y1
    assert reduce(g, [g], grevlex())[1].is_zero()


def test_division_postconditions_random():
    rng = random.Random(11)
    V = VarTable(("x", "y", "z"))
    for _ in range(50):
        order = rng.choice([lex(), grevlex()])
        f = random_poly(rng, V, 4, 6)
        G = [random_poly(rng, V, 2, 3) for _ in range(rng.randint(1, 3))]
        G = [g for g in G if not g.is_zero()] or [V.gen("x")]
        qs, r = reduce(f, G, order)
        assert sum((q * g for q, g in zip(qs, G)), V.zero()) + r == f
        for m in r.terms:
            assert not any(mono_divides(g.lm(order), m) for g in G)
        if not f.is_zero():
            for q, g in zip(qs, G):
                if not q.is_zero():
                    assert order.key((q * g).lm(order)) <= order.key(f.lm(order))


def test_nodal_generator_reduces_to_zero():
    gb = buchberger(NODAL_GENS, NODAL_ORDER)
    assert reduce(y1 - x1 ** 2 + 1, list(gb.elements), NODAL_ORDER)[1].is_zero()


def test_circle_line_lex():
    V = VarTable(("x", "y"))
    x, y = V.gens()
    gb = buchberger([x ** 2 + y ** 2 - 1, x - y], lex())
    assert gb.elements == (x - y, y ** 2 - Fraction(1, 2))


def test_nodal_basis_matches_listed_elements():
    gb = buchberger(NODAL_GENS, NODAL_ORDER)
    expected = {y1 ** 3 + y1 ** 2 - y2 ** 2, y2 * x1 - y1 * x2 - x2, y1 ** 2 * x1 - y2 * x2,
                x2 ** 2 - y1 ** 2, x1 * x2 - y2, x1 ** 2 - y1 - 1}
    assert set(gb.elements) == expected and len(gb) == 6
    assert_reduced_gb(gb, NODAL_GENS)


def test_unit_ideal():
    assert buchberger([NODAL.one()], grevlex()).elements == (NODAL.one(),)


def test_membership():
    V = VarTable(("x", "y"))
    x, y = V.gens()
    assert member(y, Ideal(V, [x, x + y]), grevlex())
    assert not member(V.one(), Ideal(V, [x]), grevlex())
    assert member(x1 ** 2 - y1 - 1, Ideal(NODAL, NODAL_GENS), NODAL_ORDER)


def test_elimination_examples():
    J = eliminate(NODAL_GENS, ["y1", "y2"])
    assert J == [y1 ** 3 + y1 ** 2 - y2 ** 2]
    H = VarTable.of(["y"], ["x"])
    y, x = H.gens()
    assert eliminate([x * y - 1], ["x"]) == []
    G = VarTable.of(["x"], ["y"])
    assert eliminate([G.gen("x") - G.gen("y")], ["y"]) == []


def test_elimination_results_live_in_base_and_ideal():
    rng = random.Random(5)
    V = VarTable.of(["x"], ["y", "z"])
    for _ in range(20):
        gens = [random_poly(rng, V, 2, 3) for _ in range(3)]
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            continue
        full = buchberger(gens, grevlex(), vars=V)
        for h in eliminate(gens, ["y", "z"], vars=V):
            assert h.support() <= {"y", "z"}
            assert full.contains(h)


def random_ideal(rng, V, count, deg):
    while True:
        gens = [random_poly(rng, V, deg, 3) for _ in range(count)]
        gens = [g for g in gens if not g.is_zero()]
        if gens:
            return gens


def test_basis_idempotent_and_permutation_invariant_200():
    rng = random.Random(20240)
    V = VarTable.of(["x", "y"], ["z"])
    orders = [lex(), grevlex(), block_order(grevlex(), grevlex(), 2, 3)]
    for case in range(200):
        order = orders[case % 3]
        gens = random_ideal(rng, V, rng.randint(1, 3), 2)
        gb = buchberger(gens, order, vars=V)
        assert buchberger(list(gb.elements), order, vars=V) == gb
        shuffled = list(gens)
        rng.shuffle(shuffled)
        assert buchberger(shuffled, order, vars=V) == gb
        for g in gens:
            assert gb.contains(g)


def test_output_is_reduced_gb_random():
    rng = random.Random(77)
    V = VarTable(("x", "y", "z"))
    for _ in range(40):
        gens = random_ideal(rng, V, 3, 2)
        gb = buchberger(gens, grevlex(), vars=V)
        assert_reduced_gb(gb, gens)
        for g in gb.elements:
            assert bounded_member(g, gens, 6) or g.total_degree() > 3


def test_empty_generators_need_table():
    with pytest.raises(ValueError):
        buchberger([], grevlex())
    assert buchberger([], grevlex(), vars=NODAL).elements == ()
