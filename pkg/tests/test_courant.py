from __future__ import annotations

from itertools import permutations

import pytest

from helpers import random_metric_connection
from l2a.anchored import Anchor, DullBracket, LinearConnection, zero_table
from l2a.bundles import Bundle, Chart, basis, trivial_line, vzero
from l2a.catalog import abelian, curved_two_rep, so3, string_type, zero_split
from l2a.courant import (CourantData, InvalidInput, _AdjointParts, adjoint_lie2,
                         basic_curvature, basic_curvature_expanded, check_courant,
                         courant_bracket, courant_pairing, drinfeld_double, fat_courant,
                         fat_identification, standard_courant, tangent_algebroid,
                         transport_courant)
from l2a.exactpoly import Poly
from l2a.generate import random_phi
from l2a.lie2core import check_split_lie2, qfield_square_check, shift_splitting
from l2a.matched import semidirect_lie2
from l2a.rng import XorShift64Star


def _abelian_dual(k: int = 3) -> DullBracket:
    B = Bundle("g", k, Chart(0), True)
    return DullBracket(Anchor.zero(B), zero_table(0, k, k, k))


def _quadratic_so3() -> CourantData:
    g = so3("E")
    E = g.bundle
    V = trivial_line(E.chart)
    gram = tuple(tuple((Poly.const(0, int(i == j)),) for j in range(3)) for i in range(3))
    return CourantData(E, V, g.anchor, gram, g.symbols, LinearConnection.zero(g.anchor, V))


def test_quadratic_lie_algebra_passes():
    assert check_courant(_quadratic_so3()).passed


def test_rank_zero_is_vacuous():
    c = standard_courant(Chart(0))
    assert c.E.rank == 0
    assert check_courant(c).passed


def test_standard_courant_lie_derivative_example():
    c = standard_courant(Chart(1))
    x = Poly.var(1, 0)
    dx_part = courant_bracket(c, (Poly.const(1, 1), Poly.zero(1)), (Poly.zero(1), x))
    assert dx_part == (Poly.zero(1), Poly.const(1, 1))
    assert courant_pairing(c, basis(1, 2, 0), basis(1, 2, 1)) == (Poly.const(1, 1),)


@pytest.mark.parametrize("n", [1, 2])
def test_standard_courant_passes(n):
    rep = check_courant(standard_courant(Chart(n)), samples=5, seed=n)
    assert rep.passed
    assert "roytenberg_lie" in rep.axioms


def test_drinfeld_examples():
    ab = abelian(2, label="g")
    c = drinfeld_double(ab, _abelian_dual(2))
    assert all(p.is_zero() for row in c.symbols for v in row for p in v)
    assert c.E.rank == 4
    assert [[c.gram[i][j][0].constant_term() for j in range(4)] for i in range(4)] == \
        [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]
    assert check_courant(drinfeld_double(so3("g"), _abelian_dual())).passed


def test_drinfeld_of_tangent_is_standard():
    T = tangent_algebroid(Chart(1), label="g")
    triv = DullBracket(Anchor.zero(Bundle("g", 1, Chart(1), True)), zero_table(1, 1, 1, 1))
    assert drinfeld_double(T, triv) == standard_courant(Chart(1))


def test_drinfeld_rejects_non_lie_input():
    S = [[list(v) for v in row] for row in so3("g").symbols]
    S[0][1][0], S[1][0][0] = Poly.const(0, 1), Poly.const(0, -1)
    bad = DullBracket(so3("g").anchor, S)
    with pytest.raises(InvalidInput):
        drinfeld_double(bad, _abelian_dual())


# adjoint ---------------------------------------------------------------------

def test_adjoint_of_standard_r1():
    c = standard_courant(Chart(1))
    T = tangent_algebroid(Chart(1))
    d = adjoint_lie2(c, LinearConnection.zero(T.anchor, c.E))
    assert check_split_lie2(d).passed and qfield_square_check(d).passed


def test_adjoint_of_quadratic_lie_algebra():
    c = _quadratic_so3()
    T = tangent_algebroid(Chart(0))
    d = adjoint_lie2(c, LinearConnection.zero(T.anchor, c.E))
    assert d.bracket.symbols == so3().symbols
    assert d.omega.is_zero() and d.B.rank == 0
    assert check_split_lie2(d).passed


@pytest.mark.parametrize("seed,n", [(1, 1), (2, 1), (3, 2)])
def test_adjoint_with_metric_connections(seed, n):
    c, cn = random_metric_connection(seed, n)
    d = adjoint_lie2(c, cn)
    assert check_split_lie2(d).passed
    assert qfield_square_check(d).passed


@pytest.mark.parametrize("seed,n", [(4, 1), (5, 2)])
def test_basic_curvature_two_ways(seed, n):
    c, cn = random_metric_connection(seed, n)
    r = c.E.rank
    for i in range(r):
        for j in range(r):
            for a in range(n):
                e1, e2, X = basis(n, r, i), basis(n, r, j), basis(n, n, a)
                assert basic_curvature(c, cn, e1, e2, X) == \
                    basic_curvature_expanded(c, cn, e1, e2, X)


def test_basic_curvature_pairing_is_alternating():
    c, cn = random_metric_connection(7, 2)
    p = _AdjointParts(c, cn)
    n, r = 2, c.E.rank
    e = [basis(n, r, i) for i in range(r)]
    for a in range(n):
        X = basis(n, n, a)
        for idx in [(0, 1, 2), (0, 2, 3), (1, 2, 3)]:
            base = p.pair(basic_curvature(c, cn, e[idx[0]], e[idx[1]], X), e[idx[2]])
            for perm in permutations(range(3)):
                q = [idx[t] for t in perm]
                sign = 1 if perm in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else -1
                val = p.pair(basic_curvature(c, cn, e[q[0]], e[q[1]], X), e[q[2]])
                assert val == base.scale(sign)


def test_adjoint_rejects_non_metric_connection():
    c = standard_courant(Chart(1))
    T = tangent_algebroid(Chart(1))
    G = (((Poly.const(1, 1), Poly.zero(1)), (Poly.zero(1), Poly.zero(1))),)
    with pytest.raises(InvalidInput):
        adjoint_lie2(c, LinearConnection(T.anchor, c.E, G))


# fat Courant algebroid -------------------------------------------------------

def test_fat_of_zero_data():
    d = zero_split(1, 2, 1)
    c = fat_courant(d)
    assert all(p.is_zero() for row in c.symbols for v in row for p in v)
    assert check_courant(c).passed
    assert c.V.rank == d.B.rank


@pytest.mark.parametrize("d", [string_type(), semidirect_lie2(curved_two_rep())],
                         ids=["string", "curved"])
def test_fat_passes_v_valued_axioms(d):
    rep = check_courant(fat_courant(d), samples=2)
    assert rep.passed
    assert set(rep.axioms) >= {"CA1", "CA2", "CA3", "CA4"}


@pytest.mark.parametrize("seed", range(3))
def test_fat_splitting_independence(seed):
    d = semidirect_lie2(curved_two_rep()) if seed else string_type()
    phi = random_phi(XorShift64Star(seed), d, 1)
    psi = fat_identification(d, phi)
    psi_inv = fat_identification(d, phi, inverse=True)
    assert psi.compose(psi_inv) == type(psi).identity(psi.source)
    assert transport_courant(fat_courant(d), psi, psi_inv) == fat_courant(shift_splitting(d, phi))


def test_fat_frame_layout():
    d = string_type()
    c = fat_courant(d)
    # frame 3 is b0 ↦ ε0; its pairing with e0 is the B*-frame
    assert courant_pairing(c, basis(0, 6, 0), basis(0, 6, 3)) == (Poly.const(0, 1),)
    assert courant_pairing(c, basis(0, 6, 1), basis(0, 6, 3)) == vzero(0, 1)
