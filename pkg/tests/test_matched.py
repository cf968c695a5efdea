from __future__ import annotations

import pytest

from l2a.anchored import LinearConnection
from l2a.bundles import Bundle, Chart, HomField, VForm, hom_bundle
from l2a.catalog import (MUTANT_KS, abelian, curved_two_rep, double_ruth, mutant_matched_pair,
                         nonclosed_two_rep, sl2, sl2_matched_pair, so3, string_type,
                         tangent_two_rep, zero_matched_pair)
from l2a.courant import tangent_algebroid
from l2a.exactpoly import Poly
from l2a.lie2core import check_split_lie2, qfield_square_check
from l2a.matched import (ExtractionError, InvalidInput, TwoRepData, bicrossproduct,
                         check_lie_algebroid, check_matched_pair, check_two_rep, dual_two_rep,
                         embed_two_rep, extract_matched_pair, rep_lie2, semidirect_lie2)

PAIRED = {1: "i", 2: "ii", 3: "ii", 4: "iv", 5: "iii", 6: "iii", 7: "v"}


def _zero_two_rep(n: int = 1, r0: int = 1, r1: int = 1) -> TwoRepData:
    T = tangent_algebroid(Chart(n))
    E0, E1 = Bundle("E0", r0, Chart(n)), Bundle("E1", r1, Chart(n))
    return TwoRepData(T, E0, E1, HomField.zero(E0, E1), LinearConnection.zero(T.anchor, E0),
                      LinearConnection.zero(T.anchor, E1),
                      VForm.zero(2, T.bundle, hom_bundle(E1, E0)))


@pytest.mark.parametrize("alg", [so3(), sl2(), abelian(3), tangent_algebroid(Chart(2))])
def test_lie_algebroids_pass(alg):
    assert check_lie_algebroid(alg).passed


def test_double_ruth_example():
    t = tangent_two_rep()
    assert t.R.is_zero()
    assert check_two_rep(t).passed
    assert check_two_rep(_zero_two_rep()).passed
    assert check_two_rep(curved_two_rep()).passed


def test_nonclosed_two_rep_fails_exactly_closed():
    assert check_two_rep(nonclosed_two_rep()).failed_axioms() == ["closed"]


def test_matched_pairs_pass():
    for m in (sl2_matched_pair(), zero_matched_pair(), embed_two_rep(curved_two_rep()),
              embed_two_rep(dual_two_rep(curved_two_rep()))):
        assert check_matched_pair(m).passed


def test_sl2_matched_pair_actions():
    m = sl2_matched_pair()
    # ∇_h e = 2e in the (e) frame of A, ∇_e f = h in the (h, f) frame of B
    assert m.nablaBA.symbols[0][0] == (Poly.const(0, 2),)
    assert m.nablaAB.symbols[0][1] == (Poly.const(0, 1), Poly.zero(0))
    assert m.nablaAB.symbols[0][0] == (Poly.zero(0), Poly.zero(0))
    assert m.nablaBA.symbols[1][0] == (Poly.zero(0),)


def test_bicross_of_sl2_is_sl2():
    d = bicrossproduct(sl2_matched_pair())
    assert d.omega.is_zero()
    assert d.bracket.symbols == sl2().symbols
    assert check_split_lie2(d).passed


def test_bicross_of_zero_is_zero():
    d = bicrossproduct(zero_matched_pair())
    assert d.omega.is_zero() and d.l.is_zero()
    assert all(p.is_zero() for row in d.bracket.symbols for v in row for p in v)
    assert all(p.is_zero() for row in d.nabla.symbols for v in row for p in v)


@pytest.mark.parametrize("m", [sl2_matched_pair(), zero_matched_pair(),
                               embed_two_rep(curved_two_rep())])
def test_extract_inverts_bicross(m):
    d = bicrossproduct(m)
    assert check_split_lie2(d).passed
    back = extract_matched_pair(d, m.A.bundle.rank, labels=(m.A.bundle.label, m.B.bundle.label),
                                c_label=m.C.label)
    assert back == m


def test_extract_rejects_non_subalgebra_split():
    with pytest.raises(ExtractionError, match="leaves"):
        extract_matched_pair(string_type(), 1)


def test_semidirect_of_zero_two_rep():
    t = _zero_two_rep(2, 1, 1)
    d = semidirect_lie2(t)
    assert d.omega.is_zero() and d.l.is_zero()
    assert all(p.is_zero() for row in d.bracket.symbols for v in row for p in v)
    assert [list(r) for r in d.rho.matrix[:2]] == [[Poly.const(2, 1), Poly.zero(2)],
                                                   [Poly.zero(2), Poly.const(2, 1)]]


@pytest.mark.parametrize("t", [tangent_two_rep(), curved_two_rep()])
def test_semidirect_matches_bicross_of_dual_embedding(t):
    d = semidirect_lie2(t)
    assert check_split_lie2(d).passed
    b = bicrossproduct(embed_two_rep(dual_two_rep(t)))
    assert (d.bracket.symbols, d.nabla.symbols, d.l.matrix, d.omega.entries, d.rho.matrix) == \
        (b.bracket.symbols, b.nabla.symbols, b.l.matrix, b.omega.entries, b.rho.matrix)


def test_semidirect_rejects_invalid_input():
    with pytest.raises(InvalidInput):
        semidirect_lie2(nonclosed_two_rep())


def test_rep_lie2_examples():
    g = so3("Q")
    triv = rep_lie2(g, LinearConnection.zero(g.anchor, Bundle("V", 1, Chart(0))))
    assert check_split_lie2(triv).passed
    adj = rep_lie2(g, LinearConnection(g.anchor, Bundle("V", 3, Chart(0)), g.symbols))
    assert check_split_lie2(adj).passed and qfield_square_check(adj).passed
    T = tangent_algebroid(Chart(2))
    P = Poly.parse
    curved = LinearConnection(T.anchor, Bundle("V", 1, Chart(2)), (((P("x1", 2),),),
                                                                   ((Poly.zero(2),),)))
    with pytest.raises(InvalidInput):
        rep_lie2(T, curved)


@pytest.mark.parametrize("k", MUTANT_KS)
def test_mutant_fails_exactly_mk_and_paired_axiom(k):
    base, mut, _ = mutant_matched_pair(k)
    assert check_matched_pair(base).passed
    assert check_split_lie2(bicrossproduct(base)).passed
    assert check_matched_pair(mut).failed_axioms() == [f"M{k}"]
    d = bicrossproduct(mut)
    assert check_split_lie2(d).failed_axioms() == [PAIRED[k]]
    assert qfield_square_check(d).failed_axioms() == [PAIRED[k]]


def test_double_ruth_is_valid_on_lie_algebras():
    g = so3("A")
    E = Bundle("E", 2, Chart(0))
    c = Poly.const
    t = double_ruth(g, E, tuple(tuple((c(0, i + j), c(0, i - k)) for j, k in ((0, 1), (1, 0)))
                                for i in range(3)))
    assert check_two_rep(t).passed
    assert check_split_lie2(semidirect_lie2(t)).passed
