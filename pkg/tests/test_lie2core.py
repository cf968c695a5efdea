from __future__ import annotations

import dataclasses

import pytest

from l2a.anchored import DullBracket, LinearConnection
from l2a.bundles import Bundle, Chart, HomField, Section, VForm, basis
from l2a.catalog import curved_two_rep, open_omega, so3, string_type, zero_split
from l2a.courant import tangent_algebroid
from l2a.exactpoly import Poly
from l2a.generate import random_phi
from l2a.graded import Element
from l2a.lie2core import (GradedFunction, Morphism, SplitLie2Data, _morphism_pullback,
                          check_morphism, check_split_lie2, compose_morphisms, identity_morphism,
                          qfield_apply, qfield_derivation, qfield_square_check, shift_splitting)
from l2a.matched import rep_lie2, semidirect_lie2
from l2a.rng import XorShift64Star


def _so3_no_b(symbols=None) -> SplitLie2Data:
    g = so3("Q")
    if symbols is not None:
        g = DullBracket(g.anchor, symbols)
    Q = g.bundle
    B = Bundle("B", 0, Q.chart)
    return SplitLie2Data(Q, B, g.anchor, HomField.zero(B.dual_bundle(), Q), g,
                         LinearConnection.zero(g.anchor, B), VForm.zero(3, Q, B.dual_bundle()))


def _mutated_so3() -> SplitLie2Data:
    S = [[list(v) for v in row] for row in so3().symbols]
    S[0][1][0] = Poly.const(0, 1)
    S[1][0][0] = Poly.const(0, -1)
    return _so3_no_b(S)


def test_zero_data_passes():
    assert check_split_lie2(zero_split(0, 1, 1)).passed
    assert qfield_square_check(zero_split(0, 1, 1)).passed


def test_so3_without_b_passes():
    assert check_split_lie2(_so3_no_b()).passed


def test_string_type_passes_both_oracles():
    d = string_type()
    assert check_split_lie2(d).passed
    assert qfield_square_check(d).passed


def test_open_omega_fails_exactly_v():
    d = open_omega()
    r = check_split_lie2(d)
    assert r.failed_axioms() == ["v"]
    assert qfield_square_check(d).failed_axioms() == ["v"]
    assert [(v.witness, v.residual) for v in r.sorted_violations()] == \
        [((("i", 0), ("j", 1), ("k", 2), ("l", 3), ("component", 0)), "1")]


def test_q_of_constant_vanishes():
    img = qfield_apply(string_type(), GradedFunction.function(Poly.const(0, 5)))
    assert img.covector.is_zero()


def test_chevalley_eilenberg_differential():
    d = _so3_no_b()
    eps2 = Section(d.Q.dual_bundle(), basis(0, 3, 2))
    img = qfield_apply(d, GradedFunction.covector(eps2))
    # [e0, e1] = e2 gives d ε2 = −ε0∧ε1
    assert img.two_form.entries == {(0, 1): (Poly.const(0, -1),)}


def test_q_of_b_is_minus_cartan():
    d = string_type()
    img = qfield_apply(d, GradedFunction.section(d.B.frame(0)))
    assert img.three_form.entries == {(0, 1, 2): (Poly.const(0, -1),)}
    assert img.b_form.is_zero()


def test_mutated_so3_fails_iii_in_both_oracles():
    d = _mutated_so3()
    a, b = check_split_lie2(d), qfield_square_check(d)
    assert a.failed_axioms() == b.failed_axioms() == ["iii"]
    # Jac(e0, e1, e2) = −e1, read off Q²(ε1) as a 3-form coefficient
    res = {v.witness: v.residual for v in b.violations}
    assert res[(("eps", 1), ("e0", 0), ("e1", 1), ("e2", 2))] == "-1"


def test_q_squared_on_curved_semidirect():
    d = semidirect_lie2(curved_two_rep())
    assert qfield_square_check(d).passed
    Qv = qfield_derivation(d)
    for img in Qv.on_eps + Qv.on_b + Qv.on_coords:
        assert Qv.apply(Qv.apply(img)).is_zero()


# change of splitting --------------------------------------------------------

def test_shift_by_zero_is_identity():
    d = semidirect_lie2(curved_two_rep())
    assert shift_splitting(d, VForm.zero(2, d.Q, d.B.dual_bundle())) == d


@pytest.mark.parametrize("seed", range(4))
def test_shift_round_trip_and_validity(seed):
    d = semidirect_lie2(curved_two_rep()) if seed % 2 else string_type()
    phi = random_phi(XorShift64Star(seed), d, 1)
    ds = shift_splitting(d, phi)
    assert check_split_lie2(ds).passed
    assert shift_splitting(ds, -phi) == d
    assert check_morphism(ds, d, identity_morphism(d, phi)).passed


def test_string_shift_changes_nothing_but_is_valid():
    d = string_type()
    phi = VForm(2, d.Q, d.B.dual_bundle(), {(0, 1): (Poly.const(0, 3),)})
    ds = shift_splitting(d, phi)
    # l = 0 and so(3) has no nonzero exact 3-forms: the data is unchanged
    assert ds == d


# morphisms --------------------------------------------------------------------

def test_identity_morphism_passes():
    for d in (string_type(), semidirect_lie2(curved_two_rep())):
        assert check_morphism(d, d, identity_morphism(d)).passed


def test_broken_anchor_fails_condition_1():
    T = tangent_algebroid(Chart(1))
    d = rep_lie2(T, LinearConnection.zero(T.anchor, Bundle("V", 1, Chart(1))))
    m = identity_morphism(d)
    m2 = dataclasses.replace(m, muQ=HomField(d.Q, d.Q, ((Poly.const(1, 2),),)))
    assert check_morphism(d, d, m2).failed_axioms() == ["1"]


def _chain():
    d = semidirect_lie2(curved_two_rep())
    rng = XorShift64Star(11)
    phi1 = random_phi(rng, d, 1)
    d1 = shift_splitting(d, phi1)
    phi2 = random_phi(rng, d1, 1)
    d2 = shift_splitting(d1, phi2)
    return d, d1, d2, identity_morphism(d, phi1), identity_morphism(d1, phi2), phi1, phi2


def test_compose_with_identity():
    d, d1, _, mu, _, _, _ = _chain()
    assert compose_morphisms(mu, identity_morphism(d1)) == mu
    assert compose_morphisms(identity_morphism(d), mu) == mu


def test_composition_passes_and_adds_phis():
    d, d1, d2, mu, nu, phi1, phi2 = _chain()
    c = compose_morphisms(mu, nu)
    assert check_morphism(d2, d, c).passed
    assert c.mu12 == phi1 + phi2


def test_composed_pullback_matches_pullback_composition():
    d, d1, d2, mu, nu, _, _ = _chain()
    c = compose_morphisms(mu, nu)
    pull_c, _, _ = _morphism_pullback(d2, d, c)
    pull_mu, _, _ = _morphism_pullback(d1, d, mu)
    pull_nu, _, _ = _morphism_pullback(d2, d1, nu)
    n = d.n
    for j in range(d.B.rank):
        g = Element.b(n, j)
        assert pull_c(g) == pull_nu(pull_mu(g))
    for k in range(d.Q.rank):
        g = Element.eps(n, k)
        assert pull_c(g) == pull_nu(pull_mu(g))


def test_nontrivial_base_map_composition():
    """μ0 : x ↦ 2x on the tangent rep example; (μ∘ν)⋆ = ν⋆∘μ⋆ on generators."""
    T = tangent_algebroid(Chart(1))
    d = rep_lie2(T, LinearConnection.zero(T.anchor, Bundle("V", 1, Chart(1))))
    one, two = Poly.const(1, 1), Poly.const(1, 2)
    scale = Morphism(1, 1, (Poly.parse("2*x0", 1),), HomField(d.Q, d.Q, ((two,),)),
                     HomField(d.B.dual_bundle(), d.B.dual_bundle(), ((one,),)),
                     VForm.zero(2, d.Q, d.B.dual_bundle()))
    assert check_morphism(d, d, scale).passed
    c = compose_morphisms(scale, scale)
    assert c.mu0 == (Poly.parse("4*x0", 1),)
    assert check_morphism(d, d, c).passed
    pull_c, _, _ = _morphism_pullback(d, d, c)
    pull, _, _ = _morphism_pullback(d, d, scale)
    for g in (Element.eps(1, 0), Element.b(1, 0), Element.scalar(Poly.parse("x0^2", 1))):
        assert pull_c(g) == pull(pull(g))
