"""Named instances used by the CLI, the determinism run and the tests.

Mutant matched pairs each start from an all-zero structure with a chosen
``∂`` (valid), then perturb one table so that exactly one of (M1)–(M7)
fails while both 2-representations and the anchor prerequisites survive.
"""

from __future__ import annotations

import dataclasses
from typing import Callable, Dict, List, Tuple

from .anchored import Anchor, DullBracket, LinearConnection, curvature_form, zero_table
from .bundles import Bundle, Chart, HomField, VForm, basis, hom_bundle, vneg, vzero
from .courant import drinfeld_double, standard_courant, tangent_algebroid
from .exactpoly import Poly
from .lie2core import SplitLie2Data, identity_morphism, shift_splitting
from .matched import MatchedPairData, TwoRepData
from .serialize import Instance

__all__ = [
    "so3", "sl2", "abelian", "string_type", "open_omega", "zero_split",
    "sl2_matched_pair", "zero_matched_pair", "double_ruth", "tangent_two_rep",
    "nonclosed_two_rep", "mutant_matched_pair", "matched_base", "MUTANT_KS",
    "catalog", "catalog_names", "get",
]


def _P(s: str, n: int) -> Poly:
    return Poly.parse(s, n)


def _structure(n: int, r: int, rels) -> tuple:
    """Skew symbol table from ``{(i, j): {k: c}}`` with ``i < j``."""
    z = vzero(n, r)
    t = [[z] * r for _ in range(r)]
    for (i, j), img in rels.items():
        v = tuple(Poly.const(n, img.get(k, 0)) for k in range(r))
        t[i][j] = v
        t[j][i] = vneg(v)
    return tuple(tuple(row) for row in t)


def so3(label: str = "g") -> DullBracket:
    ch = Chart(0)
    B = Bundle(label, 3, ch)
    rels = {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {1: -1}}
    return DullBracket(Anchor.zero(B), _structure(0, 3, rels), skew=True)


def sl2(label: str = "g") -> DullBracket:
    """Frame ``(e, h, f)`` with ``[h,e] = 2e``, ``[h,f] = −2f``, ``[e,f] = h``."""
    ch = Chart(0)
    B = Bundle(label, 3, ch)
    rels = {(0, 1): {0: -2}, (1, 2): {2: -2}, (0, 2): {1: 1}}
    return DullBracket(Anchor.zero(B), _structure(0, 3, rels), skew=True)


def abelian(rank: int, chart: Chart | None = None, label: str = "a") -> DullBracket:
    ch = chart or Chart(0)
    B = Bundle(label, rank, ch)
    n = ch.dim
    return DullBracket(Anchor.zero(B), zero_table(n, rank, rank, rank), skew=True)


def string_type() -> SplitLie2Data:
    """so(3) with B of rank 1, ``l = 0``, ``∇ = 0`` and ω the Cartan 3-form."""
    g = so3("Q")
    Q = g.bundle
    B = Bundle("B", 1, Q.chart)
    Bd = B.dual_bundle()
    om = VForm(3, Q, Bd, {(0, 1, 2): (Poly.const(0, 1),)})
    return SplitLie2Data(Q, B, g.anchor, HomField.zero(Bd, Q), g,
                         LinearConnection.zero(g.anchor, B), om)


def open_omega() -> SplitLie2Data:
    """Abelian rank 4, ``∇_{e3} b = b`` and ``ω = ε0∧ε1∧ε2 ⊗ β``: fails only (v)."""
    g = abelian(4, label="Q")
    Q = g.bundle
    B = Bundle("B", 1, Q.chart)
    Bd = B.dual_bundle()
    one = Poly.const(0, 1)
    G = tuple(((one,),) if i == 3 else ((Poly.zero(0),),) for i in range(4))
    om = VForm(3, Q, Bd, {(0, 1, 2): (one,)})
    return SplitLie2Data(Q, B, g.anchor, HomField.zero(Bd, Q), g,
                         LinearConnection(g.anchor, B, G), om)


def zero_split(n: int = 1, rq: int = 2, rb: int = 1) -> SplitLie2Data:
    ch = Chart(n)
    Q, B = Bundle("Q", rq, ch), Bundle("B", rb, ch)
    Bd = B.dual_bundle()
    anc = Anchor.zero(Q)
    return SplitLie2Data(Q, B, anc, HomField.zero(Bd, Q),
                         DullBracket(anc, zero_table(n, rq, rq, rq), skew=True),
                         LinearConnection.zero(anc, B), VForm.zero(3, Q, Bd))


def _restrict(g: DullBracket, idx: List[int], label: str) -> DullBracket:
    ch = g.bundle.chart
    B = Bundle(label, len(idx), ch)
    t = tuple(tuple(tuple(g.symbols[i][j][k] for k in idx) for j in idx) for i in idx)
    return DullBracket(Anchor.zero(B), t, skew=True)


def sl2_matched_pair() -> MatchedPairData:
    """``sl2 = span{e} ⊕ span{h, f}`` with ``C = 0``."""
    g = sl2()
    A = _restrict(g, [0], "A")
    B = _restrict(g, [1, 2], "B")
    C = Bundle("C", 0, Chart(0))
    Ab, Bb = A.bundle, B.bundle
    # ∇_a b = pr_B[a, b] and ∇_b a = pr_A[b, a]
    nAB = tuple(tuple(tuple(g.symbols[0][j][k] for k in (1, 2)) for j in (1, 2)) for _ in [0])
    nBA = tuple(tuple(tuple(g.symbols[i][0][k] for k in (0,)) for _ in [0]) for i in (1, 2))
    return MatchedPairData(
        A, B, C, HomField.zero(C, Ab), HomField.zero(C, Bb),
        LinearConnection(A.anchor, Bb, nAB), LinearConnection.zero(A.anchor, C),
        LinearConnection(B.anchor, Ab, nBA), LinearConnection.zero(B.anchor, C),
        VForm.zero(2, Ab, hom_bundle(Bb, C)), VForm.zero(2, Bb, hom_bundle(Ab, C)))


def matched_base(n: int, ra: int, rb: int, rc: int, tangent_a: bool = False,
                 partial_a: Dict[Tuple[int, int], int] | None = None,
                 partial_b: Dict[Tuple[int, int], int] | None = None) -> MatchedPairData:
    """All-zero matched pair, optionally with A the tangent algebroid and given ∂'s."""
    ch = Chart(n)
    A, B, C = Bundle("A", ra, ch), Bundle("B", rb, ch), Bundle("C", rc, ch)
    if tangent_a:
        if ra != n:
            raise ValueError("the tangent algebroid has rank equal to the chart dimension")
        aa = Anchor(A, tuple(basis(n, n, i) for i in range(n)))
    else:
        aa = Anchor.zero(A)
    ab = Anchor.zero(B)

    def hom(src: Bundle, dst: Bundle, ent) -> HomField:
        m = [[Poly.zero(n)] * src.rank for _ in range(dst.rank)]
        for (t, s), v in (ent or {}).items():
            m[t][s] = Poly.const(n, v)
        return HomField(src, dst, m)

    return MatchedPairData(
        DullBracket(aa, zero_table(n, ra, ra, ra), skew=True),
        DullBracket(ab, zero_table(n, rb, rb, rb), skew=True), C,
        hom(C, A, partial_a), hom(C, B, partial_b),
        LinearConnection.zero(aa, B), LinearConnection.zero(aa, C),
        LinearConnection.zero(ab, A), LinearConnection.zero(ab, C),
        VForm.zero(2, A, hom_bundle(B, C)), VForm.zero(2, B, hom_bundle(A, C)))


def zero_matched_pair() -> MatchedPairData:
    return matched_base(1, 1, 1, 1)


def _bump(cn: LinearConnection, i: int, j: int, k: int, p: Poly) -> LinearConnection:
    S = [[list(v) for v in row] for row in cn.symbols]
    S[i][j][k] = S[i][j][k] + p
    return LinearConnection(cn.anchor, cn.module, S)


MUTANT_KS = (1, 2, 3, 4, 5, 6, 7)


def mutant_matched_pair(k: int) -> Tuple[MatchedPairData, MatchedPairData, str]:
    """``(base, mutant, perturbed table)`` with the mutant failing only (Mk)."""
    one = Poly.const(0, 1)
    z = Poly.zero(0)
    if k == 1:
        b = matched_base(0, 1, 1, 2, partial_a={(0, 0): 1})
        return b, dataclasses.replace(b, nablaAC=_bump(b.nablaAC, 0, 0, 1, one)), "nablaAC"
    if k == 2:
        b = matched_base(0, 1, 1, 1, partial_b={(0, 0): 1})
        return b, dataclasses.replace(b, nablaBA=_bump(b.nablaBA, 0, 0, 0, one)), "nablaBA"
    if k == 3:
        b = matched_base(0, 1, 1, 1, partial_a={(0, 0): 1})
        return b, dataclasses.replace(b, nablaAB=_bump(b.nablaAB, 0, 0, 0, one)), "nablaAB"
    if k == 4:
        b = matched_base(0, 1, 2, 2, partial_b={(1, 0): 1})
        RB = VForm(2, b.B.bundle, b.RB.value, {(0, 1): (z, one)})
        return b, dataclasses.replace(b, RB=RB), "RB"
    if k == 5:
        b = matched_base(0, 3, 1, 1, partial_a={(2, 0): 1})
        RA = VForm(2, b.A.bundle, b.RA.value, {(0, 1): (one,)})
        return b, dataclasses.replace(b, RA=RA), "RA"
    if k == 6:
        b = matched_base(0, 1, 3, 1, partial_b={(2, 0): 1})
        RB = VForm(2, b.B.bundle, b.RB.value, {(0, 1): (one,)})
        return b, dataclasses.replace(b, RB=RB), "RB"
    if k == 7:
        b = matched_base(2, 2, 2, 1, tangent_a=True)
        x0 = Poly.var(2, 0)
        RB = VForm(2, b.B.bundle, b.RB.value, {(0, 1): (Poly.zero(2), x0)})
        return b, dataclasses.replace(b, RB=RB), "RB"
    raise ValueError(f"no mutant for M{k}")


def double_ruth(A: DullBracket, E: Bundle, symbols) -> TwoRepData:
    """``(∇, ∇, R_∇)`` on ``Id_E``; valid for every Lie algebroid A."""
    cn = LinearConnection(A.anchor, E, symbols)
    R = curvature_form(cn, A, hom_bundle(E, E))
    return TwoRepData(A, E, E, HomField.identity(E), cn, cn, R)


def tangent_two_rep() -> TwoRepData:
    """Tangent algebroid of ℝ¹ on ``Id_E``, E of rank 1 with ``Γ = x0``."""
    T = tangent_algebroid(Chart(1))
    E = Bundle("E", 1, Chart(1))
    return double_ruth(T, E, (((_P("x0", 1),),),))


def curved_two_rep() -> TwoRepData:
    """Rank-2 E over ℝ² with a non-flat connection."""
    T = tangent_algebroid(Chart(2))
    E = Bundle("E", 2, Chart(2))
    p = lambda s: _P(s, 2)  # noqa: E731
    G = (((p("x1"), p("1")), (p("x0^2"), p("0"))),
         ((p("x0"), p("0")), (p("x0*x1"), p("2"))))
    return double_ruth(T, E, G)


def nonclosed_two_rep() -> TwoRepData:
    """ℝ³ tangent algebroid, ``∂ = 0``, ``Γ = 0``, ``R = x0 dx1∧dx2``: fails only closedness."""
    ch = Chart(3)
    T = tangent_algebroid(ch)
    E0, E1 = Bundle("E0", 1, ch), Bundle("E1", 1, ch)
    R = VForm(2, T.bundle, hom_bundle(E1, E0), {(1, 2): (_P("x0", 3),)})
    return TwoRepData(T, E0, E1, HomField.zero(E0, E1), LinearConnection.zero(T.anchor, E0),
                      LinearConnection.zero(T.anchor, E1), R)


def _adjoint_input():
    c = standard_courant(Chart(1))
    T = tangent_algebroid(Chart(1))
    return c, LinearConnection.zero(T.anchor, c.E)


def _string_shift():
    d = string_type()
    one = Poly.const(0, 1)
    phi = VForm(2, d.Q, d.B.dual_bundle(), {(0, 1): (one,), (1, 2): (Poly.const(0, 2),)})
    return d, phi


def _string_morphism():
    d, phi = _string_shift()
    return shift_splitting(d, phi), d, identity_morphism(d, phi)


def _so3_representation():
    g = so3("g")
    B = Bundle("V", 3, g.bundle.chart)
    return g, LinearConnection(g.anchor, B, g.symbols)


_ENTRIES: Dict[str, Tuple[str, Callable[[], object], str]] = {
    "so3": ("lie_algebroid", lambda: so3(), "so(3) over a point"),
    "sl2": ("lie_algebroid", lambda: sl2(), "sl(2) in the frame (e, h, f)"),
    "abelian3": ("lie_algebroid", lambda: abelian(3), "abelian rank 3"),
    "tangent_r2": ("lie_algebroid", lambda: tangent_algebroid(Chart(2)), "tangent algebroid of R^2"),
    "so3_adjoint_rep": ("lie_algebroid", _so3_representation, "so(3) with its adjoint representation"),
    "string_type": ("split_lie2", string_type, "so(3), B of rank 1, omega the Cartan 3-form"),
    "open_omega": ("split_lie2", open_omega, "mutant with a non-closed omega"),
    "zero_split": ("split_lie2", zero_split, "all-zero split Lie 2-algebroid over R^1"),
    "tangent_two_rep": ("two_rep", tangent_two_rep, "2-representation of TM on Id_E over R^1"),
    "curved_two_rep": ("two_rep", curved_two_rep, "curved 2-representation over R^2"),
    "nonclosed_two_rep": ("two_rep", nonclosed_two_rep, "R not closed"),
    "sl2_matched_pair": ("matched_pair", sl2_matched_pair, "sl(2) = span{e} + span{h, f}"),
    "zero_matched_pair": ("matched_pair", zero_matched_pair, "all-zero matched pair"),
    "standard_courant_r1": ("courant", lambda: standard_courant(Chart(1)), "TM + T*M over R^1"),
    "standard_courant_r2": ("courant", lambda: standard_courant(Chart(2)), "TM + T*M over R^2"),
    "drinfeld_so3": ("courant", lambda: drinfeld_double(so3("g"), _abelian_dual()),
                     "double of so(3) with the abelian dual"),
    "adjoint_input_r1": ("courant", _adjoint_input, "standard R^1 with the trivial metric connection"),
    "string_shift": ("shift", _string_shift, "string-type instance with a constant phi"),
    "string_morphism": ("morphism", _string_morphism, "(Id, Id, phi) from the shifted splitting"),
}


def _abelian_dual() -> DullBracket:
    B = Bundle("g", 3, Chart(0), True)
    return DullBracket(Anchor.zero(B), zero_table(0, 3, 3, 3), skew=True)


for _k in MUTANT_KS:
    _ENTRIES[f"mutant_M{_k}"] = ("matched_pair", (lambda k=_k: mutant_matched_pair(k)[1]),
                                 f"matched pair failing only (M{_k})")


def catalog_names() -> List[str]:
    return sorted(_ENTRIES)


def get(name: str) -> Instance:
    try:
        kind, make, desc = _ENTRIES[name]
    except KeyError:
        raise KeyError(f"no catalog instance {name!r}") from None
    return Instance(kind, name, make(), {"source": "catalog", "description": desc})


def catalog() -> List[Instance]:
    return [get(n) for n in catalog_names()]
