"""Split Lie 2-algebroids: axioms, homological vector field, splittings, morphisms.

Data ``(Q, B, ρ, l, ⟦·,·⟧, ∇, ω)`` with ``l: B* → Q`` stored as a HomField
whose column ``j`` is ``l(β_j)``, ``∇`` a Q-connection on ``B`` and
``ω ∈ Ω³(Q, B*)``.  The transpose ``∂_B = l*: Q* → B`` and the dual
connection ``∇*`` on ``B*`` are derived on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .anchored import (
    Anchor, DorfmanConnection, DullBracket, LinearConnection, covariant_differential,
    curvature_vec, dual_connection, dualize_pair, jacobiator_vec, trivial_connection,
    vf_bracket,
)
from .bundles import (
    Bundle, BundleMismatch, Chart, HomField, Section, VForm, Vec, basis, trivial_line,
    vadd, vdot, vneg, vsub,
)
from .exactpoly import ChartMismatch, Poly
from .graded import Derivation, Element, pullback_map
from .report import Report

__all__ = [
    "SplitLie2Data", "GradedFunction", "QImage", "Morphism",
    "check_split_lie2", "qfield_apply", "qfield_derivation", "qfield_square_check",
    "shift_splitting", "check_morphism", "compose_morphisms", "identity_morphism",
    "LIE2_AXIOMS", "MORPHISM_CONDITIONS",
]

LIE2_AXIOMS = ["anchor", "rho_l", "i", "ii", "iii", "iv", "v"]
MORPHISM_CONDITIONS = ["1", "2", "3", "4", "5"]


@dataclass(frozen=True)
class SplitLie2Data:
    Q: Bundle
    B: Bundle
    rho: Anchor
    l: HomField
    bracket: DullBracket
    nabla: LinearConnection
    omega: VForm

    def __post_init__(self) -> None:
        Q, B = self.Q, self.B
        if Q.chart != B.chart:
            raise BundleMismatch("Q and B live over different charts")
        if self.rho.bundle != Q or self.bracket.anchor != self.rho:
            raise BundleMismatch("bracket and anchor must both live on Q")
        if not self.bracket.skew:
            raise ValueError("a split Lie 2-algebroid needs a skew bracket")
        if self.l.source != B.dual_bundle() or self.l.target != Q:
            raise BundleMismatch("l must map B* to Q")
        if self.nabla.anchor != self.rho or self.nabla.module != B:
            raise BundleMismatch("∇ must be a Q-connection on B")
        if (self.omega.arity, self.omega.arg, self.omega.value) != (3, Q, B.dual_bundle()):
            raise BundleMismatch("ω must be a 3-form on Q with values in B*")

    @property
    def chart(self) -> Chart:
        return self.Q.chart

    @property
    def n(self) -> int:
        return self.Q.dim

    @property
    def dl(self) -> HomField:
        """``∂_B = l*: Q* → B``."""
        return self.l.transpose()

    @property
    def nabla_dual(self) -> LinearConnection:
        return dual_connection(self.nabla)

    @property
    def dorfman(self) -> DorfmanConnection:
        return dualize_pair(self.bracket)

    def l_vec(self, beta: Vec) -> Vec:
        return self.l.apply_vec(beta)

    def dl_vec(self, tau: Vec) -> Vec:
        """``l* τ`` with ``(l*τ)_j = Σ_i L[i][j] τ_i``."""
        n = self.n
        L = self.l.matrix
        return tuple(vdot([L[i][j] for i in range(self.Q.rank)], tau, n)
                     for j in range(self.B.rank))

    def omega_contract(self, q1: Vec, q2: Vec, b: Vec) -> Vec:
        """``R_ω(q1,q2) b = ⟨ω(q1, q2, ·), b⟩`` as a covector on Q."""
        r, n = self.Q.rank, self.n
        return tuple(vdot(self.omega.eval_vecs([q1, q2, basis(n, r, k)]), b, n)
                     for k in range(r))


# axioms ----------------------------------------------------------------------

def check_split_lie2(d: SplitLie2Data) -> Report:
    """Axioms (i)–(v), anchor compatibility and ``ρ∘l = 0`` on frame tuples.

    Every identity is tensorial in its Γ(Q)/Γ(B*)/Γ(B) slots once the
    bracket is skew and Leibniz, so frames suffice.
    """
    rep = Report("check_split_lie2", list(LIE2_AXIOMS))
    Q, B = d.Q, d.B
    n, r, s = d.n, Q.rank, B.rank
    e = [basis(n, r, i) for i in range(r)]
    beta = [basis(n, s, j) for j in range(s)]
    nd = d.nabla_dual
    C = d.bracket.symbols
    anc = d.rho
    lb = [d.l.column(j) for j in range(s)]

    for i, j in combinations(range(r), 2):
        lhs = anc.vector_field(C[i][j])
        rhs = vf_bracket(anc.matrix[i], anc.matrix[j])
        rep.record("anchor", {"i": i, "j": j}, vsub(lhs, rhs))
    for j in range(s):
        rep.record("rho_l", {"beta": j}, anc.vector_field(lb[j]))
    for j1 in range(s):
        for j2 in range(j1, s):
            res = vadd(nd.eval(lb[j1], beta[j2]), nd.eval(lb[j2], beta[j1]))
            rep.record("i", {"beta1": j1, "beta2": j2}, res)
    for i in range(r):
        for j in range(s):
            res = vsub(d.bracket.eval(e[i], lb[j]), d.l_vec(nd.eval(e[i], beta[j])))
            rep.record("ii", {"i": i, "beta": j}, res)
    for i, j, k in combinations(range(r), 3):
        jac = jacobiator_vec(d.bracket, e[i], e[j], e[k])
        res = vsub(jac, d.l_vec(d.omega.frame_value((i, j, k))))
        rep.record("iii", {"i": i, "j": j, "k": k}, res)
    for i, j in combinations(range(r), 2):
        for m in range(s):
            bm = basis(n, s, m)
            curv = curvature_vec(d.nabla, d.bracket, e[i], e[j], bm)
            res = vsub(curv, d.dl_vec(d.omega_contract(e[i], e[j], bm)))
            rep.record("iv", {"i": i, "j": j, "b": m}, res)
    dw = covariant_differential(nd, d.bracket, d.omega)
    for idx, val in dw.entries.items():
        rep.record("v", dict(zip(("i", "j", "k", "l"), idx)), val)
    return rep


# homological vector field -------------------------------------------------------

@dataclass(frozen=True)
class GradedFunction:
    """A homogeneous function of degree 0, 1 or 2 on ``Q[-1] ⊕ B*[-2]``.

    Degree 2 functions are pairs ``(b, η)`` with ``b ∈ Γ(B)`` and ``η`` a
    scalar 2-form on Q; either part may be absent.
    """

    degree: int
    f: Optional[Poly] = None
    tau: Optional[Section] = None
    b: Optional[Section] = None
    two_form: Optional[VForm] = None

    def __post_init__(self) -> None:
        present = {0: self.f is not None, 1: self.tau is not None,
                   2: self.b is not None or self.two_form is not None}
        if self.degree not in present:
            raise ValueError("only degrees 0, 1 and 2 are generators")
        if [k for k, v in present.items() if v] != [self.degree]:
            raise ValueError("graded function is not homogeneous of the stated degree")

    @classmethod
    def function(cls, f: Poly) -> "GradedFunction":
        return cls(0, f=f)

    @classmethod
    def covector(cls, tau: Section) -> "GradedFunction":
        return cls(1, tau=tau)

    @classmethod
    def section(cls, b: Section) -> "GradedFunction":
        return cls(2, b=b)


@dataclass(frozen=True)
class QImage:
    """Image of a homogeneous generator under Q, split by component type."""

    degree: int
    covector: Optional[Section] = None         # degree 1: ρ* df
    two_form: Optional[VForm] = None           # degree 2: d_Q τ
    b_part: Optional[Section] = None           # degree 2: ∂_B τ
    b_form: Optional[VForm] = None             # degree 3: Ω¹(Q, B) part
    three_form: Optional[VForm] = None         # degree 3: scalar 3-form part

    def to_element(self) -> Element:
        parts: List[Element] = []
        if self.covector is not None:
            parts.append(_form_to_element(VForm(1, self.covector.bundle.dual_bundle(),
                                                trivial_line(self.covector.bundle.chart),
                                                {(i,): (c,) for i, c in
                                                 enumerate(self.covector.comps)}), False))
        if self.two_form is not None:
            parts.append(_form_to_element(self.two_form, False))
        if self.b_part is not None:
            n = self.b_part.bundle.dim
            parts.append(sum((Element.b(n, j, c) for j, c in enumerate(self.b_part.comps)),
                             Element(n)))
        if self.b_form is not None:
            parts.append(_form_to_element(self.b_form, True))
        if self.three_form is not None:
            parts.append(_form_to_element(self.three_form, False))
        out = parts[0]
        for p in parts[1:]:
            out = out + p
        return out


def _form_to_element(F: VForm, b_valued: bool) -> Element:
    n = F.arg.dim
    terms: Dict = {}
    for idx, val in F.entries.items():
        if b_valued:
            for j, c in enumerate(val):
                if c.terms:
                    terms[(idx, (j,))] = c
        elif val[0].terms:
            terms[(idx, ())] = val[0]
    return Element(n, terms)


def _scalar_form(k: int, Q: Bundle, entries) -> VForm:
    return VForm(k, Q, trivial_line(Q.chart), entries)


def qfield_apply(d: SplitLie2Data, g: GradedFunction) -> QImage:
    """``Q(f) = ρ*df``, ``Q(τ) = d_Qτ + ∂_Bτ``, ``Q(b) = d_∇b − ⟨ω, b⟩``.

    ``d_Q`` is the Koszul differential of the anchor and dull bracket.
    """
    Q, n = d.Q, d.n
    line = trivial_line(Q.chart)
    koszul = trivial_connection(d.rho, line)
    if g.degree == 0:
        if g.f.nvars != n:
            raise ChartMismatch("function on the wrong chart")
        return QImage(1, covector=Section(Q.dual_bundle(), d.rho.star_d(g.f)))
    if g.degree == 1:
        tau = g.tau
        if tau.bundle != Q.dual_bundle():
            raise BundleMismatch("degree-1 functions are sections of Q*")
        form = _scalar_form(1, Q, {(i,): (c,) for i, c in enumerate(tau.comps)})
        dq = covariant_differential(koszul, d.bracket, form)
        return QImage(2, two_form=dq, b_part=Section(d.B, d.dl_vec(tau.comps)))
    r = Q.rank
    bform = VForm.zero(1, Q, d.B)
    three = VForm.zero(3, Q, line)
    if g.b is not None:
        if g.b.bundle != d.B:
            raise BundleMismatch("degree-2 generator must be a section of B")
        b = g.b.comps
        bform = VForm(1, Q, d.B, {(i,): d.nabla.eval(basis(n, r, i), b) for i in range(r)})
        three = d.omega.map_values(line, lambda v: (-vdot(v, b, n),))
    if g.two_form is not None:
        eta = g.two_form
        if (eta.arity, eta.arg, eta.value.rank) != (2, Q, 1):
            raise BundleMismatch("degree-2 forms must be scalar 2-forms on Q")
        eta = VForm(2, Q, line, eta.entries)
        three = three + covariant_differential(koszul, d.bracket, eta)
        # ∂_B η (q) = −l*(η(q, ·))
        contr = {}
        for i in range(r):
            tau = tuple(eta.frame_value((i, k))[0] for k in range(r))
            contr[(i,)] = vneg(d.dl_vec(tau))
        bform = bform + VForm(1, Q, d.B, contr)
    return QImage(3, b_form=bform, three_form=three)


def qfield_derivation(d: SplitLie2Data) -> Derivation:
    """Q as a derivation of the graded algebra, fixed by its generator images."""
    n, r, s = d.n, d.Q.rank, d.B.rank
    Qd, B = d.Q.dual_bundle(), d.B
    coords = [qfield_apply(d, GradedFunction.function(Poly.var(n, a))).to_element()
              for a in range(n)]
    eps = [qfield_apply(d, GradedFunction.covector(Section(Qd, basis(n, r, k)))).to_element()
           for k in range(r)]
    bs = [qfield_apply(d, GradedFunction.section(Section(B, basis(n, s, j)))).to_element()
          for j in range(s)]
    return Derivation(n, coords, eps, bs)


_Q2_CLASSES = {
    ("x", (2, 0)): "anchor",
    ("x", (0, 1)): "rho_l",
    ("eps", (3, 0)): "iii",
    ("eps", (1, 1)): "ii",
    ("b", (4, 0)): "v",
    ("b", (2, 1)): "iv",
    ("b", (0, 2)): "i",
}


def _record_element(rep: Report, kind: str, gen: int, x: Element, table) -> None:
    for key in sorted(x.terms):
        eps, bs = key
        axiom = table.get((kind, (len(eps), len(bs))))
        if axiom is None:
            raise AssertionError(f"unexpected component type {(len(eps), len(bs))}")
        w = {kind: gen}
        w.update({f"e{m}": i for m, i in enumerate(eps)})
        w.update({f"b{m}": j for m, j in enumerate(bs)})
        rep.record(axiom, w, x.terms[key])


def qfield_square_check(d: SplitLie2Data) -> Report:
    """Q² on coordinates, dual frame covectors and B-frame sections.

    Each component type of Q²(generator) is equivalent to one axiom; the
    residual is reported under that axiom's name.
    """
    rep = Report("qfield_square_check", list(LIE2_AXIOMS))
    Qv = qfield_derivation(d)
    for a, img in enumerate(Qv.on_coords):
        _record_element(rep, "x", a, Qv.apply(img), _Q2_CLASSES)
    for k, img in enumerate(Qv.on_eps):
        _record_element(rep, "eps", k, Qv.apply(img), _Q2_CLASSES)
    for j, img in enumerate(Qv.on_b):
        _record_element(rep, "b", j, Qv.apply(img), _Q2_CLASSES)
    return rep


# change of splitting ----------------------------------------------------------

def shift_splitting(d: SplitLie2Data, phi: VForm) -> SplitLie2Data:
    """Splitting related to ``d`` through ``φ ∈ Ω²(Q, B*)``.

    The result is the source of the morphism ``(Id, Id, φ)`` into ``d``::

        ⟦q, q'⟧' = ⟦q, q'⟧ − l φ(q, q')
        ∇'_q b   = ∇_q b + l*⟨φ(q, ·), b⟩
        ω'       = ω + d_{⟦·,·⟧', ∇*} φ
    """
    Q, B = d.Q, d.B
    if (phi.arity, phi.arg, phi.value) != (2, Q, B.dual_bundle()):
        raise BundleMismatch("φ must be a 2-form on Q with values in B*")
    r, s = Q.rank, B.rank
    C = d.bracket.symbols
    new_c = tuple(tuple(vsub(C[i][j], d.l_vec(phi.frame_value((i, j)))) for j in range(r))
                  for i in range(r))
    bracket = DullBracket(d.rho, new_c, skew=True)
    G = d.nabla.symbols
    new_g = []
    for i in range(r):
        row = []
        for j in range(s):
            # ⟨φ(e_i, ·), b_j⟩ as a covector on Q, then l*
            tau = tuple(phi.frame_value((i, k))[j] for k in range(r))
            row.append(vadd(G[i][j], d.dl_vec(tau)))
        new_g.append(tuple(row))
    nabla = LinearConnection(d.rho, B, tuple(new_g))
    omega = d.omega + covariant_differential(d.nabla_dual, bracket, phi)
    return SplitLie2Data(Q, B, d.rho, d.l, bracket, nabla, omega)


# morphisms --------------------------------------------------------------------

@dataclass(frozen=True)
class Morphism:
    """``(μ0, μ_Q, μ_B, μ12)`` between split Lie 2-algebroids.

    All data lives on the source chart: ``mu0`` lists the target coordinates
    as polynomials in the source variables, ``muQ[k][i]`` is the
    ``e²_k``-coefficient of ``μ_Q(e¹_i)``, ``muB[m][j]`` the
    ``β²_m``-coefficient of ``μ_B(β¹_j)`` and ``mu12`` takes values in the
    pulled back ``B2*``.
    """

    source_dim: int
    target_dim: int
    mu0: Tuple[Poly, ...]
    muQ: HomField
    muB: HomField
    mu12: VForm

    def __post_init__(self) -> None:
        if len(self.mu0) != self.target_dim or any(p.nvars != self.source_dim for p in self.mu0):
            raise ChartMismatch("μ0 must list target coordinates in source variables")
        if self.muQ.source.dim != self.source_dim:
            raise ChartMismatch("μ_Q must live on the source chart")
        if self.muB.source.dim != self.source_dim:
            raise ChartMismatch("μ_B must live on the source chart")
        if self.mu12.arity != 2 or self.mu12.arg != self.muQ.source:
            raise BundleMismatch("μ12 must be a 2-form on Q1")
        if self.mu12.value.rank != self.muB.target.rank:
            raise BundleMismatch("μ12 must take values in B2*")


def pulled_bundle(b: Bundle, chart: Chart) -> Bundle:
    return Bundle(b.label, b.rank, chart, b.dual)


def identity_morphism(d: SplitLie2Data, mu12: VForm | None = None) -> Morphism:
    n = d.n
    Bd = d.B.dual_bundle()
    if mu12 is None:
        mu12 = VForm.zero(2, d.Q, Bd)
    return Morphism(n, n, tuple(Poly.var(n, a) for a in range(n)),
                    HomField.identity(d.Q), HomField.identity(Bd), mu12)


def _morphism_pullback(src: SplitLie2Data, dst: SplitLie2Data, m: Morphism):
    n1 = src.n
    r1 = src.Q.rank
    eps_img = []
    for k in range(dst.Q.rank):
        x = Element(n1)
        for i in range(r1):
            x = x + Element.eps(n1, i, m.muQ.matrix[k][i])
        eps_img.append(x)
    b_img = []
    for mm in range(dst.B.rank):
        x = Element(n1)
        for j in range(src.B.rank):
            x = x + Element.b(n1, j, m.muB.matrix[mm][j])
        for (i, l), val in m.mu12.entries.items():
            x = x + Element(n1, {((i, l), ()): val[mm]})
        b_img.append(x)
    return pullback_map(dst.n, n1, m.mu0, eps_img, b_img), eps_img, b_img


_MORPHISM_CLASSES = {
    ("y", (1, 0)): "1",
    ("eps", (0, 1)): "2",
    ("eps", (2, 0)): "3",
    ("b", (1, 1)): "4",
    ("b", (3, 0)): "5",
}


def check_morphism(src: SplitLie2Data, dst: SplitLie2Data, m: Morphism) -> Report:
    """Conditions (1)–(5) as the components of ``μ⋆∘Q₂ − Q₁∘μ⋆`` on target generators.

    (1) anchors, (2) ``μ_Q∘∂₁* = ∂₂*∘μ_B``, (3) brackets, (4) connections,
    (5) the 3-forms.  Target data enters through composition with ``μ0``.
    """
    if m.source_dim != src.n or m.target_dim != dst.n:
        raise ChartMismatch("morphism charts do not match the algebroids")
    if (m.muQ.source.rank, m.muQ.target.rank) != (src.Q.rank, dst.Q.rank):
        raise BundleMismatch("μ_Q has the wrong shape")
    if (m.muB.source.rank, m.muB.target.rank) != (src.B.rank, dst.B.rank):
        raise BundleMismatch("μ_B has the wrong shape")
    if m.mu12.arg.rank != src.Q.rank:
        raise BundleMismatch("μ12 has the wrong shape")
    rep = Report("check_morphism", list(MORPHISM_CONDITIONS))
    Q1, Q2 = qfield_derivation(src), qfield_derivation(dst)
    pull, eps_img, b_img = _morphism_pullback(src, dst, m)
    for a in range(dst.n):
        lhs = pull(Q2.on_coords[a])
        rhs = Q1.on_function(m.mu0[a])
        _record_element(rep, "y", a, lhs - rhs, _MORPHISM_CLASSES)
    for k in range(dst.Q.rank):
        _record_element(rep, "eps", k, pull(Q2.on_eps[k]) - Q1.apply(eps_img[k]),
                        _MORPHISM_CLASSES)
    for j in range(dst.B.rank):
        _record_element(rep, "b", j, pull(Q2.on_b[j]) - Q1.apply(b_img[j]),
                        _MORPHISM_CLASSES)
    return rep


def _pull_hom(h: HomField, n: int, mu0: Sequence[Poly], source: Bundle,
              target: Bundle) -> HomField:
    return HomField(source, target,
                    tuple(tuple(p.compose_into(n, mu0) for p in row) for row in h.matrix))


def compose_morphisms(outer: Morphism, inner: Morphism) -> Morphism:
    """``outer ∘ inner``; outer data is pulled back through ``inner.mu0``."""
    if inner.target_dim != outer.source_dim:
        raise ChartMismatch("inner target chart differs from outer source chart")
    if inner.muQ.target.rank != outer.muQ.source.rank or \
            inner.muB.target.rank != outer.muB.source.rank:
        raise BundleMismatch("inner target bundles differ from outer source bundles")
    n = inner.source_dim
    chart = Chart(n)
    mu0 = tuple(p.compose_into(n, inner.mu0) for p in outer.mu0)
    midQ = pulled_bundle(outer.muQ.source, chart)
    midB = pulled_bundle(outer.muB.source, chart)
    oQ = _pull_hom(outer.muQ, n, inner.mu0, midQ, pulled_bundle(outer.muQ.target, chart))
    oB = _pull_hom(outer.muB, n, inner.mu0, midB, pulled_bundle(outer.muB.target, chart))
    iQ = HomField(inner.muQ.source, midQ, inner.muQ.matrix)
    iB = HomField(inner.muB.source, midB, inner.muB.matrix)
    muQ = oQ.compose(iQ)
    muB = oB.compose(iB)
    Q1 = inner.muQ.source
    r1 = Q1.rank
    o12 = outer.mu12
    o12_pulled = {k: tuple(p.compose_into(n, inner.mu0) for p in v)
                  for k, v in o12.entries.items()}
    value = pulled_bundle(outer.mu12.value, chart)
    o12_form = VForm(2, midQ, value, o12_pulled)
    cols = [iQ.column(i) for i in range(r1)]

    def entry(idx):
        i, l = idx
        a = oB.apply_vec(inner.mu12.frame_value((i, l)))
        b = o12_form.eval_vecs([cols[i], cols[l]])
        return vadd(a, b)

    mu12 = VForm.build(2, Q1, value, entry)
    return Morphism(n, outer.target_dim, mu0, muQ, muB, mu12)
