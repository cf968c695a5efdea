"""Anchors, dull brackets, Dorfman connections and linear connections.

Every structure is a table of frame symbols.  Evaluation on arbitrary
sections goes through the canonical Leibniz extension, so the Leibniz rules
hold by construction and only the non-automatic identities need checking.

Conventions on a bundle ``Q`` of rank ``r`` with frame ``e_i`` and dual frame
``ε_i``::

    ⟦e_i, e_j⟧  = Σ_k C[i][j][k] e_k
    Δ_{e_i} ε_j = Σ_k D[i][j][k] ε_k
    ∇_{e_i} f_j = Σ_k G[i][j][k] f_k
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

from .bundles import (
    Bundle, BundleMismatch, Section, VForm, Vec, basis,
    vadd, vis_zero, vneg, vscale, vsub, vzero,
)
from .exactpoly import Poly
from .report import Report

Table = Tuple[Tuple[Vec, ...], ...]

__all__ = [
    "Anchor", "DullBracket", "DorfmanConnection", "LinearConnection",
    "vf_apply", "vf_bracket", "zero_table",
    "bracket_eval", "dorfman_eval", "dualize_pair", "conn_eval",
    "dorfman_curvature", "jacobiator", "conn_curvature",
    "covariant_differential", "check_anchored_compat",
    "dual_connection", "hom_connection", "trivial_connection",
]


def vf_apply(X: Sequence[Poly], f: Poly) -> Poly:
    """Apply the vector field ``Σ X[a] ∂_a`` to ``f``."""
    out = Poly.zero(f.nvars)
    for a, c in enumerate(X):
        if c.terms:
            d = f.partial(a)
            if d.terms:
                out = out + c * d
    return out


def vf_bracket(X: Sequence[Poly], Y: Sequence[Poly]) -> Vec:
    return tuple(vf_apply(X, Y[a]) - vf_apply(Y, X[a]) for a in range(len(X)))


def zero_table(n: int, r1: int, r2: int, r3: int) -> Table:
    z = vzero(n, r3)
    return tuple(tuple(z for _ in range(r2)) for _ in range(r1))


def _freeze_table(table, n: int, r1: int, r2: int, r3: int, what: str) -> Table:
    t = tuple(tuple(tuple(v) for v in row) for row in table)
    if len(t) != r1 or any(len(row) != r2 for row in t) or any(
            len(v) != r3 for row in t for v in row):
        raise BundleMismatch(f"{what} table has shape mismatching ranks ({r1},{r2},{r3})")
    for row in t:
        for v in row:
            for p in v:
                if not isinstance(p, Poly) or p.nvars != n:
                    raise BundleMismatch(f"{what} symbol not on a chart of dimension {n}")
    return t


@dataclass(frozen=True)
class Anchor:
    """``ρ(e_i) = Σ_a matrix[i][a] ∂_{x_a}``."""

    bundle: Bundle
    matrix: Tuple[Tuple[Poly, ...], ...]

    def __post_init__(self) -> None:
        m = tuple(tuple(r) for r in self.matrix)
        n = self.bundle.dim
        if len(m) != self.bundle.rank or any(len(r) != n for r in m):
            raise BundleMismatch("anchor matrix must be rank × chart dimension")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def zero(cls, bundle: Bundle) -> "Anchor":
        return cls(bundle, tuple(vzero(bundle.dim, bundle.dim) for _ in range(bundle.rank)))

    @property
    def dim(self) -> int:
        return self.bundle.dim

    def is_zero(self) -> bool:
        return all(p.is_zero() for r in self.matrix for p in r)

    def vector_field(self, q: Vec) -> Vec:
        n = self.dim
        acc = list(vzero(n, n))
        for i, qi in enumerate(q):
            if qi.terms:
                for a, c in enumerate(self.matrix[i]):
                    if c.terms:
                        acc[a] = acc[a] + qi * c
        return tuple(acc)

    def act(self, q: Vec, f: Poly) -> Poly:
        """``ρ(q) f``."""
        if not f.terms or self.dim == 0:
            return Poly.zero(f.nvars)
        return vf_apply(self.vector_field(q), f)

    def frame_act(self, i: int, f: Poly) -> Poly:
        return vf_apply(self.matrix[i], f) if f.terms else f

    def star_d(self, f: Poly) -> Vec:
        """``ρ* df`` as a covector: component k is ``ρ(e_k) f``."""
        return tuple(self.frame_act(k, f) for k in range(self.bundle.rank))

    def star(self, theta: Sequence[Poly]) -> Vec:
        """``ρ* θ`` for a 1-form ``θ = Σ θ_a dx_a`` on the chart."""
        n = self.dim
        return tuple(sum((self.matrix[k][a] * theta[a] for a in range(n)
                          if self.matrix[k][a].terms and theta[a].terms), Poly.zero(n))
                     for k in range(self.bundle.rank))


def _vec_act(anchor: Anchor, q: Vec, v: Vec) -> Vec:
    X = anchor.vector_field(q)
    return tuple(vf_apply(X, c) for c in v)


@dataclass(frozen=True)
class DullBracket:
    anchor: Anchor
    symbols: Table
    skew: bool = True

    def __post_init__(self) -> None:
        b = self.anchor.bundle
        t = _freeze_table(self.symbols, b.dim, b.rank, b.rank, b.rank, "bracket")
        object.__setattr__(self, "symbols", t)
        if self.skew and not self.is_skew():
            raise ValueError("bracket flagged skew but its symbol table is not")

    @property
    def bundle(self) -> Bundle:
        return self.anchor.bundle

    def is_skew(self) -> bool:
        r = self.bundle.rank
        return all(self.symbols[i][j] == vneg(self.symbols[j][i])
                   for i in range(r) for j in range(i, r))

    def eval(self, u: Vec, v: Vec) -> Vec:
        n, r = self.bundle.dim, self.bundle.rank
        acc = list(vzero(n, r))
        C = self.symbols
        for i, ui in enumerate(u):
            if not ui.terms:
                continue
            for j, vj in enumerate(v):
                if not vj.terms:
                    continue
                f = ui * vj
                for k, c in enumerate(C[i][j]):
                    if c.terms:
                        acc[k] = acc[k] + f * c
        if n and not self.anchor.is_zero():
            Xu = self.anchor.vector_field(u)
            Xv = self.anchor.vector_field(v)
            for k in range(r):
                acc[k] = acc[k] + vf_apply(Xu, v[k]) - vf_apply(Xv, u[k])
        return tuple(acc)


@dataclass(frozen=True)
class DorfmanConnection:
    anchor: Anchor
    symbols: Table

    def __post_init__(self) -> None:
        b = self.anchor.bundle
        t = _freeze_table(self.symbols, b.dim, b.rank, b.rank, b.rank, "Dorfman")
        object.__setattr__(self, "symbols", t)

    @property
    def bundle(self) -> Bundle:
        return self.anchor.bundle

    def eval(self, q: Vec, tau: Vec) -> Vec:
        n, r = self.bundle.dim, self.bundle.rank
        acc = list(vzero(n, r))
        D = self.symbols
        for i, qi in enumerate(q):
            if not qi.terms:
                continue
            for j, tj in enumerate(tau):
                if not tj.terms:
                    continue
                f = qi * tj
                for k, c in enumerate(D[i][j]):
                    if c.terms:
                        acc[k] = acc[k] + f * c
        if n and not self.anchor.is_zero():
            Xq = self.anchor.vector_field(q)
            for k in range(r):
                acc[k] = acc[k] + vf_apply(Xq, tau[k])
            # ⟨e_i, τ⟩ ρ* d q_i
            for i in range(r):
                if tau[i].terms and q[i].terms and not q[i].is_constant():
                    acc = list(vadd(tuple(acc), vscale(tau[i], self.anchor.star_d(q[i]))))
        return tuple(acc)


@dataclass(frozen=True)
class LinearConnection:
    """Connection of the anchored bundle ``anchor.bundle`` on ``module``."""

    anchor: Anchor
    module: Bundle
    symbols: Table

    def __post_init__(self) -> None:
        q = self.anchor.bundle
        if q.chart != self.module.chart:
            raise BundleMismatch("connection between bundles over different charts")
        t = _freeze_table(self.symbols, q.dim, q.rank, self.module.rank,
                          self.module.rank, "connection")
        object.__setattr__(self, "symbols", t)

    @classmethod
    def zero(cls, anchor: Anchor, module: Bundle) -> "LinearConnection":
        q = anchor.bundle
        return cls(anchor, module, zero_table(q.dim, q.rank, module.rank, module.rank))

    @property
    def acting(self) -> Bundle:
        return self.anchor.bundle

    def eval(self, q: Vec, b: Vec) -> Vec:
        n, s = self.acting.dim, self.module.rank
        acc = list(vzero(n, s))
        G = self.symbols
        for i, qi in enumerate(q):
            if not qi.terms:
                continue
            for j, bj in enumerate(b):
                if not bj.terms:
                    continue
                f = qi * bj
                for k, c in enumerate(G[i][j]):
                    if c.terms:
                        acc[k] = acc[k] + f * c
        if n and not self.anchor.is_zero():
            X = self.anchor.vector_field(q)
            for k in range(s):
                if b[k].terms:
                    acc[k] = acc[k] + vf_apply(X, b[k])
        return tuple(acc)

    def frame_eval(self, i: int, b: Vec) -> Vec:
        return self.eval(basis(self.acting.dim, self.acting.rank, i), b)


def trivial_connection(anchor: Anchor, module: Bundle) -> LinearConnection:
    """``∇_q f_j = 0`` on frames, so ``∇_q b`` differentiates components."""
    return LinearConnection.zero(anchor, module)


def dual_connection(cn: LinearConnection) -> LinearConnection:
    """``⟨∇*_q β, b⟩ = ρ(q)⟨β, b⟩ − ⟨β, ∇_q b⟩``; on frames ``G*[i][j][k] = −G[i][k][j]``."""
    G = cn.symbols
    q, s = cn.acting.rank, cn.module.rank
    table = tuple(tuple(tuple(-G[i][k][j] for k in range(s)) for j in range(s))
                  for i in range(q))
    return LinearConnection(cn.anchor, cn.module.dual_bundle(), table)


def hom_connection(target: LinearConnection, source: LinearConnection,
                   hom: Bundle) -> LinearConnection:
    """Induced connection on Hom(source.module, target.module).

    ``(∇_q φ)(e) = ∇^target_q(φ e) − φ(∇^source_q e)``, flattened with index
    ``t * rank(source) + s``.
    """
    if target.anchor != source.anchor:
        raise BundleMismatch("connections act through different anchors")
    r0, r1 = target.module.rank, source.module.rank
    if hom.rank != r0 * r1:
        raise BundleMismatch("Hom bundle has the wrong rank")
    n, q = target.acting.dim, target.acting.rank
    G0, G1 = target.symbols, source.symbols
    table = []
    for i in range(q):
        row = []
        for t in range(r0):
            for s in range(r1):
                acc = list(vzero(n, r0 * r1))
                for w in range(r0):
                    c = G0[i][t][w]
                    if c.terms:
                        acc[w * r1 + s] = acc[w * r1 + s] + c
                for u in range(r1):
                    c = G1[i][u][s]
                    if c.terms:
                        acc[t * r1 + u] = acc[t * r1 + u] - c
                row.append(tuple(acc))
        table.append(tuple(row))
    return LinearConnection(target.anchor, hom, tuple(table))


# public operations -----------------------------------------------------------

def _same(b1: Bundle, b2: Bundle) -> None:
    if b1 != b2:
        raise BundleMismatch(f"{b1.name} vs {b2.name}")


def bracket_eval(db: DullBracket, q1: Section, q2: Section) -> Section:
    _same(q1.bundle, db.bundle)
    _same(q2.bundle, db.bundle)
    return Section(db.bundle, db.eval(q1.comps, q2.comps))


def dorfman_eval(dc: DorfmanConnection, q: Section, tau: Section) -> Section:
    _same(q.bundle, dc.bundle)
    _same(tau.bundle, dc.bundle.dual_bundle())
    return Section(tau.bundle, dc.eval(q.comps, tau.comps))


def dualize_pair(x: DullBracket | DorfmanConnection) -> DullBracket | DorfmanConnection:
    """Pass between a dull bracket and its dual Dorfman connection.

    On frames the pairing ``⟨e_j, ε_k⟩`` is constant, so the adjunction reduces
    to ``C[i][j][k] = −D[i][k][j]``.
    """
    S = x.symbols
    r = x.bundle.rank
    table = tuple(tuple(tuple(-S[i][k][j] for k in range(r)) for j in range(r))
                  for i in range(r))
    if isinstance(x, DullBracket):
        return DorfmanConnection(x.anchor, table)
    db = DullBracket(x.anchor, table, skew=False)
    return DullBracket(x.anchor, table, skew=db.is_skew())


def conn_eval(cn: LinearConnection, q: Section, b: Section) -> Section:
    _same(q.bundle, cn.acting)
    _same(b.bundle, cn.module)
    return Section(cn.module, cn.eval(q.comps, b.comps))


def _dorfman_curv_vec(dc: DorfmanConnection, db: DullBracket, q1: Vec, q2: Vec,
                      tau: Vec) -> Vec:
    a = dc.eval(q1, dc.eval(q2, tau))
    b = dc.eval(q2, dc.eval(q1, tau))
    c = dc.eval(db.eval(q1, q2), tau)
    return vsub(vsub(a, b), c)


def dorfman_curvature(dc: DorfmanConnection, q1: Section, q2: Section,
                      tau: Section) -> Section:
    """``Δ_{q1}Δ_{q2} − Δ_{q2}Δ_{q1} − Δ_{⟦q1,q2⟧}`` with the dual bracket."""
    for q in (q1, q2):
        _same(q.bundle, dc.bundle)
    _same(tau.bundle, dc.bundle.dual_bundle())
    db = dualize_pair(dc)
    return Section(tau.bundle, _dorfman_curv_vec(dc, db, q1.comps, q2.comps, tau.comps))


def jacobiator_vec(db: DullBracket, q1: Vec, q2: Vec, q3: Vec) -> Vec:
    br = db.eval
    return vsub(vadd(br(br(q1, q2), q3), br(q2, br(q1, q3))), br(q1, br(q2, q3)))


def jacobiator(db: DullBracket, q1: Section, q2: Section, q3: Section) -> Section:
    """``⟦⟦q1,q2⟧,q3⟧ + ⟦q2,⟦q1,q3⟧⟧ − ⟦q1,⟦q2,q3⟧⟧``."""
    for q in (q1, q2, q3):
        _same(q.bundle, db.bundle)
    return Section(db.bundle, jacobiator_vec(db, q1.comps, q2.comps, q3.comps))


def curvature_vec(cn: LinearConnection, db: DullBracket, q1: Vec, q2: Vec, b: Vec) -> Vec:
    a = cn.eval(q1, cn.eval(q2, b))
    c = cn.eval(q2, cn.eval(q1, b))
    d = cn.eval(db.eval(q1, q2), b)
    return vsub(vsub(a, c), d)


def conn_curvature(cn: LinearConnection, q1: Section, q2: Section, b: Section,
                   db: DullBracket | None = None) -> Section:
    if db is None:
        raise ValueError("the curvature needs a bracket on the acting bundle")
    _same(db.bundle, cn.acting)
    for q in (q1, q2):
        _same(q.bundle, cn.acting)
    _same(b.bundle, cn.module)
    return Section(cn.module, curvature_vec(cn, db, q1.comps, q2.comps, b.comps))


def curvature_form(cn: LinearConnection, db: DullBracket, hom: Bundle) -> VForm:
    """``R_∇`` as a 2-form with values in End(module), flattened ``t * r + s``."""
    q, n = cn.acting, cn.acting.dim
    r = cn.module.rank

    def entry(idx):
        i, j = idx
        ei, ej = basis(n, q.rank, i), basis(n, q.rank, j)
        cols = [curvature_vec(cn, db, ei, ej, basis(n, r, s)) for s in range(r)]
        return tuple(cols[s][t] for t in range(r) for s in range(r))

    return VForm.build(2, q, hom, entry)


def covariant_differential(cn: LinearConnection, db: DullBracket, F: VForm) -> VForm:
    """Exterior covariant derivative of ``F`` evaluated on frame tuples.

    ``(dF)(a_0..a_k) = Σ_{i<j} (−1)^{i+j} F(⟦a_i,a_j⟧, a_0..â_i..â_j..a_k)
    + Σ_i (−1)^i ∇_{a_i} F(a_0..â_i..a_k)``.
    """
    _same(F.arg, db.bundle)
    _same(F.arg, cn.acting)
    _same(F.value, cn.module)
    q = F.arg
    n, r, k = q.dim, q.rank, F.arity
    C = db.symbols
    s = F.value.rank

    def entry(idx):
        acc = vzero(n, s)
        for a in range(k + 1):
            for b in range(a + 1, k + 1):
                rest = idx[:a] + idx[a + 1:b] + idx[b + 1:]
                sign = -1 if (a + b) % 2 else 1
                for m, c in enumerate(C[idx[a]][idx[b]]):
                    if c.terms:
                        val = F.frame_value((m,) + rest)
                        if not vis_zero(val):
                            val = vscale(c, val)
                            acc = vadd(acc, val) if sign > 0 else vsub(acc, val)
        for a in range(k + 1):
            rest = idx[:a] + idx[a + 1:]
            val = F.frame_value(rest)
            val = cn.eval(basis(n, r, idx[a]), val)
            acc = vadd(acc, val) if a % 2 == 0 else vsub(acc, val)
        return acc

    return VForm.build(k + 1, q, F.value, entry)


def check_anchored_compat(db: DullBracket, dc: DorfmanConnection) -> Report:
    """Anchor compatibility of the bracket and axiom (3) of the Dorfman connection.

    The anchor identity is checked on ordered frame pairs; its failure on
    general sections is a combination of frame failures by the Leibniz rule.
    Axiom (3) is checked on frames ``e_i`` and coordinate functions; the
    Leibniz rules reduce the general case to these since ``ρ* d(fg)`` splits.
    """
    if db.anchor != dc.anchor:
        raise BundleMismatch("bracket and Dorfman connection have different anchors")
    rep = Report("check_anchored_compat", ["anchor", "dorfman_rho_d"])
    Q = db.bundle
    n, r = Q.dim, Q.rank
    anc = db.anchor
    for i in range(r):
        for j in range(r):
            lhs = anc.vector_field(db.symbols[i][j])
            rhs = vf_bracket(anc.matrix[i], anc.matrix[j])
            rep.record("anchor", {"i": i, "j": j}, vsub(lhs, rhs))
    for i in range(r):
        ei = basis(n, r, i)
        for a in range(n):
            x = Poly.var(n, a)
            lhs = dc.eval(ei, anc.star_d(x))
            rhs = anc.star_d(anc.frame_act(i, x))
            rep.record("dorfman_rho_d", {"i": i, "coord": a}, vsub(lhs, rhs))
    return rep
