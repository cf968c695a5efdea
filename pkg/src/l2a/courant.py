"""Courant algebroids with pairing in a bundle V, their constructors, the
adjoint split Lie 2-algebroid and the fat Courant algebroid.

A :class:`CourantData` stores frame symbols only:

* ``gram[u][w]``: the V-valued pairing ``⟨e_u, e_w⟩`` (a vector of rank V),
* ``symbols[u][w]``: ``⟦e_u, e_w⟧`` (not assumed skew),
* ``rho_tilde``: the derivation ``ρ̃(e)`` of V, stored as an E-connection
  on V whose anchor is ``ρ``.

General sections are bracketed through the extension forced by (CA2) in the
right slot and (CA3) in the left slot.  The map D is defined by
``⟨Dv, e⟩ = ρ̃(e) v`` and computed by solving against the constant Gram
matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .anchored import (
    Anchor, DullBracket, LinearConnection, vf_apply, vf_bracket,
    zero_table, curvature_vec,
)
from .bundles import (
    Bundle, BundleMismatch, Chart, HomField, VForm, Vec, basis,
    trivial_line, vadd, vdot, vis_zero, vneg, vscale, vsub, vzero,
)
from .exactpoly import Poly
from .lie2core import SplitLie2Data, check_split_lie2
from .matched import InvalidInput, check_lie_algebroid
from .report import Report
from .rng import XorShift64Star, random_vec

__all__ = [
    "CourantData", "PairingError", "check_courant", "courant_bracket", "courant_pairing",
    "standard_courant", "drinfeld_double", "adjoint_lie2", "basic_curvature",
    "basic_curvature_expanded", "fat_courant", "fat_bracket_formula",
    "fat_identification", "transport_courant", "FAT_SIGN", "tangent_algebroid",
    "COURANT_AXIOMS", "SCALAR_AXIOMS",
]

COURANT_AXIOMS = ["pairing_symmetric", "D_defined", "CA1", "CA2", "CA3", "CA4"]
SCALAR_AXIOMS = ["rho_rho_star", "roytenberg_lie", "roytenberg_ip"]


class PairingError(ValueError):
    """The Gram matrix is not constant, degenerate, or D is not solvable."""


def tangent_algebroid(chart: Chart, label: str = "TM") -> DullBracket:
    n = chart.dim
    T = Bundle(label, n, chart)
    anc = Anchor(T, tuple(basis(n, n, a) for a in range(n)))
    return DullBracket(anc, zero_table(n, n, n, n), skew=True)


class _Solver:
    """Solve ``Σ_u X_u gram[u][w] = Ξ[w]`` for all ``w`` (V-vector equations)."""

    def __init__(self, gram, r: int, s: int, n: int) -> None:
        self.r, self.s, self.n = r, s, n
        rows = []
        for w in range(r):
            for k in range(s):
                row = []
                for u in range(r):
                    p = gram[u][w][k]
                    if not p.is_constant():
                        raise PairingError("the Gram matrix must be constant in the chosen frame")
                    row.append(Fraction(p.constant_term()))
                rows.append(row)
        m = len(rows)
        aug = [rows[i] + [Fraction(int(i == j)) for j in range(m)] for i in range(m)]
        pivots = []
        row = 0
        for col in range(r):
            piv = next((i for i in range(row, m) if aug[i][col] != 0), None)
            if piv is None:
                continue
            aug[row], aug[piv] = aug[piv], aug[row]
            inv = 1 / aug[row][col]
            aug[row] = [x * inv for x in aug[row]]
            for i in range(m):
                if i != row and aug[i][col] != 0:
                    f = aug[i][col]
                    aug[i] = [a - f * b for a, b in zip(aug[i], aug[row])]
            pivots.append(col)
            row += 1
        self.injective = len(pivots) == r
        self.left = {pivots[i]: aug[i][r:] for i in range(len(pivots))}
        self.consistency = [aug[i][r:] for i in range(len(pivots), m)]

    def solve(self, xi: Sequence[Vec]) -> Vec:
        flat = [p for w in range(self.r) for p in xi[w]]
        n = self.n

        def comb(coeffs):
            acc = Poly.zero(n)
            for c, p in zip(coeffs, flat):
                if c and p.terms:
                    acc = acc + p.scale(c)
            return acc

        if not self.injective:
            raise PairingError("the pairing is degenerate; D is not determined")
        for crow in self.consistency:
            if comb(crow).terms:
                raise PairingError("no section pairs to the requested values")
        return tuple(comb(self.left[u]) for u in range(self.r))


@dataclass(frozen=True)
class CourantData:
    E: Bundle
    V: Bundle
    anchor: Anchor
    gram: Tuple[Tuple[Vec, ...], ...]
    symbols: Tuple[Tuple[Vec, ...], ...]
    rho_tilde: LinearConnection

    def __post_init__(self) -> None:
        E, V = self.E, self.V
        r, s = E.rank, V.rank
        if E.chart != V.chart:
            raise BundleMismatch("E and V over different charts")
        if self.anchor.bundle != E or self.rho_tilde.anchor != self.anchor or \
                self.rho_tilde.module != V:
            raise BundleMismatch("anchor and ρ̃ must live on E, with ρ̃ acting on V")
        g = tuple(tuple(tuple(v) for v in row) for row in self.gram)
        c = tuple(tuple(tuple(v) for v in row) for row in self.symbols)
        if len(g) != r or any(len(row) != r or any(len(v) != s for v in row) for row in g):
            raise BundleMismatch("the Gram table must be rank(E) × rank(E) of V-vectors")
        if len(c) != r or any(len(row) != r or any(len(v) != r for v in row) for row in c):
            raise BundleMismatch("the bracket table must be rank(E) × rank(E) of E-vectors")
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "symbols", c)
        object.__setattr__(self, "_solver", None)

    @property
    def n(self) -> int:
        return self.E.dim

    @property
    def is_scalar(self) -> bool:
        return self.V.rank == 1 and all(p.is_zero() for row in self.rho_tilde.symbols
                                        for v in row for p in v)

    def solver(self) -> _Solver:
        sv = object.__getattribute__(self, "_solver")
        if sv is None:
            sv = _Solver(self.gram, self.E.rank, self.V.rank, self.n)
            object.__setattr__(self, "_solver", sv)
        return sv

    @property
    def nondegenerate(self) -> bool:
        try:
            return self.solver().injective
        except PairingError:
            return False

    def D(self, v: Vec) -> Vec:
        r = self.E.rank
        xi = [self.rho_tilde.eval(basis(self.n, r, w), v) for w in range(r)]
        return self.solver().solve(xi)

    def K(self, f: Poly, v: Vec) -> Vec:
        """``D(f v) − f D(v)``, the section pairing to ``(ρ(e) f) v``."""
        r = self.E.rank
        if not f.terms or vis_zero(v) or self.n == 0:
            return vzero(self.n, r)
        xi = [vscale(self.anchor.frame_act(w, f), v) for w in range(r)]
        return self.solver().solve(xi)


def courant_pairing(c: CourantData, u: Vec, w: Vec) -> Vec:
    n, s = c.n, c.V.rank
    acc = vzero(n, s)
    for a, fa in enumerate(u):
        if not fa.terms:
            continue
        for b, gb in enumerate(w):
            if gb.terms:
                g = c.gram[a][b]
                if not vis_zero(g):
                    acc = vadd(acc, vscale(fa * gb, g))
    return acc


def courant_bracket(c: CourantData, u: Vec, w: Vec) -> Vec:
    n, r = c.n, c.E.rank
    acc = list(vzero(n, r))
    for a, fa in enumerate(u):
        if not fa.terms:
            continue
        for b, gb in enumerate(w):
            if gb.terms:
                fg = fa * gb
                for k, p in enumerate(c.symbols[a][b]):
                    if p.terms:
                        acc[k] = acc[k] + fg * p
    out = tuple(acc)
    if n:
        X, Y = c.anchor.vector_field(u), c.anchor.vector_field(w)
        out = vadd(out, tuple(vf_apply(X, g) for g in w))
        out = vsub(out, tuple(vf_apply(Y, f) for f in u))
        for a, fa in enumerate(u):
            if fa.terms:
                out = vadd(out, c.K(fa, courant_pairing(c, basis(n, r, a), w)))
    return out


def _rho_tilde_commutator(c: CourantData, u: Vec, w: Vec, v: Vec) -> Vec:
    rt = c.rho_tilde.eval
    return vsub(rt(u, rt(w, v)), rt(w, rt(u, v)))


def _check_triple(c: CourantData, rep: Report, w: Dict[str, int], e1: Vec, e2: Vec,
                  e3: Vec) -> None:
    br = lambda x, y: courant_bracket(c, x, y)  # noqa: E731
    lhs = br(e1, br(e2, e3))
    rhs = vadd(br(br(e1, e2), e3), br(e2, br(e1, e3)))
    rep.record("CA1", w, vsub(lhs, rhs))
    lhs = c.rho_tilde.eval(e1, courant_pairing(c, e2, e3))
    rhs = vadd(courant_pairing(c, br(e1, e2), e3), courant_pairing(c, e2, br(e1, e3)))
    rep.record("CA2", w, vsub(lhs, rhs))


def _check_pair(c: CourantData, rep: Report, w: Dict[str, int], e1: Vec, e2: Vec) -> None:
    n, s = c.n, c.V.rank
    sym = vadd(courant_bracket(c, e1, e2), courant_bracket(c, e2, e1))
    rep.record("CA3", w, vsub(sym, c.D(courant_pairing(c, e1, e2))))
    b12 = courant_bracket(c, e1, e2)
    X = c.anchor.vector_field(b12)
    fields = vf_bracket(c.anchor.vector_field(e1), c.anchor.vector_field(e2))
    rep.record("CA4", w, vsub(X, fields))
    for k in range(s):
        v = basis(n, s, k)
        res = vsub(c.rho_tilde.eval(b12, v), _rho_tilde_commutator(c, e1, e2, v))
        rep.record("CA4", dict(w, v=k), res)


def _one_forms(n: int) -> List[Tuple[str, Vec]]:
    """``dx_a`` and ``x_b dx_a`` for all coordinates."""
    out = []
    for a in range(n):
        out.append((f"dx{a}", basis(n, n, a)))
        for b in range(n):
            theta = list(vzero(n, n))
            theta[a] = Poly.var(n, b)
            out.append((f"x{b}dx{a}", tuple(theta)))
    return out


def _lie_derivative_form(X: Vec, theta: Vec) -> Vec:
    n = len(X)
    return tuple(vf_apply(X, theta[a]) + sum((theta[b] * X[b].partial(a) for b in range(n)),
                                            Poly.zero(n)) for a in range(n))


def _ip_d(X: Vec, theta: Vec) -> Vec:
    n = len(X)
    return tuple(sum((X[b] * (theta[a].partial(b) - theta[b].partial(a)) for b in range(n)),
                     Poly.zero(n)) for a in range(n))


def _rho_star(c: CourantData, theta: Vec) -> Vec:
    """``β⁻¹ ρ* θ`` for a scalar pairing."""
    cov = c.anchor.star(theta)
    return c.solver().solve([(p,) for p in cov])


def check_courant(c: CourantData, samples: int = 0, seed: int = 1,
                  max_deg: int = 2) -> Report:
    """(CA1)–(CA4) on frame tuples plus ``samples`` random section triples.

    Frame coverage: CA1 on all ordered triples, CA2 on ``(a, b ≤ c)``, CA3 on
    ``a ≤ b``, CA4 on ordered pairs acting on functions and V-frames.  For a
    scalar pairing the Roytenberg identities are checked on the coordinate
    1-forms ``dx_a`` and ``x_b dx_a``.
    """
    axioms = list(COURANT_AXIOMS) + (list(SCALAR_AXIOMS) if c.is_scalar else [])
    rep = Report("check_courant", axioms)
    E = c.E
    n, r = c.n, E.rank
    for a in range(r):
        for b in range(a, r):
            rep.record("pairing_symmetric", {"a": a, "b": b}, vsub(c.gram[a][b], c.gram[b][a]))
    try:
        solver = c.solver()
        if not solver.injective and c.V.rank:
            raise PairingError("the pairing is degenerate; D is not determined")
        for k in range(c.V.rank):
            c.D(basis(n, c.V.rank, k))
    except PairingError as exc:
        rep.violations.append(_violation("D_defined", str(exc)))
        return rep
    e = [basis(n, r, i) for i in range(r)]
    for a in range(r):
        for b in range(r):
            for d in range(r):
                br = lambda x, y: courant_bracket(c, x, y)  # noqa: E731
                lhs = br(e[a], br(e[b], e[d]))
                rhs = vadd(br(br(e[a], e[b]), e[d]), br(e[b], br(e[a], e[d])))
                rep.record("CA1", {"a": a, "b": b, "c": d}, vsub(lhs, rhs))
        for b in range(r):
            for d in range(b, r):
                lhs = c.rho_tilde.eval(e[a], courant_pairing(c, e[b], e[d]))
                rhs = vadd(courant_pairing(c, courant_bracket(c, e[a], e[b]), e[d]),
                           courant_pairing(c, e[b], courant_bracket(c, e[a], e[d])))
                rep.record("CA2", {"a": a, "b": b, "c": d}, vsub(lhs, rhs))
    for a in range(r):
        for b in range(r):
            w = {"a": a, "b": b}
            if a <= b:
                sym = vadd(courant_bracket(c, e[a], e[b]), courant_bracket(c, e[b], e[a]))
                rep.record("CA3", w, vsub(sym, c.D(courant_pairing(c, e[a], e[b]))))
            b12 = courant_bracket(c, e[a], e[b])
            fields = vf_bracket(c.anchor.matrix[a], c.anchor.matrix[b])
            rep.record("CA4", w, vsub(c.anchor.vector_field(b12), fields))
            for k in range(c.V.rank):
                v = basis(n, c.V.rank, k)
                res = vsub(c.rho_tilde.eval(b12, v), _rho_tilde_commutator(c, e[a], e[b], v))
                rep.record("CA4", dict(w, v=k), res)
    if c.is_scalar:
        _check_scalar(c, rep, [("frame", i, e[i]) for i in range(r)])
    rng = XorShift64Star(seed)
    for t in range(samples):
        x, y, z = (random_vec(rng, n, r, max_deg) for _ in range(3))
        w = {"sample": t}
        _check_triple(c, rep, w, x, y, z)
        _check_pair(c, rep, w, x, y)
        if c.is_scalar:
            _check_scalar(c, rep, [("sample", t, x)])
    return rep


def _violation(axiom: str, msg: str):
    from .report import Violation
    return Violation(axiom, (), msg)


def _check_scalar(c: CourantData, rep: Report, sections) -> None:
    n = c.n
    forms = _one_forms(n)
    for a in range(n):
        rep.record("rho_rho_star", {"dx": a},
                   c.anchor.vector_field(_rho_star(c, basis(n, n, a))))
    for kind, idx, sec in sections:
        X = c.anchor.vector_field(sec)
        for fi, (name, theta) in enumerate(forms):
            w = {kind: idx, "form": fi}
            rs = _rho_star(c, theta)
            lhs = courant_bracket(c, sec, rs)
            rep.record("roytenberg_lie", w, vsub(lhs, _rho_star(c, _lie_derivative_form(X, theta))))
            lhs = courant_bracket(c, rs, sec)
            rep.record("roytenberg_ip", w, vadd(lhs, _rho_star(c, _ip_d(X, theta))))


# constructors --------------------------------------------------------------

def _scalar_courant(E: Bundle, anchor: Anchor, gram, symbols) -> CourantData:
    V = trivial_line(E.chart)
    return CourantData(E, V, anchor, tuple(tuple((p,) for p in row) for row in gram),
                       symbols, LinearConnection.zero(anchor, V))


def _canonical_gram(n: int, k: int):
    z, one = Poly.zero(n), Poly.const(n, 1)
    return tuple(tuple(one if (u < k) != (w < k) and abs(u - w) == k else z
                       for w in range(2 * k)) for u in range(2 * k))


def standard_courant(chart: Chart) -> CourantData:
    """``TM ⊕ T*M`` with ``⟦X+ξ, Y+η⟧ = [X,Y] + L_Xη − i_Y dξ``.

    Frames: ``∂_0..∂_{n-1}`` then ``dx_0..dx_{n-1}``; on coordinate frames
    every bracket vanishes, so the structure lives in the anchor and pairing.
    """
    n = chart.dim
    E = Bundle("E", 2 * n, chart)
    anc = Anchor(E, tuple(basis(n, n, a) for a in range(n)) +
                 tuple(vzero(n, n) for _ in range(n)))
    return _scalar_courant(E, anc, _canonical_gram(n, n), zero_table(n, 2 * n, 2 * n, 2 * n))


def _lie_deriv_dual(alg: DullBracket, a: Vec, alpha: Vec) -> Vec:
    """``⟨L_a α, a'⟩ = ρ(a)⟨α, a'⟩ − ⟨α, [a, a']⟩`` on the dual bundle."""
    n, r = alg.bundle.dim, alg.bundle.rank
    out = []
    for k in range(r):
        ek = basis(n, r, k)
        out.append(alg.anchor.act(a, alpha[k]) - vdot(alpha, alg.eval(a, ek), n))
    return tuple(out)


def _ip_d_dual(alg: DullBracket, a: Vec, alpha: Vec) -> Vec:
    """``i_a d_A α``: component k is ``(d_A α)(a, e_k)``."""
    n, r = alg.bundle.dim, alg.bundle.rank
    out = []
    pa = vdot(alpha, a, n)
    for k in range(r):
        ek = basis(n, r, k)
        out.append(alg.anchor.act(a, alpha[k]) - alg.anchor.frame_act(k, pa)
                   - vdot(alpha, alg.eval(a, ek), n))
    return tuple(out)


def drinfeld_double(A: DullBracket, Astar: DullBracket, validate: bool = True) -> CourantData:
    """``A ⊕ A*`` with the Lie bialgebroid double bracket and pairing
    ``α1(a2) + α2(a1)``; frames of A first, then the dual frames."""
    if Astar.bundle.rank != A.bundle.rank or Astar.bundle.chart != A.bundle.chart:
        raise BundleMismatch("A* must be dual to A")
    if validate:
        for name, alg in (("A", A), ("A*", Astar)):
            rep = check_lie_algebroid(alg)
            if not rep.passed:
                raise InvalidInput(f"{name} is not a Lie algebroid: fails {rep.failed_axioms()}")
    n, k = A.bundle.dim, A.bundle.rank
    E = Bundle("E", 2 * k, A.bundle.chart)
    anc = Anchor(E, A.anchor.matrix + Astar.anchor.matrix)

    def br(i: int, j: int) -> Vec:
        a1, al1 = _frame_split(n, k, i)
        a2, al2 = _frame_split(n, k, j)
        pa = vadd(A.eval(a1, a2), vsub(_lie_deriv_dual(Astar, al1, a2), _ip_d_dual(Astar, al2, a1)))
        pb = vadd(Astar.eval(al1, al2), vsub(_lie_deriv_dual(A, a1, al2), _ip_d_dual(A, a2, al1)))
        return tuple(pa) + tuple(pb)

    symbols = tuple(tuple(br(i, j) for j in range(2 * k)) for i in range(2 * k))
    return _scalar_courant(E, anc, _canonical_gram(n, k), symbols)


def _frame_split(n: int, k: int, i: int) -> Tuple[Vec, Vec]:
    v = basis(n, 2 * k, i)
    return v[:k], v[k:]


# adjoint split Lie 2-algebroid ---------------------------------------------

def _metric_report(c: CourantData, nabla: LinearConnection) -> Report:
    rep = Report("metric_connection", ["metric"])
    n, r = c.n, c.E.rank
    for a in range(n):
        X = basis(n, n, a)
        for i in range(r):
            for j in range(i, r):
                ei, ej = basis(n, r, i), basis(n, r, j)
                lhs = vf_apply(X, c.gram[i][j][0])
                rhs = courant_pairing(c, nabla.eval(X, ei), ej)[0] + \
                    courant_pairing(c, ei, nabla.eval(X, ej))[0]
                rep.record("metric", {"x": a, "i": i, "j": j}, lhs - rhs)
    return rep


@dataclass(frozen=True)
class _AdjointParts:
    c: CourantData
    nabla: LinearConnection

    def beta_inv(self, cov: Vec) -> Vec:
        return self.c.solver().solve([(p,) for p in cov])

    def pair(self, u: Vec, w: Vec) -> Poly:
        return courant_pairing(self.c, u, w)[0]

    def dull(self, u: Vec, w: Vec) -> Vec:
        """``⟦u, w⟧_Δ = ⟦u, w⟧ − β⁻¹ρ*⟨∇_· u, w⟩``."""
        n = self.c.n
        theta = tuple(self.pair(self.nabla.eval(basis(n, n, a), u), w) for a in range(n))
        return vsub(courant_bracket(self.c, u, w), self.beta_inv(self.c.anchor.star(theta)))

    def bas(self, e: Vec, X: Vec) -> Vec:
        """``∇^bas_e X = [ρ(e), X] + ρ(∇_X e)``."""
        return vadd(vf_bracket(self.c.anchor.vector_field(e), X),
                    self.c.anchor.vector_field(self.nabla.eval(X, e)))


def basic_curvature(c: CourantData, nabla: LinearConnection, e1: Vec, e2: Vec, X: Vec) -> Vec:
    """Basic curvature from its defining display, with the Courant bracket."""
    p = _AdjointParts(c, nabla)
    n, r = c.n, c.E.rank
    br = lambda u, w: courant_bracket(c, u, w)  # noqa: E731
    nX = lambda u: nabla.eval(X, u)  # noqa: E731
    out = vneg(nX(br(e1, e2)))
    out = vadd(out, br(nX(e1), e2))
    out = vadd(out, br(e1, nX(e2)))
    out = vadd(out, nabla.eval(p.bas(e2, X), e1))
    out = vsub(out, nabla.eval(p.bas(e1, X), e2))
    cov = tuple(p.pair(nabla.eval(p.bas(basis(n, r, k), X), e1), e2) for k in range(r))
    return vsub(out, p.beta_inv(cov))


def basic_curvature_expanded(c: CourantData, nabla: LinearConnection, e1: Vec, e2: Vec,
                             X: Vec) -> Vec:
    """The same tensor through the skew dull bracket and ``R_∇``."""
    p = _AdjointParts(c, nabla)
    n = c.n
    T = tangent_algebroid(c.E.chart)
    nX = lambda u: nabla.eval(X, u)  # noqa: E731
    out = vneg(nX(p.dull(e1, e2)))
    out = vadd(out, p.dull(nX(e1), e2))
    out = vadd(out, p.dull(e1, nX(e2)))
    out = vadd(out, nabla.eval(p.bas(e2, X), e1))
    out = vsub(out, nabla.eval(p.bas(e1, X), e2))
    theta = tuple(p.pair(curvature_vec(nabla, T, X, basis(n, n, a), e1), e2) for a in range(n))
    return vsub(out, p.beta_inv(c.anchor.star(theta)))


def adjoint_lie2(c: CourantData, nabla: LinearConnection, validate: bool = True) -> SplitLie2Data:
    """Split Lie 2-algebroid on ``Q = E`` with ``B = TM``, ``l = β⁻¹ρ*``."""
    if not c.is_scalar:
        raise InvalidInput("the adjoint construction needs a scalar pairing")
    T = tangent_algebroid(c.E.chart)
    if nabla.anchor != T.anchor or nabla.module != c.E:
        raise BundleMismatch("∇ must be a TM-connection on E")
    if validate:
        rep = _metric_report(c, nabla)
        if not rep.passed:
            raise InvalidInput("∇ does not preserve the pairing")
        rep = check_courant(c)
        if not rep.passed:
            raise InvalidInput(f"not a Courant algebroid: fails {rep.failed_axioms()}")
    E, TM = c.E, T.bundle
    n, r = c.n, E.rank
    p = _AdjointParts(c, nabla)
    e = [basis(n, r, i) for i in range(r)]
    x = [basis(n, n, a) for a in range(n)]
    C = tuple(tuple(p.dull(e[i], e[j]) for j in range(r)) for i in range(r))
    bracket = DullBracket(c.anchor, C, skew=True)
    G = tuple(tuple(p.bas(e[i], x[a]) for a in range(n)) for i in range(r))
    nb = LinearConnection(c.anchor, TM, G)
    cols = [p.beta_inv(c.anchor.star(x[a])) for a in range(n)]
    l = HomField(TM.dual_bundle(), E, tuple(tuple(cols[a][i] for a in range(n)) for i in range(r)))

    def omega_entry(idx):
        i, j, k = idx
        return tuple(p.pair(basic_curvature(c, nabla, e[i], e[j], x[a]), e[k]) for a in range(n))

    omega = VForm.build(3, E, TM.dual_bundle(), omega_entry)
    return SplitLie2Data(E, TM, c.anchor, l, bracket, nb, omega)


# fat Courant algebroid -----------------------------------------------------

@dataclass(frozen=True)
class _Fat:
    d: SplitLie2Data

    @property
    def r(self) -> int:
        return self.d.Q.rank

    @property
    def s(self) -> int:
        return self.d.B.rank

    def split(self, v: Vec) -> Tuple[Vec, List[List[Poly]]]:
        r, s = self.r, self.s
        return v[:r], [[v[r + a * s + j] for j in range(s)] for a in range(r)]

    def join(self, q: Vec, phi: Sequence[Sequence[Poly]]) -> Vec:
        return tuple(q) + tuple(phi[a][j] for a in range(self.r) for j in range(self.s))

    def apply(self, phi, b: Vec) -> Vec:
        """``φ(b) ∈ Q*``."""
        n = self.d.n
        return tuple(vdot(phi[a], b, n) for a in range(self.r))

    def star(self, phi, q: Vec) -> Vec:
        """``φ*(q) ∈ B*``: component j is ``φ(b_j)(q)``."""
        n = self.d.n
        return tuple(vdot([phi[a][j] for a in range(self.r)], q, n) for j in range(self.s))

    def from_cols(self, cols: Sequence[Vec]) -> List[List[Poly]]:
        """The map sending ``b_j`` to ``cols[j] ∈ Q*``."""
        return [[cols[j][a] for j in range(self.s)] for a in range(self.r)]

    def nabla_star_dot(self, beta: Vec) -> List[List[Poly]]:
        """``∇*_· β`` as the map ``b ↦ (q ↦ ⟨∇*_q β, b⟩)``."""
        d, n = self.d, self.d.n
        nd = d.nabla_dual
        return [list(nd.eval(basis(n, self.r, a), beta)) for a in range(self.r)]

    def diamond(self, q: Vec, phi) -> List[List[Poly]]:
        """``(◊_q φ)(b) = Δ_q(φ(b)) − φ(∇_q b)``."""
        d, n = self.d, self.d.n
        dc = d.dorfman
        cols = []
        for j in range(self.s):
            bj = basis(n, self.s, j)
            cols.append(vsub(dc.eval(q, self.apply(phi, bj)), self.apply(phi, d.nabla.eval(q, bj))))
        return self.from_cols(cols)

    def compose3(self, phi2, phi1) -> List[List[Poly]]:
        """``φ2 ∘ ∂_B ∘ φ1``."""
        d, n = self.d, self.d.n
        cols = [self.apply(phi2, d.dl_vec(self.apply(phi1, basis(n, self.s, j))))
                for j in range(self.s)]
        return self.from_cols(cols)

    def r_omega(self, q1: Vec, q2: Vec) -> List[List[Poly]]:
        d, n = self.d, self.d.n
        return self.from_cols([d.omega_contract(q1, q2, basis(n, self.s, j))
                               for j in range(self.s)])


def _madd(*ms) -> List[List[Poly]]:
    out = [list(row) for row in ms[0]]
    for m in ms[1:]:
        for a, row in enumerate(m):
            for j, p in enumerate(row):
                out[a][j] = out[a][j] + p
    return out


def _mneg(m) -> List[List[Poly]]:
    return [[-p for p in row] for row in m]


def fat_bracket_formula(d: SplitLie2Data, u: Vec, w: Vec) -> Vec:
    """Closed-form fat bracket on arbitrary sections of ``Q ⊕ Hom(B, Q*)``.

    The Q-part is ``⟦q1, q2⟧ + l(φ1*(q2))``.  The curvature term enters as
    ``−R_ω(q1, q2)`` with ``R_ω(q1, q2) b = ω(q1, q2, ·)(b)``; with ``+R_ω``
    (CA4) fails whenever ``R_∇ ≠ 0``.
    """
    f = _Fat(d)
    q1, p1 = f.split(u)
    q2, p2 = f.split(w)
    beta = f.star(p1, q2)
    q = vadd(d.bracket.eval(q1, q2), d.l_vec(beta))
    phi = _madd(f.diamond(q1, p2), _mneg(f.diamond(q2, p1)), f.nabla_star_dot(beta),
                f.compose3(p2, p1), _mneg(f.compose3(p1, p2)), _mneg(f.r_omega(q1, q2)))
    return f.join(q, phi)


def fat_courant(d: SplitLie2Data, validate: bool = True) -> CourantData:
    """Courant algebroid on ``E = Q ⊕ Hom(B, Q*)`` with pairing in ``B*``.

    Frame ``r + a·rank(B) + j`` is the map ``b_j ↦ ε_a``.
    """
    if validate:
        rep = check_split_lie2(d)
        if not rep.passed:
            raise InvalidInput(f"not a split Lie 2-algebroid: fails {rep.failed_axioms()}")
    f = _Fat(d)
    n, r, s = d.n, f.r, f.s
    m = r + r * s
    E = Bundle("E", m, d.chart)
    V = d.B.dual_bundle()
    anc = Anchor(E, d.rho.matrix + tuple(vzero(n, n) for _ in range(r * s)))
    frames = [basis(n, m, u) for u in range(m)]

    def pairing(u: Vec, w: Vec) -> Vec:
        q1, p1 = f.split(u)
        q2, p2 = f.split(w)
        return vadd(f.star(p1, q2), f.star(p2, q1))

    gram = tuple(tuple(pairing(frames[u], frames[w]) for w in range(m)) for u in range(m))
    symbols = tuple(tuple(fat_bracket_formula(d, frames[u], frames[w]) for w in range(m))
                    for u in range(m))
    nd = d.nabla_dual

    def rho_t(u: int, k: int) -> Vec:
        q, phi = f.split(frames[u])
        beta = basis(n, s, k)
        return vadd(nd.eval(q, beta), f.star(phi, d.l_vec(beta)))

    rt = LinearConnection(anc, V, tuple(tuple(rho_t(u, k) for k in range(s)) for u in range(m)))
    return CourantData(E, V, anc, gram, symbols, rt)


# ψ ↦ ψ + FAT_SIGN·φ_q carries the fat frames of the shifted splitting to
# those of the original one
FAT_SIGN = -1


def fat_identification(d: SplitLie2Data, phi: VForm, inverse: bool = False) -> HomField:
    """``(q, ψ) ↦ (q, ψ − φ_q)`` with ``φ_q(b) = ⟨φ(q, ·), b⟩``.

    Maps the fat bundle of ``shift_splitting(d, φ)`` to that of ``d``; with
    ``inverse`` the sign of the correction is flipped.
    """
    f = _Fat(d)
    n, r, s = d.n, f.r, f.s
    m = r + r * s
    E = Bundle("E", m, d.chart)
    sign = -FAT_SIGN if inverse else FAT_SIGN
    cols = []
    for u in range(m):
        v = list(basis(n, m, u))
        if u < r:
            for a in range(r):
                val = phi.frame_value((u, a))
                for j in range(s):
                    v[r + a * s + j] = v[r + a * s + j] + (val[j] if sign > 0 else -val[j])
        cols.append(tuple(v))
    return HomField(E, E, tuple(tuple(cols[u][t] for u in range(m)) for t in range(m)))


def transport_courant(c: CourantData, psi: HomField, psi_inv: HomField) -> CourantData:
    """Structure on the frames ``e_u`` obtained by pulling back along ``ψ``."""
    n, m = c.n, c.E.rank
    cols = [psi.column(u) for u in range(m)]
    gram = tuple(tuple(courant_pairing(c, cols[u], cols[w]) for w in range(m)) for u in range(m))
    symbols = tuple(tuple(psi_inv.apply_vec(courant_bracket(c, cols[u], cols[w]))
                          for w in range(m)) for u in range(m))
    anc = Anchor(c.E, tuple(c.anchor.vector_field(cols[u]) for u in range(m)))
    # V-frames are constant, so ρ̃(ψe_u)(v_k) is already the symbol
    s = c.V.rank
    rt = tuple(tuple(c.rho_tilde.eval(cols[u], basis(n, s, k)) for k in range(s))
               for u in range(m))
    return CourantData(c.E, c.V, anc, gram, symbols, LinearConnection(anc, c.V, rt))
