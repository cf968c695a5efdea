"""Seeded instance generators.

Every valid generator only builds structures that are guaranteed to satisfy
their axioms: semidirect products of 2-representations ``(∇, ∇, R_∇)`` on
``Id_E``, representation-type algebroids from flat connections,
bicrossproducts of catalog or embedded matched pairs, changes of splitting
by random φ, and standard or Drinfeld Courant algebroids.

A mutation adds ``+1`` to a single entry of one named table.  Skew tables
(the bracket) have their mirror entry adjusted so that skewness is kept.
"""

from __future__ import annotations

import dataclasses
from typing import Any, Dict, List, Optional, Tuple

from .anchored import Anchor, DullBracket, LinearConnection, zero_table
from .bundles import Bundle, Chart, HomField, VForm
from .catalog import abelian, double_ruth, sl2, sl2_matched_pair, so3, zero_matched_pair
from .courant import drinfeld_double, standard_courant, tangent_algebroid
from .exactpoly import Poly
from .lie2core import SplitLie2Data, check_split_lie2
from .matched import (TwoRepData, bicrossproduct, check_two_rep, dual_two_rep, embed_two_rep,
                      rep_lie2, semidirect_lie2)
from .rng import XorShift64Star, random_poly, random_vec
from .serialize import Instance

__all__ = ["GEN_KINDS", "MUTATION_TARGETS", "MAX_RANK", "MAX_DIM", "MAX_DEGREE",
           "GenerationError", "gen_instance", "random_phi", "mutate_split", "mutate_two_rep"]

MAX_RANK = 6
MAX_DIM = 3
MAX_DEGREE = 2

GEN_KINDS = ("semidirect", "rep_lie2", "bicross", "shift", "two_rep", "matched_pair",
             "courant", "lie_algebroid")

SPLIT_TABLES = ("anchor", "l", "bracket", "nabla", "omega")
TWO_REP_TABLES = ("partial", "nabla0", "nabla1", "R")
MUTATION_TARGETS = {"split_lie2": SPLIT_TABLES, "two_rep": TWO_REP_TABLES}

# how many random entries a mutation tries before settling for the first one
_MUTATION_TRIES = 12


class GenerationError(ValueError):
    """Unsupported kind, size out of bounds, or an impossible mutation."""


@dataclasses.dataclass(frozen=True)
class _Size:
    dim: int
    rank: int
    degree: int


def _size(dim: Optional[int], rank: Optional[int], degree: Optional[int]) -> _Size:
    s = _Size(1 if dim is None else dim, 2 if rank is None else rank,
              1 if degree is None else degree)
    if not 0 <= s.dim <= MAX_DIM:
        raise GenerationError(f"chart dimension must be in [0, {MAX_DIM}]")
    if not 1 <= s.rank <= MAX_RANK:
        raise GenerationError(f"rank must be in [1, {MAX_RANK}]")
    if not 0 <= s.degree <= MAX_DEGREE:
        raise GenerationError(f"coefficient degree must be in [0, {MAX_DEGREE}]")
    return s


def _base_algebroid(rng: XorShift64Star, s: _Size, budget: int) -> DullBracket:
    """Tangent algebroid on a positive-dimensional chart, else a 3-dim Lie algebra."""
    if s.dim > 0:
        return tangent_algebroid(Chart(s.dim))
    if budget >= 3:
        return rng.choice((so3, sl2, lambda label: abelian(3, label=label)))("A")
    return abelian(budget, label="A")


def _random_table(rng: XorShift64Star, n: int, r1: int, r2: int, r3: int, deg: int):
    return tuple(tuple(random_vec(rng, n, r3, deg) for _ in range(r2)) for _ in range(r1))


def _random_two_rep(rng: XorShift64Star, s: _Size, q_budget: int) -> TwoRepData:
    """``(∇, ∇, R_∇)`` on ``Id_E`` with total rank ``rank A + rank E ≤ q_budget``."""
    A = _base_algebroid(rng, s, q_budget - 1)
    ra = A.bundle.rank
    if ra + s.rank > q_budget:
        raise GenerationError(f"rank {s.rank} does not fit next to an algebroid of rank {ra}")
    E = Bundle("E", s.rank, A.bundle.chart)
    deg = s.degree if s.dim else 0
    return double_ruth(A, E, _random_table(rng, s.dim, ra, s.rank, s.rank, deg))


def _flat_connection(rng: XorShift64Star, A: DullBracket, rank: int, deg: int) -> LinearConnection:
    """Diagonal ``Γ_a = ∂_a f_j`` on a chart; adjoint plus trivial blocks on a point."""
    n, ra = A.bundle.dim, A.bundle.rank
    if ra + rank > MAX_RANK:
        raise GenerationError(f"rank {rank} does not fit next to an algebroid of rank {ra}")
    V = Bundle("V", rank, A.bundle.chart)
    G = [[[Poly.zero(n)] * rank for _ in range(rank)] for _ in range(ra)]
    if n:
        for j in range(rank):
            f = random_poly(rng, n, deg + 1)
            for a in range(ra):
                G[a][j][j] = f.partial(a)
    elif rank >= ra and rng.below(2):
        for a in range(ra):
            for j in range(ra):
                for k in range(ra):
                    G[a][j][k] = A.symbols[a][j][k]
    return LinearConnection(A.anchor, V, G)


def random_phi(rng: XorShift64Star, d: SplitLie2Data, deg: int = 1) -> VForm:
    n = d.n if deg else 0
    return VForm.build(2, d.Q, d.B.dual_bundle(),
                       lambda idx: random_vec(rng, n, d.B.rank, deg if n else 0))


def _catalog_pair(rng: XorShift64Star, s: _Size):
    pick = rng.below(4)
    if pick == 0:
        return sl2_matched_pair(), "sl2_matched_pair"
    if pick == 1:
        return zero_matched_pair(), "zero_matched_pair"
    t = _random_two_rep(rng, s, MAX_RANK)
    if pick == 2:
        return embed_two_rep(t), "embedded"
    return embed_two_rep(dual_two_rep(t)), "embedded_dual"


def gen_instance(kind: str, seed: int, dim: Optional[int] = None, rank: Optional[int] = None,
                 degree: Optional[int] = None, mutate: Optional[str] = None) -> Instance:
    """Deterministic instance for ``(kind, seed, size)``, optionally mutated."""
    if kind not in GEN_KINDS:
        raise GenerationError(f"unsupported generator kind {kind!r}; expected one of {list(GEN_KINDS)}")
    s = _size(dim, rank, degree)
    rng = XorShift64Star(seed)
    meta: Dict[str, Any] = {"source": "gen", "generator": kind, "seed": seed,
                            "size": {"dim": s.dim, "rank": s.rank, "degree": s.degree}}
    out_kind, payload = _generate(kind, rng, s, meta)
    if mutate is not None:
        targets = MUTATION_TARGETS.get(out_kind)
        if targets is None:
            raise GenerationError(f"generator {kind!r} produces {out_kind}, which has no mutation targets")
        if mutate not in targets:
            raise GenerationError(f"unknown mutation target {mutate!r} for {out_kind}; "
                                  f"expected one of {list(targets)}")
        if out_kind == "split_lie2":
            payload, where = mutate_split(payload, mutate, rng)
        else:
            payload, where = mutate_two_rep(payload, mutate, rng)
        meta["mutation"] = {"table": mutate, "entry": list(where)}
    name = f"gen-{kind}-{seed}" + (f"-mut-{mutate}" if mutate else "")
    return Instance(out_kind, name, payload, meta)


def _generate(kind: str, rng: XorShift64Star, s: _Size, meta: Dict[str, Any]):
    if kind == "semidirect":
        return "split_lie2", semidirect_lie2(_random_two_rep(rng, s, MAX_RANK), validate=False)
    if kind == "two_rep":
        return "two_rep", _random_two_rep(rng, s, MAX_RANK)
    if kind == "rep_lie2":
        A = _base_algebroid(rng, s, MAX_RANK)
        return "split_lie2", rep_lie2(A, _flat_connection(rng, A, s.rank, s.degree))
    if kind == "matched_pair":
        m, origin = _catalog_pair(rng, s)
        meta["origin"] = origin
        return "matched_pair", m
    if kind == "bicross":
        m, origin = _catalog_pair(rng, s)
        meta["origin"] = origin
        meta.update(split=m.A.bundle.rank, labels=[m.A.bundle.label, m.B.bundle.label],
                    c_label=m.C.label, duals=[m.A.bundle.dual, m.B.bundle.dual, m.C.dual])
        return "split_lie2", bicrossproduct(m)
    if kind == "shift":
        if rng.below(2):
            d = semidirect_lie2(_random_two_rep(rng, s, MAX_RANK), validate=False)
        else:
            A = _base_algebroid(rng, s, MAX_RANK)
            d = rep_lie2(A, _flat_connection(rng, A, s.rank, s.degree))
        return "shift", (d, random_phi(rng, d, s.degree))
    if kind == "courant":
        if s.dim > 0 and rng.below(2):
            return "courant", standard_courant(Chart(s.dim))
        g = rng.choice((so3, sl2))("g")
        dual = Bundle("g", 3, Chart(0), True)
        ab = DullBracket(Anchor.zero(dual), zero_table(0, 3, 3, 3), skew=True)
        return "courant", drinfeld_double(g, ab)
    # lie_algebroid
    if s.dim > 0 and rng.below(2):
        return "lie_algebroid", tangent_algebroid(Chart(s.dim))
    A = _base_algebroid(rng, _Size(0, s.rank, 0), MAX_RANK)
    return "lie_algebroid", (A, _flat_connection(rng, A, s.rank, 0))


# mutations --------------------------------------------------------------------

def _bumped_table(t, i: int, j: int, k: int, skew: bool = False):
    T = [[list(v) for v in row] for row in t]
    n = T[i][j][k].nvars
    T[i][j][k] = T[i][j][k] + Poly.const(n, 1)
    if skew:
        T[j][i][k] = -T[i][j][k]
    return T


def _split_candidates(d: SplitLie2Data, table: str) -> List[Tuple[int, ...]]:
    r, s, n = d.Q.rank, d.B.rank, d.n
    if table == "anchor":
        return [(i, a) for i in range(r) for a in range(n)]
    if table == "l":
        return [(t, u) for t in range(r) for u in range(s)]
    if table == "bracket":
        return [(i, j, k) for i in range(r) for j in range(i + 1, r) for k in range(r)]
    if table == "nabla":
        return [(i, j, k) for i in range(r) for j in range(s) for k in range(s)]
    return [(i, j, k, u) for i in range(r) for j in range(i + 1, r)
            for k in range(j + 1, r) for u in range(s)]


def _apply_split(d: SplitLie2Data, table: str, at: Tuple[int, ...]) -> SplitLie2Data:
    n = d.n
    one = Poly.const(n, 1)
    rho, bracket, nabla, l, omega = d.rho, d.bracket, d.nabla, d.l, d.omega
    if table == "anchor":
        i, a = at
        M = [list(row) for row in rho.matrix]
        M[i][a] = M[i][a] + one
        rho = Anchor(d.Q, M)
        bracket = DullBracket(rho, bracket.symbols, skew=True)
        nabla = LinearConnection(rho, d.B, nabla.symbols)
    elif table == "l":
        t, u = at
        M = [list(row) for row in l.matrix]
        M[t][u] = M[t][u] + one
        l = HomField(l.source, l.target, M)
    elif table == "bracket":
        bracket = DullBracket(rho, _bumped_table(bracket.symbols, *at, skew=True), skew=True)
    elif table == "nabla":
        nabla = LinearConnection(rho, d.B, _bumped_table(nabla.symbols, *at))
    else:
        key, u = at[:3], at[3]
        ent = dict(omega.entries)
        cur = list(ent.get(key, tuple(Poly.zero(n) for _ in range(d.B.rank))))
        cur[u] = cur[u] + one
        ent[key] = tuple(cur)
        omega = VForm(3, d.Q, d.B.dual_bundle(), ent)
    return SplitLie2Data(d.Q, d.B, rho, l, bracket, nabla, omega)


def _pick(rng: XorShift64Star, cands: List[Tuple[int, ...]], build, fails) -> Tuple[Any, Tuple[int, ...]]:
    """Try random entries and keep the first whose mutant fails its checker;
    if no tried entry makes a difference, keep the first one drawn."""
    if not cands:
        raise GenerationError("the chosen table has no entries for this instance")
    order = list(cands)
    first = None
    for _ in range(min(_MUTATION_TRIES, len(order))):
        at = order.pop(rng.below(len(order)))
        out = build(at)
        if first is None:
            first = (out, at)
        if fails(out):
            return out, at
    return first


def mutate_split(d: SplitLie2Data, table: str, rng: XorShift64Star):
    if table not in SPLIT_TABLES:
        raise GenerationError(f"unknown split Lie 2-algebroid table {table!r}")
    return _pick(rng, _split_candidates(d, table), lambda at: _apply_split(d, table, at),
                 lambda x: not check_split_lie2(x).passed)


def mutate_two_rep(t: TwoRepData, table: str, rng: XorShift64Star):
    if table not in TWO_REP_TABLES:
        raise GenerationError(f"unknown 2-representation table {table!r}")
    n, ra, r0, r1 = t.algebroid.bundle.dim, t.algebroid.bundle.rank, t.E0.rank, t.E1.rank
    if table == "partial":
        cands = [(i, j) for i in range(r1) for j in range(r0)]
    elif table == "nabla0":
        cands = [(i, j, k) for i in range(ra) for j in range(r0) for k in range(r0)]
    elif table == "nabla1":
        cands = [(i, j, k) for i in range(ra) for j in range(r1) for k in range(r1)]
    else:
        cands = [(i, j, u) for i in range(ra) for j in range(i + 1, ra) for u in range(r0 * r1)]

    def build(at):
        one = Poly.const(n, 1)
        if table == "partial":
            M = [list(row) for row in t.partial.matrix]
            M[at[0]][at[1]] = M[at[0]][at[1]] + one
            return dataclasses.replace(t, partial=HomField(t.E0, t.E1, M))
        if table == "nabla0":
            return dataclasses.replace(t, nabla0=LinearConnection(
                t.algebroid.anchor, t.E0, _bumped_table(t.nabla0.symbols, *at)))
        if table == "nabla1":
            return dataclasses.replace(t, nabla1=LinearConnection(
                t.algebroid.anchor, t.E1, _bumped_table(t.nabla1.symbols, *at)))
        ent = dict(t.R.entries)
        key, u = at[:2], at[2]
        cur = list(ent.get(key, tuple(Poly.zero(n) for _ in range(t.R.value.rank))))
        cur[u] = cur[u] + one
        ent[key] = tuple(cur)
        return dataclasses.replace(t, R=VForm(2, t.R.arg, t.R.value, ent))

    return _pick(rng, cands, build, lambda x: not check_two_rep(x).passed)
