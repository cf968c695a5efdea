"""Trivial vector bundles over a polynomial chart, sections, forms, bundle maps.

Internally most algorithms work on plain tuples of :class:`Poly` ("vectors");
the classes here add bundle bookkeeping at the public boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .exactpoly import Poly, Rational

Vec = Tuple[Poly, ...]

__all__ = [
    "Chart", "Bundle", "Section", "VForm", "HomField", "BundleMismatch",
    "section_pairing", "form_eval", "hom_apply", "hom_bundle", "trivial_line",
    "vzero", "vadd", "vsub", "vneg", "vscale", "vrat", "vis_zero", "vdot", "basis",
    "perm_sign",
]


class BundleMismatch(ValueError):
    """Operands live on different bundles or charts."""


@dataclass(frozen=True)
class Chart:
    dim: int

    def __post_init__(self) -> None:
        if self.dim < 0:
            raise ValueError("chart dimension must be nonnegative")

    @property
    def coordinate_names(self) -> Tuple[str, ...]:
        return tuple(f"x{i}" for i in range(self.dim))

    def zero(self) -> Poly:
        return Poly.zero(self.dim)

    def one(self) -> Poly:
        return Poly.const(self.dim, 1)

    def const(self, c) -> Poly:
        return Poly.const(self.dim, c)

    def coord(self, i: int) -> Poly:
        return Poly.var(self.dim, i)


@dataclass(frozen=True)
class Bundle:
    label: str
    rank: int
    chart: Chart
    dual: bool = False

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")

    @property
    def name(self) -> str:
        return f"{self.label}^*" if self.dual else self.label

    @property
    def dim(self) -> int:
        return self.chart.dim

    def dual_bundle(self) -> "Bundle":
        # (Q^*)^* is identified with Q
        return Bundle(self.label, self.rank, self.chart, not self.dual)

    def zero(self) -> "Section":
        return Section(self, vzero(self.dim, self.rank))

    def frame(self, i: int) -> "Section":
        return Section(self, basis(self.dim, self.rank, i))

    def frames(self) -> List["Section"]:
        return [self.frame(i) for i in range(self.rank)]

    def section(self, comps: Iterable) -> "Section":
        return Section(self, tuple(_as_poly(c, self.dim) for c in comps))


def trivial_line(chart: Chart, label: str = "R") -> Bundle:
    return Bundle(label, 1, chart)


def hom_bundle(source: Bundle, target: Bundle) -> Bundle:
    """Hom(source, target), flattened with index ``t * source.rank + s``."""
    if source.chart != target.chart:
        raise BundleMismatch("Hom of bundles over different charts")
    return Bundle(f"Hom({source.name},{target.name})", source.rank * target.rank,
                  source.chart)


def _as_poly(c, n: int) -> Poly:
    if isinstance(c, Poly):
        if c.nvars != n:
            raise BundleMismatch(f"component on chart {c.nvars}, expected {n}")
        return c
    if isinstance(c, str):
        return Poly.parse(c, n)
    return Poly.const(n, c)


# vector helpers -------------------------------------------------------------

def vzero(n: int, r: int) -> Vec:
    z = Poly.zero(n)
    return (z,) * r


def basis(n: int, r: int, i: int) -> Vec:
    z = Poly.zero(n)
    one = Poly.const(n, 1)
    return tuple(one if k == i else z for k in range(r))


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vneg(u: Vec) -> Vec:
    return tuple(-a for a in u)


def vscale(f: Poly, u: Vec) -> Vec:
    if f.is_zero():
        return tuple(f for _ in u)
    return tuple(f * a for a in u)


def vrat(r: Rational, u: Vec) -> Vec:
    return tuple(a.scale(r) for a in u)


def vis_zero(u: Vec) -> bool:
    return all(a.is_zero() for a in u)


def vdot(u: Sequence[Poly], v: Sequence[Poly], n: int) -> Poly:
    total = Poly.zero(n)
    for a, b in zip(u, v, strict=True):
        if a.terms and b.terms:
            total = total + a * b
    return total


def vsum(vs: Iterable[Vec], n: int, r: int) -> Vec:
    acc = list(vzero(n, r))
    for v in vs:
        for k, p in enumerate(v):
            if p.terms:
                acc[k] = acc[k] + p
    return tuple(acc)


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 when an entry repeats."""
    s = list(seq)
    if len(set(s)) != len(s):
        return 0
    sign = 1
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
    return sign


# sections -------------------------------------------------------------------

@dataclass(frozen=True)
class Section:
    """A section of ``bundle``; a covector field is a section of a dual bundle."""

    bundle: Bundle
    comps: Vec

    def __post_init__(self) -> None:
        if len(self.comps) != self.bundle.rank:
            raise BundleMismatch(
                f"{len(self.comps)} components for a rank-{self.bundle.rank} bundle")
        for c in self.comps:
            if not isinstance(c, Poly) or c.nvars != self.bundle.dim:
                raise BundleMismatch("component does not live on the bundle's chart")

    def _check(self, other: "Section") -> None:
        if other.bundle != self.bundle:
            raise BundleMismatch(f"{self.bundle.name} vs {other.bundle.name}")

    def __add__(self, other: "Section") -> "Section":
        self._check(other)
        return Section(self.bundle, vadd(self.comps, other.comps))

    def __sub__(self, other: "Section") -> "Section":
        self._check(other)
        return Section(self.bundle, vsub(self.comps, other.comps))

    def __neg__(self) -> "Section":
        return Section(self.bundle, vneg(self.comps))

    def scale(self, f: Poly | int | Fraction) -> "Section":
        if isinstance(f, Poly):
            return Section(self.bundle, vscale(f, self.comps))
        return Section(self.bundle, vrat(f, self.comps))

    def is_zero(self) -> bool:
        return vis_zero(self.comps)

    def render(self) -> List[str]:
        return [c.render() for c in self.comps]


def section_pairing(s: Section, t: Section) -> Poly:
    """Canonical pairing of a section with a covector on the same bundle."""
    if t.bundle != s.bundle.dual_bundle():
        raise BundleMismatch(f"cannot pair {s.bundle.name} with {t.bundle.name}")
    return vdot(s.comps, t.comps, s.bundle.dim)


# forms ----------------------------------------------------------------------

_PERMS: Dict[int, List[Tuple[Tuple[int, ...], int]]] = {}


def _perms(k: int) -> List[Tuple[Tuple[int, ...], int]]:
    if k not in _PERMS:
        _PERMS[k] = [(p, perm_sign(p)) for p in permutations(range(k))]
    return _PERMS[k]


@dataclass(frozen=True)
class VForm:
    """Alternating k-form on ``arg`` with values in ``value``.

    ``entries`` maps strictly increasing index tuples to value vectors; absent
    tuples are zero and zero values are dropped on construction.
    """

    arity: int
    arg: Bundle
    value: Bundle
    entries: Mapping[Tuple[int, ...], Vec] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.arg.chart != self.value.chart:
            raise BundleMismatch("form argument and value bundles on different charts")
        clean: Dict[Tuple[int, ...], Vec] = {}
        for idx, val in self.entries.items():
            idx = tuple(idx)
            if len(idx) != self.arity:
                raise ValueError(f"index tuple {idx} for an arity-{self.arity} form")
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index tuple {idx} is not strictly increasing")
            if any(not 0 <= i < self.arg.rank for i in idx):
                raise ValueError(f"index tuple {idx} out of range")
            val = tuple(val)
            if len(val) != self.value.rank:
                raise BundleMismatch("form value has the wrong rank")
            if not vis_zero(val):
                clean[idx] = val
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    @classmethod
    def build(cls, arity: int, arg: Bundle, value: Bundle, fn) -> "VForm":
        """Tabulate ``fn(idx)`` over all increasing index tuples."""
        entries = {idx: fn(idx) for idx in combinations(range(arg.rank), arity)}
        return cls(arity, arg, value, entries)

    @classmethod
    def zero(cls, arity: int, arg: Bundle, value: Bundle) -> "VForm":
        return cls(arity, arg, value, {})

    def frame_value(self, idx: Sequence[int]) -> Vec:
        """Value on frame elements ``e_idx[0], ...`` (any order, repeats allowed)."""
        s = perm_sign(idx)
        if s == 0:
            return vzero(self.arg.dim, self.value.rank)
        key = tuple(sorted(idx))
        val = self.entries.get(key)
        if val is None:
            return vzero(self.arg.dim, self.value.rank)
        return val if s == 1 else vneg(val)

    def is_zero(self) -> bool:
        return not self.entries

    def _check(self, other: "VForm") -> None:
        if (self.arity, self.arg, self.value) != (other.arity, other.arg, other.value):
            raise BundleMismatch("forms of different type")

    def __add__(self, other: "VForm") -> "VForm":
        self._check(other)
        keys = set(self.entries) | set(other.entries)
        z = vzero(self.arg.dim, self.value.rank)
        return VForm(self.arity, self.arg, self.value,
                     {k: vadd(self.entries.get(k, z), other.entries.get(k, z))
                      for k in keys})

    def __neg__(self) -> "VForm":
        return VForm(self.arity, self.arg, self.value,
                     {k: vneg(v) for k, v in self.entries.items()})

    def __sub__(self, other: "VForm") -> "VForm":
        return self + (-other)

    def scale(self, r: Rational) -> "VForm":
        return VForm(self.arity, self.arg, self.value,
                     {k: vrat(r, v) for k, v in self.entries.items()})

    def map_values(self, value: Bundle, fn) -> "VForm":
        return VForm(self.arity, self.arg, value,
                     {k: fn(v) for k, v in self.entries.items()})

    def eval_vecs(self, args: Sequence[Vec]) -> Vec:
        n = self.arg.dim
        k = self.arity
        if len(args) != k:
            raise ValueError(f"arity-{k} form applied to {len(args)} arguments")
        acc = list(vzero(n, self.value.rank))
        perms = _perms(k)
        for idx, val in self.entries.items():
            coeff = Poly.zero(n)
            for p, s in perms:
                term = None
                for m in range(k):
                    c = args[m][idx[p[m]]]
                    if not c.terms:
                        term = None
                        break
                    term = c if term is None else term * c
                if term is not None:
                    coeff = coeff + term if s > 0 else coeff - term
            if k == 0:
                coeff = Poly.const(n, 1)
            if coeff.terms:
                for j, v in enumerate(val):
                    if v.terms:
                        acc[j] = acc[j] + coeff * v
        return tuple(acc)


def form_eval(F: VForm, args: Sequence[Section]) -> Section:
    if len(args) != F.arity:
        raise BundleMismatch(f"arity-{F.arity} form applied to {len(args)} sections")
    for a in args:
        if a.bundle != F.arg:
            raise BundleMismatch(f"argument on {a.bundle.name}, form on {F.arg.name}")
    return Section(F.value, F.eval_vecs([a.comps for a in args]))


# bundle maps ----------------------------------------------------------------

@dataclass(frozen=True)
class HomField:
    """Bundle map ``source -> target``; ``matrix[t][s]`` is the image coefficient."""

    source: Bundle
    target: Bundle
    matrix: Tuple[Tuple[Poly, ...], ...]

    def __post_init__(self) -> None:
        if self.source.chart != self.target.chart:
            raise BundleMismatch("bundle map between different charts")
        m = tuple(tuple(row) for row in self.matrix)
        if len(m) != self.target.rank or any(len(r) != self.source.rank for r in m):
            raise BundleMismatch("matrix shape does not match the ranks")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def zero(cls, source: Bundle, target: Bundle) -> "HomField":
        z = Poly.zero(source.dim)
        return cls(source, target, tuple((z,) * source.rank for _ in range(target.rank)))

    @classmethod
    def identity(cls, source: Bundle, target: Bundle | None = None) -> "HomField":
        target = target or source
        if source.rank != target.rank:
            raise BundleMismatch("identity between bundles of different rank")
        n = source.dim
        return cls(source, target,
                   tuple(basis(n, source.rank, t) for t in range(target.rank)))

    def apply_vec(self, v: Vec) -> Vec:
        n = self.source.dim
        return tuple(vdot(row, v, n) for row in self.matrix)

    def column(self, s: int) -> Vec:
        return tuple(row[s] for row in self.matrix)

    def transpose(self) -> "HomField":
        return HomField(self.target.dual_bundle(), self.source.dual_bundle(),
                        tuple(zip(*self.matrix)) if self.matrix else
                        tuple(() for _ in range(self.source.rank)))

    def compose(self, inner: "HomField") -> "HomField":
        """``self ∘ inner``."""
        if inner.target != self.source:
            raise BundleMismatch(f"cannot compose through {inner.target.name} / {self.source.name}")
        n = self.source.dim
        cols = [inner.column(s) for s in range(inner.source.rank)]
        return HomField(inner.source, self.target,
                        tuple(tuple(vdot(row, c, n) for c in cols) for row in self.matrix))

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.matrix for p in row)

    def to_vec(self) -> Vec:
        """Flatten as a section of ``hom_bundle(source, target)``."""
        return tuple(p for row in self.matrix for p in row)

    @classmethod
    def from_vec(cls, source: Bundle, target: Bundle, v: Sequence[Poly]) -> "HomField":
        r = source.rank
        return cls(source, target, tuple(tuple(v[t * r:(t + 1) * r]) for t in range(target.rank)))


def hom_apply(phi: HomField, s: Section) -> Section:
    if s.bundle != phi.source:
        raise BundleMismatch(f"map from {phi.source.name} applied to {s.bundle.name}")
    return Section(phi.target, phi.apply_vec(s.comps))
