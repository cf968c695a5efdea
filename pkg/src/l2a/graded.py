"""Graded-commutative function algebra of a split [2]-manifold.

Generators: chart coordinates (degree 0), ``ε_i`` dual to a frame of ``Q``
(degree 1, anticommuting) and ``b_j`` from a frame of ``B`` (degree 2,
commuting).  An element is a map from monomial keys ``(eps, bs)`` to
polynomial coefficients, where ``eps`` is strictly increasing and ``bs`` is a
sorted multiset.  A monomial is read as ``ε_{eps[0]} ⋯ ε_{eps[-1]} · b_{bs...}``.

This module knows nothing about brackets or connections; a degree-1
derivation is specified only by its values on generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .bundles import perm_sign
from .exactpoly import Poly

Key = Tuple[Tuple[int, ...], Tuple[int, ...]]

__all__ = ["Element", "Derivation", "pullback_map"]


class Element:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Key, Poly] | None = None) -> None:
        self.nvars = nvars
        self.terms: Dict[Key, Poly] = {}
        if terms:
            for k, p in terms.items():
                if p.terms:
                    self.terms[k] = p

    @classmethod
    def scalar(cls, p: Poly) -> "Element":
        return cls(p.nvars, {((), ()): p})

    @classmethod
    def eps(cls, nvars: int, i: int, coeff: Poly | None = None) -> "Element":
        return cls(nvars, {((i,), ()): coeff if coeff is not None else Poly.const(nvars, 1)})

    @classmethod
    def b(cls, nvars: int, j: int, coeff: Poly | None = None) -> "Element":
        return cls(nvars, {((), (j,)): coeff if coeff is not None else Poly.const(nvars, 1)})

    @classmethod
    def monomial(cls, nvars: int, eps: Sequence[int], bs: Sequence[int],
                 coeff: Poly | None = None) -> "Element":
        c = coeff if coeff is not None else Poly.const(nvars, 1)
        s = perm_sign(eps)
        if s == 0:
            return cls(nvars)
        return cls(nvars, {(tuple(sorted(eps)), tuple(sorted(bs))): c if s > 0 else -c})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Element") -> "Element":
        out = dict(self.terms)
        for k, p in other.terms.items():
            q = out.get(k)
            s = p if q is None else q + p
            if s.terms:
                out[k] = s
            else:
                out.pop(k, None)
        e = Element(self.nvars)
        e.terms = out
        return e

    def __neg__(self) -> "Element":
        e = Element(self.nvars)
        e.terms = {k: -p for k, p in self.terms.items()}
        return e

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, p: Poly) -> "Element":
        return Element(self.nvars, {k: p * c for k, c in self.terms.items()})

    def __mul__(self, other: "Element") -> "Element":
        out: Dict[Key, Poly] = {}
        for (e1, b1), p1 in self.terms.items():
            for (e2, b2), p2 in other.terms.items():
                if set(e1) & set(e2):
                    continue
                eps = e1 + e2
                s = perm_sign(eps)
                key = (tuple(sorted(eps)), tuple(sorted(b1 + b2)))
                c = p1 * p2
                if s < 0:
                    c = -c
                q = out.get(key)
                out[key] = c if q is None else q + c
        return Element(self.nvars, out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Element) and self.terms == other.terms

    def components(self) -> Dict[Tuple[int, int], Dict[Key, Poly]]:
        """Group terms by type ``(number of ε factors, number of b factors)``."""
        out: Dict[Tuple[int, int], Dict[Key, Poly]] = {}
        for k, p in self.terms.items():
            out.setdefault((len(k[0]), len(k[1])), {})[k] = p
        return out

    def degree_set(self) -> set:
        return {len(e) + 2 * len(b) for e, b in self.terms}

    def __repr__(self) -> str:
        parts = []
        for (e, b), p in sorted(self.terms.items()):
            mono = "".join(f"ε{i}" for i in e) + "".join(f"b{j}" for j in b)
            parts.append(f"({p.render()}){mono}")
        return " + ".join(parts) or "0"


@dataclass
class Derivation:
    """Degree-1 derivation determined by images of the generators."""

    nvars: int
    on_coords: List[Element]
    on_eps: List[Element]
    on_b: List[Element]

    def on_function(self, p: Poly) -> Element:
        out = Element(self.nvars)
        for a in range(self.nvars):
            d = p.partial(a)
            if d.terms:
                out = out + self.on_coords[a].scale(d)
        return out

    def apply(self, x: Element) -> Element:
        n = self.nvars
        one = Poly.const(n, 1)
        out = Element(n)
        for (eps, bs), p in x.terms.items():
            rest = Element(n, {(eps, bs): one})
            out = out + self.on_function(p) * rest
            for m, i in enumerate(eps):
                pre = Element(n, {(eps[:m], ()): one})
                post = Element(n, {(eps[m + 1:], bs): one})
                term = pre * self.on_eps[i] * post
                out = out + (term.scale(p) if m % 2 == 0 else term.scale(-p))
            sign = -1 if len(eps) % 2 else 1
            for t, j in enumerate(bs):
                others = bs[:t] + bs[t + 1:]
                mono = Element(n, {(eps, ()): one})
                tail = Element(n, {((), others): one})
                term = mono * self.on_b[j] * tail
                out = out + term.scale(p if sign > 0 else -p)
        return out


def pullback_map(target_nvars: int, source_nvars: int, mu0: Sequence[Poly],
                 eps_images: Sequence[Element], b_images: Sequence[Element]):
    """Algebra morphism from the target algebra to the source algebra.

    Functions pull back by composition with ``mu0``; generators go to the
    supplied images.
    """

    def pull(x: Element) -> Element:
        out = Element(source_nvars)
        for (eps, bs), p in x.terms.items():
            term = Element.scalar(p.compose_into(source_nvars, mu0))
            for i in eps:
                term = term * eps_images[i]
            for j in bs:
                term = term * b_images[j]
            out = out + term
        return out

    return pull
