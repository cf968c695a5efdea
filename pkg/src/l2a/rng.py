"""Seeded xorshift64* generator.

Recurrence on the 64-bit state ``x`` (nonzero)::

    x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27      (all mod 2^64)
    output = x * 2685821657736338717 mod 2^64

Seed 0 is replaced by a fixed nonzero constant.  Only the output stream
is used, so the draws are reproducible across implementations.
"""

from __future__ import annotations

from typing import List, Sequence, TypeVar

from .exactpoly import Poly

__all__ = ["XorShift64Star", "random_poly", "random_vec"]

MASK = (1 << 64) - 1
MULT = 2685821657736338717
ZERO_SEED = 0x9E3779B97F4A7C15

T = TypeVar("T")


class XorShift64Star:
    def __init__(self, seed: int) -> None:
        if not 0 <= seed <= MASK:
            raise ValueError("seed must be a 64-bit unsigned value")
        self.state = seed or ZERO_SEED

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK
        x ^= x >> 27
        self.state = x
        return (x * MULT) & MASK

    def below(self, n: int) -> int:
        """Uniform-ish integer in ``[0, n)`` taken from the high bits."""
        if n <= 0:
            raise ValueError("empty range")
        return (self.next_u64() >> 11) % n

    def randint(self, lo: int, hi: int) -> int:
        """Integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def choice(self, seq: Sequence[T]) -> T:
        return seq[self.below(len(seq))]


def _monomials(nvars: int, max_deg: int) -> List[tuple]:
    out: List[tuple] = []

    def rec(prefix, left, k):
        if k == nvars:
            out.append(tuple(prefix))
            return
        for e in range(left + 1):
            rec(prefix + [e], left - e, k + 1)

    rec([], max_deg, 0)
    return sorted(out)


def random_poly(rng: XorShift64Star, nvars: int, max_deg: int = 2, coeff: int = 2,
                density: int = 2) -> Poly:
    """Sparse random polynomial; each monomial survives with chance 1/density."""
    terms = {}
    for m in _monomials(nvars, max_deg):
        if rng.below(density) == 0:
            c = rng.randint(-coeff, coeff)
            if c:
                terms[m] = c
    return Poly(nvars, terms)


def random_vec(rng: XorShift64Star, nvars: int, rank: int, max_deg: int = 2):
    return tuple(random_poly(rng, nvars, max_deg) for _ in range(rank))
