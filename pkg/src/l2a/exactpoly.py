"""Exact multivariate polynomials over the rationals.

A :class:`Poly` lives on a chart of dimension ``nvars``; ``nvars == 0`` is the
point, where every polynomial is a constant and every derivative vanishes.
Coefficients are Python ints or :class:`fractions.Fraction` (integral
fractions are stored as ints, which keeps the common case fast).
"""

from __future__ import annotations

import re
from contextlib import contextmanager
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

Rational = Union[int, Fraction]
Exps = Tuple[int, ...]

__all__ = [
    "Poly",
    "PolyParseError",
    "ChartMismatch",
    "DegreeLimitExceeded",
    "degree_limit",
    "as_rational",
    "parse_rational",
]


class ChartMismatch(ValueError):
    """Two polynomials on charts of different dimension were combined."""


class PolyParseError(ValueError):
    def __init__(self, message: str, text: str, position: int) -> None:
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position} in {text!r}")


class DegreeLimitExceeded(ArithmeticError):
    def __init__(self, degree: int, limit: int) -> None:
        self.degree = degree
        self.limit = limit
        super().__init__(
            f"intermediate polynomial degree {degree} exceeds the bound {limit}"
        )


_DEGREE_LIMIT: list = [None]


@contextmanager
def degree_limit(limit: int | None) -> Iterator[None]:
    """Abort any product whose total degree would exceed ``limit``."""
    old = _DEGREE_LIMIT[0]
    _DEGREE_LIMIT[0] = limit
    try:
        yield
    finally:
        _DEGREE_LIMIT[0] = old


def _norm(c: Rational) -> Rational:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def as_rational(value: Union[int, Fraction, str]) -> Rational:
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return _norm(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


_RAT_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Rational:
    m = _RAT_RE.match(text)
    if not m:
        raise PolyParseError("malformed rational literal", text, 0)
    num = int(m.group(1))
    if m.group(2) is None:
        return num
    den = int(m.group(2))
    if den == 0:
        raise PolyParseError("zero denominator", text, m.start(2))
    return _norm(Fraction(num, den))


def _render_rational(c: Rational) -> str:
    if type(c) is Fraction:
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def _grlex_key(e: Exps) -> Tuple[int, Exps]:
    return (sum(e), e)


class Poly:
    """Immutable polynomial with rational coefficients.

    ``terms`` maps exponent tuples of length ``nvars`` to nonzero coefficients.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exps, Rational] | None = None,
                 *, _trusted: bool = False) -> None:
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        self.nvars = nvars
        self._hash = None
        if terms is None:
            self.terms: Dict[Exps, Rational] = {}
        elif _trusted:
            self.terms = terms  # type: ignore[assignment]
        else:
            clean: Dict[Exps, Rational] = {}
            for e, c in terms.items():
                e = tuple(int(k) for k in e)
                if len(e) != nvars or any(k < 0 for k in e):
                    raise ValueError(f"bad exponent vector {e} for {nvars} variables")
                c = as_rational(c)
                if c:
                    clean[e] = _norm(clean.get(e, 0) + c)
                    if not clean[e]:
                        del clean[e]
            self.terms = clean

    # constructors

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars, {}, _trusted=True)

    @classmethod
    def const(cls, nvars: int, c: Union[int, Fraction, str]) -> "Poly":
        c = as_rational(c)
        if not c:
            return cls.zero(nvars)
        return cls(nvars, {(0,) * nvars: c}, _trusted=True)

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1}, _trusted=True)

    @classmethod
    def monomial(cls, nvars: int, exps: Sequence[int], c: Rational = 1) -> "Poly":
        return cls(nvars, {tuple(exps): c})

    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def constant_term(self) -> Rational:
        return self.terms.get((0,) * self.nvars, 0)

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.terms == ({(0,) * self.nvars: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # arithmetic

    def _coerce(self, other: object) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ChartMismatch(
                    f"chart dimensions differ: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Poly.const(self.nvars, other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other: object) -> "Poly":
        o = self._coerce(other)
        if not o.terms:
            return self
        if not self.terms:
            return o
        out = dict(self.terms)
        for e, c in o.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = _norm(v + c)
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly(self.nvars, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other: object) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: object) -> "Poly":
        return self._coerce(other) - self

    def scale(self, r: Union[int, Fraction]) -> "Poly":
        r = as_rational(r)
        if not r or not self.terms:
            return Poly.zero(self.nvars)
        if r == 1:
            return self
        return Poly(self.nvars, {e: _norm(c * r) for e, c in self.terms.items()},
                    _trusted=True)

    def __mul__(self, other: object) -> "Poly":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        o = self._coerce(other)
        if not self.terms or not o.terms:
            return Poly.zero(self.nvars)
        limit = _DEGREE_LIMIT[0]
        if limit is not None:
            d = self.degree() + o.degree()
            if d > limit:
                raise DegreeLimitExceeded(d, limit)
        n = self.nvars
        if n == 0:
            c = _norm(self.terms[()] * o.terms[()])
            return Poly(0, {(): c}, _trusted=True)
        if len(o.terms) == 1:
            (e2, c2), = o.terms.items()
            if not any(e2):
                return self.scale(c2)
        out: Dict[Exps, Rational] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        clean = {e: _norm(c) for e, c in out.items() if c}
        return Poly(n, clean, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # calculus

    def partial(self, i: int) -> "Poly":
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")
        out: Dict[Exps, Rational] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1:]
                out[e2] = _norm(c * k)
        return Poly(self.nvars, out, _trusted=True)

    def gradient(self) -> Tuple["Poly", ...]:
        return tuple(self.partial(i) for i in range(self.nvars))

    def compose(self, subs: Sequence["Poly"]) -> "Poly":
        """Substitute ``subs[a]`` for ``x_a``; the result lives on the chart of ``subs``.

        ``subs`` may be empty only when the result chart is given by the
        polynomials themselves, so an explicit target dimension is required
        through :meth:`compose_into` for constant maps.
        """
        if len(subs) != self.nvars:
            raise ChartMismatch(f"need {self.nvars} substitutions, got {len(subs)}")
        if not subs:
            raise ValueError("use compose_into for maps from a point")
        return self.compose_into(subs[0].nvars, subs)

    def compose_into(self, target_nvars: int, subs: Sequence["Poly"]) -> "Poly":
        if len(subs) != self.nvars:
            raise ChartMismatch(f"need {self.nvars} substitutions, got {len(subs)}")
        for s in subs:
            if s.nvars != target_nvars:
                raise ChartMismatch("substitutions live on different charts")
        result = Poly.zero(target_nvars)
        powers: Dict[Tuple[int, int], Poly] = {}
        for e, c in self.terms.items():
            term = Poly.const(target_nvars, c)
            for a, k in enumerate(e):
                if k:
                    key = (a, k)
                    if key not in powers:
                        powers[key] = subs[a] ** k
                    term = term * powers[key]
            result = result + term
        return result

    def evaluate(self, point: Sequence[Rational]) -> Rational:
        if len(point) != self.nvars:
            raise ChartMismatch("point has the wrong dimension")
        total: Rational = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * x ** k
            total += v
        return _norm(Fraction(total)) if total else 0

    # text form

    def sorted_terms(self) -> Iterable[Tuple[Exps, Rational]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            a = -c if neg else c
            mono = "*".join(
                f"x{i}" if k == 1 else f"x{i}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                body = _render_rational(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_render_rational(a)}*{mono}"
            if idx == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    __str__ = render

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {self.render()!r})"

    @classmethod
    def parse(cls, text: str, nvars: int) -> "Poly":
        return _Parser(text, nvars).parse()


class _Parser:
    """Recursive-descent parser for ``c*x0^a*x1^b +- ...``."""

    def __init__(self, text: str, nvars: int) -> None:
        self.text = text
        self.n = nvars
        self.pos = 0

    def error(self, msg: str) -> PolyParseError:
        return PolyParseError(msg, self.text, self.pos)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected a digit")
        return int(self.text[start:self.pos])

    def factor(self, exps: list) -> Rational:
        ch = self.peek()
        if ch.isdigit():
            num = self.integer()
            if self.peek() == "/":
                self.pos += 1
                if not self.peek().isdigit():
                    raise self.error("expected a denominator")
                den = self.integer()
                if den == 0:
                    raise self.error("zero denominator")
                return _norm(Fraction(num, den))
            return num
        if ch == "x":
            self.pos += 1
            if self.pos >= len(self.text) or not self.text[self.pos].isdigit():
                raise self.error("expected a variable index")
            start = self.pos
            idx = self.integer()
            if idx >= self.n:
                self.pos = start
                raise self.error(f"variable x{idx} outside a chart of dimension {self.n}")
            power = 1
            if self.peek() == "^":
                self.pos += 1
                power = self.integer()
            exps[idx] += power
            return 1
        raise self.error("expected a number or a variable")

    def term(self) -> Tuple[Exps, Rational]:
        exps = [0] * self.n
        coeff: Rational = self.factor(exps)
        while self.peek() == "*":
            self.pos += 1
            coeff = coeff * self.factor(exps)
        return tuple(exps), _norm(coeff)

    def parse(self) -> Poly:
        terms: Dict[Exps, Rational] = {}
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        while True:
            e, c = self.term()
            terms[e] = _norm(terms.get(e, 0) + sign * c)
            ch = self.peek()
            if not ch:
                break
            if ch not in "+-":
                raise self.error("expected '+' or '-'")
            sign = -1 if ch == "-" else 1
            self.pos += 1
        return Poly(self.n, {e: c for e, c in terms.items() if c}, _trusted=True)
