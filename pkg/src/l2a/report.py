"""Named-axiom reports with polynomial residual witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from .exactpoly import Poly

Witness = Tuple[Tuple[str, int], ...]

__all__ = ["Violation", "Report", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1


@dataclass(frozen=True, order=True)
class Violation:
    axiom: str
    witness: Witness
    residual: str

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "witness": dict(self.witness),
                "residual": self.residual}


@dataclass
class Report:
    """Outcome of one check: the axioms examined and every nonzero residual."""

    check: str
    axioms: List[str]
    violations: List[Violation] = field(default_factory=list)
    elapsed: float | None = None

    def record(self, axiom: str, witness: Mapping[str, int],
               residual: Union[Poly, Sequence[Poly]]) -> bool:
        """Store a violation for every nonzero residual component.

        Returns True when the residual vanished.
        """
        if axiom not in self.axioms:
            raise KeyError(f"axiom {axiom!r} is not part of {self.check}")
        w = tuple(witness.items())
        if isinstance(residual, Poly):
            if residual.is_zero():
                return True
            self.violations.append(Violation(axiom, w, residual.render()))
            return False
        ok = True
        for c, p in enumerate(residual):
            if not p.is_zero():
                ok = False
                self.violations.append(Violation(axiom, w + (("component", c),), p.render()))
        return ok

    def merge(self, other: "Report", prefix: str = "") -> None:
        for a in other.axioms:
            if prefix + a not in self.axioms:
                self.axioms.append(prefix + a)
        for v in other.violations:
            self.violations.append(Violation(prefix + v.axiom, v.witness, v.residual))

    @property
    def passed(self) -> bool:
        return not self.violations

    def failed_axioms(self) -> List[str]:
        seen: Dict[str, None] = {}
        for v in sorted(self.violations):
            seen.setdefault(v.axiom, None)
        return list(seen)

    def axiom_passed(self, axiom: str) -> bool:
        return all(v.axiom != axiom for v in self.violations)

    def sorted_violations(self) -> List[Violation]:
        return sorted(self.violations)

    def to_json(self, include_timing: bool = False) -> dict:
        failed = set(self.failed_axioms())
        out = {
            "schema_version": SCHEMA_VERSION,
            "check": self.check,
            "passed": self.passed,
            "axioms": [{"axiom": a, "passed": a not in failed} for a in self.axioms],
            "violations": [v.to_json() for v in self.sorted_violations()],
        }
        if include_timing and self.elapsed is not None:
            out["timing"] = {"seconds": round(self.elapsed, 6)}
        return out

    def to_text(self) -> str:
        failed = set(self.failed_axioms())
        lines = [f"{self.check}: {'PASS' if self.passed else 'FAIL'}"]
        for a in self.axioms:
            lines.append(f"  [{'fail' if a in failed else 'ok'}] {a}")
        for v in self.sorted_violations():
            w = ", ".join(f"{k}={i}" for k, i in v.witness)
            lines.append(f"    {v.axiom} ({w}): {v.residual}")
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.to_text()


def combine(check: str, parts: Iterable[Tuple[str, Report]]) -> Report:
    rep = Report(check, [])
    for prefix, r in parts:
        rep.merge(r, prefix)
    return rep
