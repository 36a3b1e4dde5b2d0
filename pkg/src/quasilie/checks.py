"""Pass/fail reporting for identity sweeps.

Every structural check records a stable name and, on the first failing basis
tuple, a description of where it failed together with both sides' values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exterior import Multivector, blade_indices, DUAL, DOUBLE


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class ValidationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, passed: bool, detail: str = "") -> CheckResult:
        result = CheckResult(name, passed, detail)
        self.checks.append(result)
        return result

    def record(self, name: str, items) -> CheckResult:
        """Walk (context, lhs, rhs) triples; record the first mismatch."""
        for context, lhs, rhs in items:
            if lhs != rhs:
                return self.add(
                    name, False, f"at {context}: lhs = {fmt(lhs)}, rhs = {fmt(rhs)}"
                )
        return self.add(name, True)

    def merge(self, other: "ValidationReport") -> "ValidationReport":
        self.checks.extend(other.checks)
        return self

    def get(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": [c.to_dict() for c in self.checks]}


def format_multivector(mv: Multivector, names=None) -> str:
    """ASCII rendering like '2*e1^e3 - 1/2*x2'."""
    if mv.is_zero():
        return "0"
    n = mv.space.n
    parts = []
    for blade, c in mv.items():
        if blade == 0:
            parts.append(str(c))
            continue
        factors = []
        for i in blade_indices(blade):
            factors.append(_basis_name(mv.space, i, names))
        word = "^".join(factors)
        if c == 1:
            parts.append(word)
        elif c == -1:
            parts.append(f"-{word}")
        else:
            parts.append(f"{c}*{word}")
    return " + ".join(parts).replace("+ -", "- ")


def _basis_name(space, i, names) -> str:
    if space.kind == DOUBLE:
        if names is not None and len(names) == 2 * space.n:
            return names[i]
        base = names[i % space.n] if names else f"e{i % space.n + 1}"
        return base if i < space.n else base + "*"
    base = names[i] if names else f"e{i + 1}"
    return base + "*" if space.kind == DUAL else base


def fmt(value) -> str:
    if isinstance(value, Multivector):
        return format_multivector(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, list):
        return "matrix" + str([[str(x) for x in row] for row in value])
    return str(value)
