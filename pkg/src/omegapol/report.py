"""Validation reports shared by every validator in the package."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Violation:
    """One failed check.

    ``rule`` names the law or structural requirement, ``witness`` holds the
    offending cells or generators. Malformations (undeclared identifiers,
    operations defined where they must not be) are flagged separately from
    genuine law failures.
    """

    rule: str
    witness: tuple
    detail: str = ""
    dim: int | None = None
    malformed: bool = False

    def as_record(self) -> dict[str, Any]:
        rec: dict[str, Any] = {"rule": self.rule, "witness": [_plain(w) for w in self.witness]}
        if self.dim is not None:
            rec["dim"] = self.dim
        if self.detail:
            rec["detail"] = self.detail
        if self.malformed:
            rec["malformed"] = True
        return rec


@dataclass
class Report:
    subject: str
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def malformed(self) -> bool:
        return any(v.malformed for v in self.violations)

    @property
    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def add(self, rule: str, *witness: Any, detail: str = "", dim: int | None = None,
            malformed: bool = False) -> None:
        self.violations.append(Violation(rule, tuple(witness), detail, dim, malformed))

    def extend(self, other: Report) -> None:
        self.violations.extend(other.violations)
        self.notes.extend(other.notes)
        self.checked += other.checked

    def __bool__(self) -> bool:
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return f"{self.subject}: ok ({self.checked} checks)"
        rules = ", ".join(sorted(self.rules))
        return f"{self.subject}: {len(self.violations)} violation(s) [{rules}]"

    def raise_if_failed(self, exc: type[Exception] = ValueError) -> None:
        if not self.ok:
            first = self.violations[0]
            raise exc(f"{self.summary()}; first: {first.rule} at {first.witness} {first.detail}")


def _plain(obj: Any) -> Any:
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    if isinstance(obj, (tuple, list)):
        return [_plain(o) for o in obj]
    return str(obj)
