"""Structured verification reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "PASS"
FAIL = "FAIL"
REFUSED = "REFUSED"
NOT_FOUND = "NOT_FOUND"


def _plain(value: Any) -> Any:
    """Turn grades, scalars and monomials into JSON-friendly values."""
    if isinstance(value, (str, bool, int)) or value is None:
        return value
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return str(value)


@dataclass
class Witness:
    inputs: Any
    lhs: Any = None
    rhs: Any = None
    law: str | None = None

    def to_dict(self) -> dict:
        out = {"inputs": _plain(self.inputs), "lhs": _plain(self.lhs), "rhs": _plain(self.rhs)}
        if self.law is not None:
            out["law"] = self.law
        return out


@dataclass
class Report:
    law: str
    status: str = PASS
    witnesses: list[Witness] = field(default_factory=list)
    checked: int = 0
    violations: int = 0
    notes: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    max_witnesses: int = 10

    @property
    def ok(self) -> bool:
        return self.status == PASS

    @property
    def first(self) -> Witness | None:
        return self.witnesses[0] if self.witnesses else None

    def record(self, inputs, lhs=None, rhs=None, law=None) -> None:
        """Count a violation; witnesses arrive in enumeration (lexicographic) order."""
        self.status = FAIL
        self.violations += 1
        if len(self.witnesses) < self.max_witnesses:
            self.witnesses.append(Witness(inputs, lhs, rhs, law))

    def to_dict(self) -> dict:
        out = {
            "law": self.law,
            "status": self.status,
            "checked": self.checked,
            "violations": self.violations,
            "witnesses": [w.to_dict() for w in self.witnesses],
        }
        if self.notes:
            out["notes"] = list(self.notes)
        if self.details:
            out["details"] = _plain(self.details)
        return out

    def __str__(self) -> str:
        line = f"{self.law}: {self.status} ({self.checked} checked"
        if self.violations:
            line += f", {self.violations} violations"
        line += ")"
        if self.first is not None:
            w = self.first
            line += f"; first witness {_plain(w.inputs)}: {w.lhs} != {w.rhs}"
        return line
