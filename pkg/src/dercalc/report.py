"""Check records and suite reports with a stable machine-readable layout."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def _plain(x: Any) -> Any:
    """Make counterexample data JSON-friendly without losing exactness."""
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


@dataclass
class Check:
    id: str
    anchor: str
    passed: bool
    counterexample: Any = None

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "anchor": self.anchor,
            "passed": bool(self.passed),
            "counterexample": _plain(self.counterexample) if not self.passed else None,
        }


@dataclass
class Report:
    suite: str
    seed: int | None = None
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, id: str, anchor: str, passed: bool, counterexample: Any = None) -> bool:
        self.checks.append(Check(id, anchor, bool(passed), counterexample))
        return bool(passed)

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.id, c.anchor, c.passed, c.counterexample))
        self.notes.extend(other.notes)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "checks": [c.as_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        lines = [f"suite {self.suite} (seed {self.seed})"]
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            line = f"  {mark}  {c.id}  [{c.anchor}]"
            if not c.passed and c.counterexample is not None:
                line += f"  counterexample: {_plain(c.counterexample)}"
            lines.append(line)
        lines.extend(f"  note: {n}" for n in self.notes)
        total = len(self.checks)
        bad = len(self.failures())
        lines.append(f"{total - bad}/{total} checks passed")
        return "\n".join(lines)
