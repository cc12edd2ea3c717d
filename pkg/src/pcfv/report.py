"""Structured pass/fail reports shared by the validators."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""
    counterexample: Any = None
    warning: bool = False

    def to_dict(self) -> dict:
        d = {"name": self.name, "ok": self.ok}
        if self.detail:
            d["detail"] = self.detail
        if self.counterexample is not None:
            d["counterexample"] = _jsonable(self.counterexample)
        if self.warning:
            d["warning"] = True
        return d


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


@dataclass
class Report:
    subject: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "", counterexample: Any = None,
            warning: bool = False) -> Check:
        c = Check(name, bool(ok), detail, counterexample, warning)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.ok, c.detail, c.counterexample, c.warning))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def get(self, name: str) -> Optional[Check]:
        for c in self.checks:
            if c.name == name:
                return c
        return None

    def to_dict(self) -> dict:
        return {"schema": 1, "subject": self.subject, "ok": self.ok,
                "checks": [c.to_dict() for c in self.checks]}

    def format(self) -> str:
        lines = [f"{self.subject}: {'OK' if self.ok else 'FAILED'}"]
        for c in self.checks:
            tag = "ok  " if c.ok else "FAIL"
            if c.ok and c.warning:
                tag = "warn"
            line = f"  [{tag}] {c.name}"
            if c.detail:
                line += f": {c.detail}"
            lines.append(line)
            if c.counterexample is not None and not c.ok:
                lines.append(f"         counterexample: {_jsonable(c.counterexample)}")
        return "\n".join(lines)
