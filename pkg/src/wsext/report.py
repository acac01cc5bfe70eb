"""Small result/report containers shared by the checking operations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class CheckResult:
    """Boolean outcome plus the first counterexample found (or None).

    The counterexample payload is operation specific; it is always a
    JSON-serializable structure suitable for error messages.
    """

    ok: bool
    counterexample: Any = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class ReportEntry:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class Report:
    """Ordered list of named pass/fail entries with stable rendering."""

    entries: list[ReportEntry] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.entries.append(ReportEntry(name, ok, detail))

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def failures(self) -> list[ReportEntry]:
        return [e for e in self.entries if not e.ok]

    def entry(self, name: str) -> ReportEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def render(self) -> str:
        lines = []
        for e in self.entries:
            status = "PASS" if e.ok else "FAIL"
            suffix = f"  [{e.detail}]" if e.detail else ""
            lines.append(f"{e.name}: {status}{suffix}")
        return "\n".join(lines)

    def to_json(self) -> list[dict]:
        return [
            {"name": e.name, "ok": e.ok, "detail": e.detail}
            for e in self.entries
        ]
