"""Ordered verification reports with text and JSON renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

PASS = "pass"
FAIL = "fail"
INFO = "info"


@dataclass
class Check:
    id: str
    status: str
    residual: str = "0"
    matched_sign: Optional[int] = None
    witness: Optional[str] = None
    note: Optional[str] = None

    def as_dict(self) -> dict:
        d = {"id": self.id, "status": self.status, "residual": self.residual}
        if self.matched_sign is not None:
            d["matched_sign"] = self.matched_sign
        if self.witness is not None:
            d["witness"] = self.witness
        if self.note is not None:
            d["note"] = self.note
        return d

    def line(self) -> str:
        parts = [f"[{self.status.upper():4}] {self.id}"]
        parts.append(f"{'value' if self.status == INFO else 'residual'} {self.residual}")
        if self.matched_sign is not None:
            parts.append(f"sign {self.matched_sign:+d}")
        if self.witness is not None:
            parts.append(f"witness {self.witness}")
        if self.note is not None:
            parts.append(self.note)
        return ": ".join(parts[:2]) + "".join(f"; {p}" for p in parts[2:])


@dataclass
class Report:
    command: str
    checks: list[Check] = field(default_factory=list)

    def add(self, id: str, ok: bool, residual=None, **kw) -> Check:
        c = Check(id, PASS if ok else FAIL, "0" if residual is None else str(residual), **kw)
        self.checks.append(c)
        return c

    def residual(self, id: str, value, **kw) -> Check:
        """Record a check that passes exactly when ``value`` is zero."""
        return self.add(id, not value, value, **kw)

    def info(self, id: str, text, **kw) -> Check:
        c = Check(id, INFO, str(text), **kw)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            c.id = prefix + c.id
            self.checks.append(c)

    @property
    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, INFO: 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_text(self) -> str:
        lines = [f"== {self.command}"]
        lines += [c.line() for c in self.checks]
        n = self.counts
        lines.append(f"-- {n[PASS]} passed, {n[FAIL]} failed, {n[INFO]} info")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        d = {"command": self.command, "checks": [c.as_dict() for c in self.checks], "summary": self.counts}
        return json.dumps(d, indent=2, ensure_ascii=False) + "\n"
