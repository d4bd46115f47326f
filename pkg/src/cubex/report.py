"""Structured findings shared by the validation and verification sweeps."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Finding:
    kind: str
    message: str
    witness: dict

    def to_json(self) -> dict:
        return {"kind": self.kind, "message": self.message, "witness": self.witness}


@dataclass
class Report:
    """A list of violations plus a count of the checks that produced it."""

    findings: list[Finding] = field(default_factory=list)
    checks: int = 0
    notes: list[str] = field(default_factory=list)

    def add(self, kind, message, witness=None):
        self.findings.append(Finding(kind, message, witness or {}))

    def merge(self, other: "Report"):
        self.findings.extend(other.findings)
        self.checks += other.checks
        self.notes.extend(other.notes)

    @property
    def ok(self) -> bool:
        return not self.findings

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checks": self.checks,
            "findings": [f.to_json() for f in self.findings],
            "notes": list(self.notes),
        }
