"""Structured pass/fail reports used by the verification operations."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a single named check; witness is the first counterexample."""

    name: str
    passed: bool
    witness: tuple | None = None
    note: str | None = None


@dataclass(frozen=True)
class PropertyReport:
    subject: str
    checks: tuple[CheckResult, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "witness": list(c.witness) if c.witness is not None else None,
                    "note": c.note,
                }
                for c in self.checks
            ],
        }


def format_report(report: PropertyReport) -> str:
    lines = [f"report: {report.subject}"]
    for c in report.checks:
        status = "pass" if c.passed else "FAIL"
        extra = ""
        if c.witness is not None:
            extra = f" (witness: {','.join(map(str, c.witness))})"
        if c.note:
            extra += f" [{c.note}]"
        lines.append(f"  {c.name}: {status}{extra}")
    lines.append(f"overall: {'pass' if report.passed else 'FAIL'}")
    return "\n".join(lines)
