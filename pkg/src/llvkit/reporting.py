"""Small shared result type for report-style checks."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    """Outcome of a report-style verification.

    ``failures`` lists human-readable witnesses (offending pairs, blocks,
    dimensions); ``data`` carries machine-readable evidence.
    """

    name: str
    ok: bool = True
    failures: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def fail(self, detail):
        self.ok = False
        self.failures.append(detail)

    def summary(self) -> str:
        status = "pass" if self.ok else "fail"
        lines = [f"{self.name}: {status}"]
        lines += [f"  - {f}" for f in self.failures]
        return "\n".join(lines)
