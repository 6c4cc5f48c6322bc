"""Verdict containers shared by every checker."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckReport:
    name: str
    passed: bool
    checked: int = 0
    counterexample: str | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked,
                "counterexample": self.counterexample, "detail": self.detail}

    @classmethod
    def from_dict(cls, d: dict) -> "CheckReport":
        return cls(**d)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        s = f"[{tag}] {self.name} ({self.checked} checked)"
        if self.detail:
            s += f" {self.detail}"
        if self.counterexample:
            s += f"\n       counterexample: {self.counterexample}"
        return s


@dataclass
class Report:
    """An ordered list of checks plus free-form payloads."""

    title: str
    checks: list[CheckReport] = field(default_factory=list)
    payload: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: CheckReport) -> CheckReport:
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(CheckReport(prefix + c.name, c.passed, c.checked,
                                           c.counterexample, c.detail))

    def failures(self) -> list[CheckReport]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> CheckReport:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"title": self.title, "passed": self.passed,
                "checks": [c.to_dict() for c in self.checks], "payload": self.payload}

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(d["title"], [CheckReport.from_dict(c) for c in d["checks"]], d.get("payload", {}))

    def text(self) -> str:
        lines = [self.title] + ["  " + c.line() for c in self.checks]
        lines.append("  => " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def first_failure(name: str, items, test, describe=str) -> CheckReport:
    """Run ``test`` over ``items``; stop at the first falsy result."""
    n = 0
    for it in items:
        n += 1
        if not test(it):
            return CheckReport(name, False, n, describe(it))
    return CheckReport(name, True, n)
