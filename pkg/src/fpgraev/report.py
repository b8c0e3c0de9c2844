"""Check records shared by the verifiers.

Every verifier returns a :class:`Report`; its text form is one line per check::

    CHECK <name> <instance> PASS|FAIL [witness]
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    name: str
    instance: str
    passed: bool
    witness: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"CHECK {self.name} {self.instance} {status}"
        return f"{text} {self.witness}" if self.witness else text

    def record(self) -> dict:
        return {
            "name": self.name,
            "instance": self.instance,
            "passed": self.passed,
            "witness": self.witness,
        }


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, instance: str, passed: bool, witness: str = "") -> Check:
        check = Check(name, instance.replace(" ", "_") or "-", bool(passed), witness)
        self.checks.append(check)
        return check

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]

    def __str__(self) -> str:
        return "\n".join(self.lines())
