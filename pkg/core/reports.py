# core/reports.py
from dataclasses import dataclass, field


@dataclass(frozen=True)
class AxiomResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    """Itemized axiom results; failures are data, never exceptions."""

    subject: str
    items: list = field(default_factory=list)

    def check(self, name, passed, detail=""):
        self.items.append(AxiomResult(name=name, passed=bool(passed), detail=detail))
        return bool(passed)

    def extend(self, other, prefix=""):
        for item in other.items:
            self.items.append(AxiomResult(
                name=f"{prefix}{item.name}", passed=item.passed, detail=item.detail,
            ))

    @property
    def passed(self):
        return all(item.passed for item in self.items)

    @property
    def failures(self):
        return [item for item in self.items if not item.passed]

    def as_dict(self):
        return {
            "subject": self.subject,
            "passed": self.passed,
            "axioms": [
                {"name": item.name, "passed": item.passed, "detail": item.detail}
                for item in self.items
            ],
        }
