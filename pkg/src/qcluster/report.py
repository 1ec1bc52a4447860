from dataclasses import dataclass, field


@dataclass
class Report:
    """Named pass/fail entries plus free-form details."""

    checks: dict = field(default_factory=dict)
    details: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(self.checks.values())

    def record(self, name, passed, detail=None):
        self.checks[name] = self.checks.get(name, True) and bool(passed)
        if detail and not passed:
            self.details.append(f"{name}: {detail}")

    def lines(self):
        out = [f"{name}: {'pass' if ok else 'FAIL'}" for name, ok in self.checks.items()]
        return out + self.details
