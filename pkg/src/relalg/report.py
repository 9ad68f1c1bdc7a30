"""A small pass/fail report shared by the verification routines."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field


@dataclass
class Check:
    name: str
    passed: bool = True
    checked: int = 0
    witness: tuple = ()
    detail: str = ""

    def record(self, ok: bool, *witness) -> bool:
        self.checked += 1
        if not ok and self.passed:
            self.passed = False
            self.witness = tuple(str(w) for w in witness)
        return ok


@dataclass
class CheckReport:
    title: str
    checks: list = field(default_factory=list)
    seed: int | None = None
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str, detail: str = "") -> Check:
        """Return the named check, creating it on first use."""
        for c in self.checks:
            if c.name == name:
                return c
        c = Check(name, detail=detail)
        self.checks.append(c)
        return c

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "seed": self.seed,
            "info": self.info,
            "checks": [asdict(c) for c in self.checks],
        }
