"""Result records shared by the axiom suites."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    violations: list = field(default_factory=list)
    mode: str = "exhaustive"
    seconds: float = 0.0
    expect_violation: bool = False  # negative checks succeed by finding a witness
    counts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return bool(self.violations) if self.expect_violation else not self.violations

    def fail(self, **info):
        # keep the first few witnesses, count the rest
        if len(self.violations) < 5:
            self.violations.append({k: repr(v) for k, v in info.items()})
        else:
            self.violations.append(None)

    def as_dict(self) -> dict:
        shown = [v for v in self.violations if v is not None]
        return {"name": self.name, "ok": self.ok, "mode": self.mode, "checked": self.checked,
                "violations": len(self.violations), "examples": shown,
                "expect_violation": self.expect_violation, "counts": self.counts, "seconds": round(self.seconds, 3)}


def run_check(name: str, fn: Callable[[CheckResult], None], **kw) -> CheckResult:
    r = CheckResult(name, **kw)
    t0 = time.perf_counter()
    fn(r)
    r.seconds = time.perf_counter() - t0
    return r
