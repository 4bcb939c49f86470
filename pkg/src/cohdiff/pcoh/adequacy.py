"""Cross-check machine outcomes against the bounded PCOH semantics."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..machine import run
from ..syntax import Term
from .semantics import basis_value, psem_bounded

Budget = tuple[int, int, int]  # (nat cutoff N, degree k, fix iterations)
DEFAULT_SCHEDULE: tuple[Budget, ...] = ((4, 2, 4), (8, 3, 8), (16, 4, 16))


def parse_schedule(text: str) -> tuple[Budget, ...]:
    """``default`` or ``N,k,i;N,k,i;...``."""
    if text == "default":
        return DEFAULT_SCHEDULE
    out = []
    for part in text.split(";"):
        n, k, i = (int(s) for s in part.split(","))
        out.append((n, k, i))
    if not out:
        raise ValueError("empty schedule")
    return tuple(out)


@dataclass
class AdequacyVerdict:
    status: str  # agree | inconclusive-budget | contradiction | machine-fuel
    machine: str  # numeral value, "zero" or "fuel-exhausted"
    reached_at: Budget | None = None
    budgets: list[dict] = field(default_factory=list)
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "agree"


def _show(vec: dict) -> dict:
    return {f"{''.join(map(str, w)) or 'e'}:{n}": str(c) for (w, n), c in vec.items()}


def adequacy_check(m: Term, schedule=DEFAULT_SCHEDULE, fuel: int = 10_000) -> AdequacyVerdict:
    """Run M, then escalate budgets until the semantics is exactly e_nu.

    The bounded semantics under-approximates the true one, so at every budget
    it has to stay below e_nu (below 0 for Zero programs); anything else is a
    contradiction.  A machine run that exhausts fuel is compared against the
    zero vector, which is what a diverging program denotes.
    """
    res = run(m, fuel=fuel)
    machine = res.describe()
    target = res.value if res.outcome == "numeral" else None
    verdict = AdequacyVerdict("inconclusive-budget", machine)
    for budget in schedule:
        nat, degree, iters = budget
        vec = psem_bounded(m, nat, degree, iters)
        verdict.budgets.append({"budget": list(budget), "vector": _show(vec)})
        bad = [(w, n, c) for (w, n), c in vec.items()
               if w != () or n != target or c > 1 or c < 0 or c != int(c)]
        if bad:
            verdict.status = "contradiction"
            verdict.message = f"at budget {budget}: unexpected mass {bad[:3]} (machine: {machine})"
            return verdict
        if target is not None and verdict.reached_at is None and basis_value(vec) == target:
            verdict.reached_at = budget
    if target is None:
        verdict.status = "agree" if res.outcome == "zero" else "machine-fuel"
        if res.outcome != "zero":
            verdict.message = "semantics is zero at every budget; machine ran out of fuel"
    elif verdict.reached_at is not None:
        verdict.status = "agree"
    return verdict


def entry_sum(vec: dict) -> Fraction:
    return sum(vec.values(), Fraction(0))
