"""The abstract machine: states <word, term, stack>, transitions, runs.

Words are tuples over {0,1}; the rightmost letter is the outermost T layer.
A transition returns either ``Final(n)`` or a formal sum of states of size
0, 1 or 2 (erasure, deterministic step, or a sum split).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ._deep import deep
from .diffmod import diff_mod, substitute
from .formal_sums import FormalSum
from .syntax import (
    Abs, App, DApp, Fix, Flip, If, Inj, Let, Num, Pred, Proj, Succ, Term, Theta,
    render, t_shift,
)


# ---------------------------------------------------------------------------
# stacks


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class ArgF:
    term: Term
    rest: "Stack"


@dataclass(frozen=True)
class SuccF:
    rest: "Stack"


@dataclass(frozen=True)
class PredF:
    rest: "Stack"


@dataclass(frozen=True)
class IfF:
    word: tuple
    then: Term
    orelse: Term
    rest: "Stack"


@dataclass(frozen=True)
class LetF:
    word: tuple
    var: str
    body: Term
    rest: "Stack"


@dataclass(frozen=True)
class DiffF:
    i: int
    rest: "Stack"


Stack = Union[Empty, ArgF, SuccF, PredF, IfF, LetF, DiffF]
EMPTY = Empty()


@dataclass(frozen=True)
class State:
    word: tuple
    term: Term
    stack: Stack


@dataclass(frozen=True)
class Final:
    n: int


class StuckError(Exception):
    """No transition applies to a non-final state (only possible if ill typed)."""


def word_str(w: tuple) -> str:
    return "".join(map(str, w)) or "ε"


def render_stack(s: Stack) -> str:
    parts = []
    while not isinstance(s, Empty):
        if isinstance(s, ArgF):
            parts.append(f"arg({render(s.term)})")
        elif isinstance(s, SuccF):
            parts.append("succ")
        elif isinstance(s, PredF):
            parts.append("pred")
        elif isinstance(s, IfF):
            parts.append(f"if({word_str(s.word)}, {render(s.then)}, {render(s.orelse)})")
        elif isinstance(s, LetF):
            parts.append(f"let({word_str(s.word)}, {s.var}, {render(s.body)})")
        elif isinstance(s, DiffF):
            parts.append(f"d{s.i}")
        s = s.rest
    parts.append("<>")
    return " . ".join(parts)


def render_state(e: State) -> str:
    return f"<{word_str(e.word)}, {render(e.term)}, {render_stack(e.stack)}>"


# ---------------------------------------------------------------------------
# transitions


def _split(w: tuple, d: int) -> tuple[tuple, tuple] | None:
    """Split w as (eps, delta) with |delta| = d."""
    if len(w) < d:
        return None
    return w[: len(w) - d], w[len(w) - d :]


def step_named(e: State) -> tuple[str, Final | FormalSum]:
    """One transition, together with the name of the rule that fired."""
    w, t, s = e.word, e.term, e.stack
    one = FormalSum.single

    # push
    if isinstance(t, (Succ, Pred)) and t.d == len(w):
        frame = SuccF(s) if isinstance(t, Succ) else PredF(s)
        return ("push-succ" if isinstance(t, Succ) else "push-pred"), one(State(w, t.arg, frame))
    if isinstance(t, If):
        sp = _split(w, t.d)
        if sp is not None:
            eps, delta = sp
            return "push-if", one(State(delta, t.scrut, IfF(eps, t.then, t.orelse, s)))
    if isinstance(t, Let):
        sp = _split(w, t.d)
        if sp is not None:
            eps, delta = sp
            return "push-let", one(State(delta, t.scrut, LetF(eps, t.var, t.body, s)))
    if isinstance(t, App):
        return "push-arg", one(State(w, t.fun, ArgF(t.arg, s)))
    if isinstance(t, Fix):
        return "push-fix", one(State(w, t.body, ArgF(t, s)))
    if isinstance(t, DApp) and w:
        return "push-d", one(State(w[:-1], t.arg, DiffF(w[-1], s)))

    # pop
    if isinstance(t, Num) and not w:
        if isinstance(s, Empty):
            return "final", Final(t.n)
        if isinstance(s, SuccF):
            return "pop-succ", one(State((), Num(t.n + 1), s.rest))
        if isinstance(s, PredF):
            return "pop-pred", one(State((), Num(max(t.n - 1, 0)), s.rest))
        if isinstance(s, IfF):
            if t.n == 0:
                return "pop-if-zero", one(State(s.word, s.then, s.rest))
            return "pop-if-succ", one(State(s.word, s.orelse, s.rest))
        if isinstance(s, LetF):
            return "pop-let", one(State(s.word, substitute(s.body, t, s.var), s.rest))
    if isinstance(t, Abs):
        if isinstance(s, ArgF):
            return "pop-beta", one(State(w, substitute(t.body, s.term, t.var), s.rest))
        if isinstance(s, DiffF):
            lam = Abs(t.var, t_shift(t.annot), diff_mod(t.var, t.body))
            return "pop-d", one(State(w + (s.i,), lam, s.rest))

    # access word
    if isinstance(t, Proj):
        sp = _split(w, t.d)
        if sp is not None:
            eps, delta = sp
            return "access-proj", one(State(eps + (t.i,) + delta, t.arg, s))
    if isinstance(t, Inj):
        sp = _split(w, t.d + 1)
        if sp is not None:
            eps, rest = sp
            j, delta = rest[0], rest[1:]
            if j == t.i:
                return "access-inj", one(State(eps + delta, t.arg, s))
            return "access-inj-erase", FormalSum.zero()
    if isinstance(t, Theta):
        sp = _split(w, t.d + 1)
        if sp is not None:
            eps, rest = sp
            j, delta = rest[0], rest[1:]
            if j == 0:
                return "access-sum-0", one(State(eps + (0, 0) + delta, t.arg, s))
            return "access-sum-1", FormalSum(
                [State(eps + (0, 1) + delta, t.arg, s), State(eps + (1, 0) + delta, t.arg, s)]
            )
    if isinstance(t, Flip):
        sp = _split(w, t.d + t.l + 2)
        if sp is not None:
            eps, rest = sp
            block, delta = rest[: t.l + 2], rest[t.l + 2 :]
            rotated = (block[-1],) + block[:-1]
            return "access-flip", one(State(eps + rotated + delta, t.arg, s))

    raise StuckError(f"no transition for {render_state(e)}")


def step(e: State) -> Final | FormalSum:
    return step_named(e)[1]


def is_final(e: State) -> bool:
    return isinstance(e.term, Num) and not e.word and isinstance(e.stack, Empty)


def initial(m: Term) -> State:
    return State((), m, EMPTY)


# ---------------------------------------------------------------------------
# runs


class DeterminismViolation(Exception):
    pass


@dataclass
class RunResult:
    outcome: str  # "numeral" | "zero" | "fuel-exhausted"
    value: int | None
    steps: int
    branch_points: int
    erased: int
    finals: FormalSum = field(default_factory=FormalSum)
    pending: FormalSum = field(default_factory=FormalSum)
    trace: list[dict] | None = None

    def describe(self) -> str:
        if self.outcome == "numeral":
            return str(self.value)
        return self.outcome


@deep
def run(m: Term, fuel: int = 10_000, trace: bool = False) -> RunResult:
    """Run the machine from <eps, M, <>> until every branch is final or fuel is spent.

    The worklist holds (branch id, state) pairs and is processed first-in
    first-out; a sum split extends the branch id by one letter per summand.
    """
    work: list[tuple[str, State]] = [("", initial(m))]
    finals: dict[State, int] = {}
    steps = branch_points = erased = 0
    records: list[dict] | None = [] if trace else None
    head = 0
    while head < len(work):
        bid, e = work[head]
        if steps >= fuel and not is_final(e):
            break
        head += 1
        rule, out = step_named(e)
        if records is not None:
            records.append({
                "step": steps, "word": word_str(e.word), "term": render(e.term),
                "stack": render_stack(e.stack), "rule-name": rule, "branch-id": bid or "root",
            })
        if isinstance(out, Final):
            finals[e] = finals.get(e, 0) + 1
            continue
        steps += 1
        succs = [x for x, n in out.items() for _ in range(n)]
        if not succs:
            erased += 1
        elif len(succs) > 1:
            branch_points += 1
            for k, x in enumerate(succs):
                work.append((bid + str(k), x))
            continue
        work.extend((bid, x) for x in succs)
    pending = FormalSum([x for _, x in work[head:]])
    fin = FormalSum(finals)
    res = RunResult("zero", None, steps, branch_points, erased, fin, pending, records)
    if pending:
        res.outcome = "fuel-exhausted"
        return res
    if len(fin) > 1:
        raise DeterminismViolation(f"several numeral-final states: {fin!r}")
    if len(fin) == 1:
        (e,) = fin.support()
        res.outcome, res.value = "numeral", e.term.n
    return res


@dataclass
class DeterminismReport:
    ok: bool
    numeral: int | None
    leaves: list[tuple[str, str]]  # (branch id, "numeral:n" | "erased" | "fuel")
    complete: bool


@deep
def check_determinism(m: Term, fuel: int = 10_000) -> DeterminismReport:
    """Explore every branch separately and count numeral-final leaves."""
    leaves: list[tuple[str, str]] = []
    stack: list[tuple[str, State]] = [("", initial(m))]
    steps = 0
    while stack:
        bid, e = stack.pop()
        if steps >= fuel:
            leaves.append((bid or "root", "fuel"))
            continue
        out = step(e)
        steps += 1
        if isinstance(out, Final):
            leaves.append((bid or "root", f"numeral:{out.n}"))
            continue
        succs = [x for x, n in out.items() for _ in range(n)]
        if not succs:
            leaves.append((bid or "root", "erased"))
        elif len(succs) == 1:
            stack.append((bid, succs[0]))
        else:
            for k, x in reversed(list(enumerate(succs))):
                stack.append((bid + str(k), x))
    leaves.sort()
    nums = [lab for _, lab in leaves if lab.startswith("numeral:")]
    complete = all(lab != "fuel" for _, lab in leaves)
    numeral = int(nums[0].split(":")[1]) if len(nums) == 1 else None
    return DeterminismReport(len(nums) <= 1, numeral, leaves, complete)


# ---------------------------------------------------------------------------
# states back to terms


def proj_word(w: tuple, m: Term) -> Term:
    """proj^0_{i1}(...proj^0_{in}(M)): the rightmost letter is applied first."""
    for i in reversed(w):
        m = Proj(0, i, m)
    return m


def plug(s: Stack, h: Term) -> Term:
    """The term s[h] for the context associated with the stack s."""
    while not isinstance(s, Empty):
        if isinstance(s, SuccF):
            h = Succ(0, h)
        elif isinstance(s, PredF):
            h = Pred(0, h)
        elif isinstance(s, IfF):
            h = proj_word(s.word, If(0, h, s.then, s.orelse))
        elif isinstance(s, LetF):
            h = proj_word(s.word, Let(0, s.var, h, s.body))
        elif isinstance(s, ArgF):
            h = App(h, s.term)
        elif isinstance(s, DiffF):
            h = Proj(0, s.i, DApp(h))
        s = s.rest
    return h


def term_of_state(e: State) -> Term:
    return plug(e.stack, proj_word(e.word, e.term))

