"""Syntax-directed type synthesis for terms, stacks and machine states."""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    NAT, Abs, App, Arrow, DApp, Fix, Flip, If, Inj, Let, Num, NatD, Pred, Proj, Succ,
    Term, Theta, Type, Var, render_type, sharp_decompose, t_shift,
)

Context = tuple[tuple[str, Type], ...]


class TypeError_(Exception):
    """A typing failure; ``kind`` is unbound-variable, rule-mismatch or index-mismatch."""

    def __init__(self, kind: str, msg: str, term: Term | None = None,
                 expected: str | None = None, actual: str | None = None):
        super().__init__(msg)
        self.kind = kind
        self.term = term
        self.expected = expected
        self.actual = actual


def lookup(ctx: Context, x: str) -> Type | None:
    for y, a in reversed(ctx):
        if y == x:
            return a
    return None


def extend(ctx: Context, x: str, a: Type) -> Context:
    return tuple((y, b) for y, b in ctx if y != x) + ((x, a),)


def _depth_at_least(a: Type, need: int, form: str, t: Term) -> tuple[int, Type]:
    d, e = sharp_decompose(a)
    if d < need:
        raise TypeError_("index-mismatch",
                         f"{form}: argument of type {render_type(a)} has depth {d}, needs at least {need}",
                         t, expected=f"T^{need} A", actual=render_type(a))
    return d, e


def type_of(ctx: Context, t: Term) -> Type:
    if isinstance(t, Var):
        a = lookup(ctx, t.name)
        if a is None:
            raise TypeError_("unbound-variable", f"unbound variable {t.name!r}", t)
        return a
    if isinstance(t, Num):
        return NAT
    if isinstance(t, Abs):
        return Arrow(t.annot, type_of(extend(ctx, t.var, t.annot), t.body))
    if isinstance(t, App):
        f = type_of(ctx, t.fun)
        if not isinstance(f, Arrow):
            raise TypeError_("rule-mismatch", f"application of a non-function of type {render_type(f)}",
                             t, expected="A -> B", actual=render_type(f))
        a = type_of(ctx, t.arg)
        if a != f.dom:
            raise TypeError_("rule-mismatch", "argument type mismatch", t,
                             expected=render_type(f.dom), actual=render_type(a))
        return f.cod
    if isinstance(t, Fix):
        f = type_of(ctx, t.body)
        if not isinstance(f, Arrow) or f.dom != f.cod:
            raise TypeError_("rule-mismatch", "fix expects a term of type A -> A", t,
                             expected="A -> A", actual=render_type(f))
        return f.dom
    if isinstance(t, (Succ, Pred)):
        a = type_of(ctx, t.arg)
        if a != NatD(t.d):
            name = "succ" if isinstance(t, Succ) else "pred"
            kind = "index-mismatch" if isinstance(a, NatD) else "rule-mismatch"
            raise TypeError_(kind, f"{name}^{t.d} expects {render_type(NatD(t.d))}", t,
                             expected=render_type(NatD(t.d)), actual=render_type(a))
        return a
    if isinstance(t, If):
        s = type_of(ctx, t.scrut)
        if s != NatD(t.d):
            kind = "index-mismatch" if isinstance(s, NatD) else "rule-mismatch"
            raise TypeError_(kind, f"if^{t.d} scrutinee must have type {render_type(NatD(t.d))}", t,
                             expected=render_type(NatD(t.d)), actual=render_type(s))
        a = type_of(ctx, t.then)
        b = type_of(ctx, t.orelse)
        if a != b:
            raise TypeError_("rule-mismatch", "if branches have different types", t,
                             expected=render_type(a), actual=render_type(b))
        return t_shift(a, t.d)
    if isinstance(t, Let):
        s = type_of(ctx, t.scrut)
        if s != NatD(t.d):
            kind = "index-mismatch" if isinstance(s, NatD) else "rule-mismatch"
            raise TypeError_(kind, f"let^{t.d} scrutinee must have type {render_type(NatD(t.d))}", t,
                             expected=render_type(NatD(t.d)), actual=render_type(s))
        return t_shift(type_of(extend(ctx, t.var, NAT), t.body), t.d)
    if isinstance(t, DApp):
        f = type_of(ctx, t.arg)
        if not isinstance(f, Arrow):
            raise TypeError_("rule-mismatch", "D expects a function", t,
                             expected="A -> B", actual=render_type(f))
        return Arrow(t_shift(f.dom), t_shift(f.cod))
    if isinstance(t, Inj):
        d, e = _depth_at_least(type_of(ctx, t.arg), t.d, f"inj^{t.d}_{t.i}", t)
        return t_shift(e, d + 1)
    if isinstance(t, Proj):
        d, e = _depth_at_least(type_of(ctx, t.arg), t.d + 1, f"proj^{t.d}_{t.i}", t)
        return t_shift(e, d - 1)
    if isinstance(t, Theta):
        d, e = _depth_at_least(type_of(ctx, t.arg), t.d + 2, f"sum^{t.d}", t)
        return t_shift(e, d - 1)
    if isinstance(t, Flip):
        a = type_of(ctx, t.arg)
        _depth_at_least(a, t.d + t.l + 2, f"flip^{{{t.d},{t.l}}}", t)
        return a
    raise TypeError(f"not a term: {t!r}")


@dataclass(frozen=True)
class TypeReport:
    ok: bool
    type: Type | None = None
    kind: str | None = None
    message: str | None = None
    expected: str | None = None
    actual: str | None = None


def check(ctx: Context, t: Term) -> TypeReport:
    try:
        return TypeReport(True, type_of(ctx, t))
    except TypeError_ as e:
        return TypeReport(False, None, e.kind, str(e), e.expected, e.actual)


# ---------------------------------------------------------------------------
# stacks and states


class StackTypeError(Exception):
    pass


def stack_type(s) -> Type:
    """The sharp type E such that the stack s : E is derivable."""
    from .machine import ArgF, DiffF, Empty, IfF, LetF, PredF, SuccF

    if isinstance(s, Empty):
        return NAT
    if isinstance(s, (SuccF, PredF)):
        if stack_type(s.rest) != NAT:
            raise StackTypeError("succ/pred frame over a stack not of type nat")
        return NAT
    if isinstance(s, IfF):
        e = stack_type(s.rest)
        a = _closed_type((), s.then)
        b = _closed_type((), s.orelse)
        if a != b or a != t_shift(e, len(s.word)):
            raise StackTypeError("if frame: branches must have type T^|delta| E")
        return NAT
    if isinstance(s, LetF):
        e = stack_type(s.rest)
        a = _closed_type(((s.var, NAT),), s.body)
        if a != t_shift(e, len(s.word)):
            raise StackTypeError("let frame: body must have type T^|delta| E")
        return NAT
    if isinstance(s, ArgF):
        e = stack_type(s.rest)
        return Arrow(_closed_type((), s.term), e)
    if isinstance(s, DiffF):
        e = stack_type(s.rest)
        if not isinstance(e, Arrow):
            raise StackTypeError("derivative frame over a stack not of arrow type")
        dom = e.dom
        d, base = sharp_decompose(dom)
        if d < 1:
            raise StackTypeError("derivative frame: inner stack must accept a T-type argument")
        return Arrow(t_shift(base, d - 1), e.cod)
    raise StackTypeError(f"not a stack: {s!r}")


def _closed_type(ctx: Context, t: Term) -> Type:
    try:
        return type_of(ctx, t)
    except TypeError_ as e:
        raise StackTypeError(f"ill-typed embedded term: {e}") from None


@dataclass(frozen=True)
class StateReport:
    ok: bool
    sharp: Type | None = None
    depth: int | None = None
    message: str | None = None


def state_well_typed(e) -> StateReport:
    try:
        sty = stack_type(e.stack)
    except StackTypeError as err:
        return StateReport(False, message=str(err))
    if not _sharp(sty):
        return StateReport(False, message="stack type is not sharp")
    try:
        a = type_of((), e.term)
    except TypeError_ as err:
        return StateReport(False, message=f"ill-typed term: {err}")
    want = t_shift(sty, len(e.word))
    if a != want:
        return StateReport(False, message=f"term has type {render_type(a)}, state needs {render_type(want)}")
    return StateReport(True, sty, len(e.word))


def _sharp(a: Type) -> bool:
    return sharp_decompose(a)[0] == 0
