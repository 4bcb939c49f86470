"""A curated set of term rewrite rules M ~> sum of M_i, with one-step contextual lifting.

This is not the full reduction relation of the calculus: only beta, D-beta,
the projection/injection and projection/sum rules, numeral arithmetic and fix
unfolding are provided.  The projection/sum rules and the erasing rules are
linear, so they are only semantically sound in linear positions (see
``linear_position``); type preservation holds anywhere.
"""

from __future__ import annotations

from typing import Callable, Iterator

from .diffmod import d_beta, substitute
from .formal_sums import FormalSum, Rule
from .syntax import (
    Abs, App, DApp, Fix, Flip, If, Inj, Let, Num, Pred, Proj, Succ, Term, Theta, children,
)

one = FormalSum.single


def _beta(t: Term):
    if isinstance(t, App) and isinstance(t.fun, Abs):
        return one(substitute(t.fun.body, t.arg, t.fun.var))
    return None


def _d_beta(t: Term):
    if isinstance(t, DApp) and isinstance(t.arg, Abs):
        return one(d_beta(t.arg))
    return None


def _proj_inj(t: Term):
    if isinstance(t, Proj) and isinstance(t.arg, Inj) and t.arg.d == t.d:
        return one(t.arg.arg) if t.arg.i == t.i else FormalSum.zero()
    return None


def _proj_sum(t: Term):
    if isinstance(t, Proj) and isinstance(t.arg, Theta) and t.arg.d == t.d:
        d, m = t.d, t.arg.arg
        if t.i == 0:
            return one(Proj(d, 0, Proj(d, 0, m)))
        return FormalSum([Proj(d, 0, Proj(d, 1, m)), Proj(d, 1, Proj(d, 0, m))])
    return None


def _arith(t: Term):
    if isinstance(t, Succ) and t.d == 0 and isinstance(t.arg, Num):
        return one(Num(t.arg.n + 1))
    if isinstance(t, Pred) and t.d == 0 and isinstance(t.arg, Num):
        return one(Num(max(t.arg.n - 1, 0)))
    if isinstance(t, If) and t.d == 0 and isinstance(t.scrut, Num):
        return one(t.then if t.scrut.n == 0 else t.orelse)
    if isinstance(t, Let) and t.d == 0 and isinstance(t.scrut, Num):
        return one(substitute(t.body, t.scrut, t.var))
    return None


def _fix(t: Term):
    if isinstance(t, Fix):
        return one(App(t.body, t))
    return None


ROOT_RULES: dict[str, Callable[[Term], FormalSum | None]] = {
    "beta": _beta,
    "d-beta": _d_beta,
    "proj-inj": _proj_inj,
    "proj-sum": _proj_sum,
    "arith": _arith,
    "fix": _fix,
}

# the rules that the soundness identities are stated for
SOUNDNESS_RULES = ("d-beta", "proj-inj", "proj-sum")


def root_step(t: Term, rules=None) -> tuple[str, FormalSum] | None:
    for name in rules or ROOT_RULES:
        out = ROOT_RULES[name](t)
        if out is not None:
            return name, out
    return None


def as_rule(rules=None) -> Rule:
    """The root rules packaged for ``formal_sums.closure`` (outermost redex only)."""

    def apply(t):
        r = root_step(t, rules)
        return None if r is None else r[1]

    return Rule(apply, "root")


# -- contexts ---------------------------------------------------------------------


def replace_child(t: Term, idx: int, new: Term) -> Term:
    kids = list(children(t))
    kids[idx] = new
    if isinstance(t, App):
        return App(*kids)
    if isinstance(t, Abs):
        return Abs(t.var, t.annot, kids[0])
    if isinstance(t, Fix):
        return Fix(kids[0])
    if isinstance(t, If):
        return If(t.d, *kids)
    if isinstance(t, Let):
        return Let(t.d, t.var, *kids)
    if isinstance(t, Succ):
        return Succ(t.d, kids[0])
    if isinstance(t, Pred):
        return Pred(t.d, kids[0])
    if isinstance(t, DApp):
        return DApp(kids[0])
    if isinstance(t, Inj):
        return Inj(t.d, t.i, kids[0])
    if isinstance(t, Theta):
        return Theta(t.d, kids[0])
    if isinstance(t, Flip):
        return Flip(t.d, t.l, kids[0])
    if isinstance(t, Proj):
        return Proj(t.d, t.i, kids[0])
    raise ValueError("leaf has no children")


def subterm(t: Term, path: tuple) -> Term:
    for i in path:
        t = children(t)[i]
    return t


def plug_path(t: Term, path: tuple, new: Term) -> Term:
    if not path:
        return new
    kid = children(t)[path[0]]
    return replace_child(t, path[0], plug_path(kid, path[1:], new))


def linear_position(t: Term, path: tuple) -> bool:
    """True when the hole at ``path`` is in a linear (sum-preserving) position.

    Arguments of applications and bodies of fix are not linear: they may be
    duplicated or discarded.  The branches of ``if`` are only jointly linear
    (the pair (P, Q) lives in a cartesian product), so neither alone is.
    Every other immediate position is linear.
    """
    for i in path:
        if isinstance(t, App) and i == 1:
            return False
        if isinstance(t, If) and i > 0:
            return False
        if isinstance(t, Fix):
            return False
        t = children(t)[i]
    return True


def redex_sites(t: Term, rules=None, path: tuple = ()) -> Iterator[tuple[tuple, str, FormalSum]]:
    """Every (path, rule name, reduct) for redexes of ``t``, outermost first."""
    r = root_step(t, rules)
    if r is not None:
        yield path, r[0], r[1]
    for i, c in enumerate(children(t)):
        yield from redex_sites(c, rules, path + (i,))


def rewrite_at(t: Term, path: tuple, rules=None) -> tuple[str, FormalSum]:
    r = root_step(subterm(t, path), rules)
    if r is None:
        raise ValueError(f"no redex at {path}")
    name, out = r
    return name, out.map(lambda m: plug_path(t, path, m))
