"""Capture-avoiding substitution and the differential modification of a term."""

from __future__ import annotations

from .syntax import (
    Abs, App, DApp, Fix, Flip, If, Inj, Let, Num, Pred, Proj, Succ, Term, Theta, Var,
    all_names, free_vars, fresh, t_shift,
)


def rename(t: Term, old: str, new: str) -> Term:
    """Rename free occurrences of ``old`` to a variable ``new`` not occurring in ``t``."""
    return substitute(t, Var(new), old)


def substitute(m: Term, n: Term, x: str) -> Term:
    """M[N/x], renaming binders of M that would capture free variables of N."""
    return _subst(m, n, x, free_vars(n))


def _subst(m: Term, n: Term, x: str, fv_n: frozenset) -> Term:
    if isinstance(m, Var):
        return n if m.name == x else m
    if isinstance(m, Num):
        return m
    if x not in free_vars(m):
        return m
    if isinstance(m, Abs):
        y, body = _avoid(m.var, m.body, fv_n, n, x)
        return Abs(y, m.annot, _subst(body, n, x, fv_n))
    if isinstance(m, Let):
        scrut = _subst(m.scrut, n, x, fv_n)
        if m.var == x:
            return Let(m.d, m.var, scrut, m.body)
        y, body = _avoid(m.var, m.body, fv_n, n, x)
        return Let(m.d, y, scrut, _subst(body, n, x, fv_n))
    if isinstance(m, App):
        return App(_subst(m.fun, n, x, fv_n), _subst(m.arg, n, x, fv_n))
    if isinstance(m, If):
        return If(m.d, _subst(m.scrut, n, x, fv_n), _subst(m.then, n, x, fv_n),
                  _subst(m.orelse, n, x, fv_n))
    if isinstance(m, Fix):
        return Fix(_subst(m.body, n, x, fv_n))
    return _rebuild(m, _subst(m.arg, n, x, fv_n))


def _avoid(y: str, body: Term, fv_n: frozenset, n: Term, x: str) -> tuple[str, Term]:
    if y not in fv_n:
        return y, body
    z = fresh(y, all_names(body) | fv_n | {x})
    return z, rename(body, y, z)


def _rebuild(m: Term, arg: Term) -> Term:
    """Same unary constructor and indices as ``m``, new argument."""
    if isinstance(m, Succ):
        return Succ(m.d, arg)
    if isinstance(m, Pred):
        return Pred(m.d, arg)
    if isinstance(m, DApp):
        return DApp(arg)
    if isinstance(m, Inj):
        return Inj(m.d, m.i, arg)
    if isinstance(m, Proj):
        return Proj(m.d, m.i, arg)
    if isinstance(m, Theta):
        return Theta(m.d, arg)
    if isinstance(m, Flip):
        return Flip(m.d, m.l, arg)
    raise TypeError(m)


def diff_mod(x: str, m: Term) -> Term:
    """The differential modification of M with respect to x.

    If ``G, x:A |- M : B`` then ``G, x:TA |- diff_mod(x, M) : TB``.  The result
    is a single term: no formal sums are introduced.
    """
    if isinstance(m, Var):
        return m if m.name == x else Inj(0, 0, m)
    if isinstance(m, Num):
        return Inj(0, 0, m)
    if isinstance(m, App):
        return App(Theta(0, DApp(diff_mod(x, m.fun))), diff_mod(x, m.arg))
    if isinstance(m, Abs):
        y, body = m.var, m.body
        if y == x:
            y = fresh(y, all_names(body) | {x})
            body = rename(body, x, y)
        return Abs(y, m.annot, diff_mod(x, body))
    if isinstance(m, Fix):
        return Fix(Theta(0, DApp(diff_mod(x, m.body))))
    if isinstance(m, Succ):
        return Succ(m.d + 1, diff_mod(x, m.arg))
    if isinstance(m, Pred):
        return Pred(m.d + 1, diff_mod(x, m.arg))
    if isinstance(m, If):
        inner = If(m.d + 1, diff_mod(x, m.scrut), diff_mod(x, m.then), diff_mod(x, m.orelse))
        return Theta(0, Flip(0, m.d, inner))
    if isinstance(m, Let):
        y, body = m.var, m.body
        if y == x:
            y = fresh(y, all_names(body) | {x})
            body = rename(body, x, y)
        inner = Let(m.d + 1, y, diff_mod(x, m.scrut), diff_mod(x, body))
        return Theta(0, Flip(0, m.d, inner))
    if isinstance(m, Proj):
        return Proj(m.d + 1, m.i, diff_mod(x, m.arg))
    if isinstance(m, Inj):
        return Inj(m.d + 1, m.i, diff_mod(x, m.arg))
    if isinstance(m, Theta):
        return Theta(m.d + 1, diff_mod(x, m.arg))
    if isinstance(m, Flip):
        return Flip(m.d + 1, m.l, diff_mod(x, m.arg))
    if isinstance(m, DApp):
        return Flip(0, 0, DApp(diff_mod(x, m.arg)))
    raise TypeError(f"not a term: {m!r}")


def d_beta(abs_: Abs) -> Abs:
    """The D-beta reduct of ``D (\\x:A. M)``: ``\\x:TA. diff_mod(x, M)``."""
    return Abs(abs_.var, t_shift(abs_.annot), diff_mod(abs_.var, abs_.body))
