"""Bounded denotational semantics of PCF with differentials in PCOH.

A closed term of type T^d nat denotes a vector indexed by pairs (w, n) with
w a word of d bits (leftmost = innermost T layer, as in the machine) and
n in {0..N}.  Function values are kept as syntactic closures: applying one
evaluates its body in an extended environment, and D of a closure is the
closure of the differential modification of its body.

Budgets:

* ``nat``: numerals and successors above N are dropped;
* ``degree``: every application scales its argument by a fresh grading
  variable t, monomials with some exponent above k are dropped, and all t are
  set to 1 at the end.  This truncates each Kleisli morphism to its part of
  degree at most k in its argument;
* ``fix_iters``: ``fix M`` is the fix_iters-th Scott iterate of M from 0.

Every clause is a sum of products of natural numbers, so the result grows
pointwise with each budget and never exceeds the unbounded semantics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .._deep import deep
from ..diffmod import diff_mod
from ..syntax import (
    Abs, App, Arrow, DApp, Fix, Flip, If, Inj, Let, NatD, Num, Pred, Proj, Succ, Term, Theta,
    Type, Var, free_vars, sharp_decompose, t_shift,
)
from ..typecheck import type_of

# -- scalars ----------------------------------------------------------------
# A scalar is a polynomial {monomial: int coefficient} with monomials sorted
# tuples of (variable id, exponent).  Integer coefficients suffice: every
# clause only adds and multiplies naturals.

Poly = dict
ONE: Poly = {(): 1}


class Ring:
    def __init__(self, degree: int | None):
        self.degree = degree
        self.nilpotent: set[int] = set()
        self._next = 0

    def fresh(self, nilpotent: bool = False) -> int:
        self._next += 1
        if nilpotent:
            self.nilpotent.add(self._next)
        return self._next

    def var(self, v: int) -> Poly:
        if self._cap(v) == 0:
            return {}  # degree 0 keeps only the constant part
        return {((v, 1),): 1}

    def _cap(self, v: int) -> int | None:
        return 1 if v in self.nilpotent else self.degree

    def mono_mul(self, m1: tuple, m2: tuple) -> tuple | None:
        if not m1:
            return m2
        if not m2:
            return m1
        acc = dict(m1)
        for v, e in m2:
            acc[v] = acc.get(v, 0) + e
            cap = self._cap(v)
            if cap is not None and acc[v] > cap:
                return None
        return tuple(sorted(acc.items()))

    def mul(self, p: Poly, q: Poly) -> Poly:
        out: Poly = {}
        for m1, c1 in p.items():
            for m2, c2 in q.items():
                m = self.mono_mul(m1, m2)
                if m is not None:
                    out[m] = out.get(m, 0) + c1 * c2
        return out


def padd(acc: Poly, p: Poly) -> None:
    for m, c in p.items():
        acc[m] = acc.get(m, 0) + c


def peval1(p: Poly) -> int:
    """Value at all variables = 1."""
    return sum(p.values())


# -- values -----------------------------------------------------------------


@dataclass
class Vec:
    depth: int
    e: dict = field(default_factory=dict)  # (word, n) -> Poly

    def add(self, key, p: Poly) -> None:
        if not p:
            return
        cur = self.e.get(key)
        if cur is None:
            self.e[key] = dict(p)
        else:
            padd(cur, p)


@dataclass
class Closure:
    var: str
    annot: Type
    body: Term
    env: dict
    _type: Type | None = None


@dataclass
class ZeroFn:
    type: Arrow


@dataclass
class Scaled:
    coef: Poly
    inner: "Value"


@dataclass
class OpFn:
    """The function y |-> op(f y) for a structural operator op (inj, proj, sum, flip)."""

    op: Term  # the operator with a dummy argument; only its indices matter
    inner: "Value"


Value = Union[Vec, Closure, ZeroFn, Scaled, OpFn]


class SemanticsError(Exception):
    pass


class Evaluator:
    def __init__(self, nat: int, degree: int | None, fix_iters: int):
        self.nat = nat
        self.ring = Ring(degree)
        self.fix_iters = fix_iters
        self._names = 0

    # helpers
    def _fresh_name(self, base: str) -> str:
        self._names += 1
        return f"%{base}{self._names}"

    def zero(self, a: Type) -> Value:
        if isinstance(a, NatD):
            return Vec(a.d)
        return ZeroFn(a)

    def type_of_value(self, v: Value) -> Type:
        if isinstance(v, Vec):
            return NatD(v.depth)
        if isinstance(v, ZeroFn):
            return v.type
        if isinstance(v, Scaled):
            return self.type_of_value(v.inner)
        if isinstance(v, OpFn):
            a = self.type_of_value(v.inner)
            return Arrow(a.dom, type_of((("%z", a.cod),), _same_op(v.op, Var("%z"))))
        if v._type is None:
            v._type = Arrow(v.annot, self.type_in_env(v.body, v.env, ((v.var, v.annot),)))
        return v._type

    def type_in_env(self, t: Term, env: dict, extra: tuple = ()) -> Type:
        bound = {x for x, _ in extra}
        ctx = tuple((y, self.type_of_value(env[y])) for y in sorted(free_vars(t) - bound) if y in env)
        return type_of(ctx + extra, t)

    def scale(self, v: Value, c: Poly) -> Value:
        if isinstance(v, Vec):
            out = Vec(v.depth)
            for key, p in v.e.items():
                out.add(key, self.ring.mul(p, c))
            return out
        if isinstance(v, ZeroFn):
            return v
        if isinstance(v, Scaled):
            return Scaled(self.ring.mul(v.coef, c), v.inner)
        return Scaled(c, v)

    def num(self, n: int) -> Vec:
        v = Vec(0)
        if n <= self.nat:
            v.e[((), n)] = dict(ONE)
        return v

    # application and differentiation
    def apply(self, f: Value, a: Value) -> Value:
        if isinstance(f, Closure):
            if self.ring.degree is not None:
                a = self.scale(a, self.ring.var(self.ring.fresh()))
            env = dict(f.env)
            env[f.var] = a
            return self.eval(f.body, env)
        if isinstance(f, ZeroFn):
            return self.zero(f.type.cod)
        if isinstance(f, Scaled):
            return self.scale(self.apply(f.inner, a), f.coef)
        if isinstance(f, OpFn):
            return self.access(f.op, self.apply(f.inner, a))
        raise SemanticsError("application of a non-function")

    def diff(self, f: Value) -> Value:
        if isinstance(f, Closure):
            return Closure(f.var, t_shift(f.annot), diff_mod(f.var, f.body), f.env)
        if isinstance(f, ZeroFn):
            return ZeroFn(Arrow(t_shift(f.type.dom), t_shift(f.type.cod)))
        if isinstance(f, Scaled):
            return Scaled(f.coef, self.diff(f.inner))
        if isinstance(f, OpFn):
            # same index shift as the differential modification of op^d(N)
            return OpFn(_shift_op(f.op), self.diff(f.inner))
        raise SemanticsError("D of a non-function")

    def access(self, t: Term, v: Value) -> Value:
        if isinstance(v, Vec):
            return self._access(t, v)
        if isinstance(v, ZeroFn):
            return ZeroFn(type_of((("%z", v.type),), _same_op(t, Var("%z"))))
        return OpFn(t, v)

    # evaluation
    def eval(self, t: Term, env: dict) -> Value:
        if isinstance(t, Var):
            try:
                return env[t.name]
            except KeyError:
                raise SemanticsError(f"unbound variable {t.name!r}") from None
        if isinstance(t, Num):
            return self.num(t.n)
        if isinstance(t, Abs):
            return Closure(t.var, t.annot, t.body, env)
        if isinstance(t, App):
            return self.apply(self.eval(t.fun, env), self.eval(t.arg, env))
        if isinstance(t, Fix):
            f = self.eval(t.body, env)
            g = self.zero(self.type_of_value(f).dom)
            for _ in range(self.fix_iters):
                g = self.apply(f, g)
            return g
        if isinstance(t, (Succ, Pred)):
            v = self.eval(t.arg, env)
            out = Vec(v.depth)
            for (w, n), p in v.e.items():
                m = n + 1 if isinstance(t, Succ) else max(n - 1, 0)
                if m <= self.nat:
                    out.add((w, m), p)
            return out
        if isinstance(t, If):
            return self._if(t, env)
        if isinstance(t, Let):
            return self._let(t, env)
        if isinstance(t, DApp):
            return self.diff(self.eval(t.arg, env))
        if isinstance(t, (Inj, Proj, Theta, Flip)):
            return self.access(t, self.eval(t.arg, env))
        raise SemanticsError(f"not a term: {t!r}")

    def _access(self, t: Term, v: Vec) -> Vec:
        L = v.depth
        if isinstance(t, Inj):
            pos = L - t.d
            out = Vec(L + 1)
            for (w, n), p in v.e.items():
                out.add((w[:pos] + (t.i,) + w[pos:], n), p)
            return out
        if isinstance(t, Proj):
            pos = L - 1 - t.d
            out = Vec(L - 1)
            for (w, n), p in v.e.items():
                if w[pos] == t.i:
                    out.add((w[:pos] + w[pos + 1 :], n), p)
            return out
        if isinstance(t, Theta):
            pos = L - 2 - t.d
            out = Vec(L - 1)
            for (w, n), p in v.e.items():
                pair = w[pos : pos + 2]
                if pair == (1, 1):
                    continue
                c = 0 if pair == (0, 0) else 1
                out.add((w[:pos] + (c,) + w[pos + 2 :], n), p)
            return out
        # Flip: result[eps i1..i_{l+2} delta] = v[eps i_{l+2} i1..i_{l+1} delta]
        width = t.l + 2
        pos = L - t.d - width
        out = Vec(L)
        for (w, n), p in v.e.items():
            blk = w[pos : pos + width]
            out.add((w[:pos] + blk[1:] + blk[:1] + w[pos + width :], n), p)
        return out

    def _if(self, t: If, env: dict) -> Value:
        s = self.eval(t.scrut, env)
        w0: dict = {}
        wpos: dict = {}
        for (w, n), p in s.e.items():
            padd(w0.setdefault(w, {}) if n == 0 else wpos.setdefault(w, {}), p)
        then_v = self.eval(t.then, env) if w0 else None
        else_v = self.eval(t.orelse, env) if wpos else None
        branch = then_v if then_v is not None else else_v
        if branch is None:
            return self.zero(t_shift(self.type_in_env(t.then, env), t.d))
        if isinstance(branch, Vec):
            out = Vec(branch.depth + t.d)
            for weights, val in ((w0, then_v), (wpos, else_v)):
                for ws, c in weights.items():
                    for (wb, n), p in val.e.items():
                        out.add((wb + ws, n), self.ring.mul(c, p))
            return out
        a = self.type_of_value(branch)
        zs, zp, zq, y = (self._fresh_name(b) for b in ("s", "p", "q", "y"))
        env2 = {zs: s, zp: then_v or ZeroFn(a), zq: else_v or ZeroFn(a)}
        body = If(t.d, Var(zs), App(Var(zp), Var(y)), App(Var(zq), Var(y)))
        return Closure(y, a.dom, body, env2)

    def _let(self, t: Let, env: dict) -> Value:
        s = self.eval(t.scrut, env)
        if not s.e:
            return self.zero(t_shift(self.type_in_env(t.body, env, ((t.var, NatD(0)),)), t.d))
        vals: dict[int, Value] = {}
        out: Vec | None = None
        for (ws, n), c in sorted(s.e.items()):
            if n not in vals:
                env2 = dict(env)
                env2[t.var] = self.num(n)
                vals[n] = self.eval(t.body, env2)
            val = vals[n]
            if not isinstance(val, Vec):
                break
            if out is None:
                out = Vec(val.depth + t.d)
            for (wb, m), p in val.e.items():
                out.add((wb + ws, m), self.ring.mul(c, p))
        else:
            return out
        a = self.type_of_value(val)
        zs, y = self._fresh_name("s"), self._fresh_name("y")
        env2 = dict(env)
        env2[zs] = s
        body = Let(t.d, t.var, Var(zs), App(t.body, Var(y)))
        return Closure(y, a.dom, body, env2)


def _shift_op(t: Term) -> Term:
    if isinstance(t, Inj):
        return Inj(t.d + 1, t.i, t.arg)
    if isinstance(t, Proj):
        return Proj(t.d + 1, t.i, t.arg)
    if isinstance(t, Theta):
        return Theta(t.d + 1, t.arg)
    return Flip(t.d + 1, t.l, t.arg)


def _same_op(t: Term, arg: Term) -> Term:
    if isinstance(t, Inj):
        return Inj(t.d, t.i, arg)
    if isinstance(t, Proj):
        return Proj(t.d, t.i, arg)
    if isinstance(t, Theta):
        return Theta(t.d, arg)
    return Flip(t.d, t.l, arg)


# -- public API ---------------------------------------------------------------


def collapse(v: Vec) -> dict[tuple, Fraction]:
    """Set every grading variable to 1; keep nonzero entries only."""
    out = {}
    for key, p in v.e.items():
        c = peval1(p)
        if c:
            out[key] = Fraction(c)
    return dict(sorted(out.items()))


@deep
def psem_bounded(m: Term, nat: int, degree: int | None, fix_iters: int) -> dict[tuple, Fraction]:
    """Bounded semantics of a closed term of type T^d nat, as {(word, n): coefficient}."""
    a = type_of((), m)
    if not isinstance(a, NatD):
        raise SemanticsError("psem_bounded expects a closed term of type T^d nat")
    v = Evaluator(nat, degree, fix_iters).eval(m, {})
    return collapse(v)


def basis_value(vec: dict[tuple, Fraction]) -> int | None:
    """ν when the vector (of a nat term) is exactly e_ν, else None."""
    if len(vec) == 1:
        ((w, n), c), = vec.items()
        if w == () and c == 1:
            return n
    return None


@deep
def diff_by_dual(f: Term, x: Term, nat: int = 8, fix_iters: int = 0) -> dict[tuple, Fraction]:
    """Semantics of ``D f x`` computed without the differential modification.

    ``f : T^h nat -> T^g nat`` and ``x : T^{h+1} nat`` are closed.  The outer
    layer of x becomes a nilpotent infinitesimal e (e^2 = 0): the point
    x_0 + e x_1 is fed to f and the result is split into its e^0 and e^1 parts,
    which form the new outer layer.  Exact (unbounded degree) arithmetic.
    """
    ev = Evaluator(nat, None, fix_iters)
    fv = ev.eval(f, {})
    xv = ev.eval(x, {})
    eps = ev.ring.fresh(nilpotent=True)
    dom = Vec(xv.depth - 1)
    for (w, n), p in xv.e.items():
        q = p if w[-1] == 0 else ev.ring.mul(p, ev.ring.var(eps))
        dom.add((w[:-1], n), q)
    res = ev.apply(fv, dom)
    out = Vec(res.depth + 1)
    for (w, n), p in res.e.items():
        for mono, c in p.items():
            has = any(v == eps for v, _ in mono)
            rest = tuple((v, e) for v, e in mono if v != eps)
            out.add((w + ((1,) if has else (0,)), n), {rest: c})
    return collapse(out)


def depth_of(m: Term) -> int:
    return sharp_decompose(type_of((), m))[0]
