"""Random well-typed terms, built type-directed so that typing holds by construction.

Recursion is only introduced through a bounded template
``fix (\\f. \\n. if(n, base, (\\r. step) (f (pred n))))`` applied to a small
numeral-valued argument, so generated closed programs terminate.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .syntax import (
    NAT, Abs, App, Arrow, DApp, Fix, Flip, If, Inj, Let, NatD, Num, Pred, Proj, Succ, Term,
    Theta, Type, Var, sharp_decompose, t_shift,
)
from .typecheck import Context, lookup


@dataclass(frozen=True)
class GenConfig:
    max_depth: int = 4        # syntactic depth budget
    max_tdepth: int = 3       # largest T-depth of intermediate types
    max_num: int = 3
    allow_fix: bool = True
    allow_open: bool = True   # use context variables


def random_type(rng: random.Random, max_tdepth: int = 2, arrows: bool = True) -> Type:
    if arrows and rng.random() < 0.25:
        return Arrow(NatD(rng.randint(0, max_tdepth - 1)), NatD(rng.randint(0, max_tdepth - 1)))
    return NatD(rng.randint(0, max_tdepth - 1))


class Generator:
    def __init__(self, rng: random.Random, cfg: GenConfig = GenConfig()):
        self.rng = rng
        self.cfg = cfg
        self._n = 0

    def name(self, base: str) -> str:
        self._n += 1
        return f"{base}{self._n}"

    # leaves
    def constant(self, ty: Type) -> Term:
        if isinstance(ty, Arrow):
            return Abs(self.name("c"), ty.dom, self.constant(ty.cod))
        t: Term = Num(self.rng.randint(0, self.cfg.max_num))
        for e in range(ty.d):
            t = Inj(self.rng.randint(0, e), self.rng.randint(0, 1), t)
        return t

    def leaf(self, ctx: Context, ty: Type) -> Term:
        vs = [x for x, a in ctx if a == ty and lookup(ctx, x) == a]
        if vs and self.cfg.allow_open and self.rng.random() < 0.6:
            return Var(self.rng.choice(vs))
        return self.constant(ty)

    # main entry
    def term(self, ctx: Context, ty: Type, depth: int | None = None) -> Term:
        depth = self.cfg.max_depth if depth is None else depth
        if depth <= 0:
            return self.leaf(ctx, ty)
        if isinstance(ty, Arrow) and self.rng.random() < 0.6:
            x = self.name("x")
            return Abs(x, ty.dom, self.term(ctx + ((x, ty.dom),), ty.cod, depth - 1))
        options = self._options(ctx, ty, depth)
        build = self.rng.choice(options)
        return build()

    def _options(self, ctx: Context, ty: Type, depth: int):
        rng, cfg = self.rng, self.cfg
        e, sharp = sharp_decompose(ty)
        sub = depth - 1
        at = lambda k: t_shift(sharp, k)  # noqa: E731
        opts = [lambda: self.leaf(ctx, ty)]

        if ty == NAT:
            opts.append(lambda: Num(rng.randint(0, cfg.max_num)))
        if isinstance(ty, NatD):
            opts.append(lambda: Succ(e, self.term(ctx, ty, sub)))
            opts.append(lambda: Pred(e, self.term(ctx, ty, sub)))

        def mk_if():
            d = rng.randint(0, e)
            return If(d, self.term(ctx, NatD(d), sub), self.term(ctx, at(e - d), sub),
                      self.term(ctx, at(e - d), sub))

        def mk_let():
            d = rng.randint(0, e)
            x = self.name("n")
            return Let(d, x, self.term(ctx, NatD(d), sub), self.term(ctx + ((x, NAT),), at(e - d), sub))

        opts += [mk_if, mk_let]

        if e >= 1:
            def mk_inj():
                d = rng.randint(0, e - 1)
                return Inj(d, rng.randint(0, 1), self.term(ctx, at(e - 1), sub))

            opts.append(mk_inj)
            if e + 1 <= cfg.max_tdepth:
                def mk_sum():
                    return Theta(rng.randint(0, e - 1), self.term(ctx, at(e + 1), sub))

                opts.append(mk_sum)

            def mk_dapp():
                # D f a : T C with f : B -> C, a : T B
                b = random_type(rng, max(1, cfg.max_tdepth - 1), arrows=False)
                c = at(e - 1)
                f = self.term(ctx, Arrow(b, c), sub)
                return App(DApp(f), self.term(ctx, t_shift(b), sub))

            opts.append(mk_dapp)
        if e + 1 <= cfg.max_tdepth:
            def mk_proj():
                return Proj(rng.randint(0, e), rng.randint(0, 1), self.term(ctx, at(e + 1), sub))

            opts.append(mk_proj)
        if e >= 2:
            def mk_flip():
                d = rng.randint(0, e - 2)
                l = rng.randint(0, e - 2 - d)
                return Flip(d, l, self.term(ctx, ty, sub))

            opts.append(mk_flip)

        def mk_app():
            b = random_type(rng, 2, arrows=False)
            return App(self.term(ctx, Arrow(b, ty), sub), self.term(ctx, b, sub))

        opts.append(mk_app)

        if cfg.allow_fix and depth >= 2:
            opts.append(lambda: self.bounded_fix(ctx, ty, sub))
        return opts

    def bounded_fix(self, ctx: Context, ty: Type, depth: int) -> Term:
        f, n, r = self.name("f"), self.name("k"), self.name("r")
        step_ctx = ctx + ((n, NAT), (r, ty))
        body = If(
            0, Var(n), self.term(ctx + ((n, NAT),), ty, depth - 1),
            App(Abs(r, ty, self.term(step_ctx, ty, depth - 1)), App(Var(f), Pred(0, Var(n)))),
        )
        rec = Fix(Abs(f, Arrow(NAT, ty), Abs(n, NAT, body)))
        return App(rec, Num(self.rng.randint(0, self.cfg.max_num)))


def random_program(seed: int, cfg: GenConfig = GenConfig(), ty: Type = NAT) -> Term:
    """A closed well-typed term of type ``ty`` determined by ``seed``."""
    return Generator(random.Random(seed), cfg).term((), ty)


def random_open(seed: int, cfg: GenConfig = GenConfig()) -> tuple[Context, str, Type, Term, Type]:
    """A random judgment G, x:A |- M : B, returned as (G, x, A, M, B)."""
    rng = random.Random(seed)
    g = Generator(rng, cfg)
    ctx: Context = tuple((f"g{i}", random_type(rng, 2)) for i in range(rng.randint(0, 2)))
    a = random_type(rng, 2)
    b = random_type(rng, 2)
    x = "x"
    m = g.term(ctx + ((x, a),), b)
    return ctx, x, a, m, b
