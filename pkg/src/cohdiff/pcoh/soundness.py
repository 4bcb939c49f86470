"""Soundness identities [[M]] = sum [[M_i]] for the curated rewrites.

Comparisons use exact degree (no truncation in the argument), a nat cutoff
well above any numeral the generated programs reach, and a matched fix
budget on both sides.  D-beta is checked against ``diff_by_dual``, which
computes D f x with a nilpotent infinitesimal instead of the differential
modification the evaluator itself uses for D.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..checks import CheckResult
from ..diffmod import d_beta
from ..formal_sums import FormalSum
from ..generators import GenConfig, random_program
from ..rewrites import SOUNDNESS_RULES, linear_position, redex_sites, rewrite_at
from ..syntax import Abs, App, DApp, Inj, NatD, Proj, Term, Theta, free_vars, iter_subterms
from ..typecheck import type_of
from .semantics import diff_by_dual, psem_bounded


@dataclass(frozen=True)
class SoundnessConfig:
    programs: int = 300
    seed: int = 0
    nat: int = 48
    fix_iters: int = 8
    max_depth: int = 4


def vec_add(a: dict, b: dict, n: int = 1) -> dict:
    out = dict(a)
    for key, c in b.items():
        out[key] = out.get(key, Fraction(0)) + n * c
    return {k: v for k, v in sorted(out.items()) if v}


def sum_semantics(s: FormalSum, nat: int, fix_iters: int) -> dict:
    acc: dict = {}
    for t, n in s.items():
        acc = vec_add(acc, psem_bounded(t, nat, None, fix_iters), n)
    return acc


def rewrite_identity(m: Term, path: tuple, nat: int = 48, fix_iters: int = 8):
    """(rule, [[M]], sum of [[M_i]]) for the redex of M at ``path``."""
    rule, out = rewrite_at(m, path, SOUNDNESS_RULES)
    return rule, psem_bounded(m, nat, None, fix_iters), sum_semantics(out, nat, fix_iters)


def first_order_dapp(t: Term) -> bool:
    """``D (\\x. M) N`` closed, with the function of type T^h nat -> T^g nat."""
    if not (isinstance(t, App) and isinstance(t.fun, DApp) and isinstance(t.fun.arg, Abs)):
        return False
    if free_vars(t):
        return False
    a = type_of((), t.fun.arg)
    return isinstance(a.dom, NatD) and isinstance(a.cod, NatD)


def d_beta_identity(t: App, nat: int = 48, fix_iters: int = 8):
    """(oracle D f x, [[(D-beta reduct) x]]) for ``t = D (\\x. M) N``."""
    f = t.fun.arg
    lhs = diff_by_dual(f, t.arg, nat, fix_iters)
    rhs = psem_bounded(App(d_beta(f), t.arg), nat, None, fix_iters)
    return lhs, rhs


def check_soundness(cfg: SoundnessConfig = SoundnessConfig()) -> CheckResult:
    """Every linear-position redex of the curated rules in random closed programs."""
    res = CheckResult("soundness", mode="sampled")
    gen = GenConfig(max_depth=cfg.max_depth)
    per_rule = {r: 0 for r in SOUNDNESS_RULES}
    oracle = 0
    for i in range(cfg.programs):
        m = random_program(cfg.seed + i, gen, ty=NatD(i % 3))
        for path, rule, _ in list(redex_sites(m, SOUNDNESS_RULES)):
            if not linear_position(m, path):
                continue
            res.checked += 1
            per_rule[rule] += 1
            _, lhs, rhs = rewrite_identity(m, path, cfg.nat, cfg.fix_iters)
            if lhs != rhs:
                res.fail(seed=cfg.seed + i, path=path, rule=rule, lhs=lhs, rhs=rhs)
        for t in iter_subterms(m):
            if first_order_dapp(t):
                res.checked += 1
                oracle += 1
                lhs, rhs = d_beta_identity(t, cfg.nat, cfg.fix_iters)
                if lhs != rhs:
                    res.fail(seed=cfg.seed + i, rule="d-beta-oracle", lhs=lhs, rhs=rhs)
    # targeted redexes at the root: proj over sum and proj over inj
    for i in range(cfg.programs // 3):
        d, j = i % 2, (i // 2) % 2
        body = random_program(cfg.seed + i, gen, ty=NatD(d + 2))
        inner = random_program(cfg.seed + i, gen, ty=NatD(d))
        for m in (Proj(d, j, Theta(d, body)), Proj(d, j, Inj(d, (i // 4) % 2, inner))):
            res.checked += 1
            rule, lhs, rhs = rewrite_identity(m, (), cfg.nat, cfg.fix_iters)
            per_rule[rule] += 1
            if lhs != rhs:
                res.fail(seed=cfg.seed + i, path=(), rule=rule, lhs=lhs, rhs=rhs)
    res.counts = dict(per_rule, **{"d-beta-oracle": oracle})
    return res
