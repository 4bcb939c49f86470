"""Degree-bounded exponentials of coherence spaces and their Kleisli categories.

Two exponentials are provided.  The free one (``oc_free``) has finite
multisets with clique support as web; Girard's original one (``oc_girard``)
has finite cliques.  Both are truncated at a degree bound k, so Kleisli
composites are exact only when every needed decomposition fits under k.
Composition reports whether anything was cut off.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable

from ..multisets import msort, multisets, pairings, sum_decompositions, support
from .relations import BaseRel, LazyRel, Rel
from .spaces import CohSpace, csort, one, tensor, with_

FREE, GIRARD = "free", "girard"


def _is_tuple(m) -> bool:
    return isinstance(m, tuple)


def oc_free(e: CohSpace, k: int) -> CohSpace:
    """Multisets m with |m| <= k and clique support; m ~ m' iff m + m' has clique support."""

    def contains(m):
        return _is_tuple(m) and len(m) <= k and e.is_clique(support(m)) and msort(m) == m

    def coh(m1, m2):
        return e.is_clique(support(m1 + m2))

    def enum():
        return [m for m in multisets(e.web, k) if e.is_clique(support(m))]

    sp = CohSpace(f"!{k}{e.name}", coh, contains=contains, enum=enum, check=False)
    sp.base, sp.kind, sp.k = e, FREE, k
    return sp


def oc_girard(e: CohSpace, k: int) -> CohSpace:
    """Cliques of size <= k (sorted tuples); x ~ y iff x u y is a clique."""

    def contains(x):
        return (_is_tuple(x) and len(x) <= k and len(set(x)) == len(x) and e.is_clique(x)
                and csort(x) == x)

    def coh(x, y):
        return e.is_clique(set(x) | set(y))

    def enum():
        return e.cliques(k)

    sp = CohSpace(f"!g{k}{e.name}", coh, contains=contains, enum=enum, check=False)
    sp.base, sp.kind, sp.k = e, GIRARD, k
    return sp


# -- comonad structure (free exponential) ------------------------------------------------


def der(e: CohSpace, k: int) -> Rel:
    return Rel(oc_free(e, k), e, {((a,), a) for a in e.web})


def der_girard(e: CohSpace, k: int) -> Rel:
    return Rel(oc_girard(e, k), e, {((a,), a) for a in e.web})


def dig(e: CohSpace, k: int) -> LazyRel:
    """(m, [m1..mj]) with m1 + ... + mj = m, all sizes bounded by k."""
    src = oc_free(e, k)
    tgt = oc_free(src, k)
    return LazyRel(src, tgt, lambda m: sum_decompositions(m, k) if src.contains(m) else (), "dig")


def oc_rel(f: BaseRel, k: int) -> LazyRel:
    """The functor ! on a linear morphism: ([a1..an], [b1..bn]) with (ai, bi) in f."""
    src, tgt = oc_free(f.src, k), oc_free(f.tgt, k)

    def img(m):
        if not src.contains(m):
            return ()
        outs = set()
        for bs in product(*(sorted(f.image(a), key=repr) for a in m)):
            p = msort(bs)
            if tgt.contains(p):
                outs.add(p)
        return outs

    return LazyRel(src, tgt, img, "!f")


def m0(k: int) -> Rel:
    """The lax unit 1 -> !1: * |-> n[*] for every n <= k."""
    o = one()
    return Rel(o, oc_free(o, k), {("*", ("*",) * n) for n in range(k + 1)})


def m2(a: CohSpace, b: CohSpace, k: int) -> LazyRel:
    """!A (x) !B -> !(A (x) B): (m, m') |-> every p with marginals m and m'."""
    src = tensor(oc_free(a, k), oc_free(b, k))
    tgt = oc_free(tensor(a, b), k)

    def img(mm):
        m, mp = mm
        return {p for p in pairings(m, mp) if tgt.contains(p)}

    return LazyRel(src, tgt, img, "m2")


def seely2(a: CohSpace, b: CohSpace, k: int, tags=(0, 1)) -> LazyRel:
    """The Seely iso !A (x) !B -> !(A & B) on webs: (m, m') |-> 0.m + 1.m' (truncated at k)."""
    src = tensor(oc_free(a, k), oc_free(b, k))
    tgt = oc_free(with_(a, b, tags), k)

    def img(mm):
        p = msort([(tags[0], x) for x in mm[0]] + [(tags[1], y) for y in mm[1]])
        return {p} if len(p) <= k else ()

    return LazyRel(src, tgt, img, "seely")


# -- Kleisli morphisms ---------------------------------------------------------------------


@dataclass
class KlResult:
    rel: Rel
    exact: bool  # False when some composite element exceeded the degree bound


def kl_identity(e: CohSpace, k: int, kind: str = FREE) -> Rel:
    return der(e, k) if kind == FREE else der_girard(e, k)


def linear_to_kl(f: Rel, k: int, kind: str = FREE) -> Rel:
    """f o der."""
    src = oc_free(f.src, k) if kind == FREE else oc_girard(f.src, k)
    return Rel(src, f.tgt, {((a,), b) for a, b in f.pairs})


def kleisli_compose(t: Rel, s: Rel, k: int, kind: str = FREE) -> KlResult:
    """t o s in the Kleisli category, for s : !E -> F and t : !F -> G.

    Free: (m1 + ... + mn, c) whenever ([b1..bn], c) in t and (mi, bi) in s.
    Girard: (x1 u ... u xn, c) whenever ({b1..bn}, c) in t and (xi, bi) in s.
    """
    e = s.src.base
    src = oc_free(e, k) if kind == FREE else oc_girard(e, k)
    inv: dict = {}
    for m, b in s.pairs:
        inv.setdefault(b, []).append(m)
    pairs = set()
    exact = True
    for p, c in t.pairs:
        choices = [sorted(inv.get(b, ()), key=repr) for b in p]
        for combo in product(*choices):
            if kind == FREE:
                m = msort(x for part in combo for x in part)
            else:
                m = csort(set(x for part in combo for x in part))
            if len(m) > k:
                exact = False
                continue
            if src.contains(m):
                pairs.add((m, c))
    return KlResult(Rel(src, t.tgt, pairs), exact)


def fun(t: Rel, x: Iterable, kind: str = FREE) -> frozenset:
    """The stable function of a Kleisli morphism: {b | (m, b) in t, supp m included in x}."""
    xs = set(x)
    return frozenset(b for m, b in t.pairs if set(m) <= xs)


def pair_kl(a: Rel, b: Rel, tags=(0, 1)) -> Rel:
    """<a, b> : !Z -> X & Y for Kleisli a : !Z -> X and b : !Z -> Y."""
    tgt = with_(a.tgt, b.tgt, tags)
    return Rel(a.src, tgt, {(m, (tags[0], x)) for m, x in a.pairs} | {(m, (tags[1], y)) for m, y in b.pairs})


@dataclass
class FixResult:
    point: frozenset
    iterations: int
    stationary: bool
    chain: list


def kleisli_fix(f: Rel, iters: int = 64, kind: str = FREE) -> FixResult:
    """Least fixpoint of Fun f as the union of the chain Fun f^n(empty).

    Stops as soon as two consecutive iterates agree; ``iterations`` counts the
    applications of Fun f that were performed.
    """
    x: frozenset = frozenset()
    chain = [x]
    for n in range(1, iters + 1):
        y = fun(f, x, kind)
        chain.append(y)
        if y == x:
            return FixResult(y, n, True, chain)
        x = y
    return FixResult(x, iters, False, chain)


def kleisli_fix_param(f: Rel, z: CohSpace, k: int, iters: int = 32) -> tuple[Rel, int, bool]:
    """The least g : !Z -> X with g = f o <Z, g>, for f : !(Z & X) -> X.

    Computed by iterating g_{n+1} = f o <der, g_n> from the empty relation; returns
    (g, iterations, stationary).  Exactness of each composite is required.
    """
    x = f.tgt
    g = Rel(oc_free(z, k), x, ())
    ident = der(z, k)
    for n in range(1, iters + 1):
        paired = pair_kl(ident, g)
        paired = Rel(oc_free(z, k), f.src.base, paired.pairs)
        nxt = kleisli_compose(f, paired, k).rel
        if nxt == g:
            return g, n, True
        g = nxt
    return g, iters, False


# -- the derivative of stable functions (Girard exponential) ---------------------------------


def local_space(e: CohSpace, x: Iterable, name: str = "") -> CohSpace:
    """E_x: atoms strictly coherent with every atom of x, with the induced coherence."""
    xs = list(x)
    web = [a for a in e.web if all(e.scoh(a, b) for b in xs)]
    return CohSpace(name or f"{e.name}_x", e.coh, web, check=False)


def stable_deriv(t: Rel, x: Iterable) -> Rel:
    """t'(x) = {(a', b) | a' in E_x, (x0 u {a'}, b) in t for some x0 included in x}."""
    e = t.src.base
    xs = frozenset(x)
    ex = local_space(e, xs)
    fy = local_space(t.tgt, fun(t, xs, GIRARD))
    pairs = set()
    for m, b in t.pairs:
        rest = set(m) - xs
        if len(rest) == 1:
            (a,) = rest
            if ex.contains(a):
                pairs.add((a, b))
    return Rel(ex, fy, pairs)
