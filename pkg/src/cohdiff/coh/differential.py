"""The differential structure of COH with the free exponential, truncated at degree k."""

from __future__ import annotations

from typing import Callable

from ..multisets import madd, msort, tag
from .exponential import FREE, GIRARD, fun, kleisli_compose, oc_free, oc_girard, stable_deriv
from .relations import LazyRel, Rel, compose, s_rel
from .spaces import CohSpace, dbimon, one, sfun, with_


def ddiff_coh(k: int) -> Rel:
    """d-bar : D -> !D, {(0, n[0])} u {(1, [1] + n[0])} for sizes up to k."""
    d = dbimon()
    pairs = {(0, (0,) * n) for n in range(k + 1)}
    pairs |= {(1, msort((0,) * n + (1,))) for n in range(k)}
    return Rel(d, oc_free(d, k), pairs)


def sdiff_coh(e: CohSpace, k: int) -> LazyRel:
    """The distributive law !S E -> S !E: [(i1,a1)..(ij,aj)] |-> (i1+...+ij, [a1..aj]) when that sum is 0 or 1."""
    src = oc_free(sfun(e), k)
    tgt = sfun(oc_free(e, k))

    def img(p):
        if not src.contains(p):
            return ()
        i = sum(j for j, _ in p)
        return {(i, msort(a for _, a in p))} if i <= 1 else ()

    return LazyRel(src, tgt, img, "sdiff")


def dfun_coh(t: Rel, k: int) -> Rel:
    """D t : !S E -> S F by the closed form.

    (0.m, (0,b)) for (m,b) in t, and (0.m0 + [(1,a)], (1,b)) for (m0 + [a], b) in t
    with a strictly coherent to every atom of m0.
    """
    e = t.src.base
    src = oc_free(sfun(e), k)
    pairs = set()
    for m, b in t.pairs:
        if len(m) > k:
            continue
        pairs.add((tag(0, m), (0, b)))
        for a in set(m):
            m0 = list(m)
            m0.remove(a)
            if all(e.scoh(a, c) for c in m0):
                pairs.add((madd(tag(0, m0), ((1, a),)), (1, b)))
    return Rel(src, sfun(t.tgt), pairs)


def dfun_by_composite(t: Rel, k: int) -> Rel:
    """D t = (S t) o sdiff, materialized on the web of !S E."""
    law = sdiff_coh(t.src.base, k)
    return compose(s_rel(t), law).on(law.src.web)


# -- partial derivatives ------------------------------------------------------------------


def _reindex(df: Rel, src: CohSpace, atom_map: Callable, k: int) -> Rel:
    """df o !theta for a linear injective theta given on atoms."""
    inv = {atom_map(a): a for a in src.base.web}
    pairs = set()
    for q, y in df.pairs:
        if all(c in inv for c in q):
            p = msort(inv[c] for c in q)
            if src.contains(p):
                pairs.add((p, y))
    return Rel(src, df.tgt, pairs)


def partial_deriv(i: int, f: Rel, x1: CohSpace, x2: CohSpace, k: int) -> Rel:
    """D_i f = D f o Theta_i for f : !(X1 & X2) -> Y.

    Theta_1 : S X1 & X2 -> S(X1 & X2) sends (0,(j,a)) to (j,(0,a)) and (1,c) to (0,(1,c));
    Theta_2 is symmetric.
    """
    df = dfun_coh(f, k)
    if i == 1:
        src = oc_free(with_(sfun(x1), x2), k)

        def theta(a):
            return (a[1][0], (0, a[1][1])) if a[0] == 0 else (0, (1, a[1]))
    elif i == 2:
        src = oc_free(with_(x1, sfun(x2)), k)

        def theta(a):
            return (a[1][0], (1, a[1][1])) if a[0] == 1 else (0, (0, a[1]))
    else:
        raise ValueError("i must be 1 or 2")
    return _reindex(df, src, theta, k)


def with_s_iso_atoms(a):
    """S X1 & S X2 -> S(X1 & X2) on atoms: (t,(j,a)) |-> (j,(t,a))."""
    return (a[1][0], (a[0], a[1][1]))


def dfun_via_iso(f: Rel, x1: CohSpace, x2: CohSpace, k: int) -> Rel:
    """D f precomposed with the (S-&) iso, as a morphism !(S X1 & S X2) -> S Y."""
    src = oc_free(with_(sfun(x1), sfun(x2)), k)
    return _reindex(dfun_coh(f, k), src, with_s_iso_atoms, k)


def mu_after(r: Rel, y: CohSpace) -> Rel:
    """mu o r for r into S S Y: (0,(0,b)) -> (0,b), (0,(1,b)) and (1,(0,b)) -> (1,b)."""
    table = {(0, 0): 0, (0, 1): 1, (1, 0): 1}
    pairs = set()
    for m, (i, (j, b)) in r.pairs:
        out = table.get((i, j))
        if out is not None:
            pairs.add((m, (out, b)))
    return Rel(r.src, sfun(y), pairs)


# -- the chain-rule counterexample --------------------------------------------------------


def chain_rule_data(kind: str):
    """The morphisms s : 1 -> 1 & 1 and t : 1 & 1 -> 1, with the & atoms tagged 1 and 2."""
    o = one()
    oo = with_(o, o, tags=(1, 2))
    k = 2
    mk = oc_free if kind == FREE else oc_girard
    s = Rel(mk(o, k), oo, {(("*",), (1, "*")), (("*",), (2, "*"))})
    t = Rel(mk(oo, k), o, {(((1, "*"), (2, "*")), "*")})
    return s, t, k


def chain_rule_report() -> dict:
    """Both halves of the example, as plain data."""
    s, t, k = chain_rule_data(GIRARD)
    ts = kleisli_compose(t, s, k, GIRARD).rel
    lhs = stable_deriv(ts, ()).apply({"*"})
    inner = stable_deriv(s, ()).apply({"*"})
    rhs = stable_deriv(t, fun(s, (), GIRARD)).apply(inner)

    fs, ft, fk = chain_rule_data(FREE)
    comp = kleisli_compose(ft, fs, fk, FREE)
    d_comp = dfun_coh(comp.rel, 4)
    dt, ds = dfun_coh(ft, 4), dfun_coh(fs, 4)
    d_chain = kleisli_compose(dt, ds, 4, FREE)
    return {
        "girard": {
            "t_o_s": sorted(ts.pairs, key=repr),
            "derivative_of_composite": sorted(lhs, key=repr),
            "composite_of_derivatives": sorted(rhs, key=repr),
            "inner": sorted(inner, key=repr),
        },
        "free": {
            "t_o_s": sorted(comp.rel.pairs, key=repr),
            "D(t o s)": sorted(d_comp.pairs, key=repr),
            "D t o D s": sorted(d_chain.rel.pairs, key=repr),
            "exact": comp.exact and d_chain.exact,
            "functorial": d_comp.pairs == d_chain.rel.pairs,
        },
    }
