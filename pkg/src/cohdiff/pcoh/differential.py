"""The differential structure of PCOH on finite, degree-truncated webs.

Closed forms for the coalgebra ``ddiff`` on D, the distributive law ``sdiff``
from !S X to S !X and the functor ``dfun`` on Kleisli morphisms, each paired
with a second construction from more primitive data so that one can serve as
an oracle for the other.
"""

from __future__ import annotations

import random
from collections import Counter
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable

from ..formal_sums import canonical_key
from ..multisets import madd, msort, multisets, tag
from .matrices import (
    D_WEB, PcsMatrix, mat_apply, mat_compose, oc_mat, promote, s_mat, s_proj, s_web,
)


def ddiff_pcoh(k: int) -> PcsMatrix:
    """d-bar : D -> !D, entry 1 at (i, [i1..ij]) iff i = i1 + ... + ij."""
    cols = multisets(D_WEB, k)
    return PcsMatrix(D_WEB, tuple(cols), {(i, m): 1 for i in D_WEB for m in cols if sum(m) == i})


def sdiff_pcoh(web: Iterable, k: int) -> PcsMatrix:
    """The distributive law !S X -> S !X by its closed form.

    Entry 1 at (0.m, (0, m)); entry m(a) at (0.m0 + [(1,a)], (1, m0 + [a])).
    """
    web = tuple(web)
    rows = multisets(s_web(web), k)
    cols = s_web(multisets(web, k))
    out = {}
    for m in multisets(web, k):
        out[(tag(0, m), (0, m))] = 1
        for a in set(m):
            m0 = list(m)
            m0.remove(a)
            p = madd(tag(0, m0), ((1, a),))
            out[(p, (1, m))] = Counter(m)[a]
    return PcsMatrix(tuple(rows), cols, out)


def dfun_pcoh(t: PcsMatrix, web: Iterable, k: int) -> PcsMatrix:
    """D t : !S X -> S Y for a Kleisli morphism t : !X -> Y, by its closed form."""
    web = tuple(web)
    rows = multisets(s_web(web), k)
    cols = s_web(t.cols)
    out: dict = {}
    for (m, b), v in t.entries.items():
        if len(m) > k:
            continue
        out[(tag(0, m), (0, b))] = v
        for a in set(m):
            m0 = list(m)
            m0.remove(a)
            p = madd(tag(0, m0), ((1, a),))
            out[(p, (1, b))] = Counter(m)[a] * v
    return PcsMatrix(tuple(rows), cols, out)


# -- the composite routes ------------------------------------------------------


def seely_m2(left: Iterable, right: Iterable, k: int) -> PcsMatrix:
    """!A (x) !B -> !(A (x) B), characterized by x^! (x) y^! |-> (x (x) y)^!.

    Since (x (x) y)^p = x^{p_l} y^{p_r}, the entry at ((m, m'), p) is 1 exactly
    when the two marginals of p are m and m'.
    """
    left, right = tuple(left), tuple(right)
    pairs = tuple(product(left, right))
    cols = multisets(pairs, k)
    rows = tuple(product(multisets(left, k), multisets(right, k)))
    out = {}
    for p in cols:
        ml = msort(a for a, _ in p)
        mr = msort(b for _, b in p)
        out[((ml, mr), p)] = 1
    return PcsMatrix(rows, tuple(cols), out)


@lru_cache(maxsize=32)
def _sdiff_route(web: tuple, k: int) -> PcsMatrix:
    return sdiff_from_ddiff(web, k)


def sdiff_from_ddiff(web: Iterable, k: int) -> PcsMatrix:
    """The distributive law rebuilt from d-bar alone.

    With S X = D -o X (web {(i,a)}) the law is the curry of
    !(D -o X) (x) D --id (x) d-bar--> !(D -o X) (x) !D --m2--> !((D -o X) (x) D) --!ev--> !X.
    """
    web = tuple(web)
    sx = s_web(web)
    dd = ddiff_pcoh(k)
    m2 = seely_m2(sx, D_WEB, k)
    ev = PcsMatrix(tuple(product(sx, D_WEB)), web,
                   {(((i, a), i), a): 1 for i in D_WEB for a in web})
    oev = oc_mat(ev, k)
    rows = multisets(sx, k)
    cols = s_web(multisets(web, k))
    out: dict = {}
    for p in rows:
        for j in D_WEB:
            # (id (x) d-bar) sends p (x) e_j to sum_q dd[j,q] p (x) q
            y: dict = {}
            for q in multisets(D_WEB, k):
                w = dd[(j, q)]
                if w:
                    y[(p, q)] = y.get((p, q), 0) + w
            z = mat_apply(oev, _apply_partial(m2, y))
            for m, v in z.items():
                out[(p, (j, m))] = out.get((p, (j, m)), 0) + v
    return PcsMatrix(tuple(rows), cols, out)


def _apply_partial(t: PcsMatrix, x: dict) -> dict:
    """Apply t to x ignoring coordinates of x outside the row web (degree overflow)."""
    rs = set(t.rows)
    return mat_apply(t, {a: v for a, v in x.items() if a in rs})


def dfun_from_composite(t: PcsMatrix, web: Iterable, k: int) -> PcsMatrix:
    """D t = (S t) o sdiff, with sdiff itself rebuilt from d-bar."""
    law = _sdiff_route(tuple(web), k)
    st = s_mat(t.restrict_rows(multisets(web, k)))
    # the row web of S t is S(!X) truncated at k, matching the columns of the law
    st = PcsMatrix(law.cols, st.cols, st.entries)
    return mat_compose(st, law)


# -- analytic functions and finite differences -----------------------------------


def fun_apply(t: PcsMatrix, x: dict, k: int | None = None) -> dict:
    """Fun t(x) = t . x^!, using the truncation of t at its own degree."""
    deg = t.degree() if k is None else k
    atoms = {a for m in t.rows for a in m}
    px = promote(x, deg, sorted(atoms, key=canonical_key))
    return _apply_partial(t, px)


def s_point(x: dict, u: dict) -> dict:
    out = {(0, a): v for a, v in x.items() if v}
    out.update({(1, a): v for a, v in u.items() if v})
    return out


def _float_eval(t: PcsMatrix, x: dict) -> dict:
    out: dict = {}
    for (m, b), v in t.entries.items():
        term = float(v)
        for a in m:
            term *= x.get(a, 0.0)
        out[b] = out.get(b, 0.0) + term
    return out


@dataclass
class FdVerdict:
    ok: bool
    analytic: dict
    numeric: dict
    max_rel_err: float


def finite_diff_check(t: PcsMatrix, web: Iterable, x: dict, u: dict, h: float = 1e-4,
                      tol: float = 1e-3) -> FdVerdict:
    """Compare the tangent part of Fun(D t)(x, u) with a forward difference.

    The analytic side is exact; the comparison is relative with an absolute
    floor of ``tol`` for near-zero derivatives.
    """
    if not 0 < h <= 1e-3:
        raise ValueError("h must lie in (0, 1e-3]")
    k = max(t.degree(), 1)
    dt = dfun_pcoh(t, web, k)
    y = fun_apply(dt, s_point(x, u), k)
    analytic = {b: float(y.get((1, b), 0)) for b in t.cols}
    xf = {a: float(v) for a, v in x.items()}
    xh = {a: xf.get(a, 0.0) + h * float(u.get(a, 0)) for a in set(xf) | set(u)}
    f0, f1 = _float_eval(t, xf), _float_eval(t, xh)
    numeric = {b: (f1.get(b, 0.0) - f0.get(b, 0.0)) / h for b in t.cols}
    worst = 0.0
    for b in t.cols:
        err = abs(analytic[b] - numeric[b]) / max(abs(analytic[b]), 1.0)
        worst = max(worst, err)
    return FdVerdict(worst <= tol, analytic, numeric, worst)


def random_analytic(rng: random.Random, src: Iterable, tgt: Iterable, degree: int,
                    density: float = 0.5, den: int = 8) -> PcsMatrix:
    """A random Kleisli morphism !src -> tgt with small rational coefficients."""
    rows = multisets(src, degree)
    tgt = tuple(tgt)
    out = {}
    for m in rows:
        for b in tgt:
            if rng.random() < density:
                out[(m, b)] = Fraction(rng.randint(1, den), den * len(rows))
    return PcsMatrix(tuple(rows), tgt, out)


# -- the if-interpretation and its bilinearity -------------------------------------


def nat_with_pair(nat: int, xweb: Iterable) -> tuple:
    """Web of nat & (X & X): atoms (0, n) and (1, (i, a))."""
    xweb = tuple(xweb)
    return tuple([(0, n) for n in range(nat + 1)] + [(1, (i, a)) for i in (0, 1) for a in xweb])


def sif_matrix(nat: int, xweb: Iterable) -> PcsMatrix:
    """The bilinear Kleisli morphism !(nat & (X & X)) -> X interpreting if.

    Entry 1 at ([(0,0), (1,(0,a))], a) and at ([(0,n), (1,(1,a))], a) for n >= 1.
    """
    xweb = tuple(xweb)
    web = nat_with_pair(nat, xweb)
    out = {}
    for n in range(nat + 1):
        for a in xweb:
            out[(msort([(0, n), (1, (0 if n == 0 else 1, a))]), a)] = 1
    return PcsMatrix(tuple(multisets(web, 2)), xweb, out)


def theta1(webs1: Iterable, webs2: Iterable) -> PcsMatrix:
    """The linear iso S X1 & X2 -> S (X1 & X2) putting 0 in the second tangent slot."""
    webs1, webs2 = tuple(webs1), tuple(webs2)
    rows = tuple([(0, (i, a)) for i in (0, 1) for a in webs1] + [(1, c) for c in webs2])
    cols = s_web(tuple([(0, a) for a in webs1] + [(1, c) for c in webs2]))
    out = {((0, (i, a)), (i, (0, a))): 1 for i in (0, 1) for a in webs1}
    out.update({((1, c), (0, (1, c))): 1 for c in webs2})
    return PcsMatrix(rows, cols, out)


def partial_d1(f: PcsMatrix, webs1: Iterable, webs2: Iterable, k: int) -> PcsMatrix:
    """D_1 f = D f o Theta_1 for f : !(X1 & X2) -> Y."""
    webs1, webs2 = tuple(webs1), tuple(webs2)
    joint = tuple([(0, a) for a in webs1] + [(1, c) for c in webs2])
    df = dfun_pcoh(f, joint, k)
    th = oc_mat(theta1(webs1, webs2), k)
    return mat_compose(PcsMatrix(th.cols, df.cols, df.entries), th)


def slot1_proj(webs1: Iterable, webs2: Iterable, j: int) -> PcsMatrix:
    """pi_j & id : S X1 & X2 -> X1 & X2."""
    webs1, webs2 = tuple(webs1), tuple(webs2)
    rows = tuple([(0, (i, a)) for i in (0, 1) for a in webs1] + [(1, c) for c in webs2])
    cols = tuple([(0, a) for a in webs1] + [(1, c) for c in webs2])
    out = {((0, (j, a)), (0, a)): 1 for a in webs1}
    out.update({((1, c), (1, c)): 1 for c in webs2})
    return PcsMatrix(rows, cols, out)


@dataclass
class BilinearReport:
    ok: dict  # j -> bool
    basis_ok: dict  # j -> bool, the same check on promoted basis inputs


def bilinearity_check(f: PcsMatrix, webs1: Iterable, webs2: Iterable, k: int = 2) -> BilinearReport:
    """pi_j o D_1 f = f o (pi_j & id) as Kleisli morphisms, j = 0, 1."""
    webs1, webs2 = tuple(webs1), tuple(webs2)
    d1 = partial_d1(f, webs1, webs2, k)
    yweb = f.cols
    ok, basis_ok = {}, {}
    for j in (0, 1):
        lhs = mat_compose(s_proj(yweb, j), d1)
        pj = oc_mat(slot1_proj(webs1, webs2, j), k)
        rhs = mat_compose(PcsMatrix(pj.cols, f.cols, f.restrict_rows(pj.cols).entries), pj)
        ok[j] = lhs.entries == rhs.entries
        good = True
        for a in lhs.rows:
            if len(a) != 1:
                continue
            x = {a[0]: Fraction(1)}  # a basis point of S X1 & X2
            if fun_apply(lhs, x, k) != fun_apply(rhs, x, k):
                good = False
        srcs = [(0, (i, a)) for i in (0, 1) for a in webs1]
        for a, c in product(srcs, [(1, c) for c in webs2]):
            x = {a: Fraction(1, 2), c: Fraction(1, 2)}
            if fun_apply(lhs, x, k) != fun_apply(rhs, x, k):
                good = False
        basis_ok[j] = good
    return BilinearReport(ok, basis_ok)
