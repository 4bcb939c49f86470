"""Executable checks for the differential structure of PCOH.

The closed-form matrices are compared with constructions from more primitive
data.  Since ``dfun_pcoh`` is linear in its argument, comparing it on every
single-entry matrix of degree <= k is an exhaustive check of the formula.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from ..checks import CheckResult, run_check
from ..multisets import msort, multisets
from .differential import (
    bilinearity_check, ddiff_pcoh, dfun_from_composite, dfun_pcoh, finite_diff_check,
    random_analytic, sdiff_from_ddiff, sdiff_pcoh, seely_m2, sif_matrix,
)
from .matrices import (
    D_WEB, ONE_WEB, PcsMatrix, d_comult, d_counit, d_mult, d_unit, der, dig, dbimon, identity,
    mat_apply, mat_compose, mat_sum, nat_n, oc_mat, one, promote, sfun, summable, tensor,
    with_,
)
from .soundness import SoundnessConfig, check_soundness


@dataclass
class PcohSuiteConfig:
    max_web: int = 3
    degree: int = 3
    samples: int = 50
    seed: int = 0


def webs(max_web: int) -> list[tuple]:
    return [("*",)] + [tuple(range(n)) for n in range(2, max_web + 1)]


def _reshape(t: PcsMatrix, rows) -> PcsMatrix:
    """t with its row web replaced by ``rows`` (entries outside are dropped)."""
    rs = set(rows)
    return PcsMatrix(tuple(rows), t.cols, {ab: v for ab, v in t.entries.items() if ab[0] in rs})


def _compose(t: PcsMatrix, s: PcsMatrix) -> PcsMatrix:
    """t o s, first cutting t down to the columns of s (degree truncation)."""
    return mat_compose(_reshape(t, s.cols), s)


def _diff(a: PcsMatrix, b: PcsMatrix):
    keys = set(a.entries) | set(b.entries)
    bad = sorted((ab for ab in keys if a[ab] != b[ab]), key=repr)
    return bad[0] if bad else None


# -- closed forms against routes ------------------------------------------------------------


def check_ddiff_formula(k: int):
    """d-bar rows: e_0 |-> e_0^!, e_1 |-> the derivative of (e_0 + eps e_1)^! at eps = 0."""

    def go(r):
        dd = ddiff_pcoh(k)
        for m in multisets(D_WEB, k):
            r.checked += 1
            zero_row = Fraction(1) if all(a == 0 for a in m) else Fraction(0)
            # d/d eps of eps^{m(1)} at 0
            one_row = Fraction(1) if m.count(1) == 1 else Fraction(0)
            if dd[(0, m)] != zero_row or dd[(1, m)] != one_row:
                r.fail(m=m, row0=dd[(0, m)], row1=dd[(1, m)])
    return run_check("pcoh-ddiff-formula", go, mode=f"degree<={k}")


def check_ddiff_axioms(k: int):
    """der o d-bar = id, dig o d-bar = !d-bar o d-bar, the locality and additivity squares."""

    def go(r):
        dd = ddiff_pcoh(k)
        idd = identity(D_WEB)
        eq = []
        eq.append(("chain-der", _compose(der(D_WEB, k), dd), idd))
        lhs = _compose(dig(D_WEB, k), dd)
        rhs = _compose(oc_mat(dd, k), dd)
        keep = {p for p in lhs.cols if sum(len(q) for q in p) <= k}
        eq.append(("chain-dig", lhs, PcsMatrix(rhs.rows, lhs.cols,
                                                {ab: v for ab, v in rhs.entries.items() if ab[1] in keep})))
        m0 = PcsMatrix(ONE_WEB, tuple(multisets(ONE_WEB, k)),
                       {("*", ("*",) * n): 1 for n in range(k + 1)})
        w0 = PcsMatrix(ONE_WEB, D_WEB, {("*", 0): 1})
        eq.append(("local", mat_compose(dd, w0), _compose(oc_mat(w0, k), m0)))
        eps = d_counit()
        eq.append(("add-unit", _compose(oc_mat(eps, k), dd), mat_compose(m0, eps)))
        dd2 = tensor(dd, dd)
        m2 = seely_m2(D_WEB, D_WEB, k)
        eq.append(("add-comult", _compose(oc_mat(d_comult(), k), dd),
                   _compose(m2, mat_compose(dd2, d_comult()))))
        for nm, a, b in eq:
            r.checked += 1
            bad = _diff(a, b)
            if bad is not None:
                r.fail(law=nm, entry=bad, left=a[bad], right=b[bad])
    return run_check("pcoh-ddiff-axioms", go, mode=f"degree<={k}")


def check_sdiff_routes(max_web: int, k: int):
    def go(r):
        for w in webs(max_web):
            for kk in range(1, k + 1):
                r.checked += 1
                a, b = sdiff_pcoh(w, kk), sdiff_from_ddiff(w, kk)
                bad = _diff(a, b)
                if bad is not None:
                    r.fail(web=w, k=kk, entry=bad, closed=a[bad], route=b[bad])
    return run_check("pcoh-sdiff-routes", go)


def check_dfun_routes(max_web: int, k: int, rng: random.Random, samples: int):
    """Closed-form D t against (S t) o sdiff on every single-entry t, then on random t."""

    def go(r):
        for w in webs(max_web):
            rows = tuple(multisets(w, k))
            for m in rows:
                t = PcsMatrix(rows, ONE_WEB, {(m, "*"): 1})
                r.checked += 1
                a, b = dfun_pcoh(t, w, k), dfun_from_composite(t, w, k)
                bad = _diff(a, b)
                if bad is not None:
                    r.fail(web=w, m=m, entry=bad, closed=a[bad], route=b[bad])
        for _ in range(samples):
            w = rng.choice(webs(max_web))
            t = random_analytic(rng, w, (0, 1), rng.randint(1, k))
            r.checked += 1
            bad = _diff(dfun_pcoh(t, w, k), dfun_from_composite(t, w, k))
            if bad is not None:
                r.fail(web=w, t=t.entries, entry=bad)
    return run_check("pcoh-dfun-routes", go, mode="exhaustive(basis)+sampled")


def check_examples():
    def go(r):
        dd = ddiff_pcoh(3)
        sq = PcsMatrix(tuple(multisets(("*",), 2)), ONE_WEB, {(("*", "*"), "*"): 1})
        df = dfun_pcoh(sq, ("*",), 2)
        cases = [
            ("dbar[1,[1,0,0]]", dd[(1, (0, 0, 1))], Fraction(1)),
            ("dbar[1,[1,1]]", dd[(1, (1, 1))], Fraction(0)),
            ("D square tangent", df[(msort([(0, "*"), (1, "*")]), (1, "*"))], Fraction(2)),
        ]
        for nm, got, want in cases:
            r.checked += 1
            if got != want:
                r.fail(case=nm, got=got, want=want)
    return run_check("pcoh-worked-examples", go)


def check_finite_differences(rng: random.Random, samples: int, h: float = 1e-4, tol: float = 1e-3):
    def go(r):
        for _ in range(samples):
            w = rng.choice(webs(3))
            t = random_analytic(rng, w, (0, 1), rng.randint(1, 3))
            x, u = random_point_and_direction(rng, w)
            r.checked += 1
            v = finite_diff_check(t, w, x, u, h, tol)
            if not v.ok:
                r.fail(t=t.entries, x=x, u=u, err=v.max_rel_err)
    return run_check("pcoh-finite-differences", go, mode="sampled")


def random_point_and_direction(rng: random.Random, web: tuple, den: int = 16):
    """x and u with x + u still a subprobability vector (one simplex block)."""
    n = len(web)
    budget = den
    x, u = {}, {}
    for a in web:
        xa = rng.randint(0, budget // (2 * n))
        ua = rng.randint(0, budget // (2 * n))
        x[a], u[a] = Fraction(xa, den), Fraction(ua, den)
    return x, u


# -- exponential and bimonoid ---------------------------------------------------------------


def check_promotion(rng: random.Random, samples: int, k: int):
    """!t . x^! = (t . x)^! for linear t."""

    def go(r):
        for _ in range(samples):
            a = rng.choice(webs(3))
            b = rng.choice(webs(3))
            t = PcsMatrix(a, b, {(i, j): Fraction(rng.randint(0, 3), 4) for i in a for j in b})
            x = {i: Fraction(rng.randint(0, 4), 8) for i in a}
            lhs = mat_apply(oc_mat(t, k), promote(x, k, a))
            rhs = promote(mat_apply(t, x), k, b)
            r.checked += 1
            keys = set(lhs) | set(rhs)
            if any(lhs.get(p, 0) != rhs.get(p, 0) for p in keys):
                r.fail(t=t.entries, x=x)
    return run_check("pcoh-promotion", go, mode="sampled")


def check_bimonoid():
    """The four characterizations of the bimonoid on D, on a grid of points."""

    def go(r):
        grid = [Fraction(i, 4) for i in range(5)]
        for u0, u1, v0, v1 in product(grid, repeat=4):
            u, v = {0: u0, 1: u1}, {0: v0, 1: v1}
            uv = {(a, b): u[a] * v[b] for a in D_WEB for b in D_WEB}
            checks = [
                (mat_apply(d_counit(), u), {"*": u0}),
                (mat_apply(d_comult(), u), {(0, 0): u0, (1, 0): u1, (0, 1): u1}),
                (mat_apply(d_unit(), {"*": u0}), {0: u0, 1: u0}),
                (mat_apply(d_mult(), uv), {0: u0 * v0, 1: u1 * v1}),
            ]
            for got, want in checks:
                r.checked += 1
                keys = set(got) | set(want)
                if any(got.get(c, 0) != want.get(c, 0) for c in keys):
                    r.fail(u=u, v=v, got=got, want=want)
        # monoid and bialgebra square as matrices
        dd = tuple(product(D_WEB, D_WEB))
        swap = PcsMatrix(dd, dd, {((a, b), (b, a)): 1 for a, b in dd})
        r.checked += 2
        if mat_compose(swap, d_comult()) != d_comult():
            r.fail(law="cocommutative")
        if mat_compose(d_mult(), swap) != d_mult():
            r.fail(law="commutative")
        four = tuple(product(dd, dd))
        mid = PcsMatrix(four, four, {(p, ((p[0][0], p[1][0]), (p[0][1], p[1][1]))): 1 for p in four})
        lhs = mat_compose(d_comult(), d_mult())
        rhs = mat_compose(tensor(d_mult(), d_mult()), mat_compose(mid, tensor(d_comult(), d_comult())))
        r.checked += 1
        if lhs != rhs:
            r.fail(law="bialgebra", entry=_diff(lhs, rhs))
    return run_check("pcoh-bimonoid-D", go)


def check_summability(rng: random.Random, samples: int):
    """The vertex test agrees with sampling canonical points of the source."""

    def go(r):
        spaces = [one(), dbimon(), nat_n(2), with_(one(), nat_n(1))]
        for _ in range(samples):
            src, tgt = rng.choice(spaces), rng.choice(spaces)
            t0 = PcsMatrix(src.web, tgt.web, {(a, b): Fraction(rng.randint(0, 2), 4)
                                              for a in src.web for b in tgt.web})
            t1 = PcsMatrix(src.web, tgt.web, {(a, b): Fraction(rng.randint(0, 2), 4)
                                              for a in src.web for b in tgt.web})
            verdict = summable(t0, t1, src, tgt) is not None
            pts = src.vertices() + [_random_point(rng, src) for _ in range(20)]
            sampled = all(tgt.contains(mat_apply(mat_sum(t0, t1), x)) for x in pts)
            r.checked += 1
            if verdict != sampled:
                r.fail(src=src.name, tgt=tgt.name, t0=t0.entries, t1=t1.entries)
            if verdict:
                w = summable(t0, t1, src, tgt)
                r.checked += 1
                if not all(sfun(tgt).contains(mat_apply(w, x)) for x in pts):
                    r.fail(kind="witness leaves S Y")
    return run_check("pcoh-summability", go, mode="sampled")


def _random_point(rng: random.Random, x) -> dict:
    out = {}
    for blk in x.blocks:
        left = Fraction(1)
        for a in blk:
            v = Fraction(rng.randint(0, 4), 4) * left
            out[a] = v
            left -= v
    return out


def check_sif_bilinear(nat: int = 2):
    def go(r):
        for xweb in [("*",), (0, 1)]:
            f = sif_matrix(nat, xweb)
            ws1 = tuple(range(nat + 1))
            ws2 = tuple((i, a) for i in (0, 1) for a in xweb)
            rep = bilinearity_check(f, ws1, ws2, 2)
            for j in (0, 1):
                r.checked += 2
                if not rep.ok[j]:
                    r.fail(xweb=xweb, j=j, kind="matrix")
                if not rep.basis_ok[j]:
                    r.fail(xweb=xweb, j=j, kind="basis")
    return run_check("pcoh-sif-bilinear", go)


def _timed(fn, *args) -> CheckResult:
    t0 = time.perf_counter()
    r = fn(*args)
    r.seconds = time.perf_counter() - t0
    return r


def run_pcoh_suite(cfg: PcohSuiteConfig | None = None) -> dict:
    cfg = cfg or PcohSuiteConfig()
    rng = random.Random(cfg.seed)
    results = [
        check_ddiff_formula(cfg.degree),
        check_ddiff_axioms(cfg.degree),
        check_sdiff_routes(cfg.max_web, cfg.degree),
        check_dfun_routes(cfg.max_web, cfg.degree, rng, cfg.samples),
        check_examples(),
        check_finite_differences(rng, cfg.samples),
        check_promotion(rng, cfg.samples, cfg.degree),
        check_bimonoid(),
        check_summability(rng, cfg.samples),
        check_sif_bilinear(),
        _timed(check_soundness, SoundnessConfig(programs=6 * cfg.samples, seed=cfg.seed)),
    ]
    return {
        "suite": "pcoh",
        "config": {"max_web": cfg.max_web, "degree": cfg.degree, "samples": cfg.samples, "seed": cfg.seed},
        "ok": all(r.ok for r in results),
        "checks": [r.as_dict() for r in results],
    }
