"""Finite probabilistic coherence spaces as nonnegative rational matrices.

A morphism X -> Y is a matrix indexed by |X| x |Y|; it acts on points by
``(t.x)_b = sum_a x_a t_{a,b}``.  Kleisli morphisms !X -> Y have rows indexed
by multisets of atoms, here truncated at a degree bound k.

Point sets are only decided for the canonical spaces used in tests: a
product of "simplex blocks", where x is a point iff x >= 0 and the entries
of every block sum to at most 1.  This covers 1, D = 1 & 1, nat_N (one block
of N+1 atoms), finite products and S X.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial, prod
from typing import Any, Iterable

from ..formal_sums import canonical_key
from ..multisets import Multiset, multisets, sum_decompositions

Atom = Any


# ---------------------------------------------------------------------------
# spaces


@dataclass(frozen=True)
class Pcs:
    """A finite PCS given by its web and a partition into simplex blocks."""

    web: tuple
    blocks: tuple  # tuple of tuples of atoms, partitioning the web
    name: str = "X"

    def contains(self, x: dict) -> bool:
        if any(v < 0 for v in x.values()):
            return False
        if any(a not in self._webset for a in x):
            return False
        return all(sum(x.get(a, 0) for a in blk) <= 1 for blk in self.blocks)

    @property
    def _webset(self) -> frozenset:
        return frozenset(self.web)

    def vertices(self) -> list[dict]:
        """Extreme points: in each block, either nothing or one basis vector."""
        choices = [[None] + list(blk) for blk in self.blocks]
        out = []
        for pick in product(*choices):
            out.append({a: Fraction(1) for a in pick if a is not None})
        return out


def one() -> Pcs:
    return Pcs(("*",), (("*",),), "1")


def dbimon() -> Pcs:
    return Pcs((0, 1), ((0,), (1,)), "D")


def nat_n(n: int) -> Pcs:
    web = tuple(range(n + 1))
    return Pcs(web, (web,), f"nat{n}")


def with_(*spaces: Pcs) -> Pcs:
    web = tuple((i, a) for i, x in enumerate(spaces) for a in x.web)
    blocks = tuple(tuple((i, a) for a in blk) for i, x in enumerate(spaces) for blk in x.blocks)
    return Pcs(web, blocks, " & ".join(x.name for x in spaces))


def sfun(x: Pcs) -> Pcs:
    web = tuple((i, a) for i in (0, 1) for a in x.web)
    blocks = tuple(tuple((i, a) for i in (0, 1) for a in blk) for blk in x.blocks)
    return Pcs(web, blocks, f"S({x.name})")


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class PcsMatrix:
    rows: tuple
    cols: tuple
    entries: dict = field(hash=False, compare=False)

    def __post_init__(self):
        clean = {}
        for (a, b), v in self.entries.items():
            if v < 0:
                raise ValueError("negative matrix entry")
            if v:
                clean[(a, b)] = Fraction(v)
        object.__setattr__(self, "entries", clean)

    def __getitem__(self, ab) -> Fraction:
        return self.entries.get(ab, Fraction(0))

    def __eq__(self, other) -> bool:
        return (isinstance(other, PcsMatrix) and set(self.rows) == set(other.rows)
                and set(self.cols) == set(other.cols) and self.entries == other.entries)

    def __hash__(self):
        return hash(frozenset(self.entries.items()))

    def restrict_rows(self, rows: Iterable) -> "PcsMatrix":
        rows = tuple(rows)
        rs = set(rows)
        return PcsMatrix(rows, self.cols, {ab: v for ab, v in self.entries.items() if ab[0] in rs})

    def row(self, a) -> dict:
        return {b: v for (a2, b), v in self.entries.items() if a2 == a}

    def degree(self) -> int:
        return max((len(m) for m, _ in self.entries), default=0)


class ShapeError(ValueError):
    pass


def identity(web: Iterable) -> PcsMatrix:
    web = tuple(web)
    return PcsMatrix(web, web, {(a, a): 1 for a in web})


def zero(rows: Iterable, cols: Iterable) -> PcsMatrix:
    return PcsMatrix(tuple(rows), tuple(cols), {})


def mat_apply(t: PcsMatrix, x: dict) -> dict:
    rs = set(t.rows)
    if any(a not in rs for a in x):
        raise ShapeError("point outside the row web")
    out: dict = {}
    for (a, b), v in t.entries.items():
        xa = x.get(a)
        if xa:
            out[b] = out.get(b, 0) + xa * v
    return {b: v for b, v in out.items() if v}


def mat_compose(t: PcsMatrix, s: PcsMatrix) -> PcsMatrix:
    """t o s for s : X -> Y and t : Y -> Z."""
    if set(s.cols) != set(t.rows):
        raise ShapeError("inner webs differ")
    by_row: dict = {}
    for (b, c), v in t.entries.items():
        by_row.setdefault(b, []).append((c, v))
    out: dict = {}
    for (a, b), v in s.entries.items():
        for c, w in by_row.get(b, ()):
            out[(a, c)] = out.get((a, c), 0) + v * w
    return PcsMatrix(s.rows, t.cols, out)


def mat_sum(*ts: PcsMatrix) -> PcsMatrix:
    out: dict = {}
    for t in ts:
        for ab, v in t.entries.items():
            out[ab] = out.get(ab, 0) + v
    return PcsMatrix(ts[0].rows, ts[0].cols, out)


def tensor(s: PcsMatrix, t: PcsMatrix) -> PcsMatrix:
    rows = tuple(product(s.rows, t.rows))
    cols = tuple(product(s.cols, t.cols))
    out = {}
    for (a, b), v in s.entries.items():
        for (c, d), w in t.entries.items():
            out[((a, c), (b, d))] = v * w
    return PcsMatrix(rows, cols, out)


def transform(rows: Iterable, cols: Iterable, f) -> PcsMatrix:
    """Matrix with entries given by a function f(row, col)."""
    rows, cols = tuple(rows), tuple(cols)
    return PcsMatrix(rows, cols, {(a, b): f(a, b) for a in rows for b in cols})


# -- summability --------------------------------------------------------------


def s_web(web: Iterable) -> tuple:
    return tuple((i, a) for i in (0, 1) for a in web)


def s_mat(t: PcsMatrix) -> PcsMatrix:
    """The functor S on a matrix: (S t)_{(i,a),(j,b)} = delta_ij t_{a,b}."""
    return PcsMatrix(s_web(t.rows), s_web(t.cols),
                     {((i, a), (i, b)): v for (a, b), v in t.entries.items() for i in (0, 1)})


def s_proj(web: Iterable, i: int) -> PcsMatrix:
    web = tuple(web)
    return PcsMatrix(s_web(web), web, {((i, a), a): 1 for a in web})


def s_sigma(web: Iterable) -> PcsMatrix:
    web = tuple(web)
    return PcsMatrix(s_web(web), web, {((i, a), a): 1 for a in web for i in (0, 1)})


def witness(t0: PcsMatrix, t1: PcsMatrix) -> PcsMatrix:
    return PcsMatrix(t0.rows, s_web(t0.cols),
                     {**{(a, (0, b)): v for (a, b), v in t0.entries.items()},
                      **{(a, (1, b)): v for (a, b), v in t1.entries.items()}})


def summable(t0: PcsMatrix, t1: PcsMatrix, src: Pcs, tgt: Pcs) -> PcsMatrix | None:
    """Witness <t0,t1> when t0.x + t1.x lies in P(tgt) for every x in P(src).

    Matrices are linear and P(src) is the convex hull of its vertices, so it is
    enough to test the vertices.
    """
    for x in src.vertices():
        y = mat_apply(mat_sum(t0, t1), x)
        if not tgt.contains(y):
            return None
    return witness(t0, t1)


# -- the bimonoid on D ----------------------------------------------------------

D_WEB = (0, 1)
ONE_WEB = ("*",)


def d_counit() -> PcsMatrix:
    """pi_0 : D -> 1, u |-> u_0."""
    return PcsMatrix(D_WEB, ONE_WEB, {(0, "*"): 1})


def d_comult() -> PcsMatrix:
    """D -> D (x) D, u |-> u_0 e(0,0) + u_1 (e(1,0) + e(0,1))."""
    return PcsMatrix(D_WEB, tuple(product(D_WEB, D_WEB)),
                     {(0, (0, 0)): 1, (1, (1, 0)): 1, (1, (0, 1)): 1})


def d_unit() -> PcsMatrix:
    """1 -> D, p |-> p (e_0 + e_1)."""
    return PcsMatrix(ONE_WEB, D_WEB, {("*", 0): 1, ("*", 1): 1})


def d_mult() -> PcsMatrix:
    """D (x) D -> D, u (x) v |-> u_0 v_0 e_0 + u_1 v_1 e_1."""
    return PcsMatrix(tuple(product(D_WEB, D_WEB)), D_WEB, {((0, 0), 0): 1, ((1, 1), 1): 1})


# ---------------------------------------------------------------------------
# exponentials


def mono(x: dict, m: Multiset) -> Fraction:
    """x^m = prod_a x_a^{m(a)}."""
    out = Fraction(1)
    for a in m:
        out *= x.get(a, 0)
    return out


def promote(x: dict, k: int, web: Iterable | None = None) -> dict:
    """The point x^! of !X truncated at degree k: m |-> x^m."""
    atoms = web if web is not None else [a for a, v in x.items() if v]
    out = {}
    for m in multisets(atoms, k):
        v = mono(x, m)
        if v:
            out[m] = v
    return out


def multinomial_coef(p: Multiset, r: Counter) -> int:
    """[p; r] = prod_b p(b)! / prod_{a,b} r(a,b)!."""
    num = prod(factorial(n) for n in Counter(p).values())
    den = prod(factorial(n) for n in r.values())
    return num // den


def _matchings(m: Multiset, p: Multiset):
    """All r in M(|X| x |Y|) with marginals m (left) and p (right)."""
    if len(m) != len(p):
        return
    left = Counter(m)
    targets = sorted(Counter(p).items(), key=lambda kv: canonical_key(kv[0]))

    def go(idx: int, left: Counter, acc: Counter):
        if idx == len(targets):
            if not +left:
                yield Counter(acc)
            return
        b, need = targets[idx]
        avail = sorted((a for a in left if left[a] > 0), key=canonical_key)
        yield from distribute(avail, 0, need, left, acc, b, idx)

    def distribute(avail, j, need, left, acc, b, idx):
        if need == 0:
            yield from go(idx + 1, left, acc)
            return
        if j == len(avail):
            return
        a = avail[j]
        for take in range(min(need, left[a]), -1, -1):
            if take:
                left[a] -= take
                acc[(a, b)] += take
            yield from distribute(avail, j + 1, need - take, left, acc, b, idx)
            if take:
                left[a] += take
                acc[(a, b)] -= take
                if acc[(a, b)] == 0:
                    del acc[(a, b)]

    yield from go(0, Counter(left), Counter())


def oc_mat(t: PcsMatrix, k: int) -> PcsMatrix:
    """!t on multisets of size <= k: (!t)_{m,p} = sum_r [p; r] t^r."""
    rows = multisets(t.rows, k)
    cols = multisets(t.cols, k)
    by_size: dict[int, list] = {}
    for p in cols:
        by_size.setdefault(len(p), []).append(p)
    out = {}
    for m in rows:
        for p in by_size.get(len(m), ()):
            total = Fraction(0)
            for r in _matchings(m, p):
                w = Fraction(1)
                for (a, b), n in r.items():
                    w *= t[(a, b)] ** n
                    if not w:
                        break
                if w:
                    total += multinomial_coef(p, r) * w
            if total:
                out[(m, p)] = total
    return PcsMatrix(tuple(rows), tuple(cols), out)


def der(web: Iterable, k: int) -> PcsMatrix:
    web = tuple(web)
    return PcsMatrix(tuple(multisets(web, k)), web, {((a,), a): 1 for a in web})


def dig(web: Iterable, k: int) -> PcsMatrix:
    """dig_{m, M} = 1 iff the multisets in M sum to m, truncated at k."""
    web = tuple(web)
    rows = multisets(web, k)
    inner = multisets(web, k)
    cols = multisets(inner, k)
    out = {}
    for m in rows:
        for mm in sum_decompositions(m, k):
            out[(m, mm)] = 1
    return PcsMatrix(tuple(rows), tuple(cols), out)
