"""Finite coherence spaces.

A space has a web and a reflexive symmetric coherence relation.  Webs of
exponentials over exponentials are never enumerated: such spaces keep a
membership predicate and only list their web on request.
"""

from __future__ import annotations

from functools import cached_property
from itertools import combinations, combinations_with_replacement, product
from typing import Any, Callable, Iterable, Iterator

from ..formal_sums import canonical_key

Atom = Any

MAX_WEB = 4096


def csort(xs: Iterable) -> tuple:
    return tuple(sorted(xs, key=canonical_key))


class SizeError(ValueError):
    pass


class CohSpace:
    """A coherence space given by a web (or a membership test) and coherence."""

    def __init__(self, name: str, coh: Callable[[Atom, Atom], bool], web: Iterable | None = None,
                 contains: Callable[[Atom], bool] | None = None,
                 enum: Callable[[], Iterable] | None = None, check: bool = True):
        self.name = name
        self._coh = coh
        self._web = csort(web) if web is not None else None
        self._contains = contains
        self._enum = enum
        if self._web is not None:
            if len(self._web) > MAX_WEB:
                raise SizeError(f"web of {name} has {len(self._web)} atoms")
            if check:
                self._check_relation()

    def _check_relation(self):
        for a in self._web:
            if not self._coh(a, a):
                raise ValueError(f"coherence of {self.name} is not reflexive at {a!r}")
        for a, b in combinations(self._web, 2):
            if self._coh(a, b) != self._coh(b, a):
                raise ValueError(f"coherence of {self.name} is not symmetric at {a!r}, {b!r}")

    @cached_property
    def web(self) -> tuple:
        if self._web is not None:
            return self._web
        if self._enum is None:
            raise SizeError(f"the web of {self.name} is not enumerable")
        w = csort(self._enum())
        if len(w) > MAX_WEB:
            raise SizeError(f"web of {self.name} has {len(w)} atoms")
        return w

    @cached_property
    def _webset(self) -> frozenset:
        return frozenset(self.web)

    def contains(self, a: Atom) -> bool:
        if self._contains is not None:
            return self._contains(a)
        return a in self._webset

    def coh(self, a: Atom, b: Atom) -> bool:
        return self._coh(a, b)

    def scoh(self, a: Atom, b: Atom) -> bool:
        """Strict coherence: coherent and distinct."""
        return a != b and self._coh(a, b)

    def is_clique(self, xs: Iterable) -> bool:
        xs = list(xs)
        return all(self.contains(a) for a in xs) and all(
            self._coh(a, b) for a, b in combinations(xs, 2))

    def cliques(self, max_size: int | None = None) -> list[tuple]:
        return list(iter_cliques(self, max_size))

    def __repr__(self) -> str:
        return f"CohSpace({self.name})"


def iter_cliques(e: CohSpace, max_size: int | None = None) -> Iterator[tuple]:
    """All cliques (including the empty one), in a canonical order."""
    web = e.web
    n = len(web)
    cap = n if max_size is None else max_size

    def go(start: int, cur: list):
        yield tuple(cur)
        if len(cur) == cap:
            return
        for j in range(start, n):
            a = web[j]
            if all(e.coh(a, b) for b in cur):
                cur.append(a)
                yield from go(j + 1, cur)
                cur.pop()

    yield from go(0, [])


# ---------------------------------------------------------------------------
# constructors


def finite(web: Iterable, edges: Iterable = (), name: str = "E") -> CohSpace:
    """A space with the given strict coherences (an undirected graph)."""
    es = {frozenset(e) for e in edges}
    return CohSpace(name, lambda a, b: a == b or frozenset((a, b)) in es, web)


def one() -> CohSpace:
    return CohSpace("1", lambda a, b: True, ("*",))


def dbimon() -> CohSpace:
    """D = 1 & 1, with atoms 0 and 1, coherent."""
    return CohSpace("D", lambda a, b: True, (0, 1))


def nat_k(k: int) -> CohSpace:
    """The flat space of k integers (a coproduct of units)."""
    return CohSpace(f"nat{k}", lambda a, b: a == b, range(k))


def tensor(e: CohSpace, f: CohSpace) -> CohSpace:
    return CohSpace(
        f"({e.name} x {f.name})", lambda p, q: e.coh(p[0], q[0]) and f.coh(p[1], q[1]),
        contains=lambda p: isinstance(p, tuple) and len(p) == 2 and e.contains(p[0]) and f.contains(p[1]),
        enum=lambda: product(e.web, f.web), check=False)


def with_(e: CohSpace, f: CohSpace, tags: tuple = (0, 1)) -> CohSpace:
    t0, t1 = tags
    sp = {t0: e, t1: f}

    def coh(p, q):
        return p[0] != q[0] or sp[p[0]].coh(p[1], q[1])

    return CohSpace(
        f"({e.name} & {f.name})", coh,
        contains=lambda p: isinstance(p, tuple) and len(p) == 2 and p[0] in sp and sp[p[0]].contains(p[1]),
        enum=lambda: [(t0, a) for a in e.web] + [(t1, b) for b in f.web], check=False)


def plus(e: CohSpace, f: CohSpace) -> CohSpace:
    sp = {0: e, 1: f}
    return CohSpace(
        f"({e.name} + {f.name})", lambda p, q: p[0] == q[0] and sp[p[0]].coh(p[1], q[1]),
        contains=lambda p: isinstance(p, tuple) and len(p) == 2 and p[0] in sp and sp[p[0]].contains(p[1]),
        enum=lambda: [(0, a) for a in e.web] + [(1, b) for b in f.web], check=False)


def limpl_coh(e: CohSpace, f: CohSpace, p, q) -> bool:
    """(a,b) and (a',b') are coherent in E -o F iff a ~ a' implies b ~ b' and (b = b' implies a = a')."""
    (a, b), (a2, b2) = p, q
    if not e.coh(a, a2):
        return True
    return f.coh(b, b2) and (b != b2 or a == a2)


def limpl(e: CohSpace, f: CohSpace) -> CohSpace:
    return CohSpace(
        f"({e.name} -o {f.name})", lambda p, q: limpl_coh(e, f, p, q),
        contains=lambda p: isinstance(p, tuple) and len(p) == 2 and e.contains(p[0]) and f.contains(p[1]),
        enum=lambda: product(e.web, f.web), check=False)


def sfun(e: CohSpace) -> CohSpace:
    """S E: web {0,1} x |E|, (i,a) ~ (i',a') iff a ~ a' and (i != i' implies a != a')."""

    def coh(p, q):
        return e.coh(p[1], q[1]) and (p[0] == q[0] or p[1] != q[1])

    return CohSpace(
        f"S({e.name})", coh,
        contains=lambda p: isinstance(p, tuple) and len(p) == 2 and p[0] in (0, 1) and e.contains(p[1]),
        enum=lambda: [(i, a) for i in (0, 1) for a in e.web], check=False)


def sfun_n(e: CohSpace, n: int) -> CohSpace:
    for _ in range(n):
        e = sfun(e)
    return e


# ---------------------------------------------------------------------------
# small spaces for exhaustive checks


def all_spaces(max_web: int) -> list[CohSpace]:
    """One representative per isomorphism class of spaces with 1..max_web atoms."""
    out = []
    for n in range(1, max_web + 1):
        verts = list(range(n))
        pairs = list(combinations(verts, 2))
        seen = set()
        for mask in range(1 << len(pairs)):
            edges = [pairs[j] for j in range(len(pairs)) if mask >> j & 1]
            key = _canon_graph(n, edges)
            if key in seen:
                continue
            seen.add(key)
            out.append(finite(verts, edges, f"G{n}.{len(seen) - 1}"))
    return out


def _canon_graph(n: int, edges) -> tuple:
    from itertools import permutations
    best = None
    for perm in permutations(range(n)):
        key = tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges))
        if best is None or key < best:
            best = key
    return best


# ---------------------------------------------------------------------------
# multisets


def msort(atoms: Iterable) -> tuple:
    return tuple(sorted(atoms, key=canonical_key))


def multisets_over(atoms: Iterable, k: int) -> Iterator[tuple]:
    atoms = csort(set(atoms))
    for n in range(k + 1):
        yield from combinations_with_replacement(atoms, n)
