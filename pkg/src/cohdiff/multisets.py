"""Finite multisets as sorted tuples, shared by both model backends."""

from __future__ import annotations

from collections import Counter
from itertools import combinations, combinations_with_replacement, permutations
from typing import Any, Iterable, Iterator

from .formal_sums import canonical_key

Multiset = tuple  # sorted tuple of atoms, with repetitions


def msort(atoms: Iterable[Any]) -> Multiset:
    return tuple(sorted(atoms, key=canonical_key))


def madd(m1: Multiset, m2: Multiset) -> Multiset:
    return msort(m1 + m2)


def msub(m: Multiset, part: Multiset) -> Multiset:
    c = Counter(m)
    c.subtract(part)
    if any(v < 0 for v in c.values()):
        raise ValueError("not a sub-multiset")
    return msort(c.elements())


def support(m: Multiset) -> tuple:
    return msort(set(m))


def multisets(web: Iterable[Any], k: int) -> list[Multiset]:
    """All multisets over ``web`` of cardinality at most k, by size then canonically."""
    atoms = msort(set(web))
    out: list[Multiset] = []
    for n in range(k + 1):
        out.extend(combinations_with_replacement(atoms, n))
    return out


def sub_multisets(pool: Multiset, size: int) -> set[Multiset]:
    return {msort(c) for c in combinations(pool, size)}


def sum_decompositions(m: Multiset, k: int) -> list[Multiset]:
    """Multisets [m1..mj] of multisets with m1+...+mj = m, j <= k and each |mi| <= k.

    Empty parts are allowed, so the list is finite only because of the bound j <= k.
    """
    out = set()

    def go(rest: Multiset, parts: list):
        if len(parts) > k:
            return
        if not rest:
            for extra in range(k - len(parts) + 1):
                out.add(msort(parts + [()] * extra))
            return
        first, pool = rest[0], rest[1:]
        for size in range(len(pool) + 1):
            for comb in sub_multisets(pool, size):
                part = msort((first,) + comb)
                if len(part) <= k:
                    go(msub(rest, part), parts + [part])

    go(m, [])
    return sorted(out, key=canonical_key)


def pairings(m: Multiset, p: Multiset) -> set[Multiset]:
    """All multisets r of pairs whose left marginal is m and right marginal is p."""
    if len(m) != len(p):
        return set()
    return {msort(zip(m, perm)) for perm in set(permutations(p))}


def tag(i: Any, m: Iterable) -> Multiset:
    return msort((i, a) for a in m)


def iter_sizes(ms: Iterable[Multiset], k: int) -> Iterator[Multiset]:
    return (m for m in ms if len(m) <= k)
