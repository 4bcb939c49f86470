"""Formal sums: finite multisets with natural-number coefficients.

A ``FormalSum`` is the codomain of every rewriting relation in the package.
A ``Rule`` maps an element to a formal sum (or is undefined on it), and
``lift_step`` / ``closure`` extend a rule to sums one element at a time.

The second half of the module validates finite partial commutative monoids
given by an explicit addition table.
"""

from __future__ import annotations

from collections.abc import Callable, Hashable, Iterable, Iterator
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Any


def canonical_key(x: Any) -> str:
    """Structural order used to make strategies and traces reproducible."""
    return repr(x)


class FormalSum:
    """An immutable finite multiset ``{t: n}`` with positive multiplicities."""

    __slots__ = ("_entries", "_hash")

    def __init__(self, entries: dict | Iterable | None = None):
        acc: dict = {}
        if entries is None:
            pass
        elif isinstance(entries, dict):
            for t, n in entries.items():
                if n < 0:
                    raise ValueError("negative multiplicity")
                if n:
                    acc[t] = acc.get(t, 0) + n
        else:
            for t in entries:
                acc[t] = acc.get(t, 0) + 1
        self._entries = acc
        self._hash = None

    @classmethod
    def zero(cls) -> "FormalSum":
        return cls()

    @classmethod
    def single(cls, t: Hashable, n: int = 1) -> "FormalSum":
        return cls({t: n})

    def __add__(self, other: "FormalSum") -> "FormalSum":
        return sum_add(self, other)

    def __len__(self) -> int:
        """Total multiplicity."""
        return sum(self._entries.values())

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __contains__(self, t) -> bool:
        return t in self._entries

    def __iter__(self) -> Iterator:
        """Distinct elements in canonical order."""
        return iter(sorted(self._entries, key=canonical_key))

    def __getitem__(self, t) -> int:
        return self._entries.get(t, 0)

    def items(self) -> list[tuple[Any, int]]:
        return [(t, self._entries[t]) for t in self]

    def support(self) -> frozenset:
        return frozenset(self._entries)

    def remove_one(self, t) -> "FormalSum":
        if t not in self._entries:
            raise KeyError("pick-not-present")
        d = dict(self._entries)
        d[t] -= 1
        return FormalSum(d)

    def scale(self, n: int) -> "FormalSum":
        return FormalSum({t: m * n for t, m in self._entries.items()})

    def map(self, f: Callable) -> "FormalSum":
        acc: dict = {}
        for t, n in self._entries.items():
            u = f(t)
            acc[u] = acc.get(u, 0) + n
        return FormalSum(acc)

    def __eq__(self, other) -> bool:
        return isinstance(other, FormalSum) and self._entries == other._entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._entries.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self._entries:
            return "FormalSum([])"
        parts = [repr(t) if n == 1 else f"{n}*{t!r}" for t, n in self.items()]
        return "FormalSum([" + ", ".join(parts) + "])"


def sum_add(a: FormalSum, b: FormalSum) -> FormalSum:
    acc = dict(a._entries)
    for t, n in b._entries.items():
        acc[t] = acc.get(t, 0) + n
    return FormalSum(acc)


def sum_all(sums: Iterable[FormalSum]) -> FormalSum:
    acc: dict = {}
    for s in sums:
        for t, n in s._entries.items():
            acc[t] = acc.get(t, 0) + n
    return FormalSum(acc)


@dataclass(frozen=True)
class Rule:
    """A per-element deterministic rewriting rule; ``apply`` returns None off its domain."""

    apply: Callable[[Any], FormalSum | None]
    name: str = "rule"

    def reducible(self, t) -> bool:
        return self.apply(t) is not None


class RewriteError(Exception):
    pass


def lift_step(rule: Rule, s: FormalSum, pick) -> FormalSum:
    """One step of the multiset lifting: replace one copy of ``pick`` by its reduct."""
    if pick not in s:
        raise RewriteError("pick-not-present")
    out = rule.apply(pick)
    if out is None:
        raise RewriteError("pick-not-reducible")
    return s.remove_one(pick) + out


@dataclass(frozen=True)
class ClosureResult:
    normal: FormalSum
    status: str  # "normalized" | "fuel-exhausted"
    steps: int


def closure(rule: Rule, s: FormalSum, fuel: int) -> ClosureResult:
    """Rewrite the leftmost reducible element (canonical order) until none is left."""
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    steps = 0
    while True:
        pick = next((t for t in s if rule.reducible(t)), None)
        if pick is None:
            return ClosureResult(s, "normalized", steps)
        if steps >= fuel:
            return ClosureResult(s, "fuel-exhausted", steps)
        s = lift_step(rule, s, pick)
        steps += 1


# ---------------------------------------------------------------------------
# partial commutative monoids


@dataclass(frozen=True)
class PartialMonoidTable:
    carrier: tuple
    zero: Any
    plus: dict = field(hash=False)  # (a, b) -> c, only defined pairs

    def add(self, a, b):
        return self.plus.get((a, b))

    @classmethod
    def from_rule(cls, carrier: Iterable, zero, op: Callable, defined: Callable) -> "PartialMonoidTable":
        carrier = tuple(carrier)
        table = {}
        for a, b in product(carrier, repeat=2):
            c = op(a, b)
            if defined(c):
                table[(a, b)] = c
        return cls(carrier, zero, table)

    @classmethod
    def integer_interval(cls, values: Iterable[int]) -> "PartialMonoidTable":
        """Subset of the integers, with a+b defined iff it stays in the subset."""
        vals = tuple(sorted(set(values)))
        return cls.from_rule(vals, 0, lambda a, b: a + b, lambda c: c in vals)


@dataclass
class PMReport:
    ok: bool
    checked: int = 0
    violation: str | None = None
    witness: tuple | None = None


_UNDEF = object()


def family_sum(tbl: PartialMonoidTable, fam: Iterable):
    """Left-to-right sum of a family; ``_UNDEF`` if some partial sum is undefined."""
    acc = tbl.zero
    for a in fam:
        acc = tbl.add(acc, a)
        if acc is None:
            return _UNDEF
    return acc


def _set_partitions(xs: list) -> Iterator[list[list]]:
    if not xs:
        yield []
        return
    head, rest = xs[0], xs[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1 :]
        yield [[head]] + part


def pm_validate(tbl: PartialMonoidTable, fam_size_max: int = 3) -> PMReport:
    """Exhaustively check the partial commutative monoid axioms and the family lemmas."""
    if len(tbl.carrier) > 8:
        raise ValueError("carrier too large for exhaustive checking")
    car = tbl.carrier
    rep = PMReport(ok=True)

    def fail(name, wit):
        rep.ok = False
        rep.violation = name
        rep.witness = wit
        return rep

    for a in car:
        rep.checked += 1
        if tbl.add(tbl.zero, a) != a:
            return fail("unit", (a,))
    for a, b in product(car, repeat=2):
        rep.checked += 1
        if tbl.add(a, b) != tbl.add(b, a):
            return fail("commutativity", (a, b))
    # if a+b and (a+b)+c are defined then b+c and a+(b+c) are, and agree
    for a, b, c in product(car, repeat=3):
        rep.checked += 1
        ab = tbl.add(a, b)
        if ab is None or tbl.add(ab, c) is None:
            continue
        bc = tbl.add(b, c)
        if bc is None or tbl.add(a, bc) != tbl.add(ab, c):
            return fail("associativity", (a, b, c))

    for n in range(fam_size_max + 1):
        for fam in product(car, repeat=n):
            s = family_sum(tbl, fam)
            # permutation invariance
            for perm in set(permutations(fam)):
                rep.checked += 1
                if family_sum(tbl, perm) != s:
                    return fail("permutation", fam)
            # partition theorem: fam summable iff every block is summable and
            # the block sums are summable, with the same total
            for part in _set_partitions(list(range(n))):
                rep.checked += 1
                blocks = [family_sum(tbl, [fam[i] for i in blk]) for blk in part]
                if any(b is _UNDEF for b in blocks):
                    total = _UNDEF
                else:
                    total = family_sum(tbl, blocks)
                if total != s:
                    return fail("partition", (fam, tuple(map(tuple, part))))
            # subfamily closure
            if s is not _UNDEF:
                for mask in product((0, 1), repeat=n):
                    rep.checked += 1
                    sub = [a for a, keep in zip(fam, mask) if keep]
                    if family_sum(tbl, sub) is _UNDEF:
                        return fail("subfamily", (fam, mask))
    return rep
