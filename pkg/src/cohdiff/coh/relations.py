"""Morphisms of coherence spaces: cliques of E -o F.

``Rel`` holds an explicit finite set of pairs.  ``LazyRel`` is given by its
image function a |-> {b | (a,b) in t}; it is used for morphisms out of
exponentials whose webs are too large to list, and is compared with other
relations source by source.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Callable, Iterable

from ..formal_sums import canonical_key
from .spaces import CohSpace, csort, limpl_coh, sfun, tensor


class ShapeError(ValueError):
    pass


class BaseRel:
    src: CohSpace
    tgt: CohSpace

    def image(self, a) -> frozenset:
        raise NotImplementedError

    def apply(self, x: Iterable) -> frozenset:
        """Linear application to a clique: t.x = {b | (a,b) in t, a in x}."""
        out: set = set()
        for a in x:
            out |= self.image(a)
        return frozenset(out)

    def on(self, sources: Iterable) -> "Rel":
        """The explicit restriction of this relation to the given sources."""
        return Rel(self.src, self.tgt, {(a, b) for a in sources for b in self.image(a)})

    def materialize(self) -> "Rel":
        return self.on(self.src.web)


class Rel(BaseRel):
    def __init__(self, src: CohSpace, tgt: CohSpace, pairs: Iterable):
        self.src, self.tgt = src, tgt
        self.pairs = frozenset(pairs)
        idx: dict = {}
        for a, b in self.pairs:
            idx.setdefault(a, set()).add(b)
        self._idx = {a: frozenset(bs) for a, bs in idx.items()}

    def image(self, a) -> frozenset:
        return self._idx.get(a, frozenset())

    def __eq__(self, other) -> bool:
        return isinstance(other, Rel) and self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs, key=canonical_key))

    def __repr__(self) -> str:
        return "{" + ", ".join(repr(p) for p in self) + "}"

    def union(self, other: "Rel") -> "Rel":
        return Rel(self.src, self.tgt, self.pairs | other.pairs)


class LazyRel(BaseRel):
    def __init__(self, src: CohSpace, tgt: CohSpace, fn: Callable, name: str = "t"):
        self.src, self.tgt, self.fn, self.name = src, tgt, fn, name
        self._cache: dict = {}

    def image(self, a) -> frozenset:
        r = self._cache.get(a)
        if r is None:
            r = frozenset(self.fn(a))
            self._cache[a] = r
        return r


def compose(t: BaseRel, s: BaseRel) -> BaseRel:
    """t o s."""
    if isinstance(t, Rel) and isinstance(s, Rel):
        return Rel(s.src, t.tgt, {(a, c) for a, b in s.pairs for c in t.image(b)})
    return LazyRel(s.src, t.tgt, lambda a: {c for b in s.image(a) for c in t.image(b)})


def rcompose(*rs: BaseRel) -> BaseRel:
    """rcompose(f, g, h) = f o g o h."""
    out = rs[-1]
    for r in reversed(rs[:-1]):
        out = compose(r, out)
    return out


def identity(e: CohSpace) -> BaseRel:
    return LazyRel(e, e, lambda a: (a,), "id")


def zero(e: CohSpace, f: CohSpace) -> Rel:
    return Rel(e, f, ())


def first_difference(r1: BaseRel, r2: BaseRel, sources: Iterable):
    """The first source (in the given order) where the images differ, else None."""
    for a in sources:
        i1, i2 = r1.image(a), r2.image(a)
        if i1 != i2:
            return {"source": a, "left-only": csort(i1 - i2), "right-only": csort(i2 - i1)}
    return None


def is_clique_rel(t: Rel) -> bool:
    """Every pair in the webs and the pairs pairwise coherent in src -o tgt."""
    for a, b in t.pairs:
        if not (t.src.contains(a) and t.tgt.contains(b)):
            return False
    ps = sorted(t.pairs, key=canonical_key)
    return all(limpl_coh(t.src, t.tgt, p, q) for p, q in combinations(ps, 2))


def clique_violation(t: Rel):
    for p, q in combinations(sorted(t.pairs, key=canonical_key), 2):
        if not limpl_coh(t.src, t.tgt, p, q):
            return (p, q)
    return None


def all_morphisms(e: CohSpace, f: CohSpace, limit: int | None = None) -> list[Rel]:
    """All cliques of E -o F (up to ``limit`` of them, in canonical order)."""
    from .spaces import iter_cliques, limpl

    out = []
    for c in iter_cliques(limpl(e, f)):
        out.append(Rel(e, f, c))
        if limit is not None and len(out) >= limit:
            break
    return out


# -- functorial structure ----------------------------------------------------------


def tensor_rel(s: BaseRel, t: BaseRel) -> BaseRel:
    src, tgt = tensor(s.src, t.src), tensor(s.tgt, t.tgt)
    if isinstance(s, Rel) and isinstance(t, Rel):
        return Rel(src, tgt, {((a, c), (b, d)) for a, b in s.pairs for c, d in t.pairs})
    return LazyRel(src, tgt, lambda p: {(b, d) for b in s.image(p[0]) for d in t.image(p[1])})


def s_rel(t: BaseRel) -> BaseRel:
    """The functor S: S t = {((i,a),(i,b)) | (a,b) in t}."""
    src, tgt = sfun(t.src), sfun(t.tgt)
    if isinstance(t, Rel):
        return Rel(src, tgt, {((i, a), (i, b)) for a, b in t.pairs for i in (0, 1)})
    return LazyRel(src, tgt, lambda p: {(p[0], b) for b in t.image(p[1])})


# -- summability ---------------------------------------------------------------------------


@dataclass
class Summed:
    witness: Rel
    total: Rel


def witness(t0: Rel, t1: Rel) -> Rel:
    return Rel(t0.src, sfun(t0.tgt), {(a, (0, b)) for a, b in t0.pairs} | {(a, (1, b)) for a, b in t1.pairs})


def summable(t0: Rel, t1: Rel) -> Summed | None:
    """Summable iff t0 and t1 are disjoint and their union is still a clique."""
    if t0.pairs & t1.pairs:
        return None
    total = t0.union(t1)
    if not is_clique_rel(total):
        return None
    return Summed(witness(t0, t1), total)


def sum_or_none(t0: Rel, t1: Rel) -> Rel | None:
    s = summable(t0, t1)
    return None if s is None else s.total


@dataclass
class SummabilityBundle:
    e: CohSpace
    se: CohSpace
    proj0: Rel
    proj1: Rel
    sigma: Rel
    inj0: Rel
    inj1: Rel
    flip: Rel
    mu: Rel
    lift: Rel


def proj(e: CohSpace, i: int) -> Rel:
    return Rel(sfun(e), e, {((i, a), a) for a in e.web})


def sigma(e: CohSpace) -> Rel:
    return Rel(sfun(e), e, {((i, a), a) for a in e.web for i in (0, 1)})


def inj(e: CohSpace, i: int) -> Rel:
    return Rel(e, sfun(e), {(a, (i, a)) for a in e.web})


def flip(e: CohSpace) -> Rel:
    s2 = sfun(sfun(e))
    return Rel(s2, s2, {((i, (j, a)), (j, (i, a))) for i, j in product((0, 1), repeat=2) for a in e.web})


def mu(e: CohSpace) -> Rel:
    return Rel(sfun(sfun(e)), sfun(e),
               {((0, (0, a)), (0, a)) for a in e.web}
               | {((0, (1, a)), (1, a)) for a in e.web}
               | {((1, (0, a)), (1, a)) for a in e.web})


def lift(e: CohSpace) -> Rel:
    return Rel(sfun(e), sfun(sfun(e)), {((i, a), (i, (i, a))) for i in (0, 1) for a in e.web})


def summability_bundle(e: CohSpace) -> SummabilityBundle:
    return SummabilityBundle(e, sfun(e), proj(e, 0), proj(e, 1), sigma(e), inj(e, 0), inj(e, 1),
                             flip(e), mu(e), lift(e))


# The same structure obtained from the bimonoid on D, with S X = D -o X.


def precompose_limpl(u: Rel, x: CohSpace, src: CohSpace, tgt: CohSpace, enc_src, enc_tgt) -> Rel:
    """(u -o X) : (B -o X) -> (A -o X) for u : A -> B, i.e. ((b,x),(a,x)) for (a,b) in u.

    ``enc_src``/``enc_tgt`` translate (d, x) pairs into the atoms of the given spaces.
    """
    return Rel(src, tgt, {(enc_src(b, a_x), enc_tgt(a, a_x)) for a, b in u.pairs for a_x in x.web})


def bundle_from_bimonoid(e: CohSpace) -> dict[str, Rel]:
    """Components of the S-structure rebuilt as (morphism on D) -o E."""
    s1, s2 = sfun(e), sfun(sfun(e))
    d, o = bimonoid_spaces()
    enc1 = lambda i, a: (i, a)  # noqa: E731
    enc2 = lambda lr, a: (lr[0], (lr[1], a))  # noqa: E731
    unit = lambda _s, a: a  # noqa: E731
    w0 = Rel(o, d, {("*", 0)})
    w1 = Rel(o, d, {("*", 1)})
    return {
        "proj0": precompose_limpl(w0, e, s1, e, enc1, unit),
        "proj1": precompose_limpl(w1, e, s1, e, enc1, unit),
        "sigma": precompose_limpl(d_unit(), e, s1, e, enc1, unit),
        "inj0": precompose_limpl(d_counit(), e, e, s1, unit, enc1),
        "mu": precompose_limpl(d_comult(), e, s2, s1, enc2, enc1),
        "flip": precompose_limpl(d_swap(), e, s2, s2, enc2, enc2),
        "lift": precompose_limpl(d_mult(), e, s1, s2, enc1, enc2),
    }


# -- the bimonoid on D ----------------------------------------------------------------------


def bimonoid_spaces():
    from .spaces import dbimon, one
    return dbimon(), one()


def d_counit() -> Rel:
    d, o = bimonoid_spaces()
    return Rel(d, o, {(0, "*")})


def d_comult() -> Rel:
    d, _ = bimonoid_spaces()
    return Rel(d, tensor(d, d), {(0, (0, 0)), (1, (1, 0)), (1, (0, 1))})


def d_unit() -> Rel:
    d, o = bimonoid_spaces()
    return Rel(o, d, {("*", 0), ("*", 1)})


def d_mult() -> Rel:
    d, _ = bimonoid_spaces()
    return Rel(tensor(d, d), d, {((0, 0), 0), ((1, 1), 1)})


def d_swap() -> Rel:
    d, _ = bimonoid_spaces()
    dd = tensor(d, d)
    return Rel(dd, dd, {((a, b), (b, a)) for a in (0, 1) for b in (0, 1)})
