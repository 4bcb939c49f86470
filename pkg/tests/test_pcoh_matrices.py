"""Finite PCS matrices: application, composition, summability and the exponential."""

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from cohdiff.multisets import multisets
from cohdiff.pcoh.matrices import (
    PcsMatrix, ShapeError, d_comult, d_counit, d_mult, d_unit, dbimon, der, dig, identity,
    mat_apply, mat_compose, mat_sum, mono, nat_n, oc_mat, one, promote, s_mat, s_proj, s_sigma,
    sfun, summable, tensor, with_, zero,
)

fracs = st.fractions(min_value=0, max_value=1, max_denominator=6)


def random_matrix(rng, rows, cols, scale=F(1, 2)):
    return PcsMatrix(tuple(rows), tuple(cols),
                     {(a, b): F(rng.randint(0, 4), 4) * scale for a in rows for b in cols})


def test_identity_and_projections():
    x = {0: F(1, 3), 1: F(1, 2)}
    assert mat_apply(identity((0, 1)), x) == x
    u = {(0, 0): F(1, 4), (1, 0): F(1, 2), (1, 1): F(1, 3)}
    assert mat_apply(s_proj((0, 1), 0), u) == {0: F(1, 4)}
    assert mat_apply(s_proj((0, 1), 1), u) == {0: F(1, 2), 1: F(1, 3)}
    assert mat_apply(s_sigma((0, 1)), u) == {0: F(3, 4), 1: F(1, 3)}


def test_compose_and_sum():
    rng = random.Random(0)
    s = random_matrix(rng, (0, 1), ("a", "b"))
    t = random_matrix(rng, ("a", "b"), ("*",))
    x = {0: F(1, 2), 1: F(1, 3)}
    assert mat_apply(mat_compose(t, s), x) == mat_apply(t, mat_apply(s, x))
    assert mat_sum(s, zero(s.rows, s.cols)) == s
    assert mat_apply(s_sigma(("*",)), mat_apply(s_mat(t), {(0, "a"): F(1, 2)})) == mat_apply(t, {"a": F(1, 2)})


def test_shape_errors():
    with pytest.raises(ShapeError):
        mat_apply(identity((0,)), {1: F(1)})
    with pytest.raises(ShapeError):
        mat_compose(identity((0,)), identity((1,)))


def test_negative_entries_rejected():
    with pytest.raises(ValueError):
        PcsMatrix((0,), (0,), {(0, 0): -1})


def test_spaces():
    assert nat_n(2).contains({0: F(1, 2), 2: F(1, 2)})
    assert not nat_n(2).contains({0: F(1, 2), 1: F(2, 3)})
    d = dbimon()
    assert d.contains({0: F(1), 1: F(1)})
    s = sfun(one())
    assert s.contains({(0, "*"): F(1, 2), (1, "*"): F(1, 2)})
    assert not s.contains({(0, "*"): F(1), (1, "*"): F(1, 2)})
    assert len(with_(one(), dbimon()).vertices()) == 8
    assert len(nat_n(2).vertices()) == 4


def test_summable():
    one_w = ("*",)
    half = PcsMatrix(one_w, one_w, {("*", "*"): F(1, 2)})
    assert summable(half, half, one(), one()) is not None
    assert summable(identity(one_w), half, one(), one()) is None


def test_d_bimonoid_entries():
    u = {0: F(1, 2), 1: F(1, 3)}
    assert mat_apply(d_counit(), u) == {"*": F(1, 2)}
    assert mat_apply(d_comult(), u) == {(0, 0): F(1, 2), (1, 0): F(1, 3), (0, 1): F(1, 3)}
    assert mat_apply(d_unit(), {"*": F(1)}) == {0: F(1), 1: F(1)}
    uv = {ab: u[ab[0]] * u[ab[1]] for ab in d_mult().rows}
    assert mat_apply(d_mult(), uv) == {0: F(1, 4), 1: F(1, 9)}


def test_promote():
    assert promote({0: F(1, 2)}, 2) == {(): 1, (0,): F(1, 2), (0, 0): F(1, 4)}
    assert promote({}, 3) == {(): 1}
    assert mono({0: F(1, 2), 1: F(1, 3)}, (0, 1, 1)) == F(1, 18)


def test_oc_of_identity():
    web = (0, 1)
    assert oc_mat(identity(web), 3) == identity(multisets(web, 3))


def test_oc_multinomial_entry():
    # ([a, a], [b, c]) has one matching; ([a, c], [b, b]) has coefficient [p; r] = 2!
    t = PcsMatrix(("a", "c"), ("b", "c"), {("a", "b"): F(1, 2), ("a", "c"): F(1, 3), ("c", "b"): F(1, 5)})
    ot = oc_mat(t, 2)
    assert ot[(("a", "a"), ("b", "c"))] == F(1, 2) * F(1, 3)
    assert ot[(("a", "a"), ("b", "b"))] == F(1, 4)
    assert ot[(("a", "c"), ("b", "b"))] == 2 * F(1, 2) * F(1, 5)
    assert ot[(("a",), ("b", "b"))] == 0


@given(st.integers(0, 10**6), fracs, fracs)
def test_promotion_property(seed, x0, x1):
    # !t . x^! = (t . x)^!, exactly, because !t preserves sizes
    rng = random.Random(seed)
    t = random_matrix(rng, (0, 1), ("p", "q"))
    k = 3
    x = {a: v for a, v in ((0, x0), (1, x1)) if v}
    lhs = mat_apply(oc_mat(t, k), promote(x, k, (0, 1)))
    rhs = promote(mat_apply(t, x), k, ("p", "q"))
    assert lhs == {m: v for m, v in rhs.items() if v}


@given(fracs, fracs)
def test_dereliction_and_digging(x0, x1):
    k = 3
    x = {a: v for a, v in ((0, x0), (1, x1)) if v}
    xp = promote(x, k, (0, 1))
    assert mat_apply(der((0, 1), k), xp) == x
    # dig . x^! = (x^!)^! restricted to families of total size <= k
    got = mat_apply(dig((0, 1), k), xp)
    want = {mm: v for mm, v in promote(xp, k, multisets((0, 1), k)).items()
            if sum(len(m) for m in mm) <= k}
    assert got == want


def test_tensor():
    a, b = identity((0,)), PcsMatrix(("x",), ("y",), {("x", "y"): F(1, 2)})
    assert tensor(a, b).entries == {((0, "x"), (0, "y")): F(1, 2)}
