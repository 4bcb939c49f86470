"""Bounded PCOH semantics of closed programs."""

from fractions import Fraction as F

import pytest
from hypothesis import given

from cohdiff.pcoh.adequacy import entry_sum
from cohdiff.pcoh.semantics import SemanticsError, basis_value, depth_of, diff_by_dual, psem_bounded
from cohdiff.syntax import parse

from conftest import CORPUS
from strategies import programs_td

BUDGETS = [(2, 1, 1), (4, 2, 3), (8, 3, 6), (16, None, 8)]


def sem(src, nat=8, degree=None, fix=8):
    return psem_bounded(parse(src), nat, degree, fix)


@pytest.mark.parametrize("src,want", [
    ("3", {((), 3): 1}),
    ("succ^0 (succ^0 1)", {((), 3): 1}),
    ("pred^0 0", {((), 0): 1}),
    ("inj^0_1 3", {((1,), 3): 1}),
    ("proj^0_1 (inj^0_0 5)", {}),
    ("sum^0 (inj^1_1 (inj^0_0 4))", {((1,), 4): 1}),
    ("if^0(0, 1, 2)", {((), 1): 1}),
    ("let^0 x = 2 in succ^0 x", {((), 3): 1}),
    ("fix (\\x:Nat. x)", {}),
])
def test_examples(src, want):
    assert sem(src) == {k: F(v) for k, v in want.items()}


def test_nat_cutoff_drops_large_numerals():
    assert sem("succ^0 4", nat=4) == {}
    assert sem("4", nat=4) == {((), 4): 1}


def test_degree_budget():
    # the argument is used twice, so degree 1 is not enough
    twice = "(\\f:Nat -> Nat. f (f 1)) (\\x:Nat. succ^0 x)"
    assert sem(twice, degree=1) == {}
    assert sem(twice, degree=2) == {((), 3): 1}
    assert sem("(\\x:Nat. succ^0 x) 2", degree=0) == {}
    assert sem("(\\x:Nat. 3) 2", degree=0) == {((), 3): 1}


def test_fix_budget():
    add = (CORPUS / "add22.pcfd").read_text()
    assert [basis_value(sem(add, fix=i)) for i in range(5)] == [None, None, None, 4, 4]


def test_derivative_examples():
    assert sem("D (\\x:Nat. succ^0 x) (inj^0_1 0)") == {((1,), 1): 1}
    assert sem((CORPUS / "deriv_succ2.pcfd").read_text()) == {((), 3): 1}


def test_rejects_function_type():
    with pytest.raises(SemanticsError):
        sem("\\x:Nat. x")


def test_basis_value():
    assert basis_value({((), 2): F(1)}) == 2
    assert basis_value({((), 2): F(1, 2)}) is None
    assert basis_value({((1,), 2): F(1)}) is None
    assert basis_value({}) is None


def test_depth_of():
    assert depth_of(parse("inj^1_0 (inj^0_1 2)")) == 2


@pytest.mark.parametrize("f,x,want", [
    ("\\x:Nat. succ^0 (succ^0 x)", "inj^0_1 1", {((1,), 3): 1}),
    ("\\x:Nat. 5", "inj^0_1 1", {((0,), 5): 1}),  # constant: primal part only
    ("\\x:Nat. x", "inj^0_0 2", {((0,), 2): 1}),
    ("\\x:Nat. if^0(x, 1, 2)", "inj^0_1 0", {((1,), 1): 1}),
])
def test_diff_by_dual(f, x, want):
    assert diff_by_dual(parse(f), parse(x)) == {k: F(v) for k, v in want.items()}


def test_diff_by_dual_agrees_with_the_evaluator_on_corpus_derivatives():
    for name in ("deriv_succ", "deriv_succ2", "deriv_succ5", "deriv_const"):
        m = parse((CORPUS / f"{name}.pcfd").read_text())
        dapp = m.arg  # proj (D f x)
        assert diff_by_dual(dapp.fun.arg, dapp.arg) == psem_bounded(dapp, 8, None, 0)


@given(programs_td)
def test_monotone_in_every_budget(m):
    vs = [psem_bounded(m, *b) for b in BUDGETS]
    for lo, hi in zip(vs, vs[1:]):
        for key, c in lo.items():
            assert c <= hi.get(key, 0)


@given(programs_td)
def test_integral_and_subprobabilistic(m):
    v = psem_bounded(m, 16, None, 8)
    assert all(c.denominator == 1 and c > 0 for c in v.values())
    assert entry_sum(v) <= 1
    d = depth_of(m)
    assert all(len(w) == d for w, _ in v)
