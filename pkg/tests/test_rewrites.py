"""Curated rewrite rules, contexts, linear positions and the soundness identities."""

import pytest
from hypothesis import given

from cohdiff.formal_sums import FormalSum
from cohdiff.pcoh.soundness import (
    SoundnessConfig, check_soundness, d_beta_identity, first_order_dapp, rewrite_identity,
)
from cohdiff.rewrites import (
    ROOT_RULES, SOUNDNESS_RULES, linear_position, plug_path, redex_sites, rewrite_at, root_step,
    subterm,
)
from cohdiff.syntax import Num, alpha_eq, parse, render
from cohdiff.typecheck import type_of

from strategies import programs


def step(src):
    r = root_step(parse(src))
    return None if r is None else (r[0], sorted(render(t) for t, _ in r[1].items()))


@pytest.mark.parametrize("src,rule,out", [
    ("(\\x:Nat. succ^0 x) 2", "beta", ["succ^0 2"]),
    ("proj^0_1 (inj^0_1 3)", "proj-inj", ["3"]),
    ("proj^0_0 (inj^0_1 3)", "proj-inj", []),
    ("proj^0_0 (sum^0 (inj^1_1 (inj^0_0 4)))", "proj-sum",
     ["proj^0_0 (proj^0_0 (inj^1_1 (inj^0_0 4)))"]),
    ("succ^0 4", "arith", ["5"]),
    ("pred^0 0", "arith", ["0"]),
    ("if^0(1, 2, 3)", "arith", ["3"]),
    ("let^0 x = 2 in succ^0 x", "arith", ["succ^0 2"]),
    ("fix (\\x:Nat. 6)", "fix", ["(\\x:Nat. 6) (fix (\\x:Nat. 6))"]),
])
def test_root_rules(src, rule, out):
    assert step(src) == (rule, sorted(render(parse(o)) for o in out))


def test_proj_sum_tangent_has_two_summands():
    r = root_step(parse("proj^0_1 (sum^0 (inj^1_1 (inj^0_0 4)))"))
    assert r[0] == "proj-sum" and len(r[1]) == 2


def test_d_beta_root():
    name, out = root_step(parse("D (\\x:Nat. succ^0 x)"))
    assert name == "d-beta" and len(out) == 1


def test_no_redex():
    assert root_step(parse("3")) is None
    assert root_step(parse("proj^0_1 (inj^1_1 3)")) is None  # depths differ
    with pytest.raises(ValueError):
        rewrite_at(parse("3"), ())


def test_paths_and_plugging():
    t = parse("succ^0 ((\\x:Nat. x) 2)")
    assert isinstance(subterm(t, (0, 1)), Num)
    assert render(plug_path(t, (0, 1), Num(7))) == render(parse("succ^0 ((\\x:Nat. x) 7)"))
    sites = list(redex_sites(t))
    assert [(p, r) for p, r, _ in sites] == [((0,), "beta")]
    rule, out = rewrite_at(t, (0,))
    assert rule == "beta" and [render(m) for m, _ in out.items()] == ["succ^0 2"]


def test_linear_positions():
    t = parse("(\\f:Nat -> Nat. f 1) (\\x:Nat. x)")
    assert linear_position(t, (0,))
    assert not linear_position(t, (1,))
    i = parse("if^0(0, 3, proj^0_1 (inj^0_0 5))")
    assert linear_position(i, (0,))
    assert not linear_position(i, (1,)) and not linear_position(i, (2,))
    assert not linear_position(parse("fix (\\x:Nat. x)"), (0,))
    assert linear_position(parse("let^0 x = 2 in succ^0 x"), (1,))


def test_erasing_in_an_untaken_branch_is_unsound():
    # the reason branches are excluded: [[if 0 then 3 else 0-sum]] is e3, the reduct sums to 0
    i = parse("if^0(0, 3, proj^0_1 (inj^0_0 5))")
    rule, lhs, rhs = rewrite_identity(i, (2,))
    assert rule == "proj-inj" and lhs == {((), 3): 1} and rhs == {}


@given(programs)
def test_rewrites_preserve_types(m):
    a = type_of((), m)
    for path, _, out in redex_sites(m):
        _, whole = rewrite_at(m, path)
        for t, _ in whole.items():
            assert type_of((), t) == a


def test_root_rule_table():
    assert set(SOUNDNESS_RULES) <= set(ROOT_RULES)


def test_sums_are_formal_sums():
    _, out = root_step(parse("proj^0_0 (inj^0_1 3)"))
    assert out == FormalSum.zero()


class TestSoundnessModule:
    def test_identity_on_a_projection_over_sum(self):
        m = parse("proj^0_1 (sum^0 (inj^1_1 (inj^0_0 4)))")
        rule, lhs, rhs = rewrite_identity(m, ())
        assert rule == "proj-sum" and lhs == rhs == {((), 4): 1}

    def test_first_order_dapp(self):
        t = parse("D (\\x:Nat. succ^0 x) (inj^0_1 2)")
        assert first_order_dapp(t)
        assert not first_order_dapp(parse("(\\x:Nat. x) 2"))
        lhs, rhs = d_beta_identity(t)
        assert lhs == rhs == {((1,), 3): 1}

    def test_check_soundness_small(self):
        r = check_soundness(SoundnessConfig(programs=60, seed=5))
        assert r.ok and r.checked > 0
        assert set(r.counts) == set(SOUNDNESS_RULES) | {"d-beta-oracle"}
        assert all(r.counts[k] > 0 for k in r.counts)


def test_alpha_equivalent_beta_reducts():
    a = root_step(parse("(\\x:Nat. \\y:Nat. x) 3"))[1]
    b = root_step(parse("(\\z:Nat. \\w:Nat. z) 3"))[1]
    (ta, _), = a.items()
    (tb, _), = b.items()
    assert alpha_eq(ta, tb)
