import pytest
from hypothesis import given, strategies as st

from cohdiff.generators import random_program
from cohdiff.syntax import (
    NAT, Abs, App, Arrow, DApp, Fix, Flip, Inj, NatD, Num, ParseError, Proj, Succ, Theta, Var,
    alpha_eq, arrows, free_vars, is_sharp, parse, parse_term, parse_type, render, render_type,
    sharp_decompose, t_shift, t_unshift,
)

from strategies import programs_td, sharp_types, types

SUCC = Abs("x", NAT, Succ(0, Var("x")))


class TestTypes:
    def test_sharp_decompose_examples(self):
        assert sharp_decompose(NatD(2)) == (2, NAT)
        assert sharp_decompose(Arrow(NAT, NAT)) == (0, Arrow(NAT, NAT))
        assert sharp_decompose(Arrow(NAT, NatD(1))) == (1, Arrow(NAT, NAT))

    def test_t_shift_examples(self):
        assert t_shift(NAT) == NatD(1)
        assert t_shift(arrows(NAT, NAT, NAT)) == arrows(NAT, NAT, NatD(1))
        assert t_shift(NatD(1)) == NatD(2)

    def test_negative_depth(self):
        with pytest.raises(ValueError):
            NatD(-1)

    def test_unshift_too_far(self):
        with pytest.raises(ValueError):
            t_unshift(NatD(1), 2)

    @given(sharp_types(), st.integers(0, 5))
    def test_decompose_round_trip(self, e, d):
        assert is_sharp(e)
        assert sharp_decompose(t_shift(e, d)) == (d, e)

    @given(types, st.integers(0, 3))
    def test_shift_adds_depth(self, a, n):
        d, e = sharp_decompose(a)
        assert sharp_decompose(t_shift(a, n)) == (d + n, e)
        assert t_unshift(t_shift(a, n), n) == a

    @given(types)
    def test_type_text_round_trip(self, a):
        assert parse_type(render_type(a)) == a


class TestParse:
    def test_lambda(self):
        assert parse_term("\\x:Nat. succ^0 x") == SUCC

    def test_derivative_program(self):
        t = parse_term("proj^0_1 (D (\\x:Nat. succ^0 x) (inj^0_1 0))")
        assert t == Proj(0, 1, App(DApp(SUCC), Inj(0, 1, Num(0))))

    def test_flip(self):
        assert parse_term("flip^{0,0} M", free=("M",)) == Flip(0, 0, Var("M"))

    def test_types(self):
        assert parse_type("T T Nat -> Nat") == Arrow(NatD(2), NAT)
        assert parse_type("T (Nat -> Nat)") == Arrow(NAT, NatD(1))
        assert parse("Nat -> Nat") == Arrow(NAT, NAT)

    def test_comments(self):
        assert parse_term("-- a comment\nsucc^0 -- trailing\n 2") == Succ(0, Num(2))

    def test_application_is_left_associative(self):
        t = parse_term("f a b", free=("f", "a", "b"))
        assert t == App(App(Var("f"), Var("a")), Var("b"))

    @pytest.mark.parametrize("src,kind", [
        ("succ^0", "syntax error"),
        ("\\x:Nat. y", "unbound variable"),
        ("3 $", "lexical error"),
    ])
    def test_errors(self, src, kind):
        with pytest.raises(ParseError) as ei:
            parse_term(src)
        assert kind in str(ei.value) and ei.value.line == 1 and ei.value.col >= 1


class TestRender:
    def test_examples(self):
        assert render(Num(3)) == "3"
        assert render(Theta(1, Var("x"))) == "sum^1 x"
        assert render(Fix(Abs("f", Arrow(NAT, NAT), Var("f")))) == "fix (\\f:Nat -> Nat. f)"

    def test_generated_corpus_round_trip(self):
        for seed in range(1000):
            t = random_program(seed)
            assert alpha_eq(parse_term(render(t)), t), seed

    @given(programs_td)
    def test_round_trip_at_depth(self, t):
        back = parse_term(render(t))
        assert alpha_eq(back, t) and render(back) == render(t)


class TestBinding:
    def test_alpha_eq(self):
        assert alpha_eq(Abs("x", NAT, Var("x")), Abs("y", NAT, Var("y")))
        assert not alpha_eq(Abs("x", NAT, Var("z")), Abs("y", NAT, Var("y")))

    def test_free_vars(self):
        assert free_vars(parse_term("\\x:Nat. f x", free=("f",))) == {"f"}
