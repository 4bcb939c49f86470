"""The coherence-space differential: d-bar, the distributive law, D t and partial derivatives."""

import random

import pytest
from hypothesis import given, strategies as st

from cohdiff.coh.axioms import random_morphism
from cohdiff.coh.differential import (
    chain_rule_data, chain_rule_report, ddiff_coh, dfun_by_composite, dfun_coh, dfun_via_iso,
    mu_after, partial_deriv, sdiff_coh,
)
from cohdiff.coh.exponential import FREE, fun, oc_free, oc_girard
from cohdiff.coh.relations import Rel
from cohdiff.coh.spaces import all_spaces, dbimon, finite, sfun, with_

from strategies import seeds

spaces = st.sampled_from(all_spaces(3))


def kleisli(rng, e, f, k=3, deg=2):
    """A random clique of !E -o F whose sources are repetition-free multisets of size <= deg."""
    return Rel(oc_free(e, k), f, random_morphism(rng, oc_girard(e, deg), f).pairs)


def test_ddiff_entries():
    d = ddiff_coh(3)
    assert (0, ()) in d.pairs and (0, (0, 0, 0)) in d.pairs
    assert (1, (0, 0, 1)) in d.pairs
    assert (1, (1, 1)) not in d.pairs
    assert (1, ()) not in d.pairs


def test_sdiff_rows():
    e = dbimon()
    law = sdiff_coh(e, 3)
    assert law.image(((0, 0), (0, 1))) == {(0, (0, 1))}
    assert law.image(((0, 0), (1, 1))) == {(1, (0, 1))}
    assert law.image(((1, 0), (1, 1))) == set()
    assert law.image(()) == {(0, ())}


@pytest.mark.parametrize("e", all_spaces(3), ids=lambda e: e.name)
def test_dfun_closed_form_matches_composite(e):
    rng = random.Random(len(e.web))
    for _ in range(5):
        t = kleisli(rng, e, dbimon())
        assert dfun_coh(t, 3).pairs == dfun_by_composite(t, 3).pairs


@given(spaces, seeds)
def test_fun_of_derivative(e, seed):
    # for repetition-free t and a point (u, v) of S E with u, v disjoint:
    # Fun Dt = (0, Fun t(u)) u {(1, b) | (m, b) in t, m within u + v meeting v once}
    rng = random.Random(seed)
    t = kleisli(rng, e, dbimon())
    dt = dfun_coh(t, 3)
    for _ in range(4):
        c = [a for a in e.web if rng.random() < 0.6]
        if not e.is_clique(c):
            continue
        v = {a for a in c if rng.random() < 0.5}
        u = set(c) - v
        x = {(0, a) for a in u} | {(1, a) for a in v}
        want = {(0, b) for b in fun(t, u)}
        want |= {(1, b) for m, b in t.pairs if set(m) <= u | v and len(set(m) & v) == 1}
        assert fun(dt, x) == want


@given(spaces, seeds)
def test_linear_morphism_derivative(e, seed):
    # a linear t (singleton sources) has D t = S t on the singleton sources
    rng = random.Random(seed)
    lin = random_morphism(rng, e, dbimon())
    t = Rel(oc_free(e, 3), dbimon(), {((a,), b) for a, b in lin.pairs})
    dt = dfun_coh(t, 3)
    assert dt.pairs == {(((i, a),), (i, b)) for a, b in lin.pairs for i in (0, 1)}


def test_repetition_blocks_the_derivative_term():
    # ([0, 0], b) has no (1, b) companion: 0 is not strictly coherent with itself
    d = dbimon()
    t = Rel(oc_free(d, 3), d, {((0, 0), 1)})
    assert dfun_coh(t, 3).pairs == {(((0, 0), (0, 0)), (0, 1))}


def test_chain_rule_report():
    rep = chain_rule_report()
    g = rep["girard"]
    assert g["t_o_s"] == [(("*",), "*")]
    assert g["derivative_of_composite"] == ["*"]
    assert g["composite_of_derivatives"] == []
    assert g["inner"] == [(1, "*"), (2, "*")]
    fr = rep["free"]
    assert fr["t_o_s"] == [(("*", "*"), "*")]
    assert fr["functorial"] and fr["exact"]


def test_chain_rule_data_kinds():
    s, t, k = chain_rule_data(FREE)
    assert k == 2 and len(s.pairs) == 2 and len(t.pairs) == 1


class TestPartialDerivatives:
    k = 3

    def setup(self, seed):
        rng = random.Random(seed)
        x1 = finite((0, 1), [(0, 1)] if seed % 2 else [])
        x2 = finite(("a",))
        w = with_(x1, x2)
        return x1, x2, kleisli(rng, w, dbimon())

    @pytest.mark.parametrize("seed", range(12))
    def test_mixed_partials(self, seed):
        x1, x2, f = self.setup(seed)
        k, y = self.k, dbimon()
        d12 = partial_deriv(1, partial_deriv(2, f, x1, x2, k), x1, sfun(x2), k)
        d21 = partial_deriv(2, partial_deriv(1, f, x1, x2, k), sfun(x1), x2, k)
        total = dfun_via_iso(f, x1, x2, k)
        assert mu_after(d12, y).pairs == total.pairs == mu_after(d21, y).pairs

    def test_linear_in_one_argument(self):
        # f(x1, x2) reads only x1: D_2 f carries no tag 1
        x1, x2 = dbimon(), finite(("a",))
        w = with_(x1, x2)
        f = Rel(oc_free(w, 3), dbimon(), {(((0, 0),), 1)})
        d2 = partial_deriv(2, f, x1, x2, 3)
        assert all(i == 0 for _, (i, _) in d2.pairs)
        d1 = partial_deriv(1, f, x1, x2, 3)
        assert (((0, (1, 0)),), (1, 1)) in d1.pairs

    def test_constant(self):
        x1, x2 = dbimon(), finite(("a",))
        f = Rel(oc_free(with_(x1, x2), 3), dbimon(), {((), 0)})
        assert partial_deriv(1, f, x1, x2, 3).pairs == {((), (0, 0))}

    def test_bad_index(self):
        x1, x2 = dbimon(), dbimon()
        f = Rel(oc_free(with_(x1, x2), 2), dbimon(), set())
        with pytest.raises(ValueError):
            partial_deriv(3, f, x1, x2, 2)
