"""The COH axiom suite: every check passes and the checks can actually fail."""

import json
import random

import pytest

import cohdiff.coh.axioms as ax
from cohdiff.checks import CheckResult
from cohdiff.coh.relations import Rel
from cohdiff.coh.spaces import all_spaces, dbimon, tensor

SPACES = all_spaces(2)


@pytest.fixture(scope="module")
def small_report():
    return ax.run_coh_suite(ax.CohSuiteConfig(max_web=2, samples=30))


def test_report_shape(small_report):
    assert small_report["suite"] == "coh" and small_report["ok"]
    assert small_report["spaces"] == ["G1.0", "G2.0", "G2.1"]
    names = [c["name"] for c in small_report["checks"]]
    assert len(names) == 17 and len(set(names)) == 17
    for c in small_report["checks"]:
        assert set(c) >= {"name", "ok", "mode", "checked", "violations", "examples", "seconds"}
        assert c["checked"] > 0
    json.dumps(small_report)  # plain data


def test_report_is_seeded():
    a = ax.run_coh_suite(ax.CohSuiteConfig(max_web=2, samples=10, seed=3))
    b = ax.run_coh_suite(ax.CohSuiteConfig(max_web=2, samples=10, seed=3))
    strip = lambda r: [{k: v for k, v in c.items() if k != "seconds"} for c in r["checks"]]
    assert strip(a) == strip(b)


@pytest.mark.parametrize("check", [ax.check_s_com, ax.check_flip_mu_lift, ax.check_monad,
                                   ax.check_s_with, ax.check_bundle])
def test_exhaustive_checks(check):
    r = check(SPACES)
    assert r.ok and r.checked > 0 and not r.violations


@pytest.mark.parametrize("check", [ax.check_s_zero, ax.check_s_wit, ax.check_associativity,
                                   ax.check_composition, ax.check_s_tensor, ax.check_joint_mono_epi])
def test_sampled_checks(check):
    r = check(SPACES, random.Random(1), 20)
    assert r.ok and r.checked > 0


def test_differential_checks():
    assert ax.check_bimonoid().ok
    assert ax.check_ddiff(4).ok
    assert ax.check_sdiff(SPACES, 2, 4).ok
    assert ax.check_chain_rule(SPACES, 2, 4).ok
    assert ax.check_chain_rule_example().ok


def test_sigma_witness():
    r = ax.find_sigma_witness(all_spaces(3), 2, 4)
    assert r.ok and r.expect_violation and len(r.violations) == 1
    ex = r.violations[0]
    assert ex["space"] == "'G1.0'" and ex["source"] == "((1, 0), (1, 0))"
    assert ex["sigma_after_d"] == "[]" and ex["oc_sigma"] == "[(0, 0)]"


def test_bimonoid_check_detects_a_broken_comultiplication(monkeypatch):
    d = dbimon()
    monkeypatch.setattr(ax, "d_comult", lambda: Rel(d, tensor(d, d), {(0, (0, 0))}))
    r = ax.check_bimonoid()
    assert not r.ok
    assert {"counit-left", "counit-right"} <= {v["law"].strip("'") for v in r.violations if v}


def test_s_com_detects_a_broken_sigma(monkeypatch):
    monkeypatch.setattr(ax, "sigma", lambda e: Rel(ax.sfun(e), e, set()))
    assert not ax.check_s_com(SPACES).ok


def test_check_result_semantics():
    r = CheckResult("x")
    assert r.ok
    for i in range(8):
        r.fail(i=i)
    assert not r.ok and len(r.violations) == 8
    assert len(r.as_dict()["examples"]) == 5
    neg = CheckResult("y", expect_violation=True)
    assert not neg.ok
    neg.fail(w=1)
    assert neg.ok


def test_helpers():
    rng = random.Random(0)
    e = all_spaces(3)[-1]
    for _ in range(20):
        assert e.is_clique(ax.random_clique(rng, e))
    assert ax.same(ax.ident(e), ax.ident(e), e.web) is None
    f, g = ax.random_summable_pair(rng, e, dbimon())
    assert ax.summable(f, g) is not None
