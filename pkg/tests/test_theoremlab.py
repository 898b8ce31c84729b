import json

import numpy as np
import pytest

from credpool import theoremlab as lab
from credpool.agenda import is_coherent
from credpool.divergence import GKL, SED, bregman
from credpool.errors import PreconditionError


def test_random_profile_deterministic():
    a, b = lab.random_profile(5, 3, 2), lab.random_profile(5, 3, 2)
    assert a == b
    assert a != lab.random_profile(6, 3, 2)


def test_random_profile_coherent():
    for s in range(50):
        p = lab.random_profile(s, 4, 3, coherent=True)
        assert all(is_coherent(p.agenda, c, 1e-12) for c in p.credences)


def test_random_profile_mostly_incoherent():
    hits = sum(not is_coherent(lab.random_profile(s, 2, 1).agenda, lab.random_profile(s, 2, 1).credences[0])
               for s in range(1000))
    assert hits >= 990


def test_random_profile_documented_draws():
    p = lab.random_profile(42, 3, 2)
    rng = np.random.default_rng(42)
    C = rng.random((2, 3))
    w = rng.random(2)
    assert np.array_equal(p.credences, C)
    assert np.allclose(p.weights, w / w.sum(), atol=1e-15)


def test_random_general_profile():
    A = lab.flu_agenda()
    p = lab.random_general_profile(1, A, 3)
    assert all(is_coherent(A, c) for c in p.credences)


def test_check_commutation_examples():
    ab = lab.amira_benito()
    r = lab.check_commutation("lp", "sed", ab)
    assert r.passed and r.max_gap <= 1e-12
    r = lab.check_commutation("lp", "gkl", ab)
    assert not r.passed and r.max_gap > 1e-3
    for s in range(20):
        assert lab.check_commutation("gp", "gkl", lab.random_profile(s, 3, 2)).passed


def test_check_dominance():
    r = lab.check_dominance(SED, [0.5, 0.1])
    assert r.passed
    # independent scalar evaluation at the X world
    assert r.after[0] == pytest.approx((1 - 0.7) ** 2 + 0.3 ** 2, abs=1e-12)
    assert r.before[0] == pytest.approx((1 - 0.5) ** 2 + 0.1 ** 2, abs=1e-12)
    assert lab.check_dominance(GKL, [0.2, 0.6]).passed
    with pytest.raises(PreconditionError):
        lab.check_dominance(SED, [0.3, 0.7])


def test_forecast_table():
    t = lab.run_section9()
    for key in ("LP1", "LP2", "LP3"):
        assert np.allclose(t[key], [0.4, 0.3, 0.3, 0.7], atol=1e-6)
    assert np.allclose(t["GP1"], [0.398, 0.345, 0.257, 0.743], atol=1e-3)
    assert np.allclose(t["GP3"], [0.390, 0.338, 0.272, 0.728], atol=1e-3)
    assert "non-partition" in t["GP2_error"]


def test_gp1_is_coherent_world_pool():
    # independent route: geometric pool of the world distributions, pushed through the truth table
    t = lab.run_section9()
    q = np.sqrt(np.array([0.2, 0.3, 0.5]) * np.array([0.6, 0.3, 0.1]))
    q /= q.sum()
    assert np.allclose(t["GP1"], [q[0], q[1], q[2], q[0] + q[1]], atol=1e-12)


def test_gp3_is_a_minimum():
    t = lab.run_section9()
    p = lab.carmen_donal()
    V = p.agenda.truth_table
    obj = lambda x: sum(a * bregman(GKL, x, c) for a, c in zip(p.weights, p.credences))
    rng = np.random.default_rng(0)
    for q in rng.dirichlet(np.ones(3), 500):
        assert obj(t["GP3"]) <= obj(V @ q) + 1e-12


def test_witnesses_are_pinned():
    assert set(lab.WITNESSES) == {"thm9", "thm9ii", "thm11iii", "thm10u"}
    for name, seed, m, n in lab.WITNESSES.values():
        assert name == "power:3"


FAST = ["prop1", "prop2i", "prop2ii", "prop2iii", "prop2iv", "prop3", "prop4", "prop5i", "prop5ii",
        "prop5iii", "prop5iv", "prop6", "prop7", "thm9", "thm9ii", "thm10u", "thm11ii", "thm12"]


@pytest.mark.parametrize("claim", FAST)
def test_claims_certify(claim):
    r = lab.certify([claim]).results[0]
    assert r.passed, r
    assert r.cases > 0


def test_certify_seed_independent_for_thm8():
    assert lab.certify(["thm8"], seed=7).passed


def test_report_json():
    rep = lab.certify(["prop2ii", "prop4"])
    doc = json.loads(rep.to_json())
    assert [c["claim"] for c in doc["claims"]] == ["prop2ii", "prop4"]
    assert doc["passed"] is True
    assert set(doc["claims"][0]) >= {"claim", "statement", "tolerance", "gap", "passed"}


def test_unknown_claim():
    with pytest.raises(KeyError):
        lab.certify(["nope"])
