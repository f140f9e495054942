import math

import numpy as np
import pytest

from strengthvote.metric_core import line_instance, social_cost
from strengthvote.rules import SQRT2, bound_value, make_rule, rule4_delta
from strengthvote.search_oracle import (SearchConfig, adversarial_search,
                                        brute_force_best, check_condition1,
                                        check_lowerbounds, optimize_thresholds,
                                        random_instance, verify_suite)
from strengthvote.tallies import ThresholdScheme


def test_brute_force_best():
    inst = line_instance({"a": 0.0, "b": 1.0, "c": 2.0, "v1": 0.6},
                         ("v1",), ("a", "b", "c"))
    assert brute_force_best(inst) == ("b", pytest.approx(0.4))
    tied = line_instance({"a": 0.0, "b": 1.0, "v1": 0.5}, ("v1",), ("a", "b"))
    assert brute_force_best(tied)[0] == "a"


def test_random_instance_is_seeded():
    a = random_instance(np.random.default_rng(7))
    b = random_instance(np.random.default_rng(7))
    assert a == b
    assert a.coords["P"] == (0.0,) and a.coords["Q"] == (1.0,)
    assert 1 <= len(a.voters) <= 8


def test_random_instance_shapes():
    rng = np.random.default_rng(3)
    multi = random_instance(rng, "euclidean2d", num_candidates=4, extra_point=True)
    assert len(multi.candidates) == 4
    assert "Z" in multi.coords and "Z" not in multi.candidates
    with pytest.raises(ValueError):
        random_instance(rng, "hyperbolic")


def test_adversarial_search_stays_under_the_bound():
    config = SearchConfig(seed=11, grid=80, n_instances=40)
    for rule in (make_rule("rule1", tau=2.0), make_rule("rule3", tau=2.0),
                 make_rule("rule5")):
        inst, delta = adversarial_search(rule, config)
        assert delta <= bound_value(rule, 2) + 1e-9
        # the reported instance really achieves the reported distortion
        from strengthvote.search_oracle import _two_candidate_delta
        _, again = _two_candidate_delta(inst, rule)
        assert again == pytest.approx(delta, abs=1e-12)


def test_adversarial_search_is_sharp_for_plain_majority():
    # tau = 1 admits distortion arbitrarily close to 3; the grid finds it
    inst, delta = adversarial_search(make_rule("rule1", tau=1.0),
                                     SearchConfig(seed=1, grid=200, n_instances=0))
    assert delta >= 0.95 * 3.0


def test_optimize_thresholds_known_optima():
    taus, bound = optimize_thresholds(1)
    assert bound == pytest.approx(2.0, abs=1e-6)
    assert taus[0] == pytest.approx(2.0, abs=1e-4)

    taus, bound = optimize_thresholds(2)
    assert bound == pytest.approx(5.0 / 3.0, abs=1e-6)
    assert taus == pytest.approx((5.0 / 3.0, 3.0), abs=1e-3)

    with pytest.raises(ValueError):
        optimize_thresholds(0)


def test_optimize_thresholds_improves_with_depth():
    bounds = [optimize_thresholds(m)[1] for m in (1, 2, 3, 4)]
    assert all(lo > hi for lo, hi in zip(bounds, bounds[1:]))
    assert all(b > SQRT2 for b in bounds)
    # the returned bound matches the scheme it came from
    taus, bound = optimize_thresholds(3)
    assert rule4_delta(ThresholdScheme(taus)) == pytest.approx(bound, abs=1e-12)


def test_check_lowerbounds_passes():
    result = check_lowerbounds()
    assert result["passed"]
    assert result["failures"] == 0
    assert result["worst_margin"] <= 1e-5


def test_check_condition1_small_run():
    result = check_condition1(seed=5, n=500)
    assert result["passed"] and result["cases"] == 500


def test_verify_suite_shape():
    out = verify_suite("lowerbounds")
    assert out["suite"] == "lowerbounds"
    assert out["passed"] is True
    assert len(out["checks"]) == 1
    assert out["checks"][0]["name"] == "lowerbounds"
    with pytest.raises(ValueError):
        verify_suite("everything")
