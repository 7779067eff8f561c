import json

import numpy as np
import pytest

from ttpsolve.instance_io import Item, make_instance
from ttpsolve.pwt_dp import (
    _dp_columns, best_reward, brute_force_front, dp_front, evaluate,
    merge_fronts,
)
from ttpsolve.tours import make_tour, reverse_tour

from conftest import random_instance, random_tour

FWD = [1, 2, 3, 4]
REV = [1, 4, 3, 2]

# frozen from the brute-force oracle (all 2^3 packings, Pareto-filtered)
FWD_POINTS = [(-14.0, 0), (8.75, 2), (16.776786, 4)]
REV_POINTS = [(-14.0, 0), (5.375, 2), (7.782609, 3), (19.348214, 4)]


def assert_points(front, expected):
    assert front.weights.tolist() == [w for _, w in expected]
    assert front.rewards == pytest.approx([r for r, _ in expected], abs=1e-6)


def test_evaluate_empty_packing(tiny4):
    r, w = evaluate(tiny4, make_tour(FWD), np.zeros(3, bool))
    assert (r, w) == (-14.0, 0)


def test_evaluate_single_item(tiny4):
    r, w = evaluate(tiny4, make_tour(FWD), np.array([False, False, True]))
    assert w == 2
    assert r == pytest.approx(25 - (10 + 4 / 0.64))


def test_evaluate_two_items(tiny4):
    r, w = evaluate(tiny4, make_tour(FWD), np.array([True, False, True]))
    assert w == 4
    assert r == pytest.approx(45 - (3 + 7 / 0.64 + 4 / 0.28), abs=1e-6)


def test_evaluate_infeasible_still_evaluates(tiny4):
    r, w = evaluate(tiny4, make_tour(FWD), np.ones(3, bool))
    assert w == 7 and np.isfinite(r)


def test_dp_front_forward(tiny4):
    assert_points(dp_front(tiny4, make_tour(FWD)), FWD_POINTS)


def test_dp_front_reversed(tiny4):
    assert_points(dp_front(tiny4, make_tour(REV)), REV_POINTS)


def test_brute_force_matches_dp_on_tiny4(tiny4):
    for t in (FWD, REV):
        f, g = dp_front(tiny4, make_tour(t)), brute_force_front(tiny4, make_tour(t))
        assert np.array_equal(f.weights, g.weights)
        assert f.rewards == pytest.approx(g.rewards.tolist(), rel=1e-9)


def test_best_reward(tiny4):
    assert best_reward(dp_front(tiny4, make_tour(FWD))) == pytest.approx(16.776786, abs=1e-6)
    assert best_reward(dp_front(tiny4, make_tour(REV))) == pytest.approx(19.348214, abs=1e-6)


def test_no_items():
    inst = make_instance("bare", [(0, 0), (0, 3), (4, 3), (4, 0)], [], 10, 0.1, 1.0, 2.0)
    f = dp_front(inst, make_tour(FWD))
    assert f.points == [(-28.0, 0)]
    assert brute_force_front(inst, make_tour(FWD)).points == [(-28.0, 0)]
    assert best_reward(f) == -28.0


def test_zero_capacity(tiny4):
    inst = make_instance("c0", tiny4.coords, list(tiny4.items), 0, 0.1, 1.0, 1.0)
    for fn in (dp_front, brute_force_front):
        f = fn(inst, make_tour(FWD))
        assert f.weights.tolist() == [0]
        assert f.rewards[0] == pytest.approx(-14.0)


def test_brute_force_refuses_large_m():
    items = [Item(1, 1, 2) for _ in range(25)]
    inst = make_instance("big", [(0, 0), (1, 0)], items, 30, 0.1, 1.0, 1.0)
    with pytest.raises(ValueError):
        brute_force_front(inst, make_tour([1, 2]))


def test_oracle_equivalence_randomized():
    rng = np.random.default_rng(123)
    for _ in range(150):
        inst = random_instance(rng)
        t = random_tour(rng, inst.n)
        f, g = dp_front(inst, t), brute_force_front(inst, t)
        assert np.array_equal(f.weights, g.weights)
        np.testing.assert_allclose(f.rewards, g.rewards, rtol=1e-9, atol=1e-12)


def test_staircase_property():
    rng = np.random.default_rng(7)
    for _ in range(50):
        inst = random_instance(rng)
        f = dp_front(inst, random_tour(rng, inst.n))
        assert np.all(np.diff(f.weights) > 0)
        assert np.all(np.diff(f.rewards) > 0)
        assert f.weights[0] == 0


def test_plan_consistency():
    rng = np.random.default_rng(99)
    for _ in range(40):
        inst = random_instance(rng)
        t = random_tour(rng, inst.n)
        f = dp_front(inst, t)
        plans = f.plans
        for i in range(len(f.rewards)):
            r, w = evaluate(inst, t, plans[i])
            assert w == f.weights[i]
            assert r == pytest.approx(f.rewards[i], rel=1e-9, abs=1e-12)


def test_column_monotonicity(tiny4):
    rng = np.random.default_rng(31)
    for _ in range(30):
        inst = random_instance(rng)
        t = random_tour(rng, inst.n)
        columns, _ = _dp_columns(inst, t)
        for w, b, _, _ in columns:
            assert np.all(np.diff(w) > 0)
            assert np.all(np.diff(b) > 0)
            assert np.all(w <= inst.capacity)


def test_dominated_cell_elimination_fires(tiny4):
    # the single-item packing at node 2 lands on (−0.1875, 2), which the
    # node-4 packing (8.75, 2) dominates; the front must not contain it
    r, w = evaluate(tiny4, make_tour(FWD), np.array([True, False, False]))
    assert w == 2 and r == pytest.approx(-0.1875)
    f = dp_front(tiny4, make_tour(FWD))
    at2 = f.rewards[f.weights.tolist().index(2)]
    assert at2 == pytest.approx(8.75)


def test_front_json_roundtrip(tiny4):
    f = dp_front(tiny4, make_tour(FWD))
    doc = json.loads(f.to_json())
    assert doc["tour"] == FWD
    assert doc["points"][1] == [8.75, 2]
    assert doc["plans"][0] == []
    assert doc["plans"][-1] == [1, 3]


def test_merge_fronts(tiny4):
    a = dp_front(tiny4, make_tour(FWD))
    b = dp_front(tiny4, make_tour(REV))
    m = merge_fronts(a, b)
    assert m.weights.tolist() == [0, 2, 4]
    assert m.rewards == pytest.approx([-14.0, 8.75, 19.348214], abs=1e-6)


def test_determinism(tiny4):
    rng = np.random.default_rng(5)
    inst = random_instance(rng)
    t = random_tour(rng, inst.n)
    f, g = dp_front(inst, t), dp_front(inst, t)
    assert np.array_equal(f.rewards, g.rewards)
    assert np.array_equal(f.weights, g.weights)
    assert np.array_equal(f.plans_packed, g.plans_packed)
