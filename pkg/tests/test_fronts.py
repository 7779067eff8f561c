import numpy as np
import pytest

from ttpsolve.fronts import (
    LHV, LSC, all_indicators, hypervolume, indicator, pareto_filter, surface,
)
from ttpsolve.pwt_dp import dp_front
from ttpsolve.tours import make_tour

from conftest import random_instance, random_tour


@pytest.fixture(scope="module")
def pair(tiny4):
    fwd = dp_front(tiny4, make_tour([1, 2, 3, 4]))
    rev = dp_front(tiny4, make_tour([1, 4, 3, 2]))
    return fwd, rev


def test_pareto_filter_example():
    pts = [(8.75, 2), (7.782609, 3), (16.776786, 4)]
    assert pareto_filter(pts) == [(8.75, 2), (16.776786, 4)]


def test_pareto_filter_empty():
    assert pareto_filter([]) == []


def test_pareto_filter_duplicates():
    assert pareto_filter([(5, 1), (5, 1)]) == [(5, 1)]


def test_surface_of_pair(pair):
    s = surface(pair)
    assert s.weights.tolist() == [0, 2, 4]
    assert s.rewards == pytest.approx([-14.0, 8.75, 19.348214], abs=1e-6)
    assert s.contributors(0) == {0, 1}
    assert s.contributors(1) == {0}
    assert s.contributors(2) == {1}


def test_surface_single_front(pair):
    fwd, _ = pair
    s = surface([fwd])
    assert np.array_equal(s.weights, fwd.weights)
    assert all(s.contributors(i) == {0} for i in range(len(s.rewards)))


def test_surface_identical_fronts(pair):
    fwd, _ = pair
    s = surface([fwd, fwd])
    assert np.array_equal(s.weights, fwd.weights)
    assert all(s.contributors(i) == {0, 1} for i in range(len(s.rewards)))


def test_hypervolume_examples(pair):
    fwd, _ = pair
    assert hypervolume(fwd.points, 5) == pytest.approx(34.276786, abs=1e-5)
    s = surface(pair)
    assert hypervolume(s, 5) == pytest.approx(36.848214, abs=1e-5)


def test_hypervolume_nonpositive_rewards():
    assert hypervolume([(-3.0, 1), (0.0, 2)], 10) == 0.0


def test_hypervolume_ignores_dominated_insertions():
    pts = [(2.0, 1), (5.0, 4)]
    base = hypervolume(pts, 10)
    assert hypervolume(pareto_filter(pts + [(1.5, 3)]), 10) == pytest.approx(base)


def test_hypervolume_monotone_under_addition():
    rng = np.random.default_rng(3)
    pts = [(2.0, 3), (6.0, 7)]
    for _ in range(50):
        cand = (float(rng.uniform(0.1, 10)), int(rng.integers(0, 10)))
        filtered = pareto_filter(pts + [cand])
        if (cand in filtered and cand[0] > 0 and cand[1] < 10
                and len(filtered) == 3):
            assert hypervolume(filtered, 10) >= hypervolume(pts, 10) - 1e-12


def test_indicator_examples(pair):
    fwd, rev = pair
    s = surface(pair)
    assert indicator(s, fwd, LSC) == pytest.approx(2 / 3)
    assert indicator(s, rev, LSC) == pytest.approx(2 / 3)
    assert indicator(s, fwd, LHV) == pytest.approx(1 - 19.348214 / 36.848214, abs=1e-5)
    assert indicator(s, rev, LHV) == pytest.approx(1 - 26.25 / 36.848214, abs=1e-5)


def test_all_indicators_matches_scalar(pair):
    s = surface(pair)
    for kind in (LSC, LHV):
        vals = all_indicators(s, kind)
        assert vals == pytest.approx([indicator(s, f, kind) for f in pair])


def test_indicator_bounds_and_lsc_sum():
    rng = np.random.default_rng(17)
    for _ in range(25):
        inst = random_instance(rng)
        fronts = [dp_front(inst, random_tour(rng, inst.n)) for _ in range(4)]
        s = surface(fronts)
        for kind in (LSC, LHV):
            vals = all_indicators(s, kind)
            assert np.all(vals >= -1e-12) and np.all(vals <= 1 + 1e-12)
        assert all_indicators(s, LSC).sum() >= 1.0 - 1e-12


def test_full_and_absent_front(pair):
    fwd, _ = pair
    s = surface([fwd])
    assert indicator(s, fwd, LSC) == 1.0
    assert indicator(s, fwd, LHV) == 1.0


def test_noncontributing_front(tiny4, pair):
    fwd, rev = pair
    # a front whose every point is dominated contributes nothing
    import ttpsolve.pwt_dp as dp
    dom = dp.DpFront(tour=rev.tour, rewards=np.array([-20.0, 1.0]),
                     weights=np.array([0, 2], np.int64),
                     plans_packed=np.zeros((2, 1), np.uint8), m=3, capacity=5)
    s = surface([fwd, dom])
    assert indicator(s, 1, LSC) == 0.0
    assert indicator(s, 1, LHV) == 0.0


def test_lhv_zero_volume_fallback():
    import ttpsolve.pwt_dp as dp
    f = dp.DpFront(tour=np.array([1, 2]), rewards=np.array([-5.0]),
                   weights=np.array([0], np.int64),
                   plans_packed=np.zeros((1, 0), np.uint8), m=0, capacity=4)
    s = surface([f])
    assert indicator(s, f, LHV) == 1.0  # falls back to LSC


def test_surface_csv(pair):
    s = surface(pair)
    lines = s.to_csv().strip().splitlines()
    assert lines[0] == "reward,weight,contributor_count"
    assert len(lines) == 4
    assert lines[1].endswith(",0,2")
