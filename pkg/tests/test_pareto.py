import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from irrigopt.evaluation import ObjectivePair, evaluate
from irrigopt.models import build_subproblem, compute_shift, solve_model, solve_model1, solve_model2
from irrigopt.pareto import (EndpointError, dominates, filter_nondominated, front_violations,
                             generate_weights, hausdorff, hypervolume, nondominated_reference, run_front)
from irrigopt.scenario import CoefficientMatrix, CropSpec, MonthSpec, Scenario, SystemLimits


def test_weight_grid():
    assert [(w.w1, w.w2) for w in generate_weights(3)] == [(0.25, 0.75), (0.5, 0.5), (0.75, 0.25)]
    assert [(w.w1, w.w2) for w in generate_weights(1)] == [(0.5, 0.5)]
    ws = generate_weights(500)
    assert len(ws) == 500 and min(w.w1 for w in ws) == 1 / 501
    assert all(0 < w.w1 < 1 for w in ws)
    with pytest.raises(ValueError):
        generate_weights(0)


def test_dominance_examples():
    assert dominates((100, 5), (90, 7))
    assert not dominates((100, 5), (100, 5))
    assert not dominates((100, 5), (110, 3))
    assert dominates(ObjectivePair(100, 5), ObjectivePair(100, 6))


def test_filter_examples():
    assert filter_nondominated([(100, 5), (90, 7), (110, 3)]) == [(110, 3)]
    assert filter_nondominated([(1, 1)] * 5) == [(1, 1)]
    assert filter_nondominated([]) == []


def test_filter_keeps_first_duplicate():
    pts = [("a", 1.0, 2.0), ("b", 1.0, 2.0), ("c", 0.0, 0.0)]
    out = filter_nondominated([p[1:] for p in pts])
    assert out == [(1.0, 2.0), (0.0, 0.0)]


@pytest.mark.parametrize("seed", range(5))
def test_filter_matches_quadratic_reference(seed):
    rng = np.random.default_rng(seed)
    # integer grid forces many ties and duplicates
    pts = [tuple(map(float, p)) for p in rng.integers(0, 40, size=(1000, 2))]
    assert filter_nondominated(pts) == nondominated_reference(pts)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), max_size=40))
def test_filter_properties(pts):
    out = filter_nondominated(pts)
    assert out == nondominated_reference(pts)
    for p in pts:
        assert not any(dominates(p, q) for q in out)
    assert front_violations(out) == []


def test_hypervolume_examples():
    assert hypervolume([(1, 0)], (0, 1)) == 1
    assert hypervolume([(1, 0.5), (0.5, 0)], (0, 1)) == 0.75
    assert hypervolume([], (0, 1)) == 0
    with pytest.raises(ValueError):
        hypervolume([(1, 2)], (0, 1))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 10), st.floats(0, 10)), min_size=1, max_size=20))
def test_hypervolume_matches_grid_count(pts):
    # dominated area on a fine grid, cell centres
    h = 0.05
    c = np.arange(h / 2, 10, h)
    nb, e = np.meshgrid(c, c, indexing="ij")
    covered = np.zeros_like(nb, dtype=bool)
    for a, b in pts:
        covered |= (nb <= a) & (e >= b)
    approx = covered.sum() * h * h
    assert hypervolume(pts, (0, 10)) == pytest.approx(approx, abs=2 * 10 * h * len(pts) + 1e-9)


def test_hausdorff():
    assert hausdorff([[0, 0]], [[0, 0]]) == 0
    assert hausdorff([[0, 0], [1, 1]], [[0, 0]]) == 1
    assert hausdorff([[0, 0]], [[3, -4]]) == 4


def test_front_violations_names_rows():
    probs = front_violations([(1, 1), (2, 0), (0, 5)], labels=["a", "b", "c"])
    assert any("row a" in p and "row b" in p for p in probs)


def test_single_weight_front(toy, kinked, rep):
    for s in (toy, kinked, rep):
        fr = run_front(s, 1)
        assert 1 <= len(fr) <= 4
        assert front_violations(fr.pairs()) == []


@pytest.mark.parametrize("name", ["toy", "kinked", "rep"])
def test_front_invariants(name, request):
    s = request.getfixturevalue(name)
    fr = run_front(s, 40)
    pairs = fr.pairs()
    assert front_violations(pairs) == []
    nb_star, efd_star = solve_model1(s).objective_value, solve_model2(s).objective_value
    assert pairs[:, 0].max() == pytest.approx(nb_star, rel=1e-6)
    assert abs(pairs[:, 1].min() - efd_star) <= 1e-6
    for p in fr.points:
        obj = evaluate(s, p.plan)
        assert obj.net_benefit == pytest.approx(p.net_benefit, rel=1e-6)
        assert obj.efd == pytest.approx(p.efd, abs=1e-6)
    # no recorded point is dominated by any raw subproblem answer
    shift = compute_shift(s)
    raw = [solve_model(s, build_subproblem(s, w, k, shift)).objectives
           for w in generate_weights(40) for k in (1, 2)]
    for p in fr.points:
        assert not any(dominates(q, p) for q in raw)
    assert fr.stats.subproblems_solved == 80 and fr.stats.solver_failures == 0


def test_toy_front_on_known_segment(toy):
    fr = run_front(toy, 25)
    for nb, e in fr.pairs():
        assert nb == pytest.approx(700 * e, abs=1e-6)
        assert -1e-9 <= e <= 100 + 1e-9


def test_hypervolume_grows_with_nested_grids(kinked, rep):
    for s in (kinked, rep):
        ref = None
        prev = -np.inf
        for n in (1, 3, 7, 15, 31, 63):
            pairs = run_front(s, n).pairs()
            if ref is None:
                ref = (pairs[:, 0].min(), s.target_env_flow.sum())
            hv = hypervolume(pairs, ref)
            assert hv >= prev - 1e-9 * abs(prev)
            prev = hv


def test_threads_do_not_change_the_front(kinked):
    a = run_front(kinked, 30, threads=1)
    b = run_front(kinked, 30, threads=4)
    assert np.array_equal(a.pairs(), b.pairs())


def test_endpoint_failure_is_diagnosed():
    # minimum areas need far more water than inflow plus the pump cap provide
    s = Scenario([CropSpec("a", 10, 1)], [MonthSpec(1.0, 0, 5, 1)], CoefficientMatrix([[1.0]]),
                 SystemLimits(1, 100, 50, 1, 2, 100, 10))
    with pytest.raises(EndpointError):
        run_front(s, 3)


@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 80))
def test_toy_front_stays_on_segment_for_any_grid(toy, n):
    pairs = run_front(toy, n).pairs()
    assert np.allclose(pairs[:, 0], 700 * pairs[:, 1], atol=1e-6)
    assert pairs[:, 1].min() == 0 and pairs[:, 1].max() == 100
    assert front_violations(pairs) == []
