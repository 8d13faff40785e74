import numpy as np
import pytest

from irrigopt.lp import (EQ, GE, LE, LinearProgram, NumericalError, SolverStallError, Status,
                         brute_force_vertex_oracle, lp_to_text, solve_lp)

INF = np.inf


def box_lp():
    return LinearProgram([1, 1], [[1, 0], [0, 1]], [LE, LE], [1, 2], [0, 0], [INF, INF], sense="max")


def test_box_maximum():
    sol = solve_lp(box_lp())
    assert sol.status is Status.OPTIMAL
    assert np.allclose(sol.values, [1, 2]) and sol.objective_value == pytest.approx(3)


def test_oracle_box_maximum():
    sol = brute_force_vertex_oracle(box_lp())
    assert np.allclose(sol.values, [1, 2]) and sol.objective_value == pytest.approx(3)


def test_contradictory_rows_are_infeasible():
    lp = LinearProgram([1], [[1], [1]], [GE, LE], [3, 1], [0], [INF])
    assert solve_lp(lp).status is Status.INFEASIBLE
    assert brute_force_vertex_oracle(lp).status is Status.INFEASIBLE


def test_unbounded_is_a_status():
    lp = LinearProgram([1], np.zeros((0, 1)), [], [], [0], [INF], sense="max")
    assert solve_lp(lp).status is Status.UNBOUNDED


def test_bad_bounds_rejected():
    with pytest.raises(ValueError):
        LinearProgram([1], [[1]], [LE], [1], [2], [1])
    with pytest.raises(ValueError):
        LinearProgram([1], [[1]], [LE], [1], [-INF], [1])


def test_degenerate_redundant_constraint_matches_oracle():
    # x + y <= 2 stated twice plus x <= 1 through the same vertex
    lp = LinearProgram([2, 1], [[1, 1], [1, 1], [1, 0], [2, 2]], [LE, LE, LE, LE], [2, 2, 1, 4],
                       [0, 0], [INF, INF], sense="max")
    a, b = solve_lp(lp), brute_force_vertex_oracle(lp)
    assert a.objective_value == pytest.approx(b.objective_value, abs=1e-12) == 3


def test_beale_lp_terminates():
    c = [-0.75, 20, -0.5, 6]
    A = [[0.25, -8, -1, 9], [0.5, -12, -0.5, 3], [0, 0, 1, 0]]
    lp = LinearProgram(c, A, [LE, LE, LE], [0, 0, 1], np.zeros(4), np.full(4, INF))
    for bland_after in (None, 0):
        sol = solve_lp(lp, bland_after=bland_after)
        assert sol.optimal and sol.objective_value == pytest.approx(-1.25, abs=1e-12)
        assert sol.iterations <= 50 * (4 + 3)


def test_iteration_cap_is_a_fault():
    with pytest.raises(SolverStallError):
        solve_lp(box_lp(), max_iterations=1)


def test_random_lps_agree_with_oracle(lp_factory):
    rng = np.random.default_rng(99)
    feasible = 0
    for _ in range(300):
        lp = lp_factory(rng)
        a, b = solve_lp(lp), brute_force_vertex_oracle(lp)
        assert a.status == b.status
        if a.optimal:
            feasible += 1
            assert abs(a.objective_value - b.objective_value) <= 1e-8
            assert lp.max_violation(a.values) <= 1e-9 * (1 + np.abs(lp.rhs).max())
    assert feasible > 100


def test_badly_scaled_lp_matches_oracle():
    A = [[1e-3, 2e-3, 0], [1e5, 0, 3e4], [0, 1, 1]]
    lp = LinearProgram([1e5, -2.6e4, 7], A, [LE, LE, GE], [5, 2e8, 1], [0, 0, 0],
                       [5000, 300, 1000], sense="max")
    a, b = solve_lp(lp), brute_force_vertex_oracle(lp)
    assert a.objective_value == pytest.approx(b.objective_value, rel=1e-12)


def test_solutions_are_bitwise_deterministic(lp_factory, rep):
    from irrigopt.models import build_model1
    rng = np.random.default_rng(4)
    lps = [lp_factory(rng) for _ in range(20)] + [build_model1(rep)[0]]
    for lp in lps:
        a, b = solve_lp(lp), solve_lp(lp)
        assert a.status == b.status
        assert np.array_equal(a.values, b.values, equal_nan=True)


def test_equality_rows():
    lp = LinearProgram([1, 2], [[1, 1]], [EQ], [4], [0, 0], [3, INF])
    sol = solve_lp(lp)
    assert np.allclose(sol.values, [3, 1]) and sol.objective_value == pytest.approx(5)


def test_oracle_size_cap():
    lp = LinearProgram(np.ones(9), np.ones((1, 9)), [LE], [1], np.zeros(9), np.ones(9))
    with pytest.raises(ValueError):
        brute_force_vertex_oracle(lp)


def test_text_dump_names_every_variable():
    text = lp_to_text(box_lp())
    assert "x0" in text and "x1" in text and "max" in text


def test_numerical_error_type_exists():
    assert issubclass(NumericalError, RuntimeError)
