"""
The simplex core against a brute-force oracle
=============================================

Every model is solved by one dense bounded-variable simplex. Small LPs can
also be solved by enumerating every vertex, which makes a good referee.
"""
import numpy as np

from irrigopt.lp import GE, LE, LinearProgram, brute_force_vertex_oracle, solve_lp

# max x + y with x <= 1, y <= 2
box = LinearProgram([1, 1], [[1, 0], [0, 1]], [LE, LE], [1, 2], [0, 0], [np.inf, np.inf], sense="max")
print("box LP:", solve_lp(box).values, "oracle:", brute_force_vertex_oracle(box).values)

# Beale's example cycles under textbook Dantzig pivoting with naive ties;
# the solver switches to Bland's rule after a bounded number of pivots.
beale = LinearProgram([-0.75, 20, -0.5, 6],
                      [[0.25, -8, -1, 9], [0.5, -12, -0.5, 3], [0, 0, 1, 0]],
                      [LE, LE, LE], [0, 0, 1], np.zeros(4), np.full(4, np.inf))
sol = solve_lp(beale, bland_after=0)
print(f"Beale: {sol.status.value}, objective {sol.objective_value:g} after {sol.iterations} pivots")

# Random small LPs with integer data
rng = np.random.default_rng(0)
gaps = []
for _ in range(200):
    n, m = rng.integers(2, 6), rng.integers(1, 6)
    lp = LinearProgram(rng.integers(-10, 11, n), rng.integers(-10, 11, (m, n)),
                       list(rng.choice([LE, GE], m)), rng.integers(-5, 20, m),
                       np.zeros(n), rng.integers(1, 9, n).astype(float))
    a, b = solve_lp(lp), brute_force_vertex_oracle(lp)
    assert a.status == b.status
    if a.optimal:
        gaps.append(abs(a.objective_value - b.objective_value))
print(f"{len(gaps)} feasible random LPs, largest objective gap {max(gaps):.1e}")
