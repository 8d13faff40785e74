"""
The single-objective models
===========================

Model 1 maximises net benefit, optionally forcing every monthly flow up to
its target; Model 2 minimises the flow deficiency. Each prints as a table of
crop areas and monthly flows.
"""
from irrigopt import representative_scenario, solve_model1, solve_model2
from irrigopt.formats import plan_to_csv

s = representative_scenario()

for title, sol in (("Model 1", solve_model1(s)),
                   ("Model 1, flows at target", solve_model1(s, with_target_constraint=True)),
                   ("Model 2", solve_model2(s))):
    print(f"== {title}: net benefit {sol.objectives.net_benefit:,.2f}, "
          f"deficiency {sol.objectives.efd:g} GL, {sol.lp_solution.iterations} pivots")
    print(plan_to_csv(sol.plan, s))

# Model 2 has many optimal plans (any flow at or above target will do);
# the simplex pivot rule picks one of them deterministically.
