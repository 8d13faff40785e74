"""
Scenarios, water balance and the two objectives
================================================

A scenario holds crop economics, monthly hydrology, crop coefficients and
system limits. A plan picks an area per crop and an environmental flow per
month; everything else (allocation, pumping, surface use) follows from it.
"""
import numpy as np

from irrigopt import AllocationPlan, derive_water_balance, evaluate, representative_scenario
from irrigopt.scenario import crop_water_demand

s = representative_scenario()
print(f"{s.n_crops} crops x {s.n_months} months, total area {s.limits.area_total:g} ha")

# Net irrigation need per hectare, K * ET - R, for one crop over the year
boro = s.crop_names.index("Boro rice")
print("Boro rice demand (GL/ha):", np.round([crop_water_demand(s, boro, m) for m in range(12)], 5))

# 2300 ha of every crop and nothing left in the river
plan = AllocationPlan(np.full(s.n_crops, 2300.0), np.zeros(s.n_months))
wb = derive_water_balance(s, plan)
print("monthly demand (GL):", np.round(wb.demand_per_month, 1))
print("pumping (GL):       ", np.round(wb.pumping_per_month, 1))
obj = evaluate(s, plan)
print(f"net benefit {obj.net_benefit:,.0f}, flow deficiency {obj.efd:g} GL")

# Meeting every monthly target removes the deficiency at the price of surface water
plan = AllocationPlan(plan.area_per_crop, s.target_env_flow)
obj = evaluate(s, plan)
print(f"with flows at target: net benefit {obj.net_benefit:,.0f}, deficiency {obj.efd:g} GL")
wb = derive_water_balance(s, plan)
print(f"...but it needs {wb.total_pumping:.0f} GL of pumping against a {s.limits.pump_cap_total:g} GL cap")
