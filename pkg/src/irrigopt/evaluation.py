"""Water balance and the two objectives for a candidate allocation plan.

Monthly balance for a plan ``(X, E)``::

    demand_m     = sum_c (K[c,m] * ET[m] - R[m]) * X[c]
    allocation_m = inflow_m - E[m]
    pumping_m    = max(demand_m - allocation_m, 0)
    surface_m    = min(max(demand_m, 0), allocation_m)

Net benefit charges the surface-water rate only on water actually used and
the pumping rate on the pumped shortfall.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .scenario import Scenario


class PlanDimensionError(ValueError):
    pass


class InfeasibleAllocationError(ValueError):
    """Environmental flow larger than the month's inflow (negative allocation)."""


@dataclass(frozen=True)
class AllocationPlan:
    area_per_crop: np.ndarray
    env_flow_per_month: np.ndarray

    def __post_init__(self) -> None:
        x = np.array(self.area_per_crop, dtype=float).ravel()
        e = np.array(self.env_flow_per_month, dtype=float).ravel()
        if np.any(x < 0) or np.any(e < 0):
            raise ValueError("plan entries must be nonnegative")
        x.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "area_per_crop", x)
        object.__setattr__(self, "env_flow_per_month", e)

    @classmethod
    def zeros(cls, s: Scenario) -> "AllocationPlan":
        return cls(np.zeros(s.n_crops), np.zeros(s.n_months))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AllocationPlan):
            return NotImplemented
        return (np.array_equal(self.area_per_crop, other.area_per_crop)
                and np.array_equal(self.env_flow_per_month, other.env_flow_per_month))

    def __hash__(self) -> int:
        return hash((self.area_per_crop.tobytes(), self.env_flow_per_month.tobytes()))


@dataclass(frozen=True)
class WaterBalance:
    demand_per_month: np.ndarray
    allocation_per_month: np.ndarray
    pumping_per_month: np.ndarray
    surface_used_per_month: np.ndarray

    @property
    def total_pumping(self) -> float:
        return float(self.pumping_per_month.sum())


@dataclass(frozen=True)
class ObjectivePair:
    net_benefit: float
    efd: float

    def __iter__(self):
        yield self.net_benefit
        yield self.efd


def _check_dims(s: Scenario, p: AllocationPlan) -> None:
    if p.area_per_crop.shape != (s.n_crops,):
        raise PlanDimensionError(
            f"plan has {p.area_per_crop.size} crop areas, scenario has {s.n_crops} crops")
    if p.env_flow_per_month.shape != (s.n_months,):
        raise PlanDimensionError(
            f"plan has {p.env_flow_per_month.size} monthly flows, scenario has {s.n_months} months")


def derive_water_balance(s: Scenario, p: AllocationPlan, tol: float = 1e-9) -> WaterBalance:
    _check_dims(s, p)
    inflow = s.inflow
    over = p.env_flow_per_month - inflow
    if np.any(over > tol * np.maximum(1.0, inflow)):
        bad = [s.month_labels[j] for j in np.flatnonzero(over > tol * np.maximum(1.0, inflow))]
        raise InfeasibleAllocationError(f"environmental flow exceeds inflow in {', '.join(bad)}")
    demand = p.area_per_crop @ s.demand_matrix()
    allocation = np.maximum(inflow - p.env_flow_per_month, 0.0)
    pumping = np.maximum(demand - allocation, 0.0)
    surface = np.minimum(np.maximum(demand, 0.0), allocation)
    return WaterBalance(demand, allocation, pumping, surface)


def net_benefit(s: Scenario, p: AllocationPlan) -> float:
    wb = derive_water_balance(s, p)
    lim = s.limits
    x = p.area_per_crop
    return float(s.revenue @ x
                 - lim.surface_cost_per_gl * wb.surface_used_per_month.sum()
                 - lim.pump_cost_per_gl * wb.pumping_per_month.sum()
                 - s.variable_cost @ x)


def efd(s: Scenario, p: AllocationPlan) -> float:
    """Environmental flow deficiency: total monthly shortfall below target (GL)."""
    _check_dims(s, p)
    return float(np.maximum(s.target_env_flow - p.env_flow_per_month, 0.0).sum())


def evaluate(s: Scenario, p: AllocationPlan) -> ObjectivePair:
    return ObjectivePair(net_benefit(s, p), efd(s, p))


def evaluate_batch(s: Scenario, areas: np.ndarray, flows: np.ndarray) -> dict[str, np.ndarray]:
    """Vectorised objectives and limit excesses for many plans at once.

    ``areas`` is (n, crops) and ``flows`` is (n, months). Flows above the
    inflow are not an error here; the excess is reported in
    ``env_over_inflow`` and the allocation is clamped at zero.
    """
    areas = np.atleast_2d(np.asarray(areas, dtype=float))
    flows = np.atleast_2d(np.asarray(flows, dtype=float))
    lim = s.limits
    inflow = s.inflow
    demand = areas @ s.demand_matrix()
    allocation = np.maximum(inflow[None, :] - flows, 0.0)
    pumping = np.maximum(demand - allocation, 0.0)
    surface = np.minimum(np.maximum(demand, 0.0), allocation)
    nb = (areas @ (s.revenue - s.variable_cost)
          - lim.surface_cost_per_gl * surface.sum(axis=1)
          - lim.pump_cost_per_gl * pumping.sum(axis=1))
    deficiency = np.maximum(s.target_env_flow[None, :] - flows, 0.0).sum(axis=1)
    return {
        "net_benefit": nb,
        "efd": deficiency,
        "pumping_total": pumping.sum(axis=1),
        "area_total": areas.sum(axis=1),
        "env_over_inflow": np.maximum(flows - inflow[None, :], 0.0).sum(axis=1),
    }


def constraint_violation(s: Scenario, areas: np.ndarray, flows: np.ndarray) -> np.ndarray:
    """Sum of normalised excesses over the feasible-set constraints, one value per plan.

    Covers the pumping cap, total area, flows above inflow and the per-variable
    boxes. Zero means feasible.
    """
    areas = np.atleast_2d(np.asarray(areas, dtype=float))
    flows = np.atleast_2d(np.asarray(flows, dtype=float))
    lim = s.limits
    ev = evaluate_batch(s, areas, flows)
    scale_area = max(lim.area_total, 1.0)
    v = np.maximum(ev["pumping_total"] - lim.pump_cap_total, 0.0) / max(lim.pump_cap_total, 1.0)
    v = v + np.maximum(ev["area_total"] - lim.area_total, 0.0) / scale_area
    v = v + ev["env_over_inflow"] / max(float(s.inflow.max(initial=0.0)), 1.0)
    v = v + np.maximum(lim.area_min_per_crop - areas, 0.0).sum(axis=1) / scale_area
    v = v + np.maximum(areas - lim.area_upper_per_crop, 0.0).sum(axis=1) / scale_area
    v = v + np.maximum(flows - lim.env_flow_upper_per_month, 0.0).sum(axis=1) / max(
        lim.env_flow_upper_per_month, 1.0)
    v = v + np.maximum(-flows, 0.0).sum(axis=1) / max(lim.env_flow_upper_per_month, 1.0)
    return v


def plan_is_feasible(s: Scenario, p: AllocationPlan, tol: float = 1e-6) -> bool:
    _check_dims(s, p)
    return bool(constraint_violation(s, p.area_per_crop, p.env_flow_per_month)[0] <= tol)


def plan_from_vectors(areas: Sequence[float], flows: Sequence[float]) -> AllocationPlan:
    return AllocationPlan(np.clip(np.asarray(areas, dtype=float), 0.0, None),
                          np.clip(np.asarray(flows, dtype=float), 0.0, None))
