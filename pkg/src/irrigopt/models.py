"""Linear programs for the irrigation models.

Variable layout (in this order): crop areas ``X``, environmental flows
``E``, surface water used ``U``, pumped water ``P`` and, when the model
needs the deficiency, shortfall slacks ``D``. Shared rows::

    U_m + P_m - sum_c d[c,m] X_c >= 0     demand met (d may be negative)
    U_m + E_m <= inflow_m                 surface use within allocation
    sum_m P_m <= pump cap
    sum_c X_c <= total area
    D_m + E_m >= target_m                 (only when D is present)

Net benefit in the LP is ``(P_c - Vcost_c) . X - C_w sum U - C_p sum P``.
With ``C_p > C_w`` and positive costs the optimum never over-pumps, so the
LP value equals the clamped water balance of :mod:`irrigopt.evaluation`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .evaluation import AllocationPlan, ObjectivePair, evaluate
from .lp import GE, LE, LinearProgram, LpSolution, Status, solve_lp
from .scenario import Scenario


class ModelInfeasibleError(RuntimeError):
    pass


@dataclass(frozen=True)
class ModelVariables:
    n_crops: int
    n_months: int
    has_shortfall: bool

    @property
    def areas(self) -> slice:
        return slice(0, self.n_crops)

    @property
    def flows(self) -> slice:
        return slice(self.n_crops, self.n_crops + self.n_months)

    @property
    def surface(self) -> slice:
        s = self.n_crops + self.n_months
        return slice(s, s + self.n_months)

    @property
    def pumping(self) -> slice:
        s = self.n_crops + 2 * self.n_months
        return slice(s, s + self.n_months)

    @property
    def shortfall(self) -> slice:
        s = self.n_crops + 3 * self.n_months
        return slice(s, s + (self.n_months if self.has_shortfall else 0))

    @property
    def n_vars(self) -> int:
        return self.n_crops + (4 if self.has_shortfall else 3) * self.n_months

    def ranges(self) -> dict[str, slice]:
        out = {"X": self.areas, "E": self.flows, "U": self.surface, "P": self.pumping}
        if self.has_shortfall:
            out["D"] = self.shortfall
        return out

    def names(self, s: Scenario) -> list[str]:
        out = [f"X[{c}]" for c in s.crop_names]
        for role in ("E", "U", "P") + (("D",) if self.has_shortfall else ()):
            out += [f"{role}[{lab}]" for lab in s.month_labels]
        return out

    def plan(self, s: Scenario, x: np.ndarray) -> AllocationPlan:
        """Decision part of an LP point, clipped onto the variable boxes.

        Values within 1e-9 (relative) of a bound are snapped onto it, so
        roundoff in basic variables does not leak into reported plans.
        """
        lim = s.limits
        areas = _snap(x[self.areas], [0.0, lim.area_min_per_crop, lim.area_upper_per_crop])
        flows = _snap(x[self.flows], [np.zeros(self.n_months), s.inflow, s.target_env_flow,
                                      np.full(self.n_months, lim.env_flow_upper_per_month)])
        return AllocationPlan(np.clip(areas, 0.0, None), np.clip(flows, 0.0, s.inflow))


def _snap(v: np.ndarray, anchors) -> np.ndarray:
    out = np.array(v, dtype=float)
    for a in anchors:
        a = np.broadcast_to(np.asarray(a, dtype=float), out.shape)
        close = np.abs(out - a) <= 1e-9 * np.maximum(1.0, np.abs(a))
        out[close] = a[close]
    return out


@dataclass(frozen=True)
class WeightPair:
    w1: float
    w2: float

    def __post_init__(self) -> None:
        if not (self.w1 > 0 and self.w2 > 0):
            raise ValueError(f"weights must be positive, got ({self.w1}, {self.w2})")
        if abs(self.w1 + self.w2 - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {self.w1 + self.w2}")


@dataclass(frozen=True)
class ObjectiveShift:
    """Maps the objectives onto ``g1 = (nb_ideal - NB) / nb_scale`` and ``g2 = EFD / efd_scale``."""
    nb_ideal: float
    nb_scale: float
    efd_scale: float

    def shifted(self, obj: ObjectivePair) -> tuple[float, float]:
        return ((self.nb_ideal - obj.net_benefit) / self.nb_scale, obj.efd / self.efd_scale)


def _shared(s: Scenario, layout: ModelVariables, with_target_constraint: bool):
    M = s.n_months
    n = layout.n_vars
    lim = s.limits
    rows, rel, rhs = [], [], []
    d = s.demand_matrix()
    for m in range(M):
        a = np.zeros(n)
        a[layout.areas] = -d[:, m]
        a[layout.surface.start + m] = 1.0
        a[layout.pumping.start + m] = 1.0
        rows.append(a); rel.append(GE); rhs.append(0.0)
    inflow = s.inflow
    for m in range(M):
        a = np.zeros(n)
        a[layout.surface.start + m] = 1.0
        a[layout.flows.start + m] = 1.0
        rows.append(a); rel.append(LE); rhs.append(inflow[m])
    a = np.zeros(n)
    a[layout.pumping] = 1.0
    rows.append(a); rel.append(LE); rhs.append(lim.pump_cap_total)
    a = np.zeros(n)
    a[layout.areas] = 1.0
    rows.append(a); rel.append(LE); rhs.append(lim.area_total)
    target = s.target_env_flow
    if layout.has_shortfall:
        for m in range(M):
            a = np.zeros(n)
            a[layout.shortfall.start + m] = 1.0
            a[layout.flows.start + m] = 1.0
            rows.append(a); rel.append(GE); rhs.append(target[m])
    if with_target_constraint:
        for m in range(M):
            a = np.zeros(n)
            a[layout.flows.start + m] = 1.0
            rows.append(a); rel.append(GE); rhs.append(target[m])

    lower = np.zeros(n)
    upper = np.full(n, np.inf)
    lower[layout.areas] = lim.area_min_per_crop
    upper[layout.areas] = lim.area_upper_per_crop
    upper[layout.flows] = lim.env_flow_upper_per_month
    return rows, rel, rhs, lower, upper


def net_benefit_coefficients(s: Scenario, layout: ModelVariables) -> np.ndarray:
    """Coefficients of the LP's linear net benefit."""
    c = np.zeros(layout.n_vars)
    c[layout.areas] = s.revenue - s.variable_cost
    c[layout.surface] = -s.limits.surface_cost_per_gl
    c[layout.pumping] = -s.limits.pump_cost_per_gl
    return c


def efd_coefficients(layout: ModelVariables) -> np.ndarray:
    c = np.zeros(layout.n_vars)
    c[layout.shortfall] = 1.0
    return c


def build_model1(s: Scenario, with_target_constraint: bool = False,
                 efd_cap: float | None = None) -> tuple[LinearProgram, ModelVariables]:
    """Maximise net benefit over the feasible set.

    ``with_target_constraint`` adds ``E_m >= target_m`` for every month.
    ``efd_cap`` adds shortfall slacks and bounds their sum; it is used to
    pick the best-benefit plan among deficiency-optimal ones.
    """
    layout = ModelVariables(s.n_crops, s.n_months, has_shortfall=efd_cap is not None)
    rows, rel, rhs, lower, upper = _shared(s, layout, with_target_constraint)
    if efd_cap is not None:
        rows.append(efd_coefficients(layout)); rel.append(LE); rhs.append(efd_cap)
    lp = LinearProgram(net_benefit_coefficients(s, layout), np.array(rows), rel, rhs,
                       lower, upper, sense="max", names=layout.names(s))
    return lp, layout


def build_model2(s: Scenario, with_target_constraint: bool = False,
                 nb_floor: float | None = None) -> tuple[LinearProgram, ModelVariables]:
    """Minimise environmental flow deficiency over the feasible set.

    ``nb_floor`` adds ``NB >= nb_floor``; used to pick the least-deficiency
    plan among benefit-optimal ones.
    """
    layout = ModelVariables(s.n_crops, s.n_months, has_shortfall=True)
    rows, rel, rhs, lower, upper = _shared(s, layout, with_target_constraint)
    if nb_floor is not None:
        rows.append(net_benefit_coefficients(s, layout)); rel.append(GE); rhs.append(nb_floor)
    lp = LinearProgram(efd_coefficients(layout), np.array(rows), rel, rhs,
                       lower, upper, sense="min", names=layout.names(s))
    return lp, layout


def build_subproblem(s: Scenario, w: WeightPair, k: Literal[1, 2],
                     shift: ObjectiveShift) -> tuple[LinearProgram, ModelVariables]:
    """Weighted-constraint subproblem.

    ``k == 1``: minimise ``w1 g1`` subject to ``w2 g2 <= w1 g1``.
    ``k == 2``: minimise ``w2 g2`` subject to ``w1 g1 <= w2 g2``.
    """
    if not isinstance(w, WeightPair):
        w = WeightPair(*w)
    if k not in (1, 2):
        raise ValueError(f"k must be 1 or 2, got {k}")
    layout = ModelVariables(s.n_crops, s.n_months, has_shortfall=True)
    rows, rel, rhs, lower, upper = _shared(s, layout, False)
    g1 = -net_benefit_coefficients(s, layout) / shift.nb_scale
    g1_const = shift.nb_ideal / shift.nb_scale
    g2 = efd_coefficients(layout) / shift.efd_scale
    if k == 1:
        objective, offset = w.w1 * g1, w.w1 * g1_const
        rows.append(w.w2 * g2 - w.w1 * g1); rhs.append(w.w1 * g1_const)
    else:
        objective, offset = w.w2 * g2, 0.0
        rows.append(w.w1 * g1 - w.w2 * g2); rhs.append(-w.w1 * g1_const)
    rel.append(LE)
    lp = LinearProgram(objective, np.array(rows), rel, rhs, lower, upper, sense="min",
                       names=layout.names(s), objective_offset=offset)
    return lp, layout


@dataclass(frozen=True)
class ModelSolution:
    lp_solution: LpSolution
    plan: AllocationPlan
    objectives: ObjectivePair

    @property
    def objective_value(self) -> float:
        return self.lp_solution.objective_value


def solve_model(s: Scenario, built: tuple[LinearProgram, ModelVariables],
                tol: float = 1e-9) -> ModelSolution:
    lp, layout = built
    sol = solve_lp(lp, tol=tol)
    if sol.status is not Status.OPTIMAL:
        raise ModelInfeasibleError(f"model LP is {sol.status.value}")
    plan = layout.plan(s, sol.values)
    return ModelSolution(sol, plan, evaluate(s, plan))


def solve_model1(s: Scenario, with_target_constraint: bool = False, tol: float = 1e-9) -> ModelSolution:
    return solve_model(s, build_model1(s, with_target_constraint), tol)


def solve_model2(s: Scenario, with_target_constraint: bool = False, tol: float = 1e-9) -> ModelSolution:
    return solve_model(s, build_model2(s, with_target_constraint), tol)


def compute_shift(s: Scenario, nb_ideal: float | None = None, tol: float = 1e-9) -> ObjectiveShift:
    if nb_ideal is None:
        nb_ideal = solve_model1(s, tol=tol).objective_value
    total_target = float(s.target_env_flow.sum())
    return ObjectiveShift(
        nb_ideal=float(nb_ideal),
        nb_scale=abs(nb_ideal) if abs(nb_ideal) > 0 else 1.0,
        efd_scale=total_target if total_target > 0 else 1.0,
    )
