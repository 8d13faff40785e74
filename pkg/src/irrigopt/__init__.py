"""Bi-objective irrigation water allocation: net benefit versus environmental flow deficiency."""
from .datasets import load_bundled, representative_scenario, toy_kinked_scenario, toy_linear_scenario
from .evaluation import AllocationPlan, ObjectivePair, WaterBalance, derive_water_balance, efd, evaluate, net_benefit
from .formats import export_front, export_plan, load_scenario, read_front
from .ga import GaConfig, Individual, NoFeasibleSolutionError, nondominated_sort, run_ga
from .lp import LinearProgram, LpSolution, Status, brute_force_vertex_oracle, solve_lp
from .models import (WeightPair, build_model1, build_model2, build_subproblem, solve_model1,
                     solve_model2)
from .pareto import (FrontResult, ParetoPoint, dominates, filter_nondominated, generate_weights,
                     hypervolume, run_front)
from .scenario import (CoefficientMatrix, CropSpec, MonthSpec, Scenario, ScenarioValidationError,
                       SystemLimits, crop_water_demand, validate_scenario)

__version__ = "0.1.0"

__all__ = [
    "load_bundled",
    "representative_scenario",
    "toy_kinked_scenario",
    "toy_linear_scenario",
    "AllocationPlan",
    "ObjectivePair",
    "WaterBalance",
    "derive_water_balance",
    "efd",
    "evaluate",
    "net_benefit",
    "export_front",
    "export_plan",
    "load_scenario",
    "read_front",
    "GaConfig",
    "Individual",
    "NoFeasibleSolutionError",
    "nondominated_sort",
    "run_ga",
    "LinearProgram",
    "LpSolution",
    "Status",
    "brute_force_vertex_oracle",
    "solve_lp",
    "WeightPair",
    "build_model1",
    "build_model2",
    "build_subproblem",
    "solve_model1",
    "solve_model2",
    "FrontResult",
    "ParetoPoint",
    "dominates",
    "filter_nondominated",
    "generate_weights",
    "hypervolume",
    "run_front",
    "CoefficientMatrix",
    "CropSpec",
    "MonthSpec",
    "Scenario",
    "ScenarioValidationError",
    "SystemLimits",
    "crop_water_demand",
    "validate_scenario",
]
