"""Weighted-constraint front generation for net benefit versus EFD.

Net benefit is maximised and EFD minimised throughout. The front is built by

1. solving both single-objective models for the endpoints and the shift;
2. laying out ``n`` interior weights ``w1 = i / (n + 1)``;
3. solving both weighted-constraint subproblems for every weight, keeping
   one copy when they agree and dropping the dominated one when they do not;
4. merging the endpoints and filtering what remains.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .evaluation import AllocationPlan, ObjectivePair
from .lp import NumericalError, SolverStallError
from .models import (ModelInfeasibleError, ObjectiveShift, WeightPair, build_model1,
                     build_model2, build_subproblem, compute_shift, solve_model)
from .scenario import Scenario

SUBPROBLEM1, SUBPROBLEM2, ENDPOINT, GENETIC = "subproblem1", "subproblem2", "endpoint", "ga"


class EndpointError(RuntimeError):
    """One of the single-objective endpoint models could not be solved."""


@dataclass(frozen=True)
class ParetoPoint:
    objectives: ObjectivePair
    plan: AllocationPlan | None
    weight: WeightPair | None
    source: str

    @property
    def net_benefit(self) -> float:
        return self.objectives.net_benefit

    @property
    def efd(self) -> float:
        return self.objectives.efd


@dataclass
class FrontStats:
    grid_points: int = 0
    subproblems_solved: int = 0
    wall_time: float = 0.0
    discarded_count: int = 0
    solver_failures: int = 0
    recorded_count: int = 0
    duplicates_merged: int = 0
    extra: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class FrontResult:
    points: tuple[ParetoPoint, ...]
    stats: FrontStats
    method: str = "weighted-constraint"

    def pairs(self) -> np.ndarray:
        """(k, 2) array of ``(net_benefit, efd)`` rows, in front order."""
        return np.array([[p.net_benefit, p.efd] for p in self.points], dtype=float).reshape(-1, 2)

    def __len__(self) -> int:
        return len(self.points)


def generate_weights(n: int) -> list[WeightPair]:
    if n < 1:
        raise ValueError(f"need at least one weight, got n={n}")
    out = []
    for i in range(1, n + 1):
        w1 = i / (n + 1)
        out.append(WeightPair(w1, 1.0 - w1))
    return out


def _pair(p: Any) -> tuple[float, float]:
    p = getattr(p, "objectives", p)   # ParetoPoint, GA individual, ...
    if isinstance(p, ObjectivePair):
        return p.net_benefit, p.efd
    nb, e = p
    return float(nb), float(e)


def dominates(a: Any, b: Any) -> bool:
    """True iff ``a`` is at least as good as ``b`` in both objectives and better in one."""
    anb, aefd = _pair(a)
    bnb, befd = _pair(b)
    return anb >= bnb and aefd <= befd and (anb > bnb or aefd < befd)


def filter_nondominated(points: Sequence[Any]) -> list[Any]:
    """Points not dominated by any other, in input order.

    Points with identical objective pairs collapse onto the first one.
    Sort-and-sweep, O(n log n).
    """
    if not points:
        return []
    pairs = np.array([_pair(p) for p in points], dtype=float)
    order = np.lexsort((np.arange(len(points)), pairs[:, 1], -pairs[:, 0]))
    keep = []
    best_efd = np.inf
    for i in order:
        if pairs[i, 1] < best_efd:
            keep.append(int(i))
            best_efd = pairs[i, 1]
    keep.sort()
    return [points[i] for i in keep]


def nondominated_reference(points: Sequence[Any]) -> list[Any]:
    """Quadratic reference filter, kept for cross-checking :func:`filter_nondominated`."""
    out: list[Any] = []
    seen: list[tuple[float, float]] = []
    for i, p in enumerate(points):
        pi = _pair(p)
        if any(dominates(q, pi) for q in points):
            continue
        if pi in seen:
            continue
        seen.append(pi)
        out.append(p)
    return out


def hypervolume(points: Iterable[Any], reference: Any, clip: bool = False) -> float:
    """Area dominated by ``points`` and bounded by ``reference`` (max NB, min EFD).

    With ``clip`` points that do not dominate the reference are ignored
    instead of rejected.
    """
    pairs = [_pair(p) for p in points]
    rnb, refd = _pair(reference)
    arr = np.array(pairs, dtype=float).reshape(-1, 2)
    outside = (arr[:, 0] < rnb) | (arr[:, 1] > refd)
    if np.any(outside):
        if not clip:
            raise ValueError("reference point must be dominated by every point")
        arr = arr[~outside]
    if not len(arr):
        return 0.0
    arr = arr[np.lexsort((arr[:, 1], -arr[:, 0]))]
    area = 0.0
    best_efd = np.inf
    for k in range(len(arr)):
        best_efd = min(best_efd, arr[k, 1])
        next_nb = arr[k + 1, 0] if k + 1 < len(arr) else rnb
        area += (arr[k, 0] - next_nb) * (refd - best_efd)
    return float(area)


def front_violations(pairs: Sequence[Any], labels: Sequence[Any] | None = None,
                     noun: str = "row") -> list[str]:
    """Every pairwise dominance and staircase problem in a front, exhaustively.

    An empty list means the set is mutually nondominated and, sorted by net
    benefit, has strictly increasing EFD. Messages name entries as
    ``<noun> <label>``.
    """
    pts = [_pair(p) for p in pairs]
    labels = list(labels) if labels is not None else list(range(len(pts)))
    problems = []
    for i, a in enumerate(pts):
        for j, b in enumerate(pts):
            if i != j and dominates(a, b):
                problems.append(f"{noun} {labels[j]} {b} is dominated by {noun} {labels[i]} {a}")
            elif i < j and a == b:
                problems.append(f"{noun}s {labels[i]} and {labels[j]} are duplicates {a}")
    order = sorted(range(len(pts)), key=lambda k: (pts[k][0], pts[k][1]))
    for u, v in zip(order, order[1:]):
        if pts[v][0] > pts[u][0] and not pts[v][1] > pts[u][1]:
            problems.append(f"staircase inversion between {noun}s {labels[u]} and {labels[v]}")
    return problems


def _solve_point(s: Scenario, built, source: str, weight: WeightPair | None,
                 tol: float) -> ParetoPoint:
    sol = solve_model(s, built, tol)
    return ParetoPoint(sol.objectives, sol.plan, weight, source)


def _refined(s: Scenario, built, fallback: ParetoPoint, tol: float) -> ParetoPoint:
    # second lexicographic stage; kept only if it does not lose on either objective
    try:
        p = _solve_point(s, built, ENDPOINT, None, tol)
    except (ModelInfeasibleError, SolverStallError, NumericalError):
        return fallback
    scale_nb = 1e-9 * max(1.0, abs(fallback.net_benefit))
    if p.net_benefit >= fallback.net_benefit - scale_nb and p.efd <= fallback.efd + 1e-9:
        return p
    return fallback


def solve_endpoints(s: Scenario, tol: float = 1e-9) -> tuple[ParetoPoint, ParetoPoint, ObjectiveShift]:
    """Best-benefit and least-deficiency endpoints plus the objective shift.

    Each endpoint is refined lexicographically: among plans optimal for one
    objective, the one best in the other is taken, so both are Pareto
    optimal rather than weakly optimal.
    """
    try:
        m1 = solve_model(s, build_model1(s), tol)
        m2 = solve_model(s, build_model2(s), tol)
    except (ModelInfeasibleError, SolverStallError, NumericalError) as exc:
        raise EndpointError(f"endpoint model failed: {exc}") from exc
    nb_star = m1.objective_value
    efd_star = m2.objective_value
    plain_nb = ParetoPoint(m1.objectives, m1.plan, None, ENDPOINT)
    plain_efd = ParetoPoint(m2.objectives, m2.plan, None, ENDPOINT)
    best_nb = _refined(s, build_model2(s, nb_floor=nb_star), plain_nb, tol)
    best_efd = _refined(s, build_model1(s, efd_cap=efd_star), plain_efd, tol)
    return best_nb, best_efd, compute_shift(s, nb_star)


def _solve_pair(args):
    s, w, shift, tol = args
    out = []
    for k, source in ((1, SUBPROBLEM1), (2, SUBPROBLEM2)):
        try:
            out.append(_solve_point(s, build_subproblem(s, w, k, shift), source, w, tol))
        except (ModelInfeasibleError, SolverStallError, NumericalError):
            out.append(None)
    return out


def run_front(s: Scenario, n: int, threads: int = 1, tol: float = 1e-9,
              equal_tol: float = 1e-6) -> FrontResult:
    """Approximate the Pareto front with ``n`` weights (``2n`` subproblem solves).

    ``equal_tol`` is the absolute tolerance, in shifted objective units, under
    which the two subproblem answers for a weight count as the same point.
    """
    if n < 1:
        raise ValueError(f"need at least one grid point, got n={n}")
    t0 = time.perf_counter()
    best_nb, best_efd, shift = solve_endpoints(s, tol)
    weights = generate_weights(n)
    tasks = [(s, w, shift, tol) for w in weights]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_solve_pair, tasks))
    else:
        results = [_solve_pair(t) for t in tasks]

    stats = FrontStats(grid_points=n)
    recorded: list[ParetoPoint] = []
    for p1, p2 in results:
        stats.solver_failures += (p1 is None) + (p2 is None)
        stats.subproblems_solved += (p1 is not None) + (p2 is not None)
        if p1 is None or p2 is None:
            if p1 is not None or p2 is not None:
                recorded.append(p1 if p1 is not None else p2)
            continue
        g_a = np.array(shift.shifted(p1.objectives))
        g_b = np.array(shift.shifted(p2.objectives))
        if np.all(np.abs(g_a - g_b) <= equal_tol):
            # same point up to solver noise; keep the copy that is not beaten at all
            recorded.append(p2 if dominates(p2, p1) else p1)
            stats.duplicates_merged += 1
        elif dominates(p1, p2):
            recorded.append(p1)
            stats.discarded_count += 1
        elif dominates(p2, p1):
            recorded.append(p2)
            stats.discarded_count += 1
        else:
            recorded.extend((p1, p2))

    candidates = [best_nb, best_efd] + recorded
    stats.recorded_count = len(candidates)
    front = filter_nondominated(candidates)
    stats.discarded_count += len(candidates) - len(front)
    front.sort(key=lambda p: (p.net_benefit, p.efd))
    stats.wall_time = time.perf_counter() - t0
    stats.extra["nb_ideal"] = shift.nb_ideal
    return FrontResult(tuple(front), stats)


def hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two point sets under the max-norm."""
    a = np.asarray(a, dtype=float).reshape(-1, 2)
    b = np.asarray(b, dtype=float).reshape(-1, 2)
    d = np.abs(a[:, None, :] - b[None, :, :]).max(axis=2)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def front_excess(points: Sequence[Any], exact: Sequence[Any]) -> float:
    """How far ``points`` reach beyond an exact LP front, in range-normalised units.

    The exact front of a bi-objective LP is piecewise linear between its
    vertices, so net benefit is interpolated along it at each point's EFD.
    Returns the largest excess (0 when every point lies in the dominated
    region); both axes are scaled by the exact front's ranges.
    """
    ex = np.array([_pair(p) for p in exact], dtype=float).reshape(-1, 2)
    pts = np.array([_pair(p) for p in points], dtype=float).reshape(-1, 2)
    if not len(pts):
        return 0.0
    ex = ex[np.argsort(ex[:, 1], kind="stable")]
    nb_range = max(float(np.ptp(ex[:, 0])), 1e-12)
    efd_range = max(float(np.ptp(ex[:, 1])), 1e-12)
    ceiling = np.interp(pts[:, 1], ex[:, 1], ex[:, 0])
    over_nb = (pts[:, 0] - ceiling) / nb_range
    under_efd = (ex[0, 1] - pts[:, 1]) / efd_range
    return float(max(0.0, over_nb.max(), under_efd.max()))
