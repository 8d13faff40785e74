"""Compact NSGA-II baseline for the bi-objective allocation problem.

Real-coded individuals ``[X_1..X_C, E_1..E_M]`` live in the box given by the
system limits. Offspring come from simulated binary crossover and polynomial
mutation. Linear constraints (pumping cap, total area, flow within inflow)
enter through constrained dominance: feasible beats infeasible, and
among infeasible individuals the smaller total violation wins. No repair.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .evaluation import AllocationPlan, ObjectivePair, constraint_violation, evaluate_batch
from .pareto import GENETIC, FrontResult, FrontStats, ParetoPoint, filter_nondominated, hypervolume
from .scenario import Scenario


class NoFeasibleSolutionError(RuntimeError):
    """The final population holds no feasible individual."""


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 100
    generations: int = 200
    crossover_rate: float = 0.9
    mutation_rate: float | None = None      # default 1 / number of variables
    mutation_scale: float = 1.0             # fraction of each variable's range
    seed: int = 0
    eta_crossover: float = 15.0
    eta_mutation: float = 20.0

    def __post_init__(self) -> None:
        if self.population_size < 4 or self.population_size % 2:
            raise ValueError("population_size must be even and at least 4")
        if self.generations < 0:
            raise ValueError("generations must be nonnegative")
        for name in ("crossover_rate", "mutation_rate"):
            v = getattr(self, name)
            if v is not None and not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if not 0.0 < self.mutation_scale <= 1.0:
            raise ValueError("mutation_scale must lie in (0, 1]")


@dataclass(frozen=True)
class Individual:
    plan: AllocationPlan
    objectives: ObjectivePair
    feasible: bool
    constraint_violation: float


def make_individuals(s: Scenario, genomes: np.ndarray) -> list[Individual]:
    genomes = np.atleast_2d(genomes)
    C = s.n_crops
    ev = evaluate_batch(s, genomes[:, :C], genomes[:, C:])
    viol = constraint_violation(s, genomes[:, :C], genomes[:, C:])
    out = []
    for k, g in enumerate(genomes):
        out.append(Individual(
            plan=AllocationPlan(np.clip(g[:C], 0, None), np.clip(g[C:], 0, None)),
            objectives=ObjectivePair(float(ev["net_benefit"][k]), float(ev["efd"][k])),
            feasible=bool(viol[k] <= 0.0),
            constraint_violation=float(viol[k]),
        ))
    return out


def _dominance_matrix(nb: np.ndarray, efd: np.ndarray, viol: np.ndarray) -> np.ndarray:
    feas = viol <= 0.0
    fi, fj = feas[:, None], feas[None, :]
    obj = ((nb[:, None] >= nb[None, :]) & (efd[:, None] <= efd[None, :])
           & ((nb[:, None] > nb[None, :]) | (efd[:, None] < efd[None, :])))
    return ((fi & ~fj) | (~fi & ~fj & (viol[:, None] < viol[None, :])) | (fi & fj & obj))


def _fronts(nb: np.ndarray, efd: np.ndarray, viol: np.ndarray) -> list[np.ndarray]:
    dom = _dominance_matrix(nb, efd, viol)
    count = dom.sum(axis=0)
    remaining = np.ones(nb.size, dtype=bool)
    fronts = []
    while remaining.any():
        current = np.flatnonzero(remaining & (count == 0))
        fronts.append(current)
        remaining[current] = False
        count = count - dom[current].sum(axis=0)
    return fronts


def nondominated_sort(pop: list[Individual]) -> list[list[Individual]]:
    """Fast nondominated sorting under constrained dominance."""
    if not pop:
        return []
    nb = np.array([p.objectives.net_benefit for p in pop])
    efd = np.array([p.objectives.efd for p in pop])
    viol = np.array([p.constraint_violation for p in pop])
    return [[pop[i] for i in f] for f in _fronts(nb, efd, viol)]


def _crowding(nb: np.ndarray, efd: np.ndarray) -> np.ndarray:
    n = nb.size
    dist = np.zeros(n)
    if n <= 2:
        return np.full(n, np.inf)
    for vals in (nb, efd):
        order = np.argsort(vals, kind="stable")
        span = vals[order[-1]] - vals[order[0]]
        dist[order[0]] = dist[order[-1]] = np.inf
        if span > 0:
            dist[order[1:-1]] += (vals[order[2:]] - vals[order[:-2]]) / span
    return dist


def _rank_and_crowd(nb, efd, viol):
    rank = np.empty(nb.size, dtype=int)
    crowd = np.empty(nb.size)
    fronts = _fronts(nb, efd, viol)
    for r, f in enumerate(fronts):
        rank[f] = r
        crowd[f] = _crowding(nb[f], efd[f])
    return rank, crowd, fronts


def _sbx(rng, a, b, lb, ub, eta, rate):
    c1, c2 = a.copy(), b.copy()
    if rng.random() > rate:
        return c1, c2
    n = a.size
    for i in range(n):
        if rng.random() > 0.5 or abs(a[i] - b[i]) < 1e-14 or ub[i] <= lb[i]:
            continue
        y1, y2 = min(a[i], b[i]), max(a[i], b[i])
        u = rng.random()
        spread = y2 - y1
        beta = 1.0 + 2.0 * (y1 - lb[i]) / spread
        alpha = 2.0 - beta ** -(eta + 1.0)
        bq = (u * alpha) ** (1.0 / (eta + 1.0)) if u <= 1.0 / alpha else \
            (1.0 / (2.0 - u * alpha)) ** (1.0 / (eta + 1.0))
        v1 = 0.5 * ((y1 + y2) - bq * spread)
        beta = 1.0 + 2.0 * (ub[i] - y2) / spread
        alpha = 2.0 - beta ** -(eta + 1.0)
        bq = (u * alpha) ** (1.0 / (eta + 1.0)) if u <= 1.0 / alpha else \
            (1.0 / (2.0 - u * alpha)) ** (1.0 / (eta + 1.0))
        v2 = 0.5 * ((y1 + y2) + bq * spread)
        v1, v2 = np.clip(v1, lb[i], ub[i]), np.clip(v2, lb[i], ub[i])
        if rng.random() < 0.5:
            v1, v2 = v2, v1
        c1[i], c2[i] = v1, v2
    return c1, c2


def _poly_mutation(rng, x, lb, ub, eta, rate, scale):
    y = x.copy()
    for i in range(x.size):
        if rng.random() >= rate or ub[i] <= lb[i]:
            continue
        span = ub[i] - lb[i]
        d1 = (y[i] - lb[i]) / span
        d2 = (ub[i] - y[i]) / span
        u = rng.random()
        p = 1.0 / (eta + 1.0)
        if u < 0.5:
            val = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1) ** (eta + 1.0)
            dq = val ** p - 1.0
        else:
            val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2) ** (eta + 1.0)
            dq = 1.0 - val ** p
        y[i] = np.clip(y[i] + scale * dq * span, lb[i], ub[i])
    return y


def _hv_truncate(nb, efd, keep, ref):
    """Drop least hypervolume contributors from a feasible nondominated set until ``keep`` remain."""
    idx = np.lexsort((efd, nb))
    while idx.size > keep:
        x, y = nb[idx], efd[idx]
        left = np.concatenate([[ref.net_benefit], x[:-1]])
        up = np.concatenate([y[1:], [ref.efd]])
        contrib = (x - left) * (up - y)
        idx = np.delete(idx, int(np.argmin(contrib)))
    return np.sort(idx)


def _elite_cover(nb, efd, first, keep):
    # the old rank-1 members (indices < keep) are each either in ``first`` or
    # dominated by a member of it; keeping one cover point per old member
    # preserves their hypervolume, and crowding fills the rest
    cover: list[int] = []
    for j in range(keep):
        if j in first:
            c = j
        else:
            dom = first[(nb[first] >= nb[j]) & (efd[first] <= efd[j])]
            if dom.size == 0:
                continue
            c = int(dom[0])
        if c not in cover:
            cover.append(c)
    rest = [i for i in first.tolist() if i not in cover]
    crowd = _crowding(nb[rest], efd[rest]) if rest else np.array([])
    rest = [rest[i] for i in np.argsort(-crowd, kind="stable")]
    return np.array((cover + rest)[:keep])


def _tournament(rng, rank, crowd, k):
    a = rng.integers(0, rank.size, k)
    b = rng.integers(0, rank.size, k)
    better_a = (rank[a] < rank[b]) | ((rank[a] == rank[b]) & (crowd[a] >= crowd[b]))
    return np.where(better_a, a, b)


def gene_bounds(s: Scenario) -> tuple[np.ndarray, np.ndarray]:
    lim = s.limits
    lb = np.concatenate([np.full(s.n_crops, lim.area_min_per_crop), np.zeros(s.n_months)])
    ub = np.concatenate([np.full(s.n_crops, lim.area_upper_per_crop),
                         np.full(s.n_months, lim.env_flow_upper_per_month)])
    return lb, ub


def hv_reference(s: Scenario) -> ObjectivePair:
    """A point dominated by every feasible plan: worst net benefit, total target."""
    lim = s.limits
    margin = s.revenue - s.variable_cost
    worst_crops = np.minimum(margin * lim.area_min_per_crop, margin * lim.area_upper_per_crop).sum()
    worst = worst_crops - lim.surface_cost_per_gl * s.inflow.sum() - lim.pump_cost_per_gl * lim.pump_cap_total
    return ObjectivePair(float(worst), float(s.target_env_flow.sum()))


def run_ga(s: Scenario, cfg: GaConfig = GaConfig()) -> FrontResult:
    """Evolve a population and return its nondominated feasible set.

    Deterministic for a fixed ``cfg.seed``. Raises
    :class:`NoFeasibleSolutionError` if no feasible plan survives.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    lb, ub = gene_bounds(s)
    n_var = lb.size
    C = s.n_crops
    mut_rate = cfg.mutation_rate if cfg.mutation_rate is not None else 1.0 / n_var
    N = cfg.population_size
    ref = hv_reference(s)

    def assess(g):
        ev = evaluate_batch(s, g[:, :C], g[:, C:])
        return ev["net_benefit"], ev["efd"], constraint_violation(s, g[:, :C], g[:, C:])

    def rank1_hv(nb, efd, viol):
        ok = viol <= 0.0
        if not ok.any():
            return 0.0
        pts = filter_nondominated(list(zip(nb[ok], efd[ok])))
        return hypervolume(pts, ref)

    pop = lb + rng.random((N, n_var)) * (ub - lb)
    nb, efd, viol = assess(pop)
    rank, crowd, _ = _rank_and_crowd(nb, efd, viol)
    history = [rank1_hv(nb, efd, viol)]
    evaluations = N

    for _ in range(cfg.generations):
        parents = _tournament(rng, rank, crowd, N)
        children = np.empty_like(pop)
        for k in range(0, N, 2):
            c1, c2 = _sbx(rng, pop[parents[k]], pop[parents[k + 1]], lb, ub,
                          cfg.eta_crossover, cfg.crossover_rate)
            children[k] = _poly_mutation(rng, c1, lb, ub, cfg.eta_mutation, mut_rate, cfg.mutation_scale)
            children[k + 1] = _poly_mutation(rng, c2, lb, ub, cfg.eta_mutation, mut_rate,
                                             cfg.mutation_scale)
        cnb, cefd, cviol = assess(children)
        evaluations += N

        merged = np.vstack([pop, children])
        mnb, mefd, mviol = np.concatenate([nb, cnb]), np.concatenate([efd, cefd]), np.concatenate([viol, cviol])
        _, mcrowd, fronts = _rank_and_crowd(mnb, mefd, mviol)
        first = fronts[0]
        if first.size > N and np.all(mviol[first] <= 0.0):
            # overflowing feasible first front: trim by hypervolume so rank-1 quality never drops
            idx = first[_hv_truncate(mnb[first], mefd[first], N, ref)]
            if rank1_hv(mnb[idx], mefd[idx], mviol[idx]) < history[-1]:
                idx = _elite_cover(mnb, mefd, first, N)
        else:
            chosen: list[int] = []
            for f in fronts:
                if len(chosen) + f.size <= N:
                    chosen.extend(f.tolist())
                else:
                    order = f[np.argsort(-mcrowd[f], kind="stable")]
                    chosen.extend(order[: N - len(chosen)].tolist())
                if len(chosen) == N:
                    break
            idx = np.array(chosen)
        pop, nb, efd, viol = merged[idx], mnb[idx], mefd[idx], mviol[idx]
        rank, crowd, _ = _rank_and_crowd(nb, efd, viol)
        history.append(rank1_hv(nb, efd, viol))

    ok = viol <= 0.0
    if not ok.any():
        raise NoFeasibleSolutionError(
            f"no feasible individual after {cfg.generations} generations "
            f"(smallest violation {viol.min():.3g})")
    inds = make_individuals(s, pop[ok])
    points = [ParetoPoint(ind.objectives, ind.plan, None, GENETIC) for ind in inds]
    front = filter_nondominated(points)
    front.sort(key=lambda p: (p.net_benefit, p.efd))
    stats = FrontStats(
        wall_time=time.perf_counter() - t0,
        discarded_count=int(ok.sum()) - len(front),
        recorded_count=int(ok.sum()),
        extra={"population_size": N, "generations": cfg.generations, "seed": cfg.seed,
               "evaluations": evaluations, "hv_history": history,
               "hv_reference": (ref.net_benefit, ref.efd)},
    )
    return FrontResult(tuple(front), stats, method="nsga2")
