"""Dense bounded-variable primal simplex.

Every model in the package is a small dense LP (tens of variables and
rows), so a full tableau kept in numpy is both simple and fast enough.

Solve pipeline:

1. convert to minimisation and scale rows, then columns, by max-abs;
2. shift variables to a zero lower bound and add one slack per inequality;
3. phase 1 on artificials where no slack can start the basis;
4. phase 2 on the real costs;
5. recompute basic values from the final basis and unscale.

Entering variables are chosen by Dantzig's largest reduced cost for a
bounded number of pivots and by Bland's smallest index afterwards, which
rules out cycling on degenerate problems. Ties in the ratio test go to the
smallest basic index under Bland.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Sequence

import numpy as np

LE, GE, EQ = "<=", ">=", "=="
_RELATIONS = (LE, GE, EQ)


class Status(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class SolverStallError(RuntimeError):
    """Iteration cap exceeded; never reported as a solution."""


class NumericalError(RuntimeError):
    """Final point fails the feasibility check after an 'optimal' finish."""


@dataclass
class LinearProgram:
    """``sense`` of ``objective . x + objective_offset`` subject to rows and bounds.

    ``A`` is (rows, vars); ``relations`` holds one of ``"<="``, ``">="``,
    ``"=="`` per row. Lower bounds must be finite; upper bounds may be
    ``inf``.
    """
    objective: np.ndarray
    A: np.ndarray
    relations: Sequence[str]
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    sense: str = "min"
    names: Sequence[str] = ()
    objective_offset: float = 0.0

    def __post_init__(self) -> None:
        self.objective = np.asarray(self.objective, dtype=float).ravel()
        n = self.objective.size
        self.A = np.asarray(self.A, dtype=float).reshape(-1, n)
        self.rhs = np.asarray(self.rhs, dtype=float).ravel()
        self.relations = tuple(self.relations)
        self.lower = np.asarray(self.lower, dtype=float).ravel()
        self.upper = np.asarray(self.upper, dtype=float).ravel()
        if self.sense not in ("min", "max"):
            raise ValueError(f"sense must be 'min' or 'max', got {self.sense!r}")
        if self.A.shape[0] != self.rhs.size or len(self.relations) != self.rhs.size:
            raise ValueError("constraint matrix, relations and rhs disagree on the row count")
        if any(r not in _RELATIONS for r in self.relations):
            raise ValueError(f"relations must be among {_RELATIONS}")
        if self.lower.size != n or self.upper.size != n:
            raise ValueError("bounds must have one entry per variable")
        if not np.all(np.isfinite(self.lower)):
            raise ValueError("lower bounds must be finite")
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound exceeds upper bound")
        if not self.names:
            self.names = tuple(f"x{j}" for j in range(n))
        elif len(self.names) != n:
            raise ValueError("one name per variable expected")
        else:
            self.names = tuple(self.names)

    @property
    def n_vars(self) -> int:
        return self.objective.size

    @property
    def n_constraints(self) -> int:
        return self.rhs.size

    def objective_at(self, x: np.ndarray) -> float:
        return float(self.objective @ x + self.objective_offset)

    def max_violation(self, x: np.ndarray) -> float:
        """Largest constraint or bound violation of ``x`` in the LP's own units."""
        x = np.asarray(x, dtype=float)
        viol = [0.0]
        if self.n_constraints:
            r = self.A @ x - self.rhs
            rel = np.array(self.relations)
            viol.append(float(np.max(np.where(rel == LE, r, 0.0))))
            viol.append(float(np.max(np.where(rel == GE, -r, 0.0))))
            viol.append(float(np.max(np.where(rel == EQ, np.abs(r), 0.0))))
        viol.append(float(np.max(self.lower - x, initial=0.0)))
        viol.append(float(np.max(x - self.upper, initial=0.0)))
        return max(viol)


@dataclass
class LpSolution:
    status: Status
    values: np.ndarray
    objective_value: float
    iterations: int
    basis: tuple[int, ...] = field(default=(), repr=False)

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class _Tableau:
    """Working state for the bounded simplex in ``min c z, T z = beta, 0 <= z <= ub``."""

    def __init__(self, T: np.ndarray, beta: np.ndarray, basis: np.ndarray, ub: np.ndarray,
                 at_upper: np.ndarray, tol: float):
        self.T = T
        self.beta = beta
        self.basis = basis
        self.ub = ub
        self.at_upper = at_upper
        self.tol = tol
        self.is_basic = np.zeros(T.shape[1], dtype=bool)
        self.is_basic[basis] = True

    def reduced_costs(self, c: np.ndarray) -> np.ndarray:
        return c - c[self.basis] @ self.T

    def run(self, c: np.ndarray, state: dict) -> Status:
        T, tol = self.T, self.tol
        d = self.reduced_costs(c)
        movable = self.ub > tol
        while True:
            cand = ~self.is_basic & movable & (
                (~self.at_upper & (d < -tol)) | (self.at_upper & (d > tol)))
            idx = np.flatnonzero(cand)
            if idx.size == 0:
                return Status.OPTIMAL
            if state["iterations"] >= state["cap"]:
                raise SolverStallError(
                    f"simplex exceeded the iteration cap of {state['cap']} pivots")
            state["iterations"] += 1
            bland = state["bland"]
            j = int(idx[0]) if bland else int(idx[np.argmax(np.abs(d[idx]))])
            sigma = -1.0 if self.at_upper[j] else 1.0
            alpha = T[:, j] * sigma
            ub_b = self.ub[self.basis]

            t_best = self.ub[j]
            r = -1
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.full(alpha.size, np.inf)
                dec = alpha > tol
                ratios[dec] = self.beta[dec] / alpha[dec]
                inc = (alpha < -tol) & np.isfinite(ub_b)
                ratios[inc] = (ub_b[inc] - self.beta[inc]) / (-alpha[inc])
            ratios = np.maximum(ratios, 0.0)
            if ratios.size:
                t_min = float(ratios.min())
                if t_min < t_best:
                    ties = np.flatnonzero(ratios <= t_min + tol)
                    if bland:
                        r = int(ties[np.argmin(self.basis[ties])])
                    else:
                        r = int(ties[np.argmax(np.abs(alpha[ties]))])
                    t_best = t_min
            if not np.isfinite(t_best):
                return Status.UNBOUNDED

            if t_best <= tol:
                state["degenerate_run"] += 1
            else:
                state["degenerate_run"] = 0
            state["pivots"] += 1
            if not bland and (state["pivots"] >= state["dantzig_limit"]
                              or state["degenerate_run"] >= state["degenerate_limit"]):
                state["bland"] = True

            self.beta -= t_best * alpha
            if r < 0:
                # bound flip, basis unchanged
                self.at_upper[j] = not self.at_upper[j]
                self._clip()
                continue

            leaving = int(self.basis[r])
            self.at_upper[leaving] = bool(alpha[r] < 0)
            entering_value = (self.ub[j] if self.at_upper[j] else 0.0) + sigma * t_best
            self.at_upper[j] = False
            self.beta[r] = entering_value
            self._pivot(r, j)
            d -= d[j] * T[r]
            d[j] = 0.0
            self.is_basic[leaving] = False
            self.is_basic[j] = True
            self.basis[r] = j
            self._clip()

    def _pivot(self, r: int, j: int) -> None:
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        T[:, j] = 0.0
        T[r, j] = 1.0

    def _clip(self) -> None:
        np.clip(self.beta, 0.0, self.ub[self.basis], out=self.beta)


def _scale(A: np.ndarray, rows: int) -> tuple[np.ndarray, np.ndarray]:
    if rows:
        rmax = np.abs(A).max(axis=1)
        row = np.where(rmax > 0, 1.0 / np.where(rmax > 0, rmax, 1.0), 1.0)
        As = A * row[:, None]
        cmax = np.abs(As).max(axis=0)
        col = np.where(cmax > 0, 1.0 / np.where(cmax > 0, cmax, 1.0), 1.0)
    else:
        row = np.ones(0)
        col = np.ones(A.shape[1])
    return row, col


def solve_lp(lp: LinearProgram, tol: float = 1e-9, max_iterations: int | None = None,
             scale: bool = True, bland_after: int | None = None) -> LpSolution:
    """Solve ``lp`` to optimality, or report it infeasible or unbounded.

    Deterministic: identical input gives bitwise identical output. Raises
    :class:`SolverStallError` when the pivot count passes
    ``50 * (vars + constraints)`` (or ``max_iterations``).

    ``bland_after`` fixes the number of Dantzig pivots before the switch to
    Bland's rule; by default the switch also happens after a long run of
    degenerate pivots. ``scale=False`` skips equilibration (debugging only).
    """
    n, m = lp.n_vars, lp.n_constraints
    sign = 1.0 if lp.sense == "min" else -1.0
    c = sign * lp.objective

    if scale:
        row, col = _scale(lp.A, m)
    else:
        row, col = np.ones(m), np.ones(n)
    A = lp.A * row[:, None] * col[None, :]
    b = lp.rhs * row
    # x = col * y  with y the scaled variable
    lo = lp.lower / col
    hi = lp.upper / col
    cs = c * col
    cnorm = np.abs(cs).max(initial=0.0)
    cs = cs / cnorm if cnorm > 0 else cs

    # shift to z = y - lo >= 0
    b_shift = b - A @ lo
    ub_z = hi - lo
    rel = np.array(lp.relations)
    n_slack = int(np.count_nonzero(rel != EQ))
    slack_cols = np.zeros((m, n_slack))
    slack_row = np.flatnonzero(rel != EQ)
    for k, i in enumerate(slack_row):
        slack_cols[i, k] = 1.0 if rel[i] == LE else -1.0
    M = np.hstack([A, slack_cols])
    ub_all = np.concatenate([ub_z, np.full(n_slack, np.inf)])
    rhs = b_shift.copy()
    flip = rhs < 0
    M[flip] *= -1.0
    rhs[flip] *= -1.0

    basis = np.full(m, -1, dtype=int)
    for k, i in enumerate(slack_row):
        if M[i, n + k] > 0:
            basis[i] = n + k
    need_art = np.flatnonzero(basis < 0)
    n_art = need_art.size
    art = np.zeros((m, n_art))
    for k, i in enumerate(need_art):
        art[i, k] = 1.0
        basis[i] = n + n_slack + k
    T = np.hstack([M, art])
    n_total = T.shape[1]
    ub = np.concatenate([ub_all, np.full(n_art, np.inf)])
    at_upper = np.zeros(n_total, dtype=bool)

    cap = max_iterations if max_iterations is not None else 50 * (n + m)
    state = {
        "iterations": 0, "cap": cap, "pivots": 0, "degenerate_run": 0, "bland": False,
        "dantzig_limit": 10 * (n + m) + 10, "degenerate_limit": n + m + 10,
    }
    if bland_after is not None:
        state["dantzig_limit"] = bland_after
        state["degenerate_limit"] = np.inf
        state["bland"] = bland_after <= 0
    tab = _Tableau(T, rhs.copy(), basis, ub, at_upper, tol)

    if n_art:
        c1 = np.zeros(n_total)
        c1[n + n_slack:] = 1.0
        tab.run(c1, state)
        if float(tab.beta[tab.basis >= n + n_slack].sum()) > tol * max(1.0, np.abs(rhs).max()):
            return LpSolution(Status.INFEASIBLE, np.full(n, np.nan), float("nan"),
                              state["iterations"])
        _drive_out_artificials(tab, n + n_slack, tol)
        keep_cols = np.arange(n + n_slack)
        tab.T = tab.T[:, keep_cols]
        tab.ub = tab.ub[keep_cols]
        tab.at_upper = tab.at_upper[keep_cols]
        tab.is_basic = tab.is_basic[keep_cols]
        M_rows = tab.rows_kept
        M_eff = M[M_rows]
        rhs_eff = rhs[M_rows]
    else:
        M_eff, rhs_eff = M, rhs

    c2 = np.concatenate([cs, np.zeros(n_slack)])
    status = tab.run(c2, state)
    if status is Status.UNBOUNDED:
        return LpSolution(Status.UNBOUNDED, np.full(n, np.nan), -sign * np.inf,
                          state["iterations"], tuple(int(k) for k in tab.basis))

    z = np.where(tab.at_upper, tab.ub, 0.0)
    z[~np.isfinite(z)] = 0.0
    z[tab.basis] = tab.beta
    z = _refine(M_eff, rhs_eff, tab.basis, z)
    y = z[:n] + lo
    x = y * col
    # snap to bounds that the basis holds exactly
    nonbasic = ~tab.is_basic[:n]
    x[nonbasic & ~tab.at_upper[:n]] = lp.lower[nonbasic & ~tab.at_upper[:n]]
    up = nonbasic & tab.at_upper[:n]
    x[up] = lp.upper[up]
    x = np.clip(x, lp.lower, lp.upper)

    scaled_viol = _scaled_violation(lp, x, row)
    if scaled_viol > max(1e3 * tol, 1e-7):
        raise NumericalError(f"final point violates constraints by {scaled_viol:.3g} (scaled)")
    return LpSolution(Status.OPTIMAL, x, lp.objective_at(x), state["iterations"],
                      tuple(int(k) for k in tab.basis))


def _scaled_violation(lp: LinearProgram, x: np.ndarray, row: np.ndarray) -> float:
    if lp.n_constraints == 0:
        return 0.0
    r = (lp.A @ x - lp.rhs) * row
    rel = np.array(lp.relations)
    return float(max(np.max(np.where(rel == LE, r, 0.0)),
                     np.max(np.where(rel == GE, -r, 0.0)),
                     np.max(np.where(rel == EQ, np.abs(r), 0.0))))


def _drive_out_artificials(tab: _Tableau, n_real: int, tol: float) -> None:
    keep = np.ones(tab.T.shape[0], dtype=bool)
    for i in range(tab.T.shape[0]):
        if tab.basis[i] < n_real:
            continue
        candidates = np.flatnonzero((~tab.is_basic[:n_real]) & (np.abs(tab.T[i, :n_real]) > 1e3 * tol))
        if candidates.size == 0:
            keep[i] = False  # redundant row
            continue
        j = int(candidates[np.argmax(np.abs(tab.T[i, candidates]))])
        old = int(tab.basis[i])
        value = tab.ub[j] if tab.at_upper[j] else 0.0
        tab._pivot(i, j)
        tab.is_basic[old] = False
        tab.is_basic[j] = True
        tab.basis[i] = j
        tab.at_upper[j] = False
        tab.beta[i] = value
    tab.T = tab.T[keep]
    tab.beta = tab.beta[keep]
    tab.basis = tab.basis[keep]
    tab.rows_kept = np.flatnonzero(keep)


def _refine(M: np.ndarray, rhs: np.ndarray, basis: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Recompute basic values by a direct solve with the final basis."""
    if basis.size == 0:
        return z
    B = M[:, basis]
    nonbasic = np.ones(M.shape[1], dtype=bool)
    nonbasic[basis] = False
    r = rhs - M[:, nonbasic] @ z[nonbasic]
    try:
        zb = np.linalg.solve(B, r)
    except np.linalg.LinAlgError:
        return z
    if not np.all(np.isfinite(zb)):
        return z
    out = z.copy()
    out[basis] = zb
    return out


def brute_force_vertex_oracle(lp: LinearProgram, tol: float = 1e-9) -> LpSolution:
    """Best basic feasible point found by enumerating every active set.

    Test oracle only. Limited to 8 variables and 10 constraints. The caller
    must ensure the LP is bounded: unboundedness is not detected, the best
    vertex is returned instead.
    """
    n, m = lp.n_vars, lp.n_constraints
    if n > 8 or m > 10:
        raise ValueError(f"oracle limited to 8 variables and 10 constraints, got {n} and {m}")
    rows, rhs, is_eq = [], [], []
    for a, r, bi in zip(lp.A, lp.relations, lp.rhs):
        if r == GE:
            rows.append(-a)
            rhs.append(-bi)
        else:
            rows.append(a)
            rhs.append(bi)
        is_eq.append(r == EQ)
    eye = np.eye(n)
    for j in range(n):
        rows.append(-eye[j])
        rhs.append(-lp.lower[j])
        is_eq.append(False)
        if np.isfinite(lp.upper[j]):
            rows.append(eye[j])
            rhs.append(lp.upper[j])
            is_eq.append(False)
    G = np.array(rows).reshape(-1, n)
    h = np.array(rhs, dtype=float)
    norms = np.abs(G).max(axis=1)
    norms[norms == 0] = 1.0
    G, h = G / norms[:, None], h / norms
    eq_idx = [i for i, e in enumerate(is_eq) if e]
    ineq_idx = [i for i, e in enumerate(is_eq) if not e]
    free = n - len(eq_idx)
    sign = 1.0 if lp.sense == "min" else -1.0
    best_x = None
    if free < 0:
        combos = []
    else:
        combos = [tuple(eq_idx) + cmb for cmb in combinations(ineq_idx, free)]
    if combos:
        idx = np.array(combos, dtype=int)
        mats = G[idx]
        vecs = h[idx]
        dets = np.linalg.det(mats)
        ok = np.abs(dets) > 1e-10
        if np.any(ok):
            sols = np.linalg.solve(mats[ok], vecs[ok][..., None])[..., 0]
            slack = sols @ G.T - h[None, :]
            row_tol = 1e3 * tol * (1.0 + np.abs(h))
            eq_ok = (np.abs(slack[:, eq_idx]) <= row_tol[eq_idx]).all(axis=1) if eq_idx else True
            in_ok = (slack[:, ineq_idx] <= row_tol[ineq_idx]).all(axis=1) if ineq_idx else True
            feas = np.broadcast_to(eq_ok & in_ok, (len(sols),))
            if np.any(feas):
                vals = sign * (sols[feas] @ lp.objective)
                k = int(np.argmin(vals))
                best_x = sols[feas][k]
    if best_x is None:
        return LpSolution(Status.INFEASIBLE, np.full(n, np.nan), float("nan"), len(combos))
    return LpSolution(Status.OPTIMAL, best_x, lp.objective_at(best_x), len(combos))


def lp_to_text(lp: LinearProgram, precision: int = 6) -> str:
    """Human-readable dump of an LP as a coefficient table."""
    fmt = f"{{:>{precision + 7}.{precision}g}}"
    width = precision + 7
    names = [nm[:width] for nm in lp.names]
    header = " " * 10 + "".join(f"{nm:>{width}}" for nm in names) + f"{'rel':>5}{'rhs':>{width}}"
    lines = [f"sense: {lp.sense}  offset: {lp.objective_offset:g}", header]
    lines.append(f"{'obj':<10}" + "".join(fmt.format(v) for v in lp.objective))
    for i in range(lp.n_constraints):
        lines.append(f"{'r' + str(i):<10}" + "".join(fmt.format(v) for v in lp.A[i])
                     + f"{lp.relations[i]:>5}" + fmt.format(lp.rhs[i]))
    lines.append(f"{'lower':<10}" + "".join(fmt.format(v) for v in lp.lower))
    lines.append(f"{'upper':<10}" + "".join(fmt.format(v) for v in lp.upper))
    return "\n".join(lines)
