"""Dense two-phase simplex plus the relaxation builders used by the rounding algorithms.

The solver is deliberately small: desk-scale problems (tens of variables)
with box bounds. Bland's rule keeps it cycle-free and a generous pivot
budget turns pathological stalls into a loud NumericalFailure instead of a
hang. Anything implementing solve(problem) -> LpSolution with the same
statuses can be swapped in through the lp_solver arguments downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, InsufficientColor, NumericalFailure
from .model import SetSystem

# Absolute tolerance for constraint residuals of reported solutions.
FEAS_TOL = 1e-9
# Relative tolerance for objective comparisons.
OBJ_RTOL = 1e-7
# Pivoting threshold: entries smaller than this are treated as zero.
_PIVOT_TOL = 1e-9
# Acceptable drift between a color's LP mass and its integer quota.
MASS_DRIFT_TOL = 1e-6

Relation = str  # one of "<=", ">=", "="
_RELATIONS = ("<=", ">=", "=")


@dataclass(frozen=True)
class LpProblem:
    """min or max of objective . x subject to linear constraints and box bounds."""

    sense: str
    objective: tuple[float, ...]
    constraints: tuple[tuple[tuple[float, ...], Relation, float], ...]
    bounds: tuple[tuple[float, float], ...]

    def __init__(
        self,
        sense: str,
        objective: Sequence[float],
        constraints: Sequence[tuple[Sequence[float], Relation, float]],
        bounds: Sequence[tuple[float, float]] | None = None,
    ):
        if sense not in ("min", "max"):
            raise ValueError(f"sense must be 'min' or 'max', got {sense!r}")
        obj = tuple(float(c) for c in objective)
        cons = tuple(
            (tuple(float(a) for a in row), rel, float(rhs))
            for row, rel, rhs in constraints
        )
        nvar = len(obj)
        for idx, (row, rel, _) in enumerate(cons):
            if rel not in _RELATIONS:
                raise ValueError(f"constraint {idx}: unknown relation {rel!r}")
            if len(row) != nvar:
                raise DimensionMismatch(
                    f"constraint {idx} has {len(row)} coefficients for {nvar} variables"
                )
        if bounds is None:
            bnds = tuple((0.0, 1.0) for _ in range(nvar))
        else:
            bnds = tuple((float(lo), float(hi)) for lo, hi in bounds)
            if len(bnds) != nvar:
                raise DimensionMismatch(
                    f"{len(bnds)} bounds for {nvar} variables"
                )
        for j, (lo, hi) in enumerate(bnds):
            if not math.isfinite(lo):
                raise ValueError(f"variable {j}: lower bound must be finite")
            if hi < lo:
                raise ValueError(f"variable {j}: empty bound interval [{lo}, {hi}]")
        object.__setattr__(self, "sense", sense)
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "constraints", cons)
        object.__setattr__(self, "bounds", bnds)

    @property
    def num_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LpSolution:
    """status is 'optimal', 'infeasible' or 'unbounded'; values/objective are
    meaningful only when optimal."""

    status: str
    values: tuple[float, ...]
    objective: float


LpSolver = Callable[[LpProblem], LpSolution]

_INFEASIBLE = LpSolution("infeasible", (), math.nan)
_UNBOUNDED = LpSolution("unbounded", (), math.nan)


def _pivot_loop(T: np.ndarray, basis: list[int], cost: np.ndarray, budget: int) -> str:
    """Run Bland-rule simplex pivots on tableau T in place.

    T is m x (ncols+1) with the rhs in the last column and b >= 0 maintained
    throughout. Returns 'optimal' or 'unbounded'.
    """
    m, width = T.shape
    ncols = width - 1
    basic = set(basis)
    for _ in range(budget):
        reduced = cost - cost[basis] @ T[:, :ncols]
        candidates = np.flatnonzero(reduced < -_PIVOT_TOL)
        enter = -1
        for j in candidates:
            if j not in basic:
                enter = int(j)
                break
        if enter < 0:
            return "optimal"
        col = T[:, enter]
        rows = np.flatnonzero(col > _PIVOT_TOL)
        if rows.size == 0:
            return "unbounded"
        ratios = T[rows, ncols] / col[rows]
        best = ratios.min()
        # Bland tie-break: among minimizing rows leave the smallest basic index.
        tied = rows[ratios <= best + _PIVOT_TOL]
        leave = min(tied, key=lambda r: basis[r])
        piv = T[leave, enter]
        T[leave] /= piv
        other = np.arange(m) != leave
        T[other] -= np.outer(T[other, enter], T[leave])
        basic.discard(basis[leave])
        basic.add(enter)
        basis[leave] = enter
    raise NumericalFailure(f"pivot budget {budget} exhausted")


def solve(problem: LpProblem) -> LpSolution:
    """Two-phase simplex over the given problem.

    Lower bounds are shifted to zero, finite upper bounds become explicit
    rows, and artificials carry phase one. The reported objective is
    recomputed from the original coefficients so tableau drift never leaks
    into comparisons.
    """
    nvar = problem.num_vars
    if nvar == 0:
        return LpSolution("optimal", (), 0.0)
    lo = np.array([b[0] for b in problem.bounds])
    hi = np.array([b[1] for b in problem.bounds])
    c_orig = np.array(problem.objective)
    c = c_orig if problem.sense == "min" else -c_orig

    rows: list[np.ndarray] = []
    rels: list[str] = []
    rhs: list[float] = []
    for row, rel, b in problem.constraints:
        a = np.array(row)
        rows.append(a)
        rels.append(rel)
        rhs.append(b - float(a @ lo))
    for j in range(nvar):
        if math.isfinite(hi[j]) and hi[j] > lo[j]:
            e = np.zeros(nvar)
            e[j] = 1.0
            rows.append(e)
            rels.append("<=")
            rhs.append(hi[j] - lo[j])
        # hi == lo pins the shifted variable at zero; the bound row x' <= 0
        # would be redundant with nonnegativity, so skip it.

    m = len(rows)
    A = np.array(rows) if m else np.zeros((0, nvar))
    b = np.array(rhs) if m else np.zeros(0)
    for i in range(m):
        if b[i] < 0:
            A[i] = -A[i]
            b[i] = -b[i]
            rels[i] = {"<=": ">=", ">=": "<=", "=": "="}[rels[i]]

    n_slack = sum(1 for r in rels if r == "<=")
    n_surp = sum(1 for r in rels if r == ">=")
    n_art = sum(1 for r in rels if r in (">=", "="))
    ncols = nvar + n_slack + n_surp + n_art
    T = np.zeros((m, ncols + 1))
    T[:, :nvar] = A
    T[:, ncols] = b
    basis: list[int] = []
    s = nvar
    u = nvar + n_slack
    a_col = nvar + n_slack + n_surp
    art_cols = []
    for i, rel in enumerate(rels):
        if rel == "<=":
            T[i, s] = 1.0
            basis.append(s)
            s += 1
        else:
            if rel == ">=":
                T[i, u] = -1.0
                u += 1
            T[i, a_col] = 1.0
            basis.append(a_col)
            art_cols.append(a_col)
            a_col += 1

    budget = 50 * (ncols + m)

    if art_cols:
        cost1 = np.zeros(ncols)
        cost1[art_cols] = 1.0
        status = _pivot_loop(T, basis, cost1, budget)
        assert status == "optimal"  # phase one is always bounded below by 0
        scale = max(1.0, float(np.max(b)) if m else 1.0)
        if cost1[basis] @ T[:, ncols] > 1e-8 * scale:
            return _INFEASIBLE
        # Pivot leftover zero-valued artificials out of the basis when possible.
        art_set = set(art_cols)
        for i in range(m):
            if basis[i] in art_set:
                options = [
                    j
                    for j in range(ncols)
                    if j not in art_set and abs(T[i, j]) > _PIVOT_TOL
                ]
                if options:
                    enter = options[0]
                    T[i] /= T[i, enter]
                    other = np.arange(m) != i
                    T[other] -= np.outer(T[other, enter], T[i])
                    basis[i] = enter
        keep_rows = [i for i in range(m) if basis[i] not in art_set]
        keep_cols = [j for j in range(ncols) if j not in art_set] + [ncols]
        remap = {old: new for new, old in enumerate(keep_cols[:-1])}
        T = T[np.ix_(keep_rows, keep_cols)]
        basis = [remap[basis[i]] for i in keep_rows]
        m = T.shape[0]
        ncols = T.shape[1] - 1

    cost2 = np.zeros(ncols)
    cost2[:nvar] = c
    status = _pivot_loop(T, basis, cost2, budget)
    if status == "unbounded":
        return _UNBOUNDED

    x_shift = np.zeros(ncols)
    x_shift[basis] = T[:, ncols]
    x = lo + x_shift[:nvar]

    for idx, (row, rel, bb) in enumerate(problem.constraints):
        resid = float(np.array(row) @ x) - bb
        violated = (
            (rel == "=" and abs(resid) > 1e-6)
            or (rel == "<=" and resid > 1e-6)
            or (rel == ">=" and resid < -1e-6)
        )
        if violated:
            raise NumericalFailure(
                f"constraint {idx} residual {resid:.3e} after optimal pivot"
            )
    return LpSolution("optimal", tuple(float(v) for v in x), float(c_orig @ x))


def lp_variable_order(
    remaining_sets: Sequence[Sequence[int]], per_round: Sequence[int]
) -> tuple[tuple[int, ...], ...]:
    """Set ids per color, in the exact order the relaxation builders assign
    selection variables: colors with a zero quota are dropped, ids ascend
    within a color."""
    return tuple(
        tuple(sorted(remaining_sets[h]))
        for h in range(len(per_round))
        if per_round[h] > 0
    )


def _relaxation_parts(
    system: SetSystem,
    remaining_sets: Sequence[Sequence[int]],
    uncovered_elems: Sequence[int],
    per_round: Sequence[int],
):
    uncovered = sorted(set(uncovered_elems))
    if not uncovered:
        raise ValueError("relaxation needs at least one uncovered element")
    if len(remaining_sets) < len(per_round):
        raise DimensionMismatch(
            f"{len(remaining_sets)} color buckets for {len(per_round)} quotas"
        )
    groups = lp_variable_order(remaining_sets, per_round)
    quotas = [p for p in per_round if p > 0]
    for h, p in enumerate(per_round):
        if p > 0 and len(remaining_sets[h]) < p:
            raise InsufficientColor(h, p, len(remaining_sets[h]))
    x_ids = [i for g in groups for i in g]
    nx = len(x_ids)
    ny = len(uncovered)
    nvar = nx + ny

    constraints: list[tuple[list[float], str, float]] = []
    pos = 0
    for g, p in zip(groups, quotas):
        row = [0.0] * nvar
        for off in range(len(g)):
            row[pos + off] = 1.0
        constraints.append((row, "=", float(p)))
        pos += len(g)
    col_of = {i: idx for idx, i in enumerate(x_ids)}
    for t, e in enumerate(uncovered):
        # Elements no remaining set touches get the row 0 - y_e >= 0,
        # which pins y_e to zero without special casing.
        row = [0.0] * nvar
        for i in system.element_sets[e]:
            if i in col_of:
                row[col_of[i]] = 1.0
        row[nx + t] = -1.0
        constraints.append((row, ">=", 0.0))
    return uncovered, x_ids, nx, ny, constraints


def build_mkcc_lp(
    system: SetSystem,
    remaining_sets: Sequence[Sequence[int]],
    uncovered_elems: Sequence[int],
    per_round: Sequence[int],
) -> LpProblem:
    """Coverage-maximizing relaxation of one quota round.

    Variables are one x per remaining set (order given by
    lp_variable_order) followed by one y per uncovered element ascending.
    Each active color's x mass is pinned to its quota; y_e is held below
    the mass of sets containing e. Maximize sum of y.
    """
    _, _, nx, ny, constraints = _relaxation_parts(
        system, remaining_sets, uncovered_elems, per_round
    )
    objective = [0.0] * nx + [1.0] * ny
    return LpProblem("max", objective, constraints)


def build_weighted_mkcc_lp(
    system: SetSystem,
    remaining_sets: Sequence[Sequence[int]],
    uncovered_elems: Sequence[int],
    per_round: Sequence[int],
    tau: int,
) -> LpProblem:
    """Weight-minimizing relaxation forced to cover at least tau new elements."""
    uncovered, x_ids, nx, ny, constraints = _relaxation_parts(
        system, remaining_sets, uncovered_elems, per_round
    )
    if not (1 <= tau <= len(uncovered)):
        raise ValueError(f"tau must lie in [1, {len(uncovered)}], got {tau}")
    row = [0.0] * nx + [1.0] * ny
    constraints.append((row, ">=", float(tau)))
    objective = [system.weight(i) for i in x_ids] + [0.0] * ny
    return LpProblem("min", objective, constraints)


def color_sampling_probs(
    values: Sequence[float],
    groups: Sequence[Sequence[int]],
    quotas: Sequence[int],
) -> list[np.ndarray]:
    """Turn the x part of an optimal relaxation into per-color sampling laws.

    values must start with the x block laid out like lp_variable_order's
    output. Each color's mass is clipped to [0,1]; if it then strays more
    than MASS_DRIFT_TOL from the quota the solve was numerically unsound
    and NumericalFailure is raised. The returned vectors sum to one.
    """
    out: list[np.ndarray] = []
    pos = 0
    for g, p in zip(groups, quotas):
        x = np.clip(np.array(values[pos : pos + len(g)]), 0.0, 1.0)
        pos += len(g)
        drift = abs(float(x.sum()) - p)
        if drift > MASS_DRIFT_TOL:
            raise NumericalFailure(
                f"color mass drifted {drift:.3e} from quota {p}"
            )
        out.append(x / x.sum())
    return out
