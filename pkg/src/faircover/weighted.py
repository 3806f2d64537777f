"""Weighted variants: cheapest-coverage greedy and LP rounding with a
coverage-target sweep.

The randomized round here differs from the unweighted one: instead of a
single coverage-maximizing relaxation, every coverage target tau from one
to the number of still-uncovered elements gets its own weight-minimizing
relaxation, each is rounded by rejection sampling until the sample covers
at least half of (1 - 1/e) * tau new elements, and the round with the best
cost per newly covered element wins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    AllTauInfeasible,
    AllTuplesZeroCoverage,
    BudgetExceeded,
    InsufficientColor,
    NumericalFailure,
    ResampleCapExceeded,
)
from .lp import LpSolver, build_weighted_mkcc_lp, color_sampling_probs, lp_variable_order, solve
from .model import Cover, FairnessSpec, SetSystem
from .unweighted import (
    TUPLE_BUDGET,
    GreedyState,
    _check_availability,
    _iter_tuples,
    _pad_target_rounds,
    _tuple_count,
    as_rng,
    sample_round_tuple,
)

# Fraction of tau a sampled round must newly cover to be accepted.
ACCEPT_FACTOR = 0.5 * (1.0 - 1.0 / math.e)


def accept_threshold(tau: int) -> int:
    """Minimum new coverage an accepted sample must reach for target tau."""
    return math.ceil(ACCEPT_FACTOR * tau)


def resample_cap(n: int) -> int:
    """Attempt budget per target: four times the expected number of draws
    until acceptance (success probability is at least (1 - 1/e) / (2n))."""
    return math.ceil(8 * n / (1.0 - 1.0 / math.e))


@dataclass(frozen=True)
class TauCandidate:
    """One accepted round from the sweep.

    lp_objective is the relaxation's optimal weight for this target; ratio
    divides it by the sample's realized new coverage, which is the sweep's
    selection key (the sampled tuple's actual weight plays no part in it).
    """

    tau: int
    lp_objective: float
    ids: tuple[int, ...]
    covered_new: int
    ratio: float


def naive_wfsc(system: SetSystem, spec: FairnessSpec) -> Cover:
    """Weight-greedy cover, then cheapest per-color padding to the quotas.

    The greedy phase picks the set minimizing weight per newly covered
    element; padding then fills each group's quota with its cheapest
    unpicked sets. Guarantee: k * delta * (ln n + 1) times the optimal
    quota-respecting weight, delta being the weight spread."""
    state = GreedyState.fresh(system)
    picked: set[int] = set()
    while state.uncovered:
        best_key: tuple[float, int] | None = None
        best_i = -1
        for i in range(system.num_sets):
            if i in picked:
                continue
            new = len(system.frozen_sets[i] & state.uncovered)
            if new == 0:
                continue
            key = (system.weight(i) / new, i)
            if best_key is None or key < best_key:
                best_key = key
                best_i = i
        if best_i < 0:
            raise AllTuplesZeroCoverage(
                "uncovered elements remain but no set touches them"
            )
        picked.add(best_i)
        state.commit(system, (best_i,))
    counts = list(state.to_cover(system).group_counts)
    counts += [0] * (spec.num_colors - len(counts))
    t = _pad_target_rounds(spec, counts)
    pads: list[int] = []
    for h, p in enumerate(spec.per_round):
        need = t * p - counts[h]
        if need == 0:
            continue
        avail = sorted(
            (i for i in system.sets_by_color[h] if i not in picked),
            key=lambda i: (system.weight(i), i),
        )
        if len(avail) < need:
            raise InsufficientColor(h, need, len(avail))
        pads.extend(avail[:need])
    rounds = list(state.rounds)
    if pads:
        rounds.append(tuple(sorted(pads)))
    return Cover.from_rounds(system, rounds)


def greedy_weighted_allpick(
    system: SetSystem,
    spec: FairnessSpec,
    tuple_budget: int = TUPLE_BUDGET,
) -> Cover:
    """Quota-respecting greedy minimizing weight per newly covered element.

    Rounds enumerate every quota tuple, skip those covering nothing new,
    and commit the cheapest per new element (ties to the lexicographically
    smallest tuple). Guarantee: delta * (ln n + 1) times the optimal
    quota-respecting weight."""
    state = GreedyState.fresh(system)
    while state.uncovered:
        _check_availability(state.remaining, spec.per_round)
        count = _tuple_count(state.remaining, spec.per_round)
        if count > tuple_budget:
            raise BudgetExceeded(
                f"{count} candidate tuples per round exceeds budget {tuple_budget}"
            )
        best_key: tuple[float, tuple[int, ...]] | None = None
        for ids in _iter_tuples(state.remaining, spec.per_round):
            new = state.new_coverage(system, ids)
            if new == 0:
                continue
            w = sum(system.weight(i) for i in ids)
            key = (w / new, ids)
            if best_key is None or key < best_key:
                best_key = key
        if best_key is None:
            raise AllTuplesZeroCoverage("every quota tuple covers zero new elements")
        state.commit(system, best_key[1])
    return state.to_cover(system)


def weighted_mkcc_round(
    system: SetSystem,
    state: GreedyState,
    per_round: Sequence[int],
    rng: np.random.Generator | int | None = None,
    lp_solver: LpSolver = solve,
) -> TauCandidate:
    """Sweep coverage targets and return the accepted round with the best
    relaxation weight per newly covered element.

    For each tau = 1 .. |uncovered|: solve the weight-minimizing relaxation
    pinned to cover at least tau, then rejection-sample quota tuples from
    the fractional masses until one newly covers accept_threshold(tau)
    elements. Targets whose relaxation is infeasible end the sweep (larger
    targets only get harder). Ties on the ratio prefer the smallest target.

    Raises AllTauInfeasible when no target is feasible and
    ResampleCapExceeded when a target's sampler exhausts resample_cap(n)
    draws without an acceptable tuple.
    """
    rng = as_rng(rng)
    _check_availability(state.remaining, per_round)
    uncovered = sorted(state.uncovered)
    if not uncovered:
        raise ValueError("nothing left to cover")
    groups = lp_variable_order(state.remaining, per_round)
    quotas = [p for p in per_round if p > 0]
    cap = resample_cap(system.n)
    best: TauCandidate | None = None
    for tau in range(1, len(uncovered) + 1):
        lp = build_weighted_mkcc_lp(system, state.remaining, uncovered, per_round, tau)
        sol = lp_solver(lp)
        if sol.status == "infeasible":
            break
        if sol.status != "optimal":
            raise NumericalFailure(f"target {tau} relaxation came back {sol.status}")
        probs = color_sampling_probs(sol.values, groups, quotas)
        threshold = accept_threshold(tau)
        accepted: tuple[int, ...] | None = None
        covered = 0
        for _ in range(cap):
            ids = sample_round_tuple(groups, quotas, probs, rng)
            covered = state.new_coverage(system, ids)
            if covered >= threshold:
                accepted = ids
                break
        if accepted is None:
            raise ResampleCapExceeded(
                f"target {tau}: no sample met coverage {threshold} in {cap} draws"
            )
        ratio = sol.objective / covered
        if best is None or ratio < best.ratio:
            best = TauCandidate(tau, sol.objective, accepted, covered, ratio)
    if best is None:
        raise AllTauInfeasible("no coverage target admits a feasible relaxation")
    return best


def eff_wfsc(
    system: SetSystem,
    spec: FairnessSpec,
    rng: np.random.Generator | int | None = None,
    lp_solver: LpSolver = solve,
) -> Cover:
    """Quota-respecting weighted cover via the coverage-target sweep.

    Each committed round is the sweep winner's accepted sample, which by
    construction covers at least one new element, so the loop always makes
    progress. Expected guarantee: e/(e-1) * delta * (ln n + 1) times the
    optimal quota-respecting weight."""
    rng = as_rng(rng)
    state = GreedyState.fresh(system)
    while state.uncovered:
        cand = weighted_mkcc_round(system, state, spec.per_round, rng, lp_solver)
        state.commit(system, cand.ids)
    return state.to_cover(system)
