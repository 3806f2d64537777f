"""Quota-respecting multicover: elements demand several covers, rounds pay for them.

An element j is alive while fewer than requirements[j] selected sets
contain it. Rounds work exactly like the single-cover quota greedy but
score tuples by alive elements touched, and every committed round writes a
pricing ledger: each alive element in the round's union gets one entry of
(round size) / (alive elements touched). Those prices make two audit
identities exact: entries sum to the cover size, and each round's entries
sum to the round size. A third, inequality-shaped audit bounds any single
set's terminal prices by the harmonic series, which is the engine of the
size guarantee (at most k (ln n + 1) times the optimal fair multicover).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AuditFailure, InfeasibleRequirement, NoProgress
from .lp import LpSolver, solve
from .model import Cover, FairnessSpec, SetSystem
from .unweighted import (
    ZERO_PROGRESS_RESAMPLES,
    GreedyState,
    _check_availability,
    as_rng,
    best_coverage_tuple,
    mkcc_greedy,
    sample_round_tuple,
    _solve_round_probs,
    TUPLE_BUDGET,
)

MODES = ("exhaustive", "mkcc_sub")


@dataclass(frozen=True)
class MulticoverInstance:
    """A set system plus a per-element coverage requirement (all >= 1)."""

    base: SetSystem
    requirements: tuple[int, ...]

    def __init__(self, base: SetSystem, requirements: Sequence[int]):
        reqs = tuple(int(r) for r in requirements)
        if len(reqs) != base.n:
            raise ValueError(f"{len(reqs)} requirements for {base.n} elements")
        if any(r < 1 for r in reqs):
            raise ValueError("requirements must be at least 1")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "requirements", reqs)


@dataclass(frozen=True)
class PriceEntry:
    round_index: int
    element: int
    occurrence: int
    price: float


@dataclass(frozen=True)
class PriceLedger:
    """Audit trail of a multicover run.

    entries hold one record per (round, alive element touched); occurrence
    indices per element are contiguous 1, 2, ... up to the number of rounds
    that touched it while alive. alive_history[r] is how many elements were
    alive entering round r.
    """

    entries: tuple[PriceEntry, ...]
    alive_history: tuple[int, ...]

    def total_price(self) -> float:
        return sum(e.price for e in self.entries)

    def round_prices(self) -> dict[int, float]:
        sums: dict[int, float] = {}
        for e in self.entries:
            sums[e.round_index] = sums.get(e.round_index, 0.0) + e.price
        return sums

    def terminal_price(self) -> dict[int, float]:
        """Last (highest occurrence) price each element ever paid."""
        last: dict[int, float] = {}
        for e in self.entries:  # entries are in commit order
            last[e.element] = e.price
        return last


def fair_multicover_greedy(
    instance: MulticoverInstance,
    spec: FairnessSpec,
    mode: str = "exhaustive",
    rng: np.random.Generator | int | None = None,
    lp_solver: LpSolver = solve,
    tuple_budget: int = TUPLE_BUDGET,
) -> tuple[Cover, PriceLedger]:
    """Cover every element at least requirements[j] times with quota rounds.

    mode='exhaustive' scores each round over all quota tuples by alive
    elements touched (with every requirement at one this reproduces the
    single-cover quota greedy exactly, prices aside). mode='mkcc_sub'
    rounds the coverage relaxation built over the alive elements, redrawing
    and finally falling back to the marginal greedy when a sample touches
    no alive element.

    An element inside q sets of a committed round advances its coverage
    count by q, but it is priced once per round: one ledger entry of
    round_size / (alive elements the round touched).
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}, expected one of {MODES}")
    rng = as_rng(rng)
    system = instance.base
    for j in range(system.n):
        have = len(system.element_sets[j])
        if instance.requirements[j] > have:
            raise InfeasibleRequirement(j, instance.requirements[j], have)

    state = GreedyState.fresh(system)
    counts = [0] * system.n
    alive = {j for j in range(system.n) if instance.requirements[j] > 0}
    round_size = sum(spec.per_round)
    entries: list[PriceEntry] = []
    occurrences = [0] * system.n
    alive_history: list[int] = []
    round_index = 0

    while alive:
        _check_availability(state.remaining, spec.per_round)
        state.uncovered = set(alive)  # tuple scoring targets alive elements
        if mode == "exhaustive":
            ids = best_coverage_tuple(system, state, spec.per_round, tuple_budget)
        else:
            groups, quotas, probs, _ = _solve_round_probs(
                system, state, spec.per_round, lp_solver
            )
            ids = sample_round_tuple(groups, quotas, probs, rng)
            retries = 0
            while (
                state.new_coverage(system, ids) == 0
                and retries < ZERO_PROGRESS_RESAMPLES
            ):
                ids = sample_round_tuple(groups, quotas, probs, rng)
                retries += 1
            if state.new_coverage(system, ids) == 0:
                ids = mkcc_greedy(system, state, spec.per_round)
        touched = sorted(
            j for j in alive if any(j in system.frozen_sets[i] for i in ids)
        )
        if not touched:
            raise NoProgress("no quota tuple touches an alive element")
        alive_history.append(len(alive))
        price = round_size / len(touched)
        for j in touched:
            occurrences[j] += 1
            entries.append(PriceEntry(round_index, j, occurrences[j], price))
        for i in ids:
            for e in system.sets[i]:
                counts[e] += 1
        alive = {j for j in alive if counts[j] < instance.requirements[j]}
        state.uncovered = set(alive)
        state.remaining = [
            [i for i in g if i not in ids] for g in state.remaining
        ]
        state.selected.extend(ids)
        state.rounds.append(tuple(ids))
        round_index += 1

    cover = Cover.from_rounds(system, state.rounds)
    return cover, PriceLedger(tuple(entries), tuple(alive_history))


@dataclass(frozen=True)
class AuditReport:
    ok: bool
    total_price: float
    cover_size: int
    max_round_deviation: float


def audit_price_identity(
    cover: Cover, ledger: PriceLedger, spec: FairnessSpec, tol: float = 1e-9
) -> AuditReport:
    """Assert the exact pricing identities.

    All entries together must sum to the cover size, and each round's
    entries must sum to the round size sum(per_round). Raises AuditFailure
    naming the first offending round."""
    round_size = float(sum(spec.per_round))
    sums = ledger.round_prices()
    max_dev = 0.0
    for r in range(len(cover.rounds)):
        dev = abs(sums.get(r, 0.0) - round_size)
        max_dev = max(max_dev, dev)
        if dev > tol:
            raise AuditFailure(
                f"round {r} prices sum to {sums.get(r, 0.0)!r}, expected {round_size}"
            )
    total = ledger.total_price()
    if abs(total - cover.size) > tol * max(1, cover.size):
        raise AuditFailure(
            f"ledger total {total!r} differs from cover size {cover.size}"
        )
    return AuditReport(True, total, cover.size, max_dev)


def audit_harmonic_bound(
    instance: MulticoverInstance, ledger: PriceLedger, tol: float = 1e-9
) -> float:
    """Assert every set's terminal prices stay under k * H_n.

    For each set (picked or not), summing the last price of each of its
    elements must not exceed num_colors times the n-th harmonic number.
    Returns the largest ratio observed; raises AuditFailure past 1."""
    system = instance.base
    n = system.n
    h_n = sum(1.0 / i for i in range(1, n + 1))
    bound = system.num_colors * h_n
    terminal = ledger.terminal_price()
    worst = 0.0
    for i, s in enumerate(system.sets):
        total = sum(terminal.get(e, 0.0) for e in s)
        if total > bound + tol:
            raise AuditFailure(
                f"set {i} terminal prices {total!r} exceed bound {bound!r}"
            )
        if bound > 0:
            worst = max(worst, total / bound)
    return worst
