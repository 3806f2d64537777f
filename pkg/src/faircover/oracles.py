"""Exhaustive reference solvers. Slow on purpose, loud when oversized.

Each oracle enumerates candidates in a fixed order and returns the
lexicographically smallest optimum, so repeated runs agree bit for bit.
Element sets are packed into int bitmasks, which keeps the inner loops to
a few machine ops per candidate.
"""

from __future__ import annotations

from itertools import combinations, product
from math import comb
from typing import Sequence

from .errors import AllTuplesZeroCoverage, BudgetExceeded
from .model import Cover, FairnessSpec, SetSystem

MAX_SETS_EXACT = 22
MAX_SETS_EXACT_MULTI = 20
MAX_TUPLES = 10_000_000


def _masks(system: SetSystem) -> list[int]:
    out = []
    for s in system.sets:
        m = 0
        for e in s:
            m |= 1 << e
        out.append(m)
    return out


def opt_set_cover(system: SetSystem) -> Cover:
    """Smallest cover, quotas ignored; ties go to the lexicographically
    smallest selection. Refuses systems with more than MAX_SETS_EXACT sets."""
    mu = system.num_sets
    if mu > MAX_SETS_EXACT:
        raise BudgetExceeded(f"{mu} sets exceeds exact budget {MAX_SETS_EXACT}")
    masks = _masks(system)
    full = (1 << system.n) - 1
    for size in range(mu + 1):
        for combo in combinations(range(mu), size):
            acc = 0
            for i in combo:
                acc |= masks[i]
            if acc == full:
                return Cover.from_selection(system, combo)
    raise BudgetExceeded("universe is not coverable; validate the instance first")


def _fair_sizes(system: SetSystem, spec: FairnessSpec):
    """Yield t while a cover of t rounds is not obviously impossible."""
    sizes = system.group_sizes
    t = 1
    while True:
        ok = all(
            t * p <= (sizes[h] if h < len(sizes) else 0)
            for h, p in enumerate(spec.per_round)
            if p > 0
        )
        if not ok or t * spec.p > system.num_sets:
            return
        yield t
        t += 1


def opt_fair_cover(
    system: SetSystem, spec: FairnessSpec, weighted: bool = False
) -> Cover | None:
    """Exact optimum among covers meeting every quota, or None when no
    quota-respecting cover exists.

    Unweighted: minimum cardinality (fair covers only come in multiples of
    spec.p sets, so the scan walks t = 1, 2, ... rounds and stops at the
    first t admitting a cover). Weighted: minimum total weight over all
    feasible t, since more but lighter sets can beat a small cover.
    """
    mu = system.num_sets
    if mu > MAX_SETS_EXACT:
        raise BudgetExceeded(f"{mu} sets exceeds exact budget {MAX_SETS_EXACT}")
    masks = _masks(system)
    full = (1 << system.n) - 1
    by_color = system.sets_by_color
    best: tuple | None = None  # (weight, size, selection) for weighted mode

    for t in _fair_sizes(system, spec):
        count = 1
        for h, p in enumerate(spec.per_round):
            if p > 0:
                count *= comb(len(by_color[h]), t * p)
        if count > MAX_TUPLES:
            raise BudgetExceeded(
                f"{count} candidate selections at {t} rounds exceeds {MAX_TUPLES}"
            )
        pools = [
            combinations(by_color[h], t * p)
            for h, p in enumerate(spec.per_round)
            if p > 0
        ]
        found: tuple[int, ...] | None = None
        for parts in product(*pools):
            sel = tuple(sorted(i for part in parts for i in part))
            acc = 0
            for i in sel:
                acc |= masks[i]
            if acc != full:
                continue
            if not weighted:
                if found is None or sel < found:
                    found = sel
            else:
                w = sum(system.weight(i) for i in sel)
                key = (w, len(sel), sel)
                if best is None or key < best:
                    best = key
        if not weighted and found is not None:
            return Cover.from_selection(system, found)
    if weighted and best is not None:
        return Cover.from_selection(system, best[2])
    return None


def opt_mkcc(
    system: SetSystem,
    uncovered: Sequence[int],
    remaining_sets: Sequence[Sequence[int]],
    per_round: Sequence[int],
    weighted_ratio: bool = False,
) -> tuple[tuple[int, ...], float]:
    """Best single quota round by exhaustive tuple enumeration.

    Default objective: maximize newly covered elements. With weighted_ratio,
    minimize total weight per newly covered element, skipping tuples that
    cover nothing. Returns (ids ascending, objective value); ties prefer the
    lexicographically smallest tuple.
    """
    unc = frozenset(uncovered)
    count = 1
    for h, p in enumerate(per_round):
        if p > 0:
            count *= comb(len(remaining_sets[h]), p)
    if count > MAX_TUPLES:
        raise BudgetExceeded(f"{count} tuples exceeds {MAX_TUPLES}")
    pools = [
        combinations(sorted(remaining_sets[h]), p)
        for h, p in enumerate(per_round)
        if p > 0
    ]
    best_key: tuple | None = None
    best_val: tuple[tuple[int, ...], float] | None = None
    for parts in product(*pools):
        ids = tuple(sorted(i for part in parts for i in part))
        cov_elems = set()
        for i in ids:
            cov_elems.update(system.sets[i])
        new = len(cov_elems & unc)
        if weighted_ratio:
            if new == 0:
                continue
            val = sum(system.weight(i) for i in ids) / new
            key = (val, ids)
        else:
            val = float(new)
            key = (-new, ids)
        if best_key is None or key < best_key:
            best_key = key
            best_val = (ids, val)
    if best_val is None:
        raise AllTuplesZeroCoverage("no tuple with positive coverage exists")
    return best_val


def opt_fair_multicover(instance, spec: FairnessSpec) -> Cover | None:
    """Exact minimum-size quota-respecting selection meeting every element's
    coverage requirement, or None if impossible. Capped at
    MAX_SETS_EXACT_MULTI sets."""
    system: SetSystem = instance.base
    reqs = instance.requirements
    mu = system.num_sets
    if mu > MAX_SETS_EXACT_MULTI:
        raise BudgetExceeded(
            f"{mu} sets exceeds exact budget {MAX_SETS_EXACT_MULTI}"
        )
    by_color = system.sets_by_color
    for t in _fair_sizes(system, spec):
        count = 1
        for h, p in enumerate(spec.per_round):
            if p > 0:
                count *= comb(len(by_color[h]), t * p)
        if count > MAX_TUPLES:
            raise BudgetExceeded(
                f"{count} candidate selections at {t} rounds exceeds {MAX_TUPLES}"
            )
        pools = [
            combinations(by_color[h], t * p)
            for h, p in enumerate(spec.per_round)
            if p > 0
        ]
        found: tuple[int, ...] | None = None
        for parts in product(*pools):
            sel = tuple(sorted(i for part in parts for i in part))
            counts = [0] * system.n
            for i in sel:
                for e in system.sets[i]:
                    counts[e] += 1
            if all(counts[j] >= reqs[j] for j in range(system.n)):
                if found is None or sel < found:
                    found = sel
        if found is not None:
            return Cover.from_selection(system, found)
    return None
