"""Exhaustive reference solvers: hand-checkable examples plus budget walls."""

import pytest

from faircover.errors import BudgetExceeded
from faircover.io_generators import gen_synthetic
from faircover.model import FairnessSpec, SetSystem, count_parity
from faircover.multicover import MulticoverInstance
from faircover.oracles import (
    opt_fair_cover,
    opt_fair_multicover,
    opt_mkcc,
    opt_set_cover,
)

from support import all_covers


def square_system(weights=None):
    return SetSystem(6, [[0, 1, 2], [3, 4], [3, 4, 5], [0, 5]], [0, 0, 1, 1], weights)


# -------------------------------------------------------------- opt_set_cover


def test_opt_set_cover_chain():
    sys_ = SetSystem(4, [[0, 1, 2], [2, 3], [3]], [0, 0, 0])
    cover = opt_set_cover(sys_)
    assert cover.selected == (0, 1)
    assert cover.size == 2


def test_opt_set_cover_prefers_lexicographic_minimum():
    # Two optimal pairs exist; (0, 2) beats (1, 2).
    sys_ = SetSystem(4, [[0, 1], [0, 1], [2, 3]], [0, 0, 0])
    assert opt_set_cover(sys_).selected == (0, 2)


def test_opt_set_cover_matches_independent_enumeration():
    sys_ = gen_synthetic(10, 5, 2, coverage_dist=("uniform", 0.35), seed=5)
    cover = opt_set_cover(sys_)
    sizes = [len(c) for c in all_covers(sys_)]
    assert cover.size == min(sizes)


def test_opt_set_cover_budget_wall():
    sys_ = SetSystem(1, [[0]] * 23, [0] * 23)
    with pytest.raises(BudgetExceeded):
        opt_set_cover(sys_)


# ------------------------------------------------------------- opt_fair_cover


def test_opt_fair_cover_square():
    cover = opt_fair_cover(square_system(), count_parity(2))
    assert cover.selected == (0, 2)
    assert cover.group_counts == (1, 1)


def test_opt_fair_cover_reports_infeasible_as_none():
    # One pair cannot cover all three elements and color 1 cannot supply two.
    sys_ = SetSystem(3, [[0], [1], [2]], [0, 0, 1])
    assert opt_fair_cover(sys_, count_parity(2)) is None


def test_opt_fair_cover_never_beats_unfair_optimum():
    for seed in range(8):
        sys_ = gen_synthetic(9, 4, 2, coverage_dist=("uniform", 0.4), seed=seed)
        fair = opt_fair_cover(sys_, count_parity(2))
        if fair is None:
            continue
        assert fair.size >= opt_set_cover(sys_).size
        assert fair.covers_universe(sys_)
        assert fair.group_counts[0] == fair.group_counts[1]


def test_opt_fair_cover_weighted_can_prefer_more_sets():
    # One heavy pair covers everything; two light pairs also do at less weight.
    sys_ = SetSystem(
        4,
        [[0, 1], [0], [1], [2, 3], [2], [3]],
        [0, 0, 0, 1, 1, 1],
        [10.0, 1.0, 1.0, 10.0, 1.0, 1.0],
    )
    light = opt_fair_cover(sys_, count_parity(2), weighted=True)
    assert light.selected == (1, 2, 4, 5)
    assert light.total_weight == pytest.approx(4.0)
    small = opt_fair_cover(sys_, count_parity(2), weighted=False)
    assert small.size == 2


def test_opt_fair_cover_respects_uneven_fractions():
    sys_ = SetSystem(6, [[0, 1, 2], [0, 1], [3, 4], [5], [4, 5]],
                     [0, 0, 1, 1, 1])
    spec = FairnessSpec(["1/3", "2/3"])
    cover = opt_fair_cover(sys_, spec)
    assert cover.selected == (0, 2, 3)
    assert cover.group_counts == (1, 2)


# ------------------------------------------------------------------ opt_mkcc


def test_opt_mkcc_square_full_round():
    sys_ = square_system()
    ids, value = opt_mkcc(sys_, range(6), sys_.sets_by_color, (1, 1))
    assert ids == (0, 2)
    assert value == 6.0


def test_opt_mkcc_respects_uncovered_restriction():
    sys_ = square_system()
    ids, value = opt_mkcc(sys_, [5], sys_.sets_by_color, (1, 1))
    assert value == 1.0
    # Both colors must still contribute; ties go lexicographic.
    assert ids == (0, 2)


def test_opt_mkcc_weighted_ratio():
    sys_ = square_system([4.0, 1.0, 1.0, 1.0])
    ids, value = opt_mkcc(
        sys_, range(6), sys_.sets_by_color, (1, 1), weighted_ratio=True
    )
    # (1, 3) covers {0, 3, 4, 5} at weight 2, beating (0, 2)'s 5 over 6.
    assert ids == (1, 3)
    assert value == pytest.approx(0.5)


def test_opt_mkcc_budget_wall():
    sys_ = SetSystem(2, [[0], [1]] * 30, [0, 1] * 30)
    with pytest.raises(BudgetExceeded):
        opt_mkcc(sys_, range(2), sys_.sets_by_color, (10, 10))


# -------------------------------------------------------- opt_fair_multicover


def test_opt_fair_multicover_single_element_double_demand():
    sys_ = SetSystem(1, [[0], [0], [0], [0]], [0, 0, 1, 1])
    inst = MulticoverInstance(sys_, [2])
    cover = opt_fair_multicover(inst, count_parity(2))
    assert cover.selected == (0, 2)
    assert cover.size == 2


def test_opt_fair_multicover_needs_more_rounds():
    sys_ = SetSystem(2, [[0, 1], [0], [1], [0, 1], [0], [1]], [0, 0, 0, 1, 1, 1])
    inst = MulticoverInstance(sys_, [3, 1])
    cover = opt_fair_multicover(inst, count_parity(2))
    assert cover is not None
    counts = [0, 0]
    for i in cover.selected:
        for e in sys_.sets[i]:
            counts[e] += 1
    assert counts[0] >= 3 and counts[1] >= 1
    assert cover.size == 4


def test_opt_fair_multicover_infeasible_is_none():
    sys_ = SetSystem(1, [[0], [0]], [0, 1])
    inst = MulticoverInstance(sys_, [2])
    # A fair selection needs equal counts; both sets cover the element, so
    # (0, 1) works. Tighten demand past the supply and nothing does.
    assert opt_fair_multicover(inst, count_parity(2)) is not None
    inst3 = MulticoverInstance(SetSystem(1, [[0], [0], [0]], [0, 0, 1]), [3])
    assert opt_fair_multicover(inst3, count_parity(2)) is None
