"""Arc search: greedy, exact, completeness, and proof flags."""

import pytest

from unitiso.arcs import (
    ArcBudgetExceeded,
    ArcError,
    ArcInfeasible,
    CollinearityIndex,
    find_arc,
    is_arc,
    is_complete_arc,
    max_arc,
)
from unitiso.designs import complement


def test_collinearity_index(u2):
    idx = CollinearityIndex(u2)
    for j, B in enumerate(u2.blocks):
        assert idx.block_of(B[0], B[1]) == j
        assert idx.block_of(B[1], B[0]) == j


def test_collinearity_needs_lambda_one(u2):
    with pytest.raises(ArcError):
        CollinearityIndex(complement(u2))


def test_is_arc_small_sets_vacuous(u2):
    assert is_arc(u2, [])
    assert is_arc(u2, [5])
    assert is_arc(u2, [0, 8])
    assert not is_arc(u2, u2.blocks[0])  # a block is maximally collinear


def test_is_arc_rejects_bad_input(u2):
    with pytest.raises(ArcError):
        is_arc(u2, [0, 0])
    with pytest.raises(ArcError):
        is_arc(u2, [99])


def test_max_arc_fano(fano):
    size, witness, proven = max_arc(fano)
    assert (size, proven) == (4, True)
    assert is_arc(fano, witness)
    assert is_complete_arc(fano, witness)


def test_max_arc_u2(u2):
    size, witness, proven = max_arc(u2)
    assert (size, proven) == (4, True)
    assert is_complete_arc(u2, witness)


def test_find_arc_exact_u2_infeasible_above_max(u2):
    with pytest.raises(ArcInfeasible):
        find_arc(u2, 5, "exact")


def test_find_arc_greedy_budget(u2):
    with pytest.raises(ArcBudgetExceeded):
        find_arc(u2, 5, "greedy", restarts=8)


def test_find_arc_exact_budget(herm3):
    with pytest.raises(ArcBudgetExceeded):
        find_arc(herm3, 9, "exact", budget=50)  # max is 8, tiny budget trips first


def test_find_arc_bad_args(u2):
    with pytest.raises(ArcError):
        find_arc(u2, 0)
    with pytest.raises(ArcError):
        find_arc(u2, 10)
    with pytest.raises(ArcError):
        find_arc(u2, 3, mode="simulated-annealing")


def test_find_arc_hermitian3(herm3):
    arc = find_arc(herm3, 6, "exact")
    assert len(arc) >= 6
    assert is_arc(herm3, arc)
    greedy = find_arc(herm3, 7, "greedy", seed=0)
    assert len(greedy) >= 7
    assert is_arc(herm3, greedy)


def test_max_arc_hermitian3_frozen(herm3):
    size, witness, proven = max_arc(herm3, budget=30_000_000)
    assert (size, proven) == (8, True)  # frozen: proven by full tree search
    assert is_complete_arc(herm3, witness)


def test_find_arc_hermitian4(herm4):
    arc = find_arc(herm4, 11, "exact")
    assert len(arc) >= 11
    assert is_arc(herm4, arc)


def test_bm_complete_ten_arc(bm3_subfield):
    arc = find_arc(bm3_subfield, 10, "exact")
    assert len(arc) == 10
    assert is_complete_arc(bm3_subfield, arc)


def test_arc_size_never_exceeds_cap(u2, herm3, bm3_subfield):
    # searched arcs stay within n^2 + 1 on unitals of order n
    for d, cap in ((u2, 5), (herm3, 10), (bm3_subfield, 10)):
        size, witness, proven = max_arc(d, budget=40_000_000)
        assert size <= cap


def test_greedy_is_deterministic(herm3):
    a = find_arc(herm3, 7, "greedy", seed=11)
    b = find_arc(herm3, 7, "greedy", seed=11)
    assert a == b
