import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bipinv.balance import (
    SwitchingFunction,
    WeightedGraph,
    analyze,
    apply_switching,
    chordless_negative_cycle,
    cycle_sign,
    find_odd_flower,
    inverse_graph,
    is_balanced,
    nonnegative_inverse,
)
from bipinv.errors import MissingVertex, PreconditionViolated
from bipinv.generators import random_matched_tree, random_unique_pm_graph
from bipinv.matching import flower_check, tau_counts, unique_perfect_matching, validate_flower
from bipinv.oracles import balance_exhaustive, exact_inverse, adjacency_matrix

from conftest import C1, C2, C3, C4, R1, R2, R3, R4

W8_INVERSE = [
    (R1, C1, 1), (R1, C2, -1), (R1, C4, 1),
    (R2, C2, 1), (R2, C3, -1),
    (R3, C3, 1), (R3, C4, -1),
    (R4, C4, 1),
]


def test_inverse_graph_w8(w8):
    W = inverse_graph(w8, unique_perfect_matching(w8))
    assert W.edges() == sorted(W8_INVERSE)


def test_inverse_graph_p4_and_k2(p4, k2):
    assert inverse_graph(k2, unique_perfect_matching(k2)).edges() == [(0, 1, 1)]
    assert inverse_graph(p4, unique_perfect_matching(p4)).edges() == [(0, 1, 1), (0, 3, -1), (2, 3, 1)]


def test_inverse_graph_matches_rational_inverse(w8):
    W = inverse_graph(w8, unique_perfect_matching(w8))
    inv = exact_inverse(adjacency_matrix(w8))
    assert W.to_matrix().tolist() == [[int(x) for x in row] for row in inv]


def test_weighted_graph_validation():
    with pytest.raises(ValueError):
        WeightedGraph.from_edges(2, [(0, 0, 1)])
    with pytest.raises(ValueError):
        WeightedGraph.from_edges(2, [(0, 1, 0)])
    with pytest.raises(ValueError):
        WeightedGraph.from_edges(2, [(0, 1, 1), (1, 0, 2)])
    with pytest.raises(ValueError):
        WeightedGraph.from_matrix([[0, 1], [2, 0]])
    W = WeightedGraph.from_matrix([[0, -3], [-3, 0]])
    assert W.edges() == [(0, 1, -3)]
    assert W.weight(1, 0) == -3 and W.weight(0, 0) == 0


def test_apply_switching_example():
    W = WeightedGraph.from_edges(3, [(0, 1, 2), (1, 2, -1)])
    S = apply_switching(W, SwitchingFunction((1, -1, 1)))
    assert S.edges() == [(0, 1, -2), (1, 2, 1)]


def test_apply_switching_is_an_involution():
    W = WeightedGraph.from_edges(4, [(0, 1, 2), (1, 2, -1), (2, 3, 5), (0, 3, -7)])
    z = (1, -1, -1, 1)
    assert apply_switching(apply_switching(W, z), z) == W


def test_apply_switching_missing_vertex():
    W = WeightedGraph.from_edges(3, [(0, 2, 1)])
    with pytest.raises(MissingVertex):
        apply_switching(W, (1, 1))


def test_switching_values_validated():
    with pytest.raises(ValueError):
        SwitchingFunction((1, 0))


def test_is_balanced_examples():
    pos_square = WeightedGraph.from_edges(4, [(0, 1, 1), (1, 2, -1), (2, 3, -1), (0, 3, 1)])
    v = is_balanced(pos_square)
    assert v.balanced
    assert all(w > 0 for _, _, w in apply_switching(pos_square, v.zeta).edges())

    neg_square = WeightedGraph.from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, -1)])
    v = is_balanced(neg_square)
    assert not v.balanced
    assert v.cycle == (0, 1, 2, 3)
    assert cycle_sign(neg_square, v.cycle) == -1

    forest = WeightedGraph.from_edges(5, [(0, 1, -1), (3, 4, -2)])
    v = is_balanced(forest)
    assert v.balanced and v.zeta.zeta == (1, -1, 1, 1, -1)


def test_is_balanced_empty_and_isolated():
    assert is_balanced(WeightedGraph.from_edges(0, [])).balanced
    assert is_balanced(WeightedGraph.from_edges(3, [])).zeta.zeta == (1, 1, 1)


def test_chordless_on_a_chordless_negative_cycle():
    W = WeightedGraph.from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, -1)])
    assert chordless_negative_cycle(W) == (0, 1, 2, 3)


def test_chordless_splits_off_the_negative_triangle():
    # negative 4-cycle 0-1-2-3 with positive chord 0-2: triangle 0-2-3 carries the sign
    W = WeightedGraph.from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, -1), (0, 2, 1)])
    cyc = chordless_negative_cycle(W, (0, 1, 2, 3))
    assert cyc == (0, 2, 3)
    assert cycle_sign(W, cyc) == -1


def test_chordless_preconditions():
    W = WeightedGraph.from_edges(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    with pytest.raises(PreconditionViolated):
        chordless_negative_cycle(W)
    with pytest.raises(PreconditionViolated):
        chordless_negative_cycle(W, (0, 1, 2))


def test_w8_verdict_cycle_and_flower(w8):
    res = analyze(w8)
    assert not res.verdict.balanced
    assert res.cycle == (0, 5, 1, 6, 2, 7)
    assert res.flower.order == (0, 5, 1, 6, 2, 7)
    assert res.flower.negative_pair_count == 3 and res.flower.odd
    M = unique_perfect_matching(w8)
    validate_flower(w8, M, res.flower)
    assert flower_check(w8, M, res.cycle) == res.flower
    assert nonnegative_inverse(w8) == res.flower


def test_p4_nonnegative_form(p4):
    B_plus, D = nonnegative_inverse(p4)
    assert B_plus.tolist() == [[1, 0], [1, 1]]
    assert D == (1, -1)
    res = analyze(p4)
    assert res.verdict.zeta.zeta == (1, 1, -1, -1)
    assert res.det == 1
    assert find_odd_flower(p4) is None


def test_nonnegative_form_is_diagonal_similarity(p4):
    res = analyze(p4)
    d = np.diag(res.D).astype(object)
    assert (d.dot(res.B_inv).dot(d)).tolist() == res.B_plus.tolist()


@pytest.mark.parametrize("seed", range(20))
def test_trees_have_nonnegative_inverses(seed):
    G = random_matched_tree(1 + seed % 12, seed)
    res = analyze(G)
    assert res.nonnegative and np.all(res.B_plus >= 0)


@settings(max_examples=60, deadline=None)
@given(pairs=st.integers(1, 6), p=st.floats(0, 1), seed=st.integers(0, 2**31 - 1))
def test_pipeline_against_exhaustive_switching(pairs, p, seed):
    G = random_unique_pm_graph(pairs, p, seed)
    res = analyze(G)
    oracle = balance_exhaustive(res.inverse)
    assert oracle.balanced == res.verdict.balanced
    if res.nonnegative:
        assert np.all(res.B_plus >= 0)
    else:
        assert res.flower.odd
        assert cycle_sign(res.inverse, res.cycle) == -1


@settings(max_examples=40, deadline=None)
@given(pairs=st.integers(1, 6), p=st.floats(0, 1), seed=st.integers(0, 2**31 - 1))
def test_inverse_weights_are_signed_path_counts(pairs, p, seed):
    G = random_unique_pm_graph(pairs, p, seed)
    M = unique_perfect_matching(G)
    W = inverse_graph(G, M)
    for r, _ in M.pairs:
        for _, c in M.pairs:
            prof = tau_counts(G, M, r, c)
            assert W.weight(r, c) == prof.signed
            assert (W.weight(r, c) == 0) == (prof.tau_e == prof.tau_o)
