from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from bipinv.balance import analyze
from bipinv.errors import NotUnitTriangular, Singular, TooLarge
from bipinv.generators import (
    corpus_records,
    dump_manifest,
    load_manifest,
    random_dag,
    random_matched_tree,
    random_unique_pm_graph,
    regenerate,
)
from bipinv.graph import bipartite_adjacency
from bipinv.linalg import triangularize
from bipinv.matching import unique_perfect_matching
from bipinv.oracles import (
    adjacency_matrix,
    bareiss_det,
    det_via_sachs,
    enumerate_alternating_paths,
    enumerate_perfect_matchings,
    exact_inverse,
    inverse_entry_via_paths_sachs,
    kronecker_graph,
    kronecker_product,
    quotient_by_matching,
    sachs_subgraphs,
)

from conftest import C1, C4, R1

TRIANGLE = (3, [(0, 1), (1, 2), (0, 2)])
C6 = (6, [(i, (i + 1) % 6) for i in range(6)])


def test_small_determinants(k2, c4):
    assert det_via_sachs(c4) == 0
    assert det_via_sachs(TRIANGLE) == 2
    assert det_via_sachs(k2) == -1
    assert bareiss_det(adjacency_matrix(TRIANGLE)) == 2
    assert bareiss_det(np.zeros((0, 0), dtype=object)) == 1


def test_sachs_subgraphs_of_c4(c4):
    subs = sachs_subgraphs(c4)
    assert len(subs) == 3
    assert sum(1 for cycles, _ in subs if cycles) == 1


def test_triangle_inverse():
    inv = exact_inverse(adjacency_matrix(TRIANGLE))
    assert inv[0][0] == Fraction(-1, 2) and inv[0][1] == Fraction(1, 2)
    assert inverse_entry_via_paths_sachs(TRIANGLE, 0, 1) == Fraction(1, 2)
    assert inverse_entry_via_paths_sachs(TRIANGLE, 0, 0) == Fraction(-1, 2)


def test_singular_inverse_rejected(c4):
    with pytest.raises(Singular):
        exact_inverse(adjacency_matrix(c4))
    with pytest.raises(Singular):
        inverse_entry_via_paths_sachs(c4, 0, 1)


def test_p4_end_to_end_entry(p4):
    assert inverse_entry_via_paths_sachs(p4, 0, 3) == -1


def test_matching_counts(c4, p4):
    assert len(enumerate_perfect_matchings(c4)) == 2
    assert enumerate_perfect_matchings(p4) == [((0, 1), (2, 3))]
    assert len(enumerate_perfect_matchings(C6)) == 2
    assert enumerate_perfect_matchings(TRIANGLE) == []


def test_bounds_enforced():
    with pytest.raises(TooLarge):
        det_via_sachs((30, []))
    with pytest.raises(TooLarge):
        enumerate_perfect_matchings((40, []))


def test_alternating_paths_w8(w8):
    M = unique_perfect_matching(w8)
    prof = enumerate_alternating_paths(w8, M, R1, C4)
    assert (prof.tau, prof.tau_e, prof.tau_o) == (3, 2, 1)
    assert enumerate_alternating_paths(w8, M, R1, C4, prune=False) == prof
    assert enumerate_alternating_paths(w8, M, R1, C1).signed == 1


def test_quotient_examples(p4, w8, k2):
    Q, bip = quotient_by_matching(p4, unique_perfect_matching(p4))
    assert bip and Q.edges == ((0, 1),)
    Q, bip = quotient_by_matching(w8, unique_perfect_matching(w8))
    assert not bip
    Q, bip = quotient_by_matching(k2, unique_perfect_matching(k2))
    assert bip and Q.edges == ()


def test_w8_quotient_contains_a_triangle(w8):
    Q, _ = quotient_by_matching(w8, unique_perfect_matching(w8))
    pairs = set(Q.multiplicity)
    assert any({(a, b), (b, c), (a, c)} <= pairs for a, b, c in combinations(range(4), 3))


def test_kronecker_examples():
    L2 = [[1, 0], [1, 1]]
    K = kronecker_product(L2, L2)
    assert int(sum(K.flat)) == 9
    assert K.tolist() == [[1, 0, 0, 0], [1, 1, 0, 0], [1, 0, 1, 0], [1, 1, 1, 1]]
    G = kronecker_graph(L2, L2)
    assert G.n == 8 and G.m == 9
    assert analyze(G).nonnegative
    with pytest.raises(NotUnitTriangular):
        kronecker_product([[1, 1], [0, 1]], L2)


def test_generator_extremes():
    G0 = random_unique_pm_graph(5, 0.0, 1)
    assert G0.m == 5
    G1 = random_unique_pm_graph(5, 1.0, 1)
    assert G1.m == 15
    with pytest.raises(ValueError):
        random_unique_pm_graph(3, 1.5, 0)


def test_generators_are_deterministic():
    assert random_unique_pm_graph(6, 0.4, 99) == random_unique_pm_graph(6, 0.4, 99)
    assert random_matched_tree(7, 5) == random_matched_tree(7, 5)
    assert random_dag(6, 0.5, 3) == random_dag(6, 0.5, 3)


def test_two_pair_tree_is_p4(p4):
    for seed in range(10):
        G = random_matched_tree(2, seed)
        assert G.m == 3
        degs = sorted(len(G.adj[v]) for v in range(4))
        assert degs == [1, 1, 2, 2]


def test_manifest_round_trip(tmp_path):
    recs = corpus_records(5, 4, seed=11) + corpus_records(3, 5, seed=12, generator="matched_tree")
    path = tmp_path / "manifest.json"
    dump_manifest(recs, path)
    loaded = load_manifest(path)
    assert loaded == recs
    assert [regenerate(r) for r in loaded] == [regenerate(r) for r in recs]
    with pytest.raises(ValueError):
        regenerate({"generator": "nope", "parameters": {}, "seed": 0})


def _random_general_graph(rng, n):
    edges = [(a, b) for a, b in combinations(range(n), 2) if rng.random() < 0.5]
    return n, edges


def test_path_sachs_inverse_matches_rational_inverse():
    rng = np.random.default_rng(17)
    checked = 0
    while checked < 50:
        g = _random_general_graph(rng, int(rng.integers(2, 8)))
        A = adjacency_matrix(g)
        if bareiss_det(A) == 0:
            continue
        assert det_via_sachs(g) == bareiss_det(A)
        inv = exact_inverse(A)
        n = g[0]
        for i in range(n):
            for j in range(n):
                assert inverse_entry_via_paths_sachs(g, i, j) == inv[i][j]
        checked += 1


@pytest.mark.parametrize("seed", range(10))
def test_unique_pm_inverse_is_integral(seed):
    G = random_unique_pm_graph(1 + seed % 6, 0.5, seed)
    M = unique_perfect_matching(G)
    tri = triangularize(G, M)
    B = bipartite_adjacency(G, [r for r, _ in tri.pairs], [c for _, c in tri.pairs])
    assert B.tolist() == tri.L.tolist()
    inv = exact_inverse(adjacency_matrix(G))
    assert all(x.denominator == 1 for row in inv for x in row)
    assert bareiss_det(adjacency_matrix(G)) == (-1) ** len(M.pairs)
