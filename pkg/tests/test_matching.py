import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bipinv.errors import NoPerfectMatching, NotFlower, NotUnique, SameVertex, SizeTooSmall
from bipinv.generators import random_unique_pm_graph
from bipinv.matching import (
    FlowerCertificate,
    PathProfile,
    build_dag,
    flower_check,
    m_span,
    replay_elimination,
    tau_counts,
    unique_perfect_matching,
    validate_flower,
)
from bipinv.oracles import enumerate_alternating_paths, enumerate_perfect_matchings

from conftest import C1, C2, C3, C4, R1, R2, R3, R4, graph


def test_p4_matching(p4):
    M = unique_perfect_matching(p4)
    assert M.pairs == ((0, 1), (2, 3))
    assert M.elimination_order == ((0, 1), (2, 3))
    assert replay_elimination(p4, M.elimination_order)


def test_c4_not_unique(c4):
    with pytest.raises(NotUnique) as exc:
        unique_perfect_matching(c4)
    cyc = exc.value.cycle
    assert sorted(cyc) == [0, 1, 2, 3]
    # the witness alternates: every other edge belongs to the reported matching
    mate = {}
    for r, c in exc.value.matching:
        mate[r], mate[c] = c, r
    k = len(cyc)
    in_m = [mate[cyc[i]] == cyc[(i + 1) % k] for i in range(k)]
    assert in_m == [False, True, False, True]


def test_p3_no_perfect_matching():
    with pytest.raises(NoPerfectMatching):
        unique_perfect_matching(graph(3, [(0, 1), (1, 2)]))


def test_unbalanced_sides_no_perfect_matching():
    # star K_{1,3}
    with pytest.raises(NoPerfectMatching):
        unique_perfect_matching(graph(4, [(0, 1), (0, 2), (0, 3)]))


def test_not_unique_after_forced_edges():
    # pendant 0-1 forced, then a 4-cycle on 2..5 hanging off vertex 1
    G = graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 2)])
    with pytest.raises(NotUnique) as exc:
        unique_perfect_matching(G)
    assert sorted(exc.value.cycle) == [2, 3, 4, 5]
    assert (0, 1) in exc.value.matching


def test_w8_matching(w8):
    M = unique_perfect_matching(w8)
    assert M.pairs == ((R1, C1), (R2, C2), (R3, C3), (R4, C4))
    assert replay_elimination(w8, M.elimination_order)
    assert len(enumerate_perfect_matchings(w8)) == 1


def test_build_dag(k2, p4, w8):
    assert build_dag(k2, unique_perfect_matching(k2)).arcs == frozenset()
    d = build_dag(p4, unique_perfect_matching(p4))
    assert d.pairs == ((0, 1), (2, 3)) and d.arcs == {(1, 0)}
    d = build_dag(w8, unique_perfect_matching(w8))
    assert d.pairs == ((R1, C1), (R2, C2), (R3, C3), (R4, C4))
    # a2->a1, a3->a1, a3->a2, a4->a2, a4->a3 with 0-based pair indices
    assert d.arcs == {(1, 0), (2, 0), (2, 1), (3, 1), (3, 2)}


def test_tau_examples(p4, w8):
    M = unique_perfect_matching(p4)
    assert tau_counts(p4, M, 0, 3) == PathProfile(1, 0, 1)
    assert tau_counts(p4, M, 1, 2) == PathProfile(0, 0, 0)
    assert tau_counts(p4, M, 0, 1) == PathProfile(1, 1, 0)
    Mw = unique_perfect_matching(w8)
    assert tau_counts(w8, Mw, R1, C4) == PathProfile(3, 2, 1)
    with pytest.raises(SameVertex):
        tau_counts(p4, M, 2, 2)


def test_w8_tau_matches_enumeration(w8):
    M = unique_perfect_matching(w8)
    for i in range(8):
        for j in range(i + 1, 8):
            fast = tau_counts(w8, M, i, j)
            assert fast == enumerate_alternating_paths(w8, M, i, j)
            assert fast == enumerate_alternating_paths(w8, M, i, j, prune=False)
            assert fast == tau_counts(w8, M, j, i)


def test_m_span(p4, w8):
    M = unique_perfect_matching(p4)
    assert m_span(p4, M, {0, 3}) == ((0, 1), (1, 2), (2, 3))
    assert m_span(p4, M, {1, 2}) == ()
    assert m_span(p4, M, {2}) == ()
    Mw = unique_perfect_matching(w8)
    span = m_span(w8, Mw, {R1, C4})
    # union of the three r1-c4 alternating paths: everything but nothing outside G
    assert set(span) <= set(w8.edges)
    assert (R1, C1) in span and (R4, C4) in span


def _span_by_enumeration(G, M, S):
    """Edges of every alternating path between vertices of S, by brute force."""
    mate = M.mate
    out = set()
    S = sorted(S)
    for a in S:
        stack = [(a, (a,))]
        while stack:
            x, path = stack.pop()
            nxt = [mate[x]] if len(path) % 2 == 1 else [y for y in G.adj[x] if y != mate[x]]
            for y in nxt:
                if y in path:
                    continue
                p = path + (y,)
                if y in S and y != a and len(p) % 2 == 0:
                    out.update((min(u, v), max(u, v)) for u, v in zip(p, p[1:]))
                stack.append((y, p))
    return tuple(sorted(out))


@given(st.integers(1, 6), st.floats(0, 1), st.integers(0, 10**6), st.data())
@settings(max_examples=60, deadline=None)
def test_m_span_matches_enumeration(k, p, seed, data):
    G = random_unique_pm_graph(k, p, seed)
    M = unique_perfect_matching(G)
    S = data.draw(st.sets(st.integers(0, G.n - 1), max_size=5))
    assert m_span(G, M, S) == _span_by_enumeration(G, M, S)


def test_w8_flower(w8):
    M = unique_perfect_matching(w8)
    cert = flower_check(w8, M, {R1, C2, R2, C3, R3, C4})
    assert cert.negative_pair_count == 3 and cert.odd
    assert cert.order == (R1, C2, R2, C3, R3, C4)
    assert validate_flower(w8, M, cert)
    again = FlowerCertificate.from_json(cert.to_json())
    assert again == cert


def test_not_flower(p4):
    M = unique_perfect_matching(p4)
    with pytest.raises(NotFlower):
        flower_check(p4, M, {0, 1, 3})
    with pytest.raises(SizeTooSmall):
        flower_check(p4, M, {0, 1})


def test_matched_pair_alone_is_not_flower():
    # two disjoint K2: r_i and c_i only see each other
    G = graph(4, [(0, 1), (2, 3)])
    M = unique_perfect_matching(G)
    with pytest.raises(NotFlower):
        flower_check(G, M, {0, 1, 2})


def test_disconnected_pair_graph_is_not_flower():
    # two disjoint W8 copies: two 6-cycles in the pair graph
    w = [(0, 4), (1, 5), (2, 6), (3, 7), (1, 4), (2, 4), (2, 5), (3, 5), (3, 6)]
    G = graph(16, w + [(a + 8, b + 8) for a, b in w])
    M = unique_perfect_matching(G)
    S = {0, 5, 1, 6, 2, 7}
    with pytest.raises(NotFlower, match="disconnected"):
        flower_check(G, M, S | {x + 8 for x in S})


def test_validate_rejects_tampered_certificate(w8):
    M = unique_perfect_matching(w8)
    cert = flower_check(w8, M, {R1, C2, R2, C3, R3, C4})
    bad = FlowerCertificate(cert.order, cert.profiles, 1)
    assert not validate_flower(w8, M, bad)
    with pytest.raises(ValueError):
        FlowerCertificate.from_json({**cert.to_json(), "odd": False})


@given(st.integers(1, 7), st.floats(0, 1), st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_elimination_replays_and_dag_acyclic(k, p, seed):
    G = random_unique_pm_graph(k, p, seed)
    M = unique_perfect_matching(G)
    assert replay_elimination(G, M.elimination_order)
    assert sorted(v for pair in M.pairs for v in pair) == list(range(G.n))
    assert build_dag(G, M).is_acyclic()


@given(st.integers(1, 5), st.floats(0, 1), st.integers(0, 10**6))
@settings(max_examples=50, deadline=None)
def test_tau_symmetric_and_same_side_zero(k, p, seed):
    G = random_unique_pm_graph(k, p, seed)
    M = unique_perfect_matching(G)
    dag = build_dag(G, M)
    for i in range(G.n):
        for j in range(i + 1, G.n):
            a = tau_counts(G, M, i, j, dag=dag)
            assert a == tau_counts(G, M, j, i, dag=dag)
            if G.in_R[i] == G.in_R[j]:
                assert a.tau == 0
