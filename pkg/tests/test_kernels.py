import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bipinv import _accel, kernels
from bipinv.balance import WeightedGraph, is_balanced
from bipinv.generators import random_lower_triangular


@st.composite
def signed_graphs(draw):
    n = draw(st.integers(0, 30))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=60)) if pairs else []
    signs = draw(st.lists(st.sampled_from([-1, 1]), min_size=len(chosen), max_size=len(chosen)))
    return n, chosen, signs


def _csr(n, edges, signs):
    u = [a for a, _ in edges]
    v = [b for _, b in edges]
    return kernels.symmetric_csr(n, u, v, signs)


@settings(max_examples=150, deadline=None)
@given(signed_graphs())
def test_signed_forest_backends_agree(g):
    n, edges, signs = g
    indptr, indices, sg = _csr(n, edges, signs)
    z1, p1 = kernels.signed_forest(n, indptr, indices, sg, use_numba=True)
    z2, p2 = kernels.signed_forest(n, indptr, indices, sg, use_numba=False)
    assert z1.tolist() == z2.tolist()
    assert p1.tolist() == p2.tolist()


@settings(max_examples=100, deadline=None)
@given(signed_graphs())
def test_signed_forest_tree_edges_are_consistent(g):
    n, edges, signs = g
    indptr, indices, sg = _csr(n, edges, signs)
    zeta, parent = kernels.signed_forest(n, indptr, indices, sg)
    sign_of = {}
    for (a, b), s in zip(edges, signs):
        sign_of[a, b] = sign_of[b, a] = s
    for v in range(n):
        if parent[v] < 0:
            assert zeta[v] == 1
        else:
            assert zeta[v] == zeta[parent[v]] * sign_of[v, int(parent[v])]


@pytest.mark.parametrize("use_numba", [True, False])
def test_balance_verdict_independent_of_backend(monkeypatch, use_numba):
    monkeypatch.setattr(_accel, "USE_NUMBA", use_numba)
    W = WeightedGraph.from_edges(5, [(0, 1, 1), (1, 2, -1), (2, 0, -1), (3, 4, -1)])
    v = is_balanced(W)
    assert v.balanced and v.zeta.zeta == (1, 1, -1, 1, -1)
    W = WeightedGraph.from_edges(3, [(0, 1, 1), (1, 2, 1), (2, 0, -1)])
    assert is_balanced(W).cycle == (0, 1, 2)


def _lower_csr(L):
    low = np.tril(L, -1)
    indptr = np.concatenate([[0], np.cumsum(low.sum(axis=1))]).astype(np.int64)
    indices = np.nonzero(low)[1].astype(np.int64)
    return indptr, indices


@settings(max_examples=60, deadline=None)
@given(n=st.integers(0, 40), p=st.floats(0, 1), seed=st.integers(0, 2**31 - 1))
def test_int64_inverse_backends_agree(n, p, seed):
    L = random_lower_triangular(n, p, np.random.default_rng(seed)).astype(np.int64)
    indptr, indices = _lower_csr(L)
    X1, ok1 = kernels.unit_lower_inverse_int64(n, indptr, indices, use_numba=True)
    X2, ok2 = kernels.unit_lower_inverse_int64(n, indptr, indices, use_numba=False)
    assert ok1 and ok2
    assert np.array_equal(X1, X2)
    assert np.array_equal(L @ X1, np.eye(n, dtype=np.int64))


@pytest.mark.parametrize("use_numba", [True, False])
def test_int64_inverse_reports_overflow(use_numba):
    n = 100
    i, j = np.indices((n, n))
    L = (((i > j) & ((i - j) % 2 == 1)) | (i == j)).astype(np.int64)
    indptr, indices = _lower_csr(L)
    _, ok = kernels.unit_lower_inverse_int64(n, indptr, indices, use_numba=use_numba)
    assert not ok
