"""Hot integer kernels, each with a numba body and a numpy/scipy fallback.

Two kernels dominate runtime on large inputs:

* ``signed_forest``: BFS spanning forest of a signed graph, assigning each
  vertex the product of edge signs on its tree path to the component root.
  Roots are the smallest vertex of each component and get ``+1``.
* ``unit_lower_inverse_int64``: forward substitution for the inverse of a
  sparse unit lower-triangular 0/1 matrix in int64, aborting with
  ``ok=False`` before any entry can overflow.

The dispatchers pick the implementation from :mod:`bipinv._accel`.
"""

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from . import _accel
from ._accel import njit

# magnitudes stay below this so a single subtraction never wraps
INT64_GUARD = 1 << 62


def symmetric_csr(n, u, v, s):
    """Both-direction CSR arrays ``(indptr, indices, signs)`` with sorted rows."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    s = np.asarray(s, dtype=np.int8)
    src = np.concatenate([u, v])
    dst = np.concatenate([v, u])
    sg = np.concatenate([s, s])
    order = np.lexsort((dst, src))
    src, dst, sg = src[order], dst[order], sg[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return indptr, dst, sg


@njit(cache=True)
def _signed_forest_nb(n, indptr, indices, signs):
    zeta = np.zeros(n, np.int8)
    parent = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    for root in range(n):
        if zeta[root] != 0:
            continue
        zeta[root] = 1
        head = 0
        tail = 0
        queue[tail] = root
        tail += 1
        while head < tail:
            x = queue[head]
            head += 1
            for p in range(indptr[x], indptr[x + 1]):
                y = indices[p]
                if zeta[y] == 0:
                    zeta[y] = zeta[x] * signs[p]
                    parent[y] = x
                    queue[tail] = y
                    tail += 1
    return zeta, parent


def _signed_forest_np(n, indptr, indices, signs):
    if n == 0:
        return np.zeros(0, np.int8), np.zeros(0, np.int64)
    graph = sparse.csr_matrix((np.ones(len(indices), dtype=np.int8), indices, indptr), shape=(n, n))
    ncomp, labels = csgraph.connected_components(graph, directed=False)
    mins = np.full(ncomp, n, dtype=np.int64)
    np.minimum.at(mins, labels, np.arange(n, dtype=np.int64))
    # super-root n fans out to every component minimum, in increasing order
    indptr2 = np.concatenate([indptr, [indptr[-1] + ncomp]])
    indices2 = np.concatenate([indices, np.sort(mins)])
    data2 = np.ones(len(indices2), dtype=np.int8)
    big = sparse.csr_matrix((data2, indices2, indptr2), shape=(n + 1, n + 1))
    _, pred = csgraph.breadth_first_order(big, n, directed=True, return_predecessors=True)
    pred = pred.astype(np.int64)
    pred[n] = n
    parent = pred[:n].copy()
    parent[parent == n] = -1

    # sign of the tree edge (v, pred[v]) via searchsorted on row-major keys
    acc = np.ones(n + 1, dtype=np.int8)
    child = np.nonzero(parent >= 0)[0]
    if len(child):
        row_of = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
        keys = row_of * (n + 1) + indices
        pos = np.searchsorted(keys, child * (n + 1) + parent[child])
        acc[child] = signs[pos]
    anc = pred
    while np.any(anc != n):
        acc = acc * acc[anc]
        anc = anc[anc]
    return acc[:n].astype(np.int8), parent


def signed_forest(n, indptr, indices, signs, use_numba=None):
    if use_numba is None:
        use_numba = _accel.use_numba()
    if use_numba:
        return _signed_forest_nb(n, indptr, indices, signs)
    return _signed_forest_np(n, indptr, indices, signs)


@njit(cache=True)
def _unit_lower_inverse_nb(n, indptr, indices):
    X = np.zeros((n, n), np.int64)
    lim = INT64_GUARD
    for i in range(n):
        X[i, i] = 1
        for p in range(indptr[i], indptr[i + 1]):
            k = indices[p]
            for c in range(k + 1):
                val = X[i, c] - X[k, c]
                if val >= lim or val <= -lim:
                    return X, False
                X[i, c] = val
    return X, True


def _unit_lower_inverse_np(n, indptr, indices):
    X = np.zeros((n, n), np.int64)
    for i in range(n):
        X[i, i] = 1
        row = X[i]
        for k in indices[indptr[i]:indptr[i + 1]]:
            row[: k + 1] -= X[k, : k + 1]
            if np.abs(row[: k + 1]).max() >= INT64_GUARD:
                return X, False
    return X, True


def unit_lower_inverse_int64(n, indptr, indices, use_numba=None):
    """Inverse of ``I + N`` where row ``i`` of ``N`` has ones at ``indices[indptr[i]:indptr[i+1]]``.

    Every listed column must be strictly below the diagonal. Returns
    ``(X, ok)``; when ``ok`` is false ``X`` is garbage and the caller must
    redo the computation with exact integers.
    """
    if use_numba is None:
        use_numba = _accel.use_numba()
    indptr = np.asarray(indptr, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    if use_numba:
        return _unit_lower_inverse_nb(n, indptr, indices)
    return _unit_lower_inverse_np(n, indptr, indices)
