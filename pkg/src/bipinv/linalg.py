"""Exact triangularization, determinant and inverse of bipartite adjacency matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NotTriangularizable, NotUnitTriangular
from .graph import bipartite_adjacency, identity, is_unit_lower_triangular, zeros
from .matching import triangular_pair_order


@dataclass(frozen=True)
class TriangularForm:
    """``L = B[row_perm][:, col_perm]`` is unit lower triangular.

    ``pairs[i]`` is the matched ``(r, c)`` sitting on row/column ``i`` of ``L``.
    """

    row_perm: tuple
    col_perm: tuple
    L: np.ndarray
    pairs: tuple


def permute_to_triangular(B, elimination_order, row_order, col_order):
    """Permute rows and columns of ``B`` into unit lower-triangular form.

    ``row_order``/``col_order`` name the vertex behind each row/column of ``B``.
    The elimination order is replayed on ``B`` itself, so an order that does
    not certify a unique perfect matching of ``B`` raises
    :class:`NotTriangularizable`.
    """
    B = np.asarray(B, dtype=object)
    row_order, col_order = list(row_order), list(col_order)
    if B.shape != (len(row_order), len(col_order)) or B.shape[0] != B.shape[1]:
        raise NotTriangularizable(f"B has shape {B.shape}, orders have {len(row_order)}x{len(col_order)}")
    ri = {v: i for i, v in enumerate(row_order)}
    ci = {v: j for j, v in enumerate(col_order)}
    n = B.shape[0]
    if len(elimination_order) != n:
        raise NotTriangularizable("elimination order does not cover every pair")

    nzr, nzc = np.nonzero(B != 0)
    row_nbrs = [[] for _ in range(n)]
    col_nbrs = [[] for _ in range(n)]
    for i, j in zip(nzr.tolist(), nzc.tolist()):
        row_nbrs[i].append(j)
        col_nbrs[j].append(i)
    row_alive = [True] * n
    col_alive = [True] * n
    row_deg = [len(x) for x in row_nbrs]
    col_deg = [len(x) for x in col_nbrs]
    pairs = []
    for v, u in elimination_order:
        if v in ri and u in ci:
            i, j, pend_deg = ri[v], ci[u], row_deg[ri[v]]
        elif v in ci and u in ri:
            i, j, pend_deg = ri[u], ci[v], col_deg[ci[v]]
        else:
            raise NotTriangularizable(f"step ({v}, {u}) does not join a row to a column")
        if not (row_alive[i] and col_alive[j]) or B[i, j] == 0 or pend_deg != 1:
            raise NotTriangularizable(f"step ({v}, {u}) is not a pendant elimination")
        row_alive[i] = col_alive[j] = False
        for jj in row_nbrs[i]:
            if col_alive[jj]:
                col_deg[jj] -= 1
        for ii in col_nbrs[j]:
            if row_alive[ii]:
                row_deg[ii] -= 1
        pairs.append((i, j))

    pair_of_col = {j: p for p, (_, j) in enumerate(pairs)}
    arcs = set()
    for p, (i, j0) in enumerate(pairs):
        for j in row_nbrs[i]:
            if j != j0:
                arcs.add((p, pair_of_col[j]))
    labelled = [(row_order[i], col_order[j]) for i, j in pairs]
    order = triangular_pair_order(labelled, arcs)
    row_perm = tuple(pairs[p][0] for p in order)
    col_perm = tuple(pairs[p][1] for p in order)
    L = B[np.ix_(row_perm, col_perm)] if n else zeros(0, 0)
    if not is_unit_lower_triangular(L):
        raise NotTriangularizable("permuted matrix is not unit lower triangular")
    return TriangularForm(row_perm, col_perm, L, tuple(labelled[p] for p in order))


def triangularize(G, M):
    """Triangular form of the bipartite adjacency matrix with rows/columns in sorted vertex order."""
    B = bipartite_adjacency(G)
    return permute_to_triangular(B, M.elimination_order, G.R, G.C)


def _inverse_exact(L):
    n = L.shape[0]
    X = zeros(n, n)
    for i in range(n):
        row = zeros(1, n)[0]
        row[i] = 1
        for k in range(i):
            a = L[i, k]
            if a:
                row[: k + 1] -= X[k, : k + 1] * a
        X[i] = row
    return X


def _right_product_is_identity(X, L):
    """Check ``X @ L == I`` by accumulating only over the nonzeros of ``L``."""
    n = L.shape[0]
    acc = zeros(n, n)
    for i, k in zip(*np.nonzero(L != 0)):
        a = L[i, k]
        if a == 1:
            acc[:, k] += X[:, i]
        else:
            acc[:, k] += X[:, i] * a
    for i in range(n):
        col = acc[:, i]
        if col[i] != 1 or any(col[:i]) or any(col[i + 1:]):
            return False
    return True


def invert_unit_lower_triangular(L, verify=True):
    """Exact integer inverse of a unit lower-triangular integer matrix.

    0/1 inputs go through the int64 kernel first and fall back to Python
    integers when an entry could leave the int64 range.
    """
    L = np.asarray(L, dtype=object)
    if not is_unit_lower_triangular(L):
        raise NotUnitTriangular("matrix is not unit lower triangular")
    n = L.shape[0]
    if n == 0:
        return zeros(0, 0)
    nz = L != 0
    X = None
    if all(x in (0, 1) for x in L[nz]):
        strict = np.tril(nz, -1)
        rows, cols = np.nonzero(strict)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        X64, ok = kernels.unit_lower_inverse_int64(n, indptr, cols)
        if ok:
            X = X64.astype(object)
    if X is None:
        X = _inverse_exact(L)
    if verify and not _right_product_is_identity(X, L):  # pragma: no cover - would be a kernel bug
        raise ArithmeticError("inverse failed verification")
    return X


def det_adjacency(G, M):
    """Determinant of the adjacency matrix of a unique-perfect-matching bipartite graph."""
    return -1 if len(M.pairs) % 2 else 1


def assemble_inverse_adjacency(B_inv):
    """``[[0, (B^-1)^T], [B^-1, 0]]``: the inverse of ``[[0, B], [B^T, 0]]``."""
    B_inv = np.asarray(B_inv, dtype=object)
    k = B_inv.shape[0]
    out = zeros(2 * k, 2 * k)
    out[:k, k:] = B_inv.T
    out[k:, :k] = B_inv
    return out


def inverse_in_input_order(B, tri):
    """``B^-1`` indexed like ``B`` (columns of ``B`` become rows of the inverse)."""
    X = invert_unit_lower_triangular(tri.L)
    n = X.shape[0]
    out = zeros(n, n)
    out[np.ix_(tri.col_perm, tri.row_perm)] = X
    return out


__all__ = [
    "TriangularForm",
    "permute_to_triangular",
    "triangularize",
    "invert_unit_lower_triangular",
    "det_adjacency",
    "assemble_inverse_adjacency",
    "inverse_in_input_order",
    "identity",
]
