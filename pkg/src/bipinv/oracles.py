"""Brute-force oracles. Exponential by design; each refuses inputs above its bound."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

from .balance import Balanced, SwitchingFunction, Unbalanced
from .errors import NotUnitTriangular, Singular, TooLarge
from .graph import Multigraph, graph_from_biadjacency, is_unit_lower_triangular
from .matching import PathProfile, build_dag

PM_BOUND = 24
SACHS_BOUND = 14
PATH_PAIR_BOUND = 7
SWITCH_BOUND = 16


def _edge_list(G):
    """``(n, edges)`` from a graph object or an ``(n, edges)`` tuple."""
    if hasattr(G, "edges") and hasattr(G, "n"):
        return G.n, list(G.edges)
    n, edges = G
    return n, [tuple(e) for e in edges]


def _nbr_masks(n, edges):
    masks = [0] * n
    for a, b in edges:
        masks[a] |= 1 << b
        masks[b] |= 1 << a
    return masks


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def enumerate_perfect_matchings(G, bound=PM_BOUND):
    """All perfect matchings as sorted tuples of ``(min, max)`` edges, in lexicographic order."""
    n, edges = _edge_list(G)
    if n > bound:
        raise TooLarge(f"{n} vertices exceeds the matching-enumeration bound {bound}")
    nbrs = _nbr_masks(n, edges)
    out = []

    def rec(free, acc):
        if not free:
            out.append(tuple(acc))
            return
        v = (free & -free).bit_length() - 1
        for u in _bits(nbrs[v] & free & ~(1 << v)):
            acc.append((v, u))
            rec(free & ~(1 << v) & ~(1 << u), acc)
            acc.pop()

    rec((1 << n) - 1, [])
    return out


def _cycle_sum(nbrs, v, rest, sachs_sum):
    """Contribution of every cycle through ``v`` inside ``rest | {v}`` times the remainder's Sachs sum."""
    total = 0
    # path v, p1, ..., p_last ; orientation fixed by p1 < p_last
    stack = [(v, -1, 1 << v, 1)]
    while stack:
        x, first, used, count = stack.pop()
        for y in _bits(nbrs[x] & rest & ~used):
            f = y if first < 0 else first
            if count + 1 >= 3 and (nbrs[y] >> v) & 1 and f < y:
                sign = -1 if (1 + (count + 1)) % 2 else 1
                total += 2 * sign * sachs_sum(rest & ~(used | (1 << y)))
            stack.append((y, f, used | (1 << y), count + 1))
    return total


def sachs_evaluator(G, bound=SACHS_BOUND):
    """Memoised ``mask -> det`` of induced subgraphs via Sachs subgraph expansion."""
    n, edges = _edge_list(G)
    if n > bound:
        raise TooLarge(f"{n} vertices exceeds the Sachs enumeration bound {bound}")
    nbrs = _nbr_masks(n, edges)

    @lru_cache(maxsize=None)
    def sachs_sum(remaining):
        if remaining == 0:
            return 1
        v = (remaining & -remaining).bit_length() - 1
        rest = remaining & ~(1 << v)
        total = 0
        for u in _bits(nbrs[v] & rest):
            total -= sachs_sum(rest & ~(1 << u))
        return total + _cycle_sum(nbrs, v, rest, sachs_sum)

    return n, nbrs, sachs_sum


def det_via_sachs(G, bound=SACHS_BOUND):
    """Adjacency determinant as a sum over Sachs subgraphs (single edges and cycles)."""
    n, _, sachs_sum = sachs_evaluator(G, bound)
    return sachs_sum((1 << n) - 1)


def sachs_subgraphs(G, bound=SACHS_BOUND):
    """Explicit list of Sachs subgraphs as ``(cycles, k2_edges)``; cycles are vertex tuples."""
    n, edges = _edge_list(G)
    if n > bound:
        raise TooLarge(f"{n} vertices exceeds the Sachs enumeration bound {bound}")
    nbrs = _nbr_masks(n, edges)
    out = []

    def cycles_through(v, rest):
        stack = [(v, (v,), 1 << v)]
        while stack:
            x, path, used = stack.pop()
            for y in _bits(nbrs[x] & rest & ~used):
                p = path + (y,)
                if len(p) >= 3 and (nbrs[y] >> v) & 1 and p[1] < y:
                    yield p
                stack.append((y, p, used | (1 << y)))

    def rec(remaining, cycles, k2):
        if not remaining:
            out.append((tuple(cycles), tuple(k2)))
            return
        v = (remaining & -remaining).bit_length() - 1
        rest = remaining & ~(1 << v)
        for u in _bits(nbrs[v] & rest):
            rec(rest & ~(1 << u), cycles, k2 + [(v, u)])
        for cyc in cycles_through(v, rest):
            mask = 0
            for x in cyc:
                mask |= 1 << x
            rec(remaining & ~mask, cycles + [cyc], k2)

    rec((1 << n) - 1, [], [])
    return out


def adjacency_matrix(G):
    n, edges = _edge_list(G)
    A = np.zeros((n, n), dtype=object)
    A.fill(0)
    for a, b in edges:
        A[a, b] = A[b, a] = 1
    return A


def bareiss_det(A):
    """Fraction-free exact determinant."""
    A = np.asarray(A, dtype=object)
    if A.shape[0] == 0:
        return 1
    return int(sympy.Matrix(A.tolist()).det(method="bareiss"))


def exact_inverse(A):
    """Rational inverse as a nested list of :class:`~fractions.Fraction`."""
    M = sympy.Matrix(np.asarray(A, dtype=object).tolist())
    if M.det(method="bareiss") == 0:
        raise Singular("matrix is singular")
    inv = M.inv(method="LU")
    return [[Fraction(int(x.p), int(x.q)) for x in inv.row(i)] for i in range(M.rows)]


def inverse_entry_via_paths_sachs(G, i, j, bound=SACHS_BOUND):
    """``(A^-1)_{ij}`` from paths and Sachs subgraphs of the path complements."""
    n, nbrs, sachs_sum = sachs_evaluator(G, bound)
    full = (1 << n) - 1
    det = sachs_sum(full)
    if det == 0:
        raise Singular("adjacency matrix is singular")
    if i == j:
        return Fraction(sachs_sum(full & ~(1 << i)), det)
    total = 0
    stack = [(i, 1 << i, 0)]
    while stack:
        x, used, length = stack.pop()
        for y in _bits(nbrs[x] & ~used):
            if y == j:
                total += (-1) ** (length + 1) * sachs_sum(full & ~(used | (1 << j)))
            else:
                stack.append((y, used | (1 << y), length + 1))
    return Fraction(total, det)


def _is_alternating(path, mate):
    edges = list(zip(path, path[1:]))
    if len(path) % 2:
        return False
    matched = [mate.get(a) == b for a, b in edges]
    return all(matched[k] == (k % 2 == 0) for k in range(len(edges)))


def enumerate_alternating_paths(G, M, i, j, bound=PATH_PAIR_BOUND, prune=True):
    """Path profile of ``i``-``j`` by enumerating every simple path.

    ``prune=True`` only extends a path along its forced matching edges;
    ``prune=False`` walks every simple path and filters afterwards.
    """
    if len(M.pairs) > bound:
        raise TooLarge(f"{len(M.pairs)} matched pairs exceeds the path-enumeration bound {bound}")
    mate = M.mate
    tau = [0, 0]  # [even, odd]
    stack = [(i, (i,))]
    while stack:
        x, path = stack.pop()
        nxt = G.adj[x]
        if prune:
            nxt = [mate[x]] if len(path) % 2 == 1 else [y for y in nxt if y != mate[x]]
        for y in nxt:
            if y in path:
                continue
            p = path + (y,)
            if y == j:
                if _is_alternating(p, mate):
                    tau[((len(p) - 2) // 2) % 2] += 1
                continue
            stack.append((y, p))
    return PathProfile(tau[0] + tau[1], tau[0], tau[1])


def balance_exhaustive(W, bound=SWITCH_BOUND):
    """Try every switching function; ``Unbalanced(None)`` when none works."""
    if W.n > bound:
        raise TooLarge(f"{W.n} vertices exceeds the exhaustive switching bound {bound}")
    masks = np.arange(1 << W.n, dtype=np.int64)
    for a, b, s in zip(W.u, W.v, W.signs):
        want = 1 if s < 0 else 0
        masks = masks[(((masks >> a) ^ (masks >> b)) & 1) == want]
        if not len(masks):
            return Unbalanced(None)
    m = int(masks[0])
    return Balanced(SwitchingFunction(tuple(-1 if (m >> v) & 1 else 1 for v in range(W.n))))


def quotient_by_matching(G, M, dag=None):
    """Contract every matching edge; returns ``(multigraph on pair indices, is_bipartite)``."""
    dag = build_dag(G, M) if dag is None else dag
    idx = dag.pair_index
    edges = tuple(sorted((idx[a], idx[b]) if idx[a] < idx[b] else (idx[b], idx[a])
                         for a, b in G.edges if not M.contains(a, b)))
    Q = Multigraph(dag.k, edges)
    return Q, Q.is_bipartite()


def kronecker_product(B1, B2):
    """Kronecker product of two unit lower-triangular 0/1 matrices."""
    B1 = np.asarray(B1, dtype=object)
    B2 = np.asarray(B2, dtype=object)
    for B in (B1, B2):
        if not is_unit_lower_triangular(B, zero_one=True):
            raise NotUnitTriangular("Kronecker factors must be unit lower-triangular 0/1 matrices")
    K = np.kron(B1, B2).astype(object)
    return np.array([[int(x) for x in row] for row in K], dtype=object).reshape(K.shape)


def kronecker_graph(B1, B2):
    return graph_from_biadjacency(kronecker_product(B1, B2))
