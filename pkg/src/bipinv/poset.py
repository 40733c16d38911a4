"""Posets, Zeta and Moebius matrices, and the poset <-> bipartite graph correspondence.

Matrix convention: row index is the larger element. ``Z[j, i] = 1`` iff
``a_i <= a_j``, so the Zeta matrix is lower triangular whenever element
indices form a linear extension, and ``Z(0)`` is exactly the triangular
bipartite adjacency matrix of the originating graph. Consequently
``mobius_matrix(P)[j, i] == mu(a_i, a_j)``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import EdgeListSyntaxError, NotAcyclic
from .graph import BipartiteGraph, zeros
from .linalg import invert_unit_lower_triangular
from .matching import Dag


@dataclass(frozen=True)
class Poset:
    """Elements ``0..k-1``; ``leq[i][j]`` is true iff ``a_i <= a_j``."""

    leq: tuple

    def __post_init__(self):
        k = len(self.leq)
        R = np.array(self.leq, dtype=bool).reshape(k, k)
        if not np.all(np.diag(R)):
            raise ValueError("relation is not reflexive")
        if np.any(R & R.T & ~np.eye(k, dtype=bool)):
            i, j = (int(x[0]) for x in np.nonzero(R & R.T & ~np.eye(k, dtype=bool)))
            raise NotAcyclic((i, j))
        Ri = R.astype(np.int64)
        if np.any(((Ri @ Ri) > 0) & ~R):
            raise ValueError("relation is not transitive")

    @property
    def k(self):
        return len(self.leq)

    @cached_property
    def matrix(self):
        return np.array(self.leq, dtype=bool).reshape(self.k, self.k)

    def le(self, i, j):
        return self.leq[i][j]

    @classmethod
    def from_relations(cls, k, pairs):
        """Reflexive-transitive closure of ``i <= j`` pairs; cyclic input raises :class:`NotAcyclic`."""
        R = np.eye(k, dtype=bool)
        for i, j in pairs:
            if not (0 <= i < k and 0 <= j < k):
                raise ValueError(f"element out of range in {i} <= {j}")
            R[i, j] = True
        # Warshall
        for m in range(k):
            R |= np.outer(R[:, m], R[m, :])
        off = R & R.T & ~np.eye(k, dtype=bool)
        if np.any(off):
            i, j = (int(x[0]) for x in np.nonzero(off))
            raise NotAcyclic((i, j))
        return cls(tuple(tuple(bool(x) for x in row) for row in R))

    def is_linear_extension_order(self):
        """True iff ``a_i <= a_j`` implies ``i <= j``."""
        return not np.any(np.tril(self.matrix, -1))

    def linear_extension(self):
        """Smallest-index-first topological order of the elements."""
        R = self.matrix
        below = (R & ~np.eye(self.k, dtype=bool)).sum(axis=0)
        heap = [i for i in range(self.k) if below[i] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            i = heapq.heappop(heap)
            order.append(i)
            for j in np.nonzero(R[i])[0]:
                if j != i:
                    below[j] -= 1
                    if below[j] == 0:
                        heapq.heappush(heap, int(j))
        return order

    def relabel(self, order):
        R = self.matrix[np.ix_(order, order)]
        return Poset(tuple(tuple(bool(x) for x in row) for row in R))

    def covers(self):
        """Cover relations ``(i, j)``: ``a_i < a_j`` with nothing strictly between."""
        R = self.matrix
        strict = R & ~np.eye(self.k, dtype=bool)
        si = strict.astype(np.int64)
        through = (si @ si) > 0
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(strict & ~through))]


def chain(k):
    return Poset.from_relations(k, [(i, i + 1) for i in range(k - 1)])


def antichain(k):
    return Poset.from_relations(k, [])


def boolean_lattice(m):
    """Subsets of ``{0..m-1}`` as bitmasks, ordered by inclusion."""
    k = 1 << m
    return Poset(tuple(tuple((a & b) == a for b in range(k)) for a in range(k)))


def parse_poset(text):
    """``k`` header then ``le i j`` cover (or any order) relations; ``#`` comments."""
    k = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if k is None:
            if len(tok) != 1:
                raise EdgeListSyntaxError("header must be the element count 'k'", lineno)
            try:
                k = int(tok[0])
            except ValueError:
                raise EdgeListSyntaxError("header must be an integer", lineno) from None
            continue
        if len(tok) != 3 or tok[0] != "le":
            raise EdgeListSyntaxError(f"expected 'le i j', got {line!r}", lineno)
        try:
            pairs.append((int(tok[1]), int(tok[2])))
        except ValueError:
            raise EdgeListSyntaxError(f"non-integer element in {line!r}", lineno) from None
    if k is None:
        raise EdgeListSyntaxError("empty document")
    return Poset.from_relations(k, pairs)


def format_poset(P):
    cov = P.covers()
    return "\n".join([str(P.k)] + [f"le {i} {j}" for i, j in cov]) + "\n"


def poset_from_dag(D):
    """``a_i <= a_j`` iff ``D`` has a directed path ``a_j -> a_i`` (length 0 allowed)."""
    if not D.is_acyclic():
        raise NotAcyclic()
    k = D.k
    R = np.eye(k, dtype=bool)
    for j in range(k):
        for i in D.descendants(j):
            R[i, j] = True
    return Poset(tuple(tuple(bool(x) for x in row) for row in R))


def zeta_at(D, x):
    """``Z(x)``: 1 on the diagonal and on arcs, ``x`` on implied comparabilities."""
    if not D.is_acyclic():
        raise NotAcyclic()
    x = int(x)
    k = D.k
    Z = zeros(k, k)
    for j in range(k):
        Z[j, j] = 1
        for i in D.descendants(j):
            if i != j:
                Z[j, i] = x
        for i in D.succ[j]:
            Z[j, i] = 1
    return Z


def zeta_matrix(P):
    """``Z[j, i] = 1`` iff ``a_i <= a_j``."""
    return np.array(P.matrix.T.astype(np.int64).tolist(), dtype=object).reshape(P.k, P.k)


def mobius_matrix(P):
    """Exact inverse of :func:`zeta_matrix`; entry ``[j, i]`` is ``mu(a_i, a_j)``."""
    order = P.linear_extension()
    Z = zeta_matrix(P)
    Zp = Z[np.ix_(order, order)]
    Xp = invert_unit_lower_triangular(Zp)
    out = zeros(P.k, P.k)
    out[np.ix_(order, order)] = Xp
    return out


def mobius(P, a, b, Mob=None):
    """``mu(a, b)``."""
    Mob = mobius_matrix(P) if Mob is None else Mob
    return int(Mob[b, a])


def check_mobius_recurrence(P, Mob):
    """``sum_{a <= c <= b} mu(c, b) == [a == b]`` for every ``a <= b``."""
    R = P.matrix
    for a in range(P.k):
        for b in range(P.k):
            if not R[a, b]:
                continue
            s = sum(int(Mob[b, c]) for c in range(P.k) if R[a, c] and R[c, b])
            if s != (1 if a == b else 0):
                return False
    return True


def poset_to_graph(P):
    """Bipartite graph whose triangular bipartite adjacency matrix is the Zeta matrix of ``P``.

    Element ``p`` of a linear extension becomes the matched pair ``(2p, 2p+1)``;
    ``a_p <= a_q`` adds the edge ``2q - (2p+1)``. When element indices already
    form a linear extension the labelling is preserved exactly.
    """
    order = P.linear_extension()
    pos = {e: p for p, e in enumerate(order)}
    R = P.matrix
    edges = []
    for i, j in zip(*np.nonzero(R)):
        p, q = pos[int(i)], pos[int(j)]
        edges.append((2 * q, 2 * p + 1))
    return BipartiteGraph.from_edges(2 * P.k, edges)


def dag_of_poset(P):
    """Hasse digraph (cover arcs ``a_j -> a_i`` for ``a_i`` covered by ``a_j``) in linear-extension labels."""
    order = P.linear_extension()
    pos = {e: p for p, e in enumerate(order)}
    arcs = frozenset((pos[j], pos[i]) for i, j in P.covers())
    return Dag(tuple((2 * p, 2 * p + 1) for p in range(P.k)), arcs)


def mobius_balance(P):
    """``(B_plus, D)`` when the Moebius matrix is diagonally similar to a non-negative matrix, else a flower."""
    from .balance import nonnegative_inverse

    return nonnegative_inverse(poset_to_graph(P))
