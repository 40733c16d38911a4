"""The weighted inverse graph, balance, and the non-negative form / odd-flower decision."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Union

import numpy as np

from . import kernels
from .errors import MissingVertex, PreconditionViolated
from .graph import canonical_cycle, tree_cycle, zeros
from .linalg import TriangularForm, invert_unit_lower_triangular, triangularize
from .matching import Dag, FlowerCertificate, Matching, build_dag, flower_check, unique_perfect_matching


def _as_weights(w):
    """int64 when every weight fits, Python ints otherwise."""
    w = np.asarray(w)
    if w.dtype == object:
        try:
            return w.astype(np.int64)
        except OverflowError:
            return w
    return w.astype(np.int64)


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Simple graph on ``0..n-1`` with nonzero integer edge weights.

    Edges are stored once with ``u < v``, sorted lexicographically.
    """

    n: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    @classmethod
    def from_arrays(cls, n, u, v, w):
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        w = _as_weights(w)
        if not (len(u) == len(v) == len(w)):
            raise ValueError("edge arrays differ in length")
        if len(u):
            if u.min() < 0 or v.min() < 0 or u.max() >= n or v.max() >= n:
                raise ValueError("vertex id out of range")
            if np.any(u == v):
                raise ValueError("loops are not allowed")
            if np.any(w == 0):
                raise ValueError("zero weights are not edges")
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        order = np.lexsort((hi, lo))
        lo, hi, w = lo[order], hi[order], w[order]
        if len(lo) > 1 and np.any((lo[1:] == lo[:-1]) & (hi[1:] == hi[:-1])):
            raise ValueError("parallel edges are not allowed")
        for arr in (lo, hi, w):
            arr.flags.writeable = False
        return cls(int(n), lo, hi, w)

    @classmethod
    def from_edges(cls, n, triples):
        triples = list(triples)
        return cls.from_arrays(
            n,
            [t[0] for t in triples],
            [t[1] for t in triples],
            np.array([int(t[2]) for t in triples], dtype=object),
        )

    @classmethod
    def from_matrix(cls, A):
        """Weighted graph of a symmetric integer matrix with zero diagonal."""
        A = np.asarray(A, dtype=object)
        n = A.shape[0]
        if any(A[i, i] != 0 for i in range(n)):
            raise ValueError("nonzero diagonal: loops are not supported")
        iu, ju = np.nonzero(np.triu(A != 0, 1))
        if not np.all(A[ju, iu] == A[iu, ju]):
            raise ValueError("matrix is not symmetric")
        return cls.from_arrays(n, iu, ju, np.array(list(A[iu, ju]), dtype=object))

    @property
    def m(self):
        return len(self.u)

    @cached_property
    def signs(self):
        return np.where(self.w > 0, 1, -1).astype(np.int8)

    @cached_property
    def _keys(self):
        return self.u * self.n + self.v

    def weights_of(self, a, b):
        """Vectorised weight lookup; 0 for non-edges."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        key = np.minimum(a, b) * self.n + np.maximum(a, b)
        pos = np.searchsorted(self._keys, key)
        pos = np.minimum(pos, max(self.m - 1, 0))
        hit = (self._keys[pos] == key) if self.m else np.zeros(key.shape, dtype=bool)
        out = np.zeros(key.shape, dtype=self.w.dtype)
        if self.m:
            out[hit] = self.w[pos[hit]]
        return out

    def weight(self, a, b):
        return int(self.weights_of([a], [b])[0])

    def edges(self):
        return [(int(a), int(b), int(x)) for a, b, x in zip(self.u, self.v, self.w)]

    def to_matrix(self):
        A = zeros(self.n, self.n)
        for a, b, x in self.edges():
            A[a, b] = A[b, a] = x
        return A

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.n == other.n and self.edges() == other.edges()


@dataclass(frozen=True)
class SwitchingFunction:
    """``zeta[v]`` in ``{-1, +1}`` for every vertex."""

    zeta: tuple

    def __post_init__(self):
        if any(z not in (-1, 1) for z in self.zeta):
            raise ValueError("switching values must be +1 or -1")

    def diagonal(self):
        D = zeros(len(self.zeta), len(self.zeta))
        for i, z in enumerate(self.zeta):
            D[i, i] = z
        return D


@dataclass(frozen=True)
class Balanced:
    zeta: SwitchingFunction
    balanced: bool = field(default=True, init=False)


@dataclass(frozen=True)
class Unbalanced:
    """``cycle`` has a negative weight product; ``None`` when produced by an oracle without a witness."""

    cycle: Optional[tuple]
    balanced: bool = field(default=False, init=False)


BalanceVerdict = Union[Balanced, Unbalanced]


def apply_switching(W, zeta):
    """Weights ``zeta(u) * w(uv) * zeta(v)``."""
    z = zeta.zeta if isinstance(zeta, SwitchingFunction) else tuple(zeta)
    if len(z) < W.n:
        raise MissingVertex(f"switching function covers {len(z)} of {W.n} vertices")
    z = np.asarray(z, dtype=np.int64)
    flip = z[W.u] * z[W.v]
    w = W.w * flip if W.w.dtype != object else np.array([x * int(f) for x, f in zip(W.w, flip)], dtype=object)
    return WeightedGraph.from_arrays(W.n, W.u, W.v, w)


def cycle_sign(W, cycle):
    cyc = np.asarray(cycle, dtype=np.int64)
    ws = W.weights_of(cyc, np.roll(cyc, -1))
    if np.any(ws == 0):
        raise ValueError("sequence is not a cycle of the graph")
    return -1 if int(np.count_nonzero(ws < 0)) % 2 else 1


def is_balanced(W):
    """Balance test with witness.

    A BFS spanning forest assigns each vertex the sign product of its tree
    path from the component root (smallest id, ``+1``). The graph is balanced
    iff every edge agrees with that assignment; otherwise the first
    disagreeing edge closes a negative fundamental cycle.
    """
    if W.n == 0:
        return Balanced(SwitchingFunction(()))
    indptr, indices, signs = kernels.symmetric_csr(W.n, W.u, W.v, W.signs)
    zeta, parent = kernels.signed_forest(W.n, indptr, indices, signs)
    if W.m:
        bad = np.nonzero(zeta[W.u].astype(np.int64) * zeta[W.v] != W.signs)[0]
        if len(bad):
            k = int(bad[0])
            cyc = tree_cycle(parent, int(W.u[k]), int(W.v[k]))
            return Unbalanced(canonical_cycle(cyc))
    return Balanced(SwitchingFunction(tuple(int(z) for z in zeta)))


def chordless_negative_cycle(W, cycle=None):
    """Shrink a negative cycle by chord splitting until no chord remains.

    A chord cuts the cycle into two cycles whose signs multiply to the
    original (negative) sign, so exactly one of them is negative.
    """
    if cycle is None:
        verdict = is_balanced(W)
        if verdict.balanced:
            raise PreconditionViolated("graph is balanced; it has no negative cycle")
        cycle = verdict.cycle
    cyc = list(cycle)
    if cycle_sign(W, cyc) > 0:
        raise PreconditionViolated("starting cycle is not negative")
    while len(cyc) > 3:
        k = len(cyc)
        ii, jj = np.triu_indices(k, 2)
        keep = ~((ii == 0) & (jj == k - 1))
        ii, jj = ii[keep], jj[keep]
        arr = np.asarray(cyc, dtype=np.int64)
        chord_w = W.weights_of(arr[ii], arr[jj])
        hits = np.nonzero(chord_w != 0)[0]
        if not len(hits):
            break
        i, j = int(ii[hits[0]]), int(jj[hits[0]])
        first = cyc[i:j + 1]
        if cycle_sign(W, first) < 0:
            cyc = first
        else:
            cyc = cyc[j:] + cyc[:i + 1]
    return canonical_cycle(cyc)


# ---------------------------------------------------------------------------
# pipeline


def _inverse_from_triangular(G, tri, X):
    k = len(tri.pairs)
    rows, cols = np.nonzero(X != 0)
    u = np.array([tri.pairs[i][1] for i in rows], dtype=np.int64) if k else np.zeros(0, np.int64)
    v = np.array([tri.pairs[j][0] for j in cols], dtype=np.int64) if k else np.zeros(0, np.int64)
    return WeightedGraph.from_arrays(G.n, u, v, np.array(list(X[rows, cols]), dtype=object))


def inverse_graph(G, M, tri=None):
    """Weighted graph of ``A^-1``: edge ``c_i - r_j`` carries ``(B^-1)_{ij}``."""
    tri = triangularize(G, M) if tri is None else tri
    X = invert_unit_lower_triangular(tri.L)
    return _inverse_from_triangular(G, tri, X)


@dataclass
class Analysis:
    """Every intermediate of the decision pipeline for one graph."""

    graph: object
    matching: Matching
    dag: Dag
    tri: TriangularForm
    B_inv: np.ndarray
    inverse: WeightedGraph
    verdict: object
    B_plus: Optional[np.ndarray] = None
    D: Optional[tuple] = None
    flower: Optional[FlowerCertificate] = None
    cycle: Optional[tuple] = None

    @property
    def nonnegative(self):
        return self.B_plus is not None

    @property
    def det(self):
        return -1 if len(self.matching.pairs) % 2 else 1


def analyze(G, M=None):
    """Run certification, inversion and the balance decision on ``G``."""
    M = unique_perfect_matching(G) if M is None else M
    dag = build_dag(G, M)
    tri = triangularize(G, M)
    X = invert_unit_lower_triangular(tri.L)
    W = _inverse_from_triangular(G, tri, X)
    verdict = is_balanced(W)
    out = Analysis(G, M, dag, tri, X, W, verdict)
    if verdict.balanced:
        z = verdict.zeta.zeta
        D = []
        for r, c in tri.pairs:
            if z[r] != z[c]:  # pragma: no cover - matching edges have weight +1
                raise ArithmeticError(f"pair ({r}, {c}) switched apart")
            D.append(z[r])
        d = np.array(D, dtype=object)
        B_plus = X * np.outer(d, d)
        if np.any(B_plus < 0):  # pragma: no cover
            raise ArithmeticError("switched inverse has a negative entry")
        out.B_plus, out.D = B_plus, tuple(D)
    else:
        cyc = chordless_negative_cycle(W, verdict.cycle)
        cert = flower_check(G, M, cyc, dag=dag)
        if not cert.odd:  # pragma: no cover - a chordless negative cycle is always an odd flower
            raise ArithmeticError(f"chordless negative cycle {cyc} gave an even flower")
        out.cycle, out.flower = cyc, cert
    return out


def find_odd_flower(G, M=None):
    """An odd-flower certificate, or ``None`` when the inverse graph is balanced."""
    return analyze(G, M).flower


def nonnegative_inverse(G):
    """``(B_plus, D)`` with ``D B^-1 D = B_plus >= 0``, or a :class:`FlowerCertificate`.

    ``B^-1`` is taken in the triangular pair order of :func:`triangularize`; ``D``
    lists the diagonal of the switching matrix in that order.
    """
    res = analyze(G)
    if res.nonnegative:
        return res.B_plus, res.D
    return res.flower
