"""Graph and exact integer matrix data model.

Matrices are numpy arrays of ``dtype=object`` holding Python ints, so every
entry is an exact arbitrary-precision integer. Vertex ids are dense
``0..n-1``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .errors import EdgeListSyntaxError, NotBipartite, OrderMismatch


# ---------------------------------------------------------------------------
# integer matrices


def int_matrix(rows, shape=None):
    """Exact integer matrix from nested sequences (or another array)."""
    if shape is not None and len(rows) == 0:
        return np.zeros(shape, dtype=object)
    arr = np.array(rows, dtype=object)
    if arr.ndim != 2:
        if arr.size == 0:
            return np.zeros((0, 0), dtype=object)
        raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        if isinstance(x, (bool, np.bool_)):
            x = int(x)
        if isinstance(x, (float, np.floating)):
            raise TypeError("floating-point entry in an integer matrix")
        out[idx] = int(x)
    return out


def identity(n):
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


def zeros(rows, cols):
    out = np.empty((rows, cols), dtype=object)
    out.fill(0)
    return out


def to_lists(M):
    return [[int(x) for x in row] for row in M]


def matrices_equal(A, B):
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    return A.shape == B.shape and all(int(a) == int(b) for a, b in zip(A.flat, B.flat))


def is_unit_lower_triangular(L, zero_one=False):
    L = np.asarray(L, dtype=object)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        return False
    n = L.shape[0]
    if n == 0:
        return True
    if np.any(np.triu(L, 1) != 0) or any(x != 1 for x in np.diagonal(L)):
        return False
    if zero_one:
        low = np.tril(L, -1)
        if np.any((low != 0) & (low != 1)):
            return False
    return True


# ---------------------------------------------------------------------------
# graphs


def canonical_cycle(seq):
    """Rotate a cycle to start at its smallest vertex, heading to the smaller neighbour."""
    seq = list(seq)
    if len(seq) < 3:
        return tuple(seq)
    i = seq.index(min(seq))
    seq = seq[i:] + seq[:i]
    if seq[-1] < seq[1]:
        seq = [seq[0]] + seq[:0:-1]
    return tuple(seq)


def tree_cycle(parent, u, v):
    """Cycle closed by the non-tree edge ``u-v`` in a forest given by ``parent``."""
    path_u = [u]
    while parent[path_u[-1]] >= 0:
        path_u.append(int(parent[path_u[-1]]))
    depth_u = {x: i for i, x in enumerate(path_u)}
    path_v = [v]
    while path_v[-1] not in depth_u:
        path_v.append(int(parent[path_v[-1]]))
    lca = path_v[-1]
    up = path_u[: depth_u[lca] + 1]
    down = path_v[:-1]
    return [int(x) for x in up] + [int(x) for x in reversed(down)]


def _normalize_edges(n, edges):
    seen = set()
    out = []
    for e in edges:
        a, b = int(e[0]), int(e[1])
        if not (0 <= a < n and 0 <= b < n):
            raise EdgeListSyntaxError(f"edge {a}-{b} has an id outside 0..{n - 1}")
        if a == b:
            raise EdgeListSyntaxError(f"loop at vertex {a}")
        key = (a, b) if a < b else (b, a)
        if key in seen:
            raise EdgeListSyntaxError(f"parallel edge {key[0]}-{key[1]}")
        seen.add(key)
        out.append(key)
    return tuple(sorted(out))


def bipartition(n, edges):
    """Proper two-colouring ``(R, C)`` with the smallest id of each component in ``R``.

    Raises :class:`NotBipartite` carrying an odd cycle.
    """
    edges = list(edges)
    if n == 0:
        return (), ()
    u = np.array([e[0] for e in edges], dtype=np.int64)
    v = np.array([e[1] for e in edges], dtype=np.int64)
    # an all-negative signing is balanced iff the graph is bipartite
    s = -np.ones(len(edges), dtype=np.int8)
    indptr, indices, signs = kernels.symmetric_csr(n, u, v, s)
    zeta, parent = kernels.signed_forest(n, indptr, indices, signs)
    if len(edges):
        bad = np.nonzero(zeta[u] == zeta[v])[0]
        if len(bad):
            k = int(bad[0])
            raise NotBipartite(canonical_cycle(tree_cycle(parent, int(u[k]), int(v[k]))))
    R = tuple(int(x) for x in np.nonzero(zeta > 0)[0])
    C = tuple(int(x) for x in np.nonzero(zeta < 0)[0])
    return R, C


@dataclass(frozen=True)
class BipartiteGraph:
    """Simple graph on ``0..n-1`` with a certified bipartition ``(R, C)``."""

    n: int
    edges: tuple
    R: tuple
    C: tuple

    @classmethod
    def from_edges(cls, n, edges):
        edges = _normalize_edges(n, edges)
        R, C = bipartition(n, edges)
        return cls(n, edges, R, C)

    def __post_init__(self):
        side = np.zeros(self.n, dtype=np.int8)
        side[list(self.R)] = 1
        side[list(self.C)] = -1
        if len(self.R) + len(self.C) != self.n or np.any(side == 0):
            raise ValueError("R and C must partition the vertex set")
        for a, b in self.edges:
            if side[a] == side[b]:
                raise ValueError(f"edge {a}-{b} does not cross the bipartition")

    @cached_property
    def adj(self):
        nbrs = [[] for _ in range(self.n)]
        for a, b in self.edges:
            nbrs[a].append(b)
            nbrs[b].append(a)
        return tuple(tuple(sorted(x)) for x in nbrs)

    @cached_property
    def edge_set(self):
        return frozenset(self.edges)

    @cached_property
    def in_R(self):
        mask = [False] * self.n
        for r in self.R:
            mask[r] = True
        return tuple(mask)

    def has_edge(self, a, b):
        return ((a, b) if a < b else (b, a)) in self.edge_set

    @property
    def m(self):
        return len(self.edges)

    def to_json(self):
        return {"n": self.n, "edges": [list(e) for e in self.edges], "R": list(self.R), "C": list(self.C)}

    @classmethod
    def from_json(cls, obj):
        g = cls.from_edges(int(obj["n"]), [tuple(e) for e in obj["edges"]])
        if "R" in obj and (tuple(sorted(obj["R"])) != g.R or tuple(sorted(obj["C"])) != g.C):
            # an explicit bipartition is honoured when it is valid
            return cls(g.n, g.edges, tuple(sorted(obj["R"])), tuple(sorted(obj["C"])))
        return g

    def dumps(self):
        return json.dumps(self.to_json(), separators=(",", ":"))


@dataclass(frozen=True)
class Multigraph:
    """Vertices ``0..n-1`` and a multiset of unordered pairs; loops allowed."""

    n: int
    edges: tuple = field(default=())

    @cached_property
    def multiplicity(self):
        return Counter((a, b) if a <= b else (b, a) for a, b in self.edges)

    def is_bipartite(self):
        if any(a == b for a, b in self.edges):
            return False
        simple = sorted(self.multiplicity)
        try:
            bipartition(self.n, simple)
        except NotBipartite:
            return False
        return True


# ---------------------------------------------------------------------------
# edge-list text format


def parse_graph(text):
    """Parse the ``n m`` / ``e u v`` edge-list format into a :class:`BipartiteGraph`."""
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if header is None:
            if len(tok) != 2:
                raise EdgeListSyntaxError("header must be 'n m'", lineno)
            try:
                header = (int(tok[0]), int(tok[1]))
            except ValueError:
                raise EdgeListSyntaxError("header must hold two integers", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise EdgeListSyntaxError("negative count in header", lineno)
            continue
        if len(tok) != 3 or tok[0] != "e":
            raise EdgeListSyntaxError(f"expected 'e u v', got {line!r}", lineno)
        try:
            a, b = int(tok[1]), int(tok[2])
        except ValueError:
            raise EdgeListSyntaxError(f"non-integer vertex id in {line!r}", lineno) from None
        if not (0 <= a < header[0] and 0 <= b < header[0]):
            raise EdgeListSyntaxError(f"vertex id out of range in {line!r}", lineno)
        edges.append((a, b))
    if header is None:
        raise EdgeListSyntaxError("empty document")
    if len(edges) != header[1]:
        raise EdgeListSyntaxError(f"header announces {header[1]} edges, found {len(edges)}")
    return BipartiteGraph.from_edges(header[0], edges)


def format_graph(G):
    """Canonical edge-list text (sorted edges, no comments)."""
    lines = [f"{G.n} {G.m}"]
    lines += [f"e {a} {b}" for a, b in G.edges]
    return "\n".join(lines) + "\n"


def load_graph(path):
    with open(path) as fh:
        text = fh.read()
    if str(path).endswith(".json"):
        return BipartiteGraph.from_json(json.loads(text))
    return parse_graph(text)


# ---------------------------------------------------------------------------
# matrices from graphs


def bipartite_adjacency(G, row_order=None, col_order=None):
    """0/1 ``|R| x |C|`` block of the adjacency matrix in the given vertex orders."""
    row_order = tuple(G.R if row_order is None else row_order)
    col_order = tuple(G.C if col_order is None else col_order)
    if sorted(row_order) != sorted(G.R):
        raise OrderMismatch("row_order is not a permutation of R")
    if sorted(col_order) != sorted(G.C):
        raise OrderMismatch("col_order is not a permutation of C")
    ri = {v: i for i, v in enumerate(row_order)}
    ci = {v: j for j, v in enumerate(col_order)}
    B = zeros(len(row_order), len(col_order))
    for a, b in G.edges:
        if a in ri:
            B[ri[a], ci[b]] = 1
        else:
            B[ri[b], ci[a]] = 1
    return B


def assemble_adjacency(B):
    """Symmetric block matrix ``[[0, B], [B^T, 0]]``."""
    B = np.asarray(B, dtype=object)
    r, c = B.shape
    A = zeros(r + c, r + c)
    A[:r, r:] = B
    A[r:, :r] = B.T
    return A


def graph_from_biadjacency(B):
    """Bipartite graph with rows as vertices ``0..r-1`` and columns as ``r..r+c-1``."""
    B = np.asarray(B, dtype=object)
    r, c = B.shape
    edges = []
    for i in range(r):
        for j in range(c):
            if B[i, j] not in (0, 1):
                raise ValueError(f"entry ({i},{j}) = {B[i, j]} is not 0/1")
            if B[i, j]:
                edges.append((i, r + j))
    return BipartiteGraph.from_edges(r + c, edges)


# ---------------------------------------------------------------------------
# Matrix Market (coordinate, integer)


def format_mtx(M, comment=None):
    M = np.asarray(M, dtype=object)
    rows, cols = M.shape
    entries = [(i, j, int(M[i, j])) for i in range(rows) for j in range(cols) if M[i, j] != 0]
    out = ["%%MatrixMarket matrix coordinate integer general"]
    if comment:
        out += [f"% {line}" for line in comment.splitlines()]
    out.append(f"{rows} {cols} {len(entries)}")
    out += [f"{i + 1} {j + 1} {x}" for i, j, x in entries]
    return "\n".join(out) + "\n"


def parse_mtx(text):
    lines = text.splitlines()
    if not lines or not lines[0].startswith("%%MatrixMarket"):
        raise EdgeListSyntaxError("missing %%MatrixMarket banner", 1)
    banner = lines[0].split()
    if len(banner) < 5 or banner[1].lower() != "matrix" or banner[2].lower() != "coordinate":
        raise EdgeListSyntaxError("only 'matrix coordinate' Matrix Market files are supported", 1)
    field_, symmetry = banner[3].lower(), banner[4].lower()
    if field_ not in ("integer", "pattern"):
        raise EdgeListSyntaxError(f"field {field_!r} is not exact-integer", 1)
    if symmetry not in ("general", "symmetric"):
        raise EdgeListSyntaxError(f"symmetry {symmetry!r} unsupported", 1)
    body = [(k, ln.strip()) for k, ln in enumerate(lines[1:], start=2) if ln.strip() and not ln.startswith("%")]
    if not body:
        raise EdgeListSyntaxError("missing size line")
    size = body[0][1].split()
    rows, cols, nnz = (int(x) for x in size)
    M = zeros(rows, cols)
    for k, ln in body[1:]:
        tok = ln.split()
        i, j = int(tok[0]) - 1, int(tok[1]) - 1
        x = 1 if field_ == "pattern" else int(tok[2])
        if not (0 <= i < rows and 0 <= j < cols):
            raise EdgeListSyntaxError("index out of range", k)
        M[i, j] = x
        if symmetry == "symmetric":
            M[j, i] = x
    if len(body) - 1 != nnz:
        raise EdgeListSyntaxError(f"size line announces {nnz} entries, found {len(body) - 1}")
    return M


def read_mtx(path):
    with open(path) as fh:
        return parse_mtx(fh.read())


def write_mtx(path, M, comment=None):
    with open(path, "w") as fh:
        fh.write(format_mtx(M, comment))
