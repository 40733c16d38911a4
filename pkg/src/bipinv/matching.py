"""Unique perfect matchings, the contracted digraph, alternating-path statistics and flowers."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import (
    CycleFound,
    NoPerfectMatching,
    NotFlower,
    NotUnique,
    SameVertex,
    SizeTooSmall,
)


@dataclass(frozen=True)
class Matching:
    """A perfect matching with the pendant-elimination order that certifies uniqueness.

    ``pairs`` holds ``(r, c)`` tuples (``r`` in R) sorted by ``r``;
    ``elimination_order`` holds ``(pendant, partner)`` tuples in elimination order.
    """

    pairs: tuple
    elimination_order: tuple

    @cached_property
    def mate(self):
        out = {}
        for r, c in self.pairs:
            out[r] = c
            out[c] = r
        return out

    @cached_property
    def edges(self):
        return frozenset((min(p), max(p)) for p in self.pairs)

    def __len__(self):
        return len(self.pairs)

    def contains(self, a, b):
        return self.mate.get(a) == b


def _pairs_from(G, mate_pairs):
    in_R = G.in_R
    return tuple(sorted((a, b) if in_R[a] else (b, a) for a, b in mate_pairs))


def replay_elimination(G, order):
    """True iff each step removes a degree-1 vertex together with its only neighbour and the graph empties."""
    alive = [True] * G.n
    deg = [len(x) for x in G.adj]
    for v, u in order:
        if not (alive[v] and alive[u]) or deg[v] != 1 or not G.has_edge(v, u):
            return False
        for x in (v, u):
            alive[x] = False
        for x in (v, u):
            for w in G.adj[x]:
                if alive[w]:
                    deg[w] -= 1
    return not any(alive)


def _maximum_matching(G, vertices=None):
    """Maximum matching on the subgraph induced by ``vertices`` (all by default) as a dict."""
    keep = set(range(G.n)) if vertices is None else set(vertices)
    rows = [r for r in G.R if r in keep]
    cols = [c for c in G.C if c in keep]
    if not rows or not cols:
        return {}
    ri = {v: i for i, v in enumerate(rows)}
    ci = {v: j for j, v in enumerate(cols)}
    ii, jj = [], []
    for a, b in G.edges:
        if a in keep and b in keep:
            r, c = (a, b) if a in ri else (b, a)
            ii.append(ri[r])
            jj.append(ci[c])
    mat = sparse.csr_matrix((np.ones(len(ii), dtype=np.int8), (ii, jj)), shape=(len(rows), len(cols)))
    match = maximum_bipartite_matching(mat, perm_type="column")
    out = {}
    for i, j in enumerate(match):
        if j >= 0:
            out[rows[i]] = cols[j]
            out[cols[j]] = rows[i]
    return out


def _alternating_cycle(G, alive, mate):
    """Closed walk r, c, r', c', ... alternating non-matching / matching edges."""
    start = min(v for v in range(G.n) if alive[v] and G.in_R[v])
    seen = {}
    walk = []
    r = start
    while r not in seen:
        seen[r] = len(walk)
        c = min(w for w in G.adj[r] if alive[w] and w != mate[r])
        walk += [r, c]
        r = mate[c]
    return tuple(walk[seen[r]:])


def unique_perfect_matching(G):
    """Certify that ``G`` has exactly one perfect matching and return it.

    Pendant elimination always removes the smallest-id degree-1 vertex.
    Raises :class:`NoPerfectMatching` or :class:`NotUnique` otherwise.
    """
    n = G.n
    alive = [True] * n
    deg = [len(x) for x in G.adj]
    heap = [v for v in range(n) if deg[v] == 1]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        if not alive[v] or deg[v] != 1:
            continue
        u = next(w for w in G.adj[v] if alive[w])
        order.append((v, u))
        alive[v] = alive[u] = False
        for x in (v, u):
            for w in G.adj[x]:
                if alive[w]:
                    deg[w] -= 1
                    if deg[w] == 1:
                        heapq.heappush(heap, w)
    if not any(alive):
        return Matching(_pairs_from(G, order), tuple(order))

    full = _maximum_matching(G)
    if len(full) < n:
        raise NoPerfectMatching(
            f"maximum matching covers {len(full)} of {n} vertices", matched=len(full) // 2
        )
    cycle = _alternating_cycle(G, alive, full)
    pairs = _pairs_from(G, [(r, full[r]) for r in G.R])
    raise NotUnique(pairs, cycle)


# ---------------------------------------------------------------------------
# contracted digraph


def triangular_pair_order(pairs, arcs):
    """Order matched pairs so every arc points to a smaller index.

    ``pairs`` is a sequence of ``(r, c)``; ``arcs`` a set of ``(p, q)`` positions
    into ``pairs``. Kahn's algorithm on sinks, smallest ``r`` first. Returns a
    list of positions. Raises :class:`CycleFound` when the arcs are cyclic.
    """
    k = len(pairs)
    outdeg = [0] * k
    preds = [[] for _ in range(k)]
    for p, q in arcs:
        outdeg[p] += 1
        preds[q].append(p)
    heap = [(pairs[p][0], p) for p in range(k) if outdeg[p] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, q = heapq.heappop(heap)
        order.append(q)
        for p in preds[q]:
            outdeg[p] -= 1
            if outdeg[p] == 0:
                heapq.heappush(heap, (pairs[p][0], p))
    if len(order) < k:
        left = set(range(k)) - set(order)
        succ = {p: sorted(q for (a, q) in arcs if a == p and q in left) for p in left}
        x = min(left)
        seen = {}
        walk = []
        while x not in seen:
            seen[x] = len(walk)
            walk.append(x)
            x = succ[x][0]
        raise CycleFound(tuple(pairs[p] for p in walk[seen[x]:]))
    return order


@dataclass(frozen=True)
class Dag:
    """One vertex per matched pair; arc ``(j, i)`` means ``a_j -> a_i`` and always ``j > i``."""

    pairs: tuple
    arcs: frozenset

    @property
    def k(self):
        return len(self.pairs)

    @cached_property
    def succ(self):
        out = [[] for _ in range(self.k)]
        for j, i in self.arcs:
            out[j].append(i)
        return tuple(tuple(sorted(x)) for x in out)

    @cached_property
    def pred(self):
        out = [[] for _ in range(self.k)]
        for j, i in self.arcs:
            out[i].append(j)
        return tuple(tuple(sorted(x)) for x in out)

    @cached_property
    def pair_index(self):
        out = {}
        for idx, (r, c) in enumerate(self.pairs):
            out[r] = idx
            out[c] = idx
        return out

    def descendants(self, j):
        """Indices reachable from ``a_j`` (including ``j``)."""
        seen = {j}
        stack = [j]
        while stack:
            x = stack.pop()
            for y in self.succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def ancestors(self, i):
        seen = {i}
        stack = [i]
        while stack:
            x = stack.pop()
            for y in self.pred[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def is_acyclic(self):
        return all(j > i for j, i in self.arcs)


def build_dag(G, M):
    """Orient edges R -> C and contract the matching; pairs are indexed so arcs descend."""
    raw = list(M.pairs)
    where = {}
    for idx, (r, c) in enumerate(raw):
        where[r] = idx
        where[c] = idx
    arcs = set()
    in_R = G.in_R
    for a, b in G.edges:
        r, c = (a, b) if in_R[a] else (b, a)
        if M.mate.get(r) == c:
            continue
        arcs.add((where[r], where[c]))
    order = triangular_pair_order(raw, arcs)
    pos = {p: idx for idx, p in enumerate(order)}
    dag = Dag(tuple(raw[p] for p in order), frozenset((pos[p], pos[q]) for p, q in arcs))
    if not dag.is_acyclic():  # pragma: no cover - triangular_pair_order guarantees it
        raise CycleFound()
    return dag


# ---------------------------------------------------------------------------
# alternating-path statistics


@dataclass(frozen=True)
class PathProfile:
    tau: int
    tau_e: int
    tau_o: int

    def __post_init__(self):
        if self.tau != self.tau_e + self.tau_o or min(self.tau_e, self.tau_o) < 0:
            raise ValueError(f"inconsistent profile {self}")

    @property
    def signed(self):
        """``tau_e - tau_o``: the inverse-graph weight of the pair."""
        return self.tau_e - self.tau_o

    def to_json(self):
        return {"tau": self.tau, "tau_e": self.tau_e, "tau_o": self.tau_o}


ZERO_PROFILE = PathProfile(0, 0, 0)


def _oriented(G, dag, i, j):
    """``(x, y)`` pair indices with paths running ``a_y -> a_x``; None when i, j share a side."""
    in_R = G.in_R
    if in_R[i] == in_R[j]:
        return None
    r, c = (i, j) if in_R[i] else (j, i)
    return dag.pair_index[r], dag.pair_index[c]


def _path_counts(dag, y, x):
    cnt = {y: 1}
    sgn = {y: 1}
    for k in range(y, x, -1):
        if k not in cnt:
            continue
        ck, sk = cnt[k], sgn[k]
        for t in dag.succ[k]:
            if t >= x:
                cnt[t] = cnt.get(t, 0) + ck
                sgn[t] = sgn.get(t, 0) - sk
    return cnt.get(x, 0), sgn.get(x, 0)


def tau_counts(G, M, i, j, dag=None):
    """Counts of M-alternating ``i``-``j`` paths, split by parity of non-matching edges.

    Computed as (signed) path counts in the contracted digraph.
    """
    if i == j:
        raise SameVertex(f"tau_counts needs two distinct vertices, got {i} twice")
    dag = build_dag(G, M) if dag is None else dag
    xy = _oriented(G, dag, i, j)
    if xy is None:
        return ZERO_PROFILE
    x, y = xy
    if y < x:
        return ZERO_PROFILE
    total, signed = _path_counts(dag, y, x)
    return PathProfile(total, (total + signed) // 2, (total - signed) // 2)


def m_span(G, M, S, dag=None):
    """Edge set (sorted tuple) of the union of all M-alternating paths between vertices of ``S``."""
    S = sorted(set(S))
    if len(S) <= 1:
        return ()
    dag = build_dag(G, M) if dag is None else dag
    edges = set()
    desc_cache, anc_cache = {}, {}
    for i, j in combinations(S, 2):
        xy = _oriented(G, dag, i, j)
        if xy is None:
            continue
        x, y = xy
        if y < x:
            continue
        if y not in desc_cache:
            desc_cache[y] = dag.descendants(y)
        if x not in anc_cache:
            anc_cache[x] = dag.ancestors(x)
        on_path = desc_cache[y] & anc_cache[x]
        for k in on_path:
            r, c = dag.pairs[k]
            edges.add((min(r, c), max(r, c)))
            for t in dag.succ[k]:
                if t in on_path:
                    c2 = dag.pairs[t][1]
                    edges.add((min(r, c2), max(r, c2)))
    return tuple(sorted(edges))


# ---------------------------------------------------------------------------
# flowers


def _pair_key(a, b):
    return f"{min(a, b)}-{max(a, b)}"


@dataclass(frozen=True)
class FlowerCertificate:
    """Cyclic vertex order of a flower with the path profile of every pair."""

    order: tuple
    profiles: dict
    negative_pair_count: int

    @property
    def odd(self):
        return self.negative_pair_count % 2 == 1

    def profile(self, a, b):
        return self.profiles[_pair_key(a, b)]

    def to_json(self):
        return {
            "order": list(self.order),
            "profiles": {k: self.profiles[k].to_json() for k in sorted(self.profiles, key=_key_sort)},
            "negative_pairs": self.negative_pair_count,
            "odd": self.odd,
        }

    @classmethod
    def from_json(cls, obj):
        profiles = {k: PathProfile(int(v["tau"]), int(v["tau_e"]), int(v["tau_o"])) for k, v in obj["profiles"].items()}
        cert = cls(tuple(int(x) for x in obj["order"]), profiles, int(obj["negative_pairs"]))
        if bool(obj.get("odd", cert.odd)) != cert.odd:
            raise ValueError("'odd' flag disagrees with negative_pairs")
        return cert


def _key_sort(key):
    a, b = key.split("-")
    return int(a), int(b)


def flower_check(G, M, S, dag=None):
    """Decide whether ``Span_M(S)`` is a flower and return its certificate.

    The auxiliary graph on ``S`` joins pairs with ``tau_o != tau_e``; ``S`` is a
    flower iff that graph is one cycle through all of ``S``.
    """
    S = list(S)
    if len(set(S)) != len(S):
        raise ValueError("vertex set has repeated entries")
    if len(S) < 3:
        raise SizeTooSmall(f"a flower needs at least 3 vertices, got {len(S)}")
    dag = build_dag(G, M) if dag is None else dag
    S = sorted(S)
    profiles = {}
    nbrs = {v: [] for v in S}
    negative = 0
    for a, b in combinations(S, 2):
        prof = tau_counts(G, M, a, b, dag=dag)
        profiles[_pair_key(a, b)] = prof
        if prof.tau_o != prof.tau_e:
            nbrs[a].append(b)
            nbrs[b].append(a)
            if prof.tau_o > prof.tau_e:
                negative += 1
    bad = [v for v in S if len(nbrs[v]) != 2]
    if bad:
        v = bad[0]
        raise NotFlower(f"vertex {v} has {len(nbrs[v])} pairs with tau_o != tau_e (need 2)")
    order = [S[0]]
    prev, cur = None, S[0]
    nxt = min(nbrs[cur])
    while nxt != S[0]:
        order.append(nxt)
        prev, cur = cur, nxt
        a, b = nbrs[cur]
        nxt = b if a == prev else a
    if len(order) != len(S):
        raise NotFlower(f"pair graph is disconnected: cycle through {S[0]} covers {len(order)} of {len(S)} vertices")
    return FlowerCertificate(tuple(order), profiles, negative)


def validate_flower(G, M, cert, dag=None):
    """Re-derive a certificate from scratch; True iff it matches and is an odd flower inside ``G``."""
    try:
        fresh = flower_check(G, M, cert.order, dag=dag)
    except (NotFlower, SizeTooSmall, ValueError):
        return False
    if fresh.profiles != cert.profiles or fresh.negative_pair_count != cert.negative_pair_count:
        return False
    k = len(cert.order)
    for idx in range(k):
        p = fresh.profile(cert.order[idx], cert.order[(idx + 1) % k])
        if p.tau_o == p.tau_e:
            return False
    if not all(G.has_edge(a, b) for a, b in m_span(G, M, cert.order, dag=dag)):
        return False
    return cert.odd
