"""Seeded instance generators and the corpus manifest.

Randomness comes from ``numpy.random.default_rng(seed)`` (PCG64), so a
``(generator, parameters, seed)`` record regenerates its instance exactly.
"""

from __future__ import annotations

import json

import numpy as np

from .graph import BipartiteGraph
from .matching import Dag, unique_perfect_matching


def random_lower_triangular(n_pairs, p, rng):
    """Unit lower-triangular 0/1 matrix; each strictly-lower entry is 1 with probability ``p``."""
    if not 0 <= p <= 1:
        raise ValueError("density must lie in [0, 1]")
    low = np.tril(rng.random((n_pairs, n_pairs)) < p, -1)
    return low | np.eye(n_pairs, dtype=bool)


def random_unique_pm_graph(n_pairs, p, seed, shuffle=True):
    """Bipartite graph with a unique perfect matching from a random triangular matrix.

    Row ``i`` becomes vertex ``perm[i]`` and column ``j`` vertex ``perm[n_pairs + j]``
    (``perm`` is the identity when ``shuffle`` is false). The matching is
    re-certified before returning.
    """
    rng = np.random.default_rng(seed)
    L = random_lower_triangular(n_pairs, p, rng)
    n = 2 * n_pairs
    perm = rng.permutation(n) if shuffle else np.arange(n)
    rows, cols = np.nonzero(L)
    edges = list(zip(perm[rows].tolist(), perm[n_pairs + cols].tolist()))
    G = BipartiteGraph.from_edges(n, edges)
    unique_perfect_matching(G)
    return G


def random_matched_tree(n_pairs, seed):
    """Tree grown by hanging a new matched pendant edge off a uniformly random vertex."""
    if n_pairs < 1:
        raise ValueError("need at least one pair")
    rng = np.random.default_rng(seed)
    edges = [(0, 1)]
    for t in range(1, n_pairs):
        v = int(rng.integers(0, 2 * t))
        edges += [(v, 2 * t), (2 * t, 2 * t + 1)]
    G = BipartiteGraph.from_edges(2 * n_pairs, edges)
    if G.m != G.n - 1:  # pragma: no cover
        raise AssertionError("generator produced a non-tree")
    unique_perfect_matching(G)
    return G


def random_dag(k, p, seed):
    """Acyclic digraph on ``k`` vertices with arcs ``j -> i`` (``j > i``) of probability ``p``."""
    rng = np.random.default_rng(seed)
    low = np.tril(rng.random((k, k)) < p, -1)
    arcs = frozenset((int(j), int(i)) for j, i in zip(*np.nonzero(low)))
    return Dag(tuple((2 * i, 2 * i + 1) for i in range(k)), arcs)


GENERATORS = {
    "unique_pm": lambda params, seed: random_unique_pm_graph(int(params["pairs"]), float(params["p"]), seed),
    "matched_tree": lambda params, seed: random_matched_tree(int(params["pairs"]), seed),
}


def record(generator, seed, **params):
    return {"generator": generator, "parameters": params, "seed": int(seed)}


def regenerate(rec):
    try:
        gen = GENERATORS[rec["generator"]]
    except KeyError:
        raise ValueError(f"unknown generator {rec['generator']!r}") from None
    return gen(rec["parameters"], rec["seed"])


def dump_manifest(records, path):
    with open(path, "w") as fh:
        json.dump(list(records), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_manifest(path):
    with open(path) as fh:
        return json.load(fh)


def corpus_records(count, max_pairs, seed, generator="unique_pm"):
    """Deterministic list of records: pair counts in ``1..max_pairs``, densities in ``[0, 1)``."""
    rng = np.random.default_rng(seed)
    out = []
    for idx in range(count):
        pairs = int(rng.integers(1, max_pairs + 1))
        inst_seed = int(rng.integers(0, 2**31 - 1))
        if generator == "unique_pm":
            p = round(float(rng.random()), 6)
            out.append(record("unique_pm", inst_seed, pairs=pairs, p=p))
        else:
            out.append(record(generator, inst_seed, pairs=pairs))
    return out
