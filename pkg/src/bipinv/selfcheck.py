"""Cross-validation battery: every fast routine against its brute-force oracle."""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import oracles
from .balance import analyze, cycle_sign
from .errors import BipinvError
from .graph import assemble_adjacency, bipartite_adjacency, format_graph, load_graph
from .generators import corpus_records, regenerate
from .linalg import assemble_inverse_adjacency, det_adjacency
from .matching import replay_elimination, tau_counts, validate_flower
from .poset import check_mobius_recurrence, mobius_matrix, poset_from_dag, zeta_at


@dataclass
class InstanceResult:
    index: int
    label: str
    problems: list = field(default_factory=list)
    verdict: str = ""

    @property
    def ok(self):
        return not self.problems


def check_instance(G, index=0, label=""):
    """Run every applicable cross-check on ``G``; problems are collected, never raised."""
    out = InstanceResult(index, label)
    probs = out.problems
    try:
        res = analyze(G)
    except BipinvError as exc:
        probs.append(f"pipeline: {type(exc).__name__}: {exc}")
        out.verdict = "error"
        return out
    M, dag, tri, X, W = res.matching, res.dag, res.tri, res.B_inv, res.inverse
    out.verdict = "nonnegative" if res.nonnegative else "odd_flower"
    k = len(M.pairs)

    if not replay_elimination(G, M.elimination_order):
        probs.append("matching: elimination order does not replay")
    if G.n <= oracles.PM_BOUND and len(oracles.enumerate_perfect_matchings(G)) != 1:
        probs.append("matching: brute force finds more than one perfect matching")
    if not dag.is_acyclic():
        probs.append("dag: contracted digraph has a cycle")

    det = det_adjacency(G, M)
    A = assemble_adjacency(bipartite_adjacency(G, [r for r, _ in tri.pairs], [c for _, c in tri.pairs]))
    if G.n <= oracles.SACHS_BOUND:
        if oracles.det_via_sachs(G) != det:
            probs.append("det: Sachs expansion disagrees")
        if oracles.bareiss_det(A) != det:
            probs.append("det: fraction-free elimination disagrees")
    Ainv = assemble_inverse_adjacency(X)
    if not np.all(A.dot(Ainv) == np.eye(2 * k, dtype=np.int64)):
        probs.append("inverse: A * A^-1 != I")

    if k <= oracles.PATH_PAIR_BOUND:
        for r, _ in tri.pairs:
            for _, c in tri.pairs:
                fast = tau_counts(G, M, r, c, dag=dag)
                slow = oracles.enumerate_alternating_paths(G, M, r, c)
                if fast != slow:
                    probs.append(f"tau: ({r},{c}) dp {fast} != enumeration {slow}")
                if W.weight(r, c) != fast.signed:
                    probs.append(f"inverse: weight of {r}-{c} is not tau_e - tau_o")

    if G.n <= oracles.SWITCH_BOUND:
        if oracles.balance_exhaustive(W).balanced != res.verdict.balanced:
            probs.append("balance: exhaustive switching disagrees")
    if res.nonnegative:
        z = np.array(res.verdict.zeta.zeta, dtype=np.int64)
        if W.m and np.any(z[W.u] * z[W.v] * W.signs <= 0):
            probs.append("balance: switching leaves a negative edge")
        if np.any(res.B_plus < 0):
            probs.append("balance: B_plus has a negative entry")
    else:
        if cycle_sign(W, res.verdict.cycle) >= 0 or cycle_sign(W, res.cycle) >= 0:
            probs.append("balance: witness cycle is not negative")
        if not validate_flower(G, M, res.flower, dag=dag):
            probs.append("flower: certificate does not validate as an odd flower")

    _, quotient_bip = oracles.quotient_by_matching(G, M, dag=dag)
    if quotient_bip and not res.nonnegative:
        probs.append("quotient: bipartite G/M but no non-negative form")

    if not np.all(zeta_at(dag, 0) == tri.L):
        probs.append("poset: Z(0) differs from the triangular B")
    P = poset_from_dag(dag)
    Mob = mobius_matrix(P)
    if not np.all(zeta_at(dag, 1).dot(Mob) == np.eye(k, dtype=np.int64)):
        probs.append("poset: Z(1) * Moebius != I")
    if not check_mobius_recurrence(P, Mob):
        probs.append("poset: Moebius recurrence fails")
    return out


def _run_record(args):
    index, rec = args
    G = regenerate(rec)
    return check_instance(G, index, json.dumps(rec, sort_keys=True)), G


def run_selfcheck(pairs, count, seed, extra_paths=(), replay_dir=None, jobs=1):
    """Check ``count`` seeded instances with up to ``pairs`` pairs plus any extra graph files.

    Failing instances are written to ``replay_dir`` (edge list + JSON note).
    Returns the list of :class:`InstanceResult` in instance order.
    """
    recs = list(enumerate(corpus_records(count, pairs, seed)))
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            pairs_out = list(pool.map(_run_record, recs))
    else:
        pairs_out = [_run_record(r) for r in recs]
    results = [r for r, _ in pairs_out]
    graphs = [g for _, g in pairs_out]
    for path in extra_paths:
        idx = len(results)
        try:
            G = load_graph(path)
        except BipinvError as exc:
            res = InstanceResult(idx, str(path), [f"load: {type(exc).__name__}: {exc}"], "error")
            results.append(res)
            graphs.append(None)
            continue
        results.append(check_instance(G, idx, str(path)))
        graphs.append(G)
    if replay_dir is not None:
        for res, G in zip(results, graphs):
            if res.ok:
                continue
            os.makedirs(replay_dir, exist_ok=True)
            stem = os.path.join(replay_dir, f"counterexample_{res.index:05d}")
            if G is not None:
                with open(stem + ".txt", "w") as fh:
                    fh.write(format_graph(G))
            with open(stem + ".json", "w") as fh:
                json.dump({"index": res.index, "source": res.label, "problems": res.problems}, fh, indent=1)
                fh.write("\n")
    return results
