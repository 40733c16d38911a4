"""Analysis reports: JSON assembly, emission and re-validation."""

from __future__ import annotations

import hashlib
import json
import os
import time

import numpy as np

from .balance import analyze
from .errors import BipinvError, NoPerfectMatching, NotBipartite, NotUnique
from .errors import OrderMismatch
from .graph import bipartite_adjacency, format_graph, format_mtx, is_unit_lower_triangular, parse_mtx, to_lists
from .linalg import _right_product_is_identity, det_adjacency
from .matching import FlowerCertificate, Matching, replay_elimination, validate_flower


def digest(G):
    return hashlib.sha256(format_graph(G).encode()).hexdigest()


def _matrix_ref(M, name, mtx_dir, stem):
    if mtx_dir is None:
        return format_mtx(M)
    os.makedirs(mtx_dir, exist_ok=True)
    fname = f"{stem}.{name}.mtx"
    with open(os.path.join(mtx_dir, fname), "w") as fh:
        fh.write(format_mtx(M))
    return fname


def _load_ref(ref, base_dir=None):
    if ref.startswith("%%MatrixMarket"):
        return parse_mtx(ref)
    path = ref if base_dir is None else os.path.join(base_dir, ref)
    with open(path) as fh:
        return parse_mtx(fh.read())


def error_report(stage, exc, G=None):
    err = {"stage": stage, "type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, NotBipartite):
        err["odd_cycle"] = list(exc.cycle)
    if isinstance(exc, NotUnique):
        err["alternating_cycle"] = list(exc.cycle)
        err["matching"] = [list(p) for p in exc.matching]
    if isinstance(exc, NoPerfectMatching) and exc.matched is not None:
        err["maximum_matching_size"] = exc.matched
    out = {"status": "error", "error": err}
    if G is not None:
        out["input"] = {"sha256": digest(G), "n": G.n, "m": G.m}
    return out


def build_report(G, mtx_dir=None, stem="graph", timing=False):
    """Run the pipeline and return ``(report dict, Analysis or None)``."""
    t0 = time.perf_counter()
    try:
        res = analyze(G)
    except (NoPerfectMatching, NotUnique) as exc:
        return error_report("matching", exc, G), None
    t1 = time.perf_counter()
    tri = res.tri
    rep = {
        "status": "nonnegative" if res.nonnegative else "odd_flower",
        "input": {"sha256": digest(G), "n": G.n, "m": G.m},
        "det": det_adjacency(G, res.matching),
        "matching": [list(p) for p in res.matching.pairs],
        "elimination_order": [list(p) for p in res.matching.elimination_order],
        "rows": [r for r, _ in tri.pairs],
        "cols": [c for _, c in tri.pairs],
        "B": _matrix_ref(tri.L, "B", mtx_dir, stem),
        "B_inv": _matrix_ref(res.B_inv, "B_inv", mtx_dir, stem),
        "B_plus": _matrix_ref(res.B_plus, "B_plus", mtx_dir, stem) if res.nonnegative else None,
        "D": list(res.D) if res.nonnegative else None,
        "flower": res.flower.to_json() if res.flower is not None else None,
    }
    if timing:
        rep["timing"] = {"pipeline_seconds": round(t1 - t0, 6)}
    if not validate_report(rep, G, base_dir=mtx_dir):  # pragma: no cover
        raise AssertionError("report failed its own validation")
    return rep, res


def dumps(rep):
    return json.dumps(rep, indent=1, sort_keys=True) + "\n"


def validate_report(rep, G, base_dir=None):
    """Re-check a (possibly JSON round-tripped) report against its graph."""
    if rep["status"] == "error":
        return True
    if rep["input"]["sha256"] != digest(G):
        return False
    M = Matching(
        tuple(tuple(p) for p in rep["matching"]),
        tuple(tuple(p) for p in rep["elimination_order"]),
    )
    if not replay_elimination(G, M.elimination_order):
        return False
    if rep["det"] != det_adjacency(G, M):
        return False
    rows, cols = rep["rows"], rep["cols"]
    k = len(rows)
    L = _load_ref(rep["B"], base_dir)
    X = _load_ref(rep["B_inv"], base_dir)
    try:
        expected = bipartite_adjacency(G, rows, cols)
    except OrderMismatch:
        return False
    if L.shape != (k, k) or not np.all(expected == L):
        return False
    if not is_unit_lower_triangular(L) or not _right_product_is_identity(X, L):
        return False
    if rep["status"] == "nonnegative":
        d = np.array(rep["D"], dtype=object)
        Bp = _load_ref(rep["B_plus"], base_dir)
        if not all(x in (-1, 1) for x in rep["D"]):
            return False
        return bool(np.all(X * np.outer(d, d) == Bp) and np.all(Bp >= 0))
    if rep["status"] == "odd_flower":
        cert = FlowerCertificate.from_json(rep["flower"])
        return validate_flower(G, M, cert)
    return False


def report_matrices(rep, base_dir=None):
    out = {}
    for key in ("B", "B_inv", "B_plus"):
        if rep.get(key):
            out[key] = to_lists(_load_ref(rep[key], base_dir))
    return out


__all__ = ["build_report", "validate_report", "error_report", "dumps", "digest", "BipinvError"]
