"""Command-line front end.

Exit codes: 0 non-negative / consistent, 10 odd flower / unbalanced,
2 precondition or input failure, 1 self-check discrepancy.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .balance import analyze, is_balanced
from .errors import BipinvError, NoPerfectMatching, NotBipartite, NotUnique
from .generators import dump_manifest, random_matched_tree, random_unique_pm_graph, record
from .graph import (
    bipartite_adjacency,
    format_graph,
    format_mtx,
    graph_from_biadjacency,
    load_graph,
    parse_graph,
    read_mtx,
)
from .linalg import inverse_in_input_order, permute_to_triangular
from .matching import build_dag, flower_check, unique_perfect_matching
from .oracles import kronecker_product
from .poset import (
    antichain,
    boolean_lattice,
    chain,
    mobius,
    mobius_balance,
    mobius_matrix,
    parse_poset,
    poset_from_dag,
    zeta_matrix,
)
from .report import build_report, dumps, error_report

EXIT_OK = 0
EXIT_DISCREPANCY = 1
EXIT_PRECONDITION = 2
EXIT_FLOWER = 10


def _emit_json(obj, target):
    text = dumps(obj)
    if target in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(target, "w") as fh:
            fh.write(text)


def _load(path):
    if path.endswith(".mtx"):
        return graph_from_biadjacency(read_mtx(path))
    return load_graph(path)


def _fail(stage, exc, args, G=None):
    if getattr(args, "json", None):
        _emit_json(error_report(stage, exc, G), args.json)
    else:
        print(f"error [{stage}]: {exc}", file=sys.stderr)
    return EXIT_PRECONDITION


def _load_or_fail(args):
    try:
        return _load(args.path), None
    except NotBipartite as exc:
        return None, _fail("bipartition", exc, args)
    except (BipinvError, ValueError, OSError) as exc:
        return None, _fail("parse", exc, args)


def _require_seed(args):
    if args.seed is None:
        if os.environ.get("CI"):
            print("error: --seed is required when CI is set", file=sys.stderr)
            return None
        return 0
    return args.seed


def cmd_analyze(args):
    G, code = _load_or_fail(args)
    if G is None:
        return code
    stem = os.path.splitext(os.path.basename(args.path))[0]
    try:
        rep, _ = build_report(G, mtx_dir=args.mtx_out, stem=stem, timing=args.timing)
    except NotBipartite as exc:  # pragma: no cover - caught at load time
        return _fail("bipartition", exc, args, G)
    if args.json:
        _emit_json(rep, args.json)
    else:
        print(f"status: {rep['status']}")
        if rep["status"] == "error":
            err = rep["error"]
            print(f"stage: {err['stage']} ({err['type']}): {err['message']}")
        else:
            print(f"det: {rep['det']}")
            print(f"pairs (row/col order): {list(zip(rep['rows'], rep['cols']))}")
            if rep["status"] == "nonnegative":
                print(f"D: {rep['D']}")
            else:
                fl = rep["flower"]
                print(f"odd flower on {fl['order']} with {fl['negative_pairs']} pairs tau_o > tau_e")
    return {"nonnegative": EXIT_OK, "odd_flower": EXIT_FLOWER}.get(rep["status"], EXIT_PRECONDITION)


def cmd_invert(args):
    try:
        if args.path.endswith(".mtx"):
            B = read_mtx(args.path)
            G = graph_from_biadjacency(B)
            rows, cols = list(range(B.shape[0])), list(range(B.shape[0], B.shape[0] + B.shape[1]))
        else:
            G = load_graph(args.path)
            rows, cols = list(G.R), list(G.C)
            B = bipartite_adjacency(G, rows, cols)
        M = unique_perfect_matching(G)
        tri = permute_to_triangular(B, M.elimination_order, rows, cols)
        X = inverse_in_input_order(B, tri)
    except NotBipartite as exc:
        return _fail("bipartition", exc, args)
    except (NoPerfectMatching, NotUnique) as exc:
        return _fail("matching", exc, args)
    except (BipinvError, ValueError, OSError) as exc:
        return _fail("parse", exc, args)
    comment = f"inverse; rows are columns {cols} of the input, columns are rows {rows}"
    text = format_mtx(X, comment=comment)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_balance(args):
    G, code = _load_or_fail(args)
    if G is None:
        return code
    try:
        res = analyze(G)
    except (NoPerfectMatching, NotUnique) as exc:
        return _fail("matching", exc, args, G)
    verdict = is_balanced(res.inverse)
    obj = {"balanced": verdict.balanced}
    if verdict.balanced:
        obj["zeta"] = list(verdict.zeta.zeta)
    else:
        obj["negative_cycle"] = list(verdict.cycle)
        obj["chordless_cycle"] = list(res.cycle)
    obj["inverse_edges"] = [list(e) for e in res.inverse.edges()]
    if args.json:
        _emit_json(obj, args.json)
    else:
        print("balanced" if verdict.balanced else f"unbalanced; negative cycle {list(verdict.cycle)}")
    return EXIT_OK if verdict.balanced else EXIT_FLOWER


def cmd_flower(args):
    G, code = _load_or_fail(args)
    if G is None:
        return code
    try:
        if args.set:
            S = [int(x) for x in args.set.split(",")]
            M = unique_perfect_matching(G)
            cert = flower_check(G, M, S)
        else:
            cert = analyze(G).flower
    except (NoPerfectMatching, NotUnique) as exc:
        return _fail("matching", exc, args, G)
    except BipinvError as exc:
        if args.json:
            _emit_json({"flower": None, "reason": str(exc)}, args.json)
        else:
            print(str(exc))
        return EXIT_OK
    if args.json:
        _emit_json({"flower": cert.to_json() if cert else None}, args.json)
    elif cert is None:
        print("no odd flower: the inverse is diagonally similar to a non-negative matrix")
    else:
        kind = "odd" if cert.odd else "even"
        print(f"{kind} flower on {list(cert.order)}; {cert.negative_pair_count} pairs with tau_o > tau_e")
    return EXIT_FLOWER if cert is not None and cert.odd else EXIT_OK


def _read_poset_or_graph(path):
    with open(path) as fh:
        text = fh.read()
    first = next((ln.split("#", 1)[0].split() for ln in text.splitlines() if ln.split("#", 1)[0].strip()), [])
    if len(first) == 1:
        return parse_poset(text)
    G = parse_graph(text)
    return poset_from_dag(build_dag(G, unique_perfect_matching(G)))


def cmd_poset(args):
    try:
        if args.boolean is not None:
            P = boolean_lattice(args.boolean)
        elif args.chain is not None:
            P = chain(args.chain)
        elif args.antichain is not None:
            P = antichain(args.antichain)
        elif args.path:
            P = _read_poset_or_graph(args.path)
        else:
            print("error: give a file or one of --boolean/--chain/--antichain", file=sys.stderr)
            return EXIT_PRECONDITION
    except (BipinvError, ValueError, OSError) as exc:
        return _fail("parse", exc, args)
    Z = zeta_matrix(P)
    Mob = mobius_matrix(P)
    outcome = mobius_balance(P)
    balanced = isinstance(outcome, tuple)
    if args.mtx_out:
        os.makedirs(args.mtx_out, exist_ok=True)
        with open(os.path.join(args.mtx_out, "zeta.mtx"), "w") as fh:
            fh.write(format_mtx(Z))
        if args.mobius:
            with open(os.path.join(args.mtx_out, "mobius.mtx"), "w") as fh:
                fh.write(format_mtx(Mob))
    obj = {
        "k": P.k,
        "zeta": [[int(x) for x in row] for row in Z],
        "mobius_nonnegative_form": balanced,
    }
    if args.mobius:
        obj["mobius"] = [[int(x) for x in row] for row in Mob]
    bottom = next((i for i in range(P.k) if all(P.le(i, j) for j in range(P.k))), None)
    top = next((j for j in range(P.k) if all(P.le(i, j) for i in range(P.k))), None)
    if bottom is not None and top is not None:
        obj["mu_bottom_top"] = mobius(P, bottom, top, Mob)
    if balanced:
        obj["D"] = list(outcome[1])
    else:
        obj["flower"] = outcome.to_json()
    if args.json:
        _emit_json(obj, args.json)
    else:
        if args.mobius:
            print("moebius matrix (row = larger element):")
            for row in Mob:
                print(" ".join(str(int(x)) for x in row))
        if "mu_bottom_top" in obj:
            print(f"mu(bottom, top) = {obj['mu_bottom_top']}")
        print("moebius matrix is diagonally similar to a non-negative matrix" if balanced
              else "moebius matrix is NOT diagonally similar to a non-negative matrix")
    return EXIT_OK if balanced else EXIT_FLOWER


def cmd_gen(args):
    seed = _require_seed(args)
    if seed is None:
        return EXIT_PRECONDITION
    if args.tree:
        G = random_matched_tree(args.pairs, seed)
        rec = record("matched_tree", seed, pairs=args.pairs)
    else:
        G = random_unique_pm_graph(args.pairs, args.p, seed)
        rec = record("unique_pm", seed, pairs=args.pairs, p=args.p)
    text = format_graph(G)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.manifest:
        dump_manifest([rec], args.manifest)
    return EXIT_OK


def cmd_kron(args):
    try:
        K = kronecker_product(read_mtx(args.a), read_mtx(args.b))
    except (BipinvError, ValueError, OSError) as exc:
        return _fail("parse", exc, args)
    text = format_graph(graph_from_biadjacency(K)) if args.graph else format_mtx(K)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_selfcheck(args):
    from .selfcheck import run_selfcheck

    seed = _require_seed(args)
    if seed is None:
        return EXIT_PRECONDITION
    replay = args.replay_dir or "."
    results = run_selfcheck(args.pairs, args.count, seed, args.extra or (), replay_dir=replay, jobs=args.jobs)
    good = sum(r.ok for r in results)
    if args.json:
        _emit_json({
            "consistent": good,
            "total": len(results),
            "failures": [{"index": r.index, "source": r.label, "problems": r.problems} for r in results if not r.ok],
        }, args.json)
    else:
        for r in results:
            if not r.ok:
                print(f"instance {r.index} ({r.label}):")
                for p in r.problems:
                    print(f"  {p}")
        print(f"{good}/{len(results)} consistent")
    return EXIT_OK if good == len(results) else EXIT_DISCREPANCY


def build_parser():
    ap = argparse.ArgumentParser(prog="bipinv", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_json(p):
        p.add_argument("--json", nargs="?", const="-", default=None, metavar="FILE",
                       help="write JSON to FILE (stdout when omitted)")

    p = sub.add_parser("analyze", help="full pipeline: non-negative form or odd flower")
    p.add_argument("path")
    add_json(p)
    p.add_argument("--mtx-out", metavar="DIR")
    p.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("invert", help="exact inverse of the bipartite adjacency matrix")
    p.add_argument("path", help="edge-list graph or Matrix Market B")
    p.add_argument("-o", "--output")
    add_json(p)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("balance", help="balance test of the inverse graph")
    p.add_argument("path")
    add_json(p)
    p.set_defaults(func=cmd_balance)

    p = sub.add_parser("flower", help="find an odd flower, or check a given vertex set")
    p.add_argument("path")
    p.add_argument("--set", help="comma-separated vertex ids to test as a flower")
    add_json(p)
    p.set_defaults(func=cmd_flower)

    p = sub.add_parser("poset", help="Zeta / Moebius matrices and their balance")
    p.add_argument("path", nargs="?")
    p.add_argument("--boolean", type=int, metavar="M")
    p.add_argument("--chain", type=int, metavar="K")
    p.add_argument("--antichain", type=int, metavar="K")
    p.add_argument("--mobius", action="store_true")
    p.add_argument("--mtx-out", metavar="DIR")
    add_json(p)
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("gen", help="random unique-perfect-matching graph or matched tree")
    p.add_argument("--pairs", type=int, required=True)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--seed", type=int)
    p.add_argument("--tree", action="store_true")
    p.add_argument("-o", "--output")
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("kron", help="Kronecker product of two triangular 0/1 matrices")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--graph", action="store_true", help="emit the product as an edge list")
    p.add_argument("-o", "--output")
    add_json(p)
    p.set_defaults(func=cmd_kron)

    p = sub.add_parser("selfcheck", help="cross-validate against brute-force oracles")
    p.add_argument("--pairs", type=int, default=6)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--extra", nargs="*", help="additional graph files to include")
    p.add_argument("--replay-dir")
    p.add_argument("--jobs", type=int, default=1)
    add_json(p)
    p.set_defaults(func=cmd_selfcheck)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
