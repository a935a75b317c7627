"""``optnet`` command line.

Exit codes: 0 success, 1 input error, 2 guard violation.  Every subcommand
prints a JSON document on stdout; ``--json PATH`` also writes it to a file.
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .fillings import KMAX, NMAX, eremin_value, kuratowski_network, mf, mpf, reconstruct_additive_tree
from .graphs import GraphError, WeightedGraph, kruskal_mst, spanning_tree_count
from .io import (
    InputError,
    dump,
    network_json,
    network_length_from_json,
    number_json,
    r12,
    read_graph,
    read_matrix,
    read_network,
    read_points,
    read_topology,
)
from .lp import LpError
from .metric import MetricError, check_four_point, kuratowski_embed, min_half_perimeter, validate_metric
from .plane import GeometryError, convexity_levels, euclidean_mst, twisting_number
from .ratios import KINDS, ratio_report, ratio_search
from .steiner import GuardError, smt
from .svg import render_svg

EXIT_OK, EXIT_INPUT, EXIT_GUARD = 0, 1, 2
ROUNDTRIP_TOL = 1e-12


def _num(x):
    return number_json(x)


def _exact(x):
    return str(x) if isinstance(x, Fraction) else None


def _space(args):
    rows, labels = read_matrix(args.matrix, exact=not args.float)
    return validate_metric(rows, labels=labels, exact=not args.float)


def _emit(args, doc) -> None:
    text = dump(doc)
    if getattr(args, "json", None):
        dump(doc, args.json)
    print(text)


def _network_out(args, net, meta):
    doc = network_json(net, meta)
    if getattr(args, "svg", None):
        Path(args.svg).write_text(render_svg(net, __version__))
    _emit(args, doc)


def _filling_doc(space, res, extra=None) -> dict:
    doc = {
        "topology": res.topology.to_dict() if res.topology is not None else None,
        "weights": [_num(w) for w in res.weights],
        "weights_exact": [_exact(w) for w in res.weights] if res.exact else None,
        "value": _num(res.value),
        "value_exact": _exact(res.value),
        "exact": res.exact,
        "tree": {"topology": res.tree.topology.to_dict(), "weights": [_num(w) for w in res.tree.weights]},
    }
    doc.update(extra or {})
    return doc


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_mst(args):
    p = read_points(args.points)
    net, length = euclidean_mst(p)
    _network_out(args, net, {"command": "mst", "n": len(p), "version": __version__})


def cmd_smt(args):
    p = read_points(args.points)
    res = smt(p, nmax=args.nmax, method=args.method)
    meta = {
        "command": "smt",
        "n": len(p),
        "steiner_points": len(res.network.steiner_vertices),
        "mst": r12(euclidean_mst(p)[1]),
        "min_angle": r12(res.report.min_angle) if res.report.min_angle is not None else None,
        "local_structure": res.report.passed,
        "convexity_levels": len(convexity_levels(p)),
        "twisting_number": _twisting(res.network),
        "topologies_evaluated": res.evaluated,
        "version": __version__,
    }
    _network_out(args, res.network, meta)


def _twisting(net):
    try:
        return twisting_number(net)
    except (GraphError, GeometryError):
        return None


def cmd_mf(args):
    space = _space(args)
    res = mf(space, nmax=args.nmax, method=args.method)
    rep = check_four_point(space)
    extra = {"class": rep.cls, "topologies_evaluated": res.evaluated}
    if rep.additive and space.n >= 2:
        hp, order = min_half_perimeter(space)
        extra["certificate_tour"] = {"order": list(order), "half_perimeter": _num(hp)}
    _emit(args, _filling_doc(space, res, extra))


def cmd_mpf(args):
    space = _space(args)
    topo = read_topology(args.topology)
    res = mpf(space, topo, allow_negative=args.generalized)
    extra = {"generalized": args.generalized}
    if args.eremin:
        er = eremin_value(space, topo, kmax=args.kmax)
        extra["eremin"] = {
            "lower_bound": _num(er.lower_bound),
            "exact": er.exact,
            "mpf_minus": _num(er.mpf_minus),
            "witness": None if er.witness is None else {"k": er.witness.k, "sequence": list(er.witness.sequence)},
            "counts": {str(k): c for k, c in er.counts.items()},
        }
    _emit(args, _filling_doc(space, res, extra))


def cmd_additive(args):
    space = _space(args)
    rep = check_four_point(space)
    doc = {
        "class": rep.cls,
        "additive": rep.additive,
        "pseudo_additive": rep.pseudo_additive,
        "witness": None if rep.witness is None else list(rep.witness),
        "weak_witness": None if rep.weak_witness is None else list(rep.weak_witness),
    }
    if rep.additive:
        tree = reconstruct_additive_tree(space, nmax=args.nmax)
        doc["tree"] = {"topology": tree.topology.to_dict(), "weights": [_num(w) for w in tree.weights]}
    _emit(args, doc)


def cmd_embed(args):
    space = _space(args)
    img = kuratowski_embed(space)
    d = img.distance_matrix()
    iso = all(d[i, j] == space.dist[i, j] for i in range(space.n) for j in range(space.n))
    doc = {"points": [[_num(x) for x in row] for row in img.points], "isometric": bool(iso)}
    if args.network:
        res = mf(space, nmax=args.nmax)
        kn = kuratowski_network(space, res.tree)
        doc["network"] = {
            "topology": kn.topology.to_dict(),
            "points": [[_num(x) for x in row] for row in kn.points],
            "edge_lengths": [_num(x) for x in kn.edge_lengths],
            "length": _num(kn.length),
        }
    _emit(args, doc)


_RATIO_FIELDS = ("mst", "smt", "mf", "sr", "sgr", "ssr")


def cmd_ratios(args):
    docs = []
    for path in args.points:
        rep = ratio_report(read_points(path), description=str(path), nmax=args.nmax)
        doc = rep.to_dict()
        for k in _RATIO_FIELDS:
            doc[k] = None if doc[k] is None else r12(doc[k])
        docs.append(doc)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(("description", "n") + _RATIO_FIELDS)
            for d in docs:
                w.writerow([d["description"], d["n"]] + [d[k] for k in _RATIO_FIELDS])
    _emit(args, docs[0] if len(docs) == 1 else docs)


def cmd_search(args):
    res = ratio_search(args.kind, args.n, args.trials, seed=args.seed, threads=args.threads)
    doc = {
        "kind": res.kind,
        "n": res.n,
        "value": r12(res.value),
        "configuration": [[r12(x) for x in p] for p in res.configuration],
        "evaluations": res.evaluations,
        "restarts": res.restarts,
        "seed": args.seed,
    }
    _emit(args, doc)


def cmd_graph(args):
    n, edges = read_graph(args.graph)
    g = WeightedGraph(n, tuple(edges))
    tree, total = kruskal_mst(g)
    doc = {
        "n": n,
        "spanning_trees": spanning_tree_count(g),
        "mst": {"edges": [[u, v, _num(w)] for u, v, w in tree.edges], "weight": _num(total)},
    }
    _emit(args, doc)


def cmd_verify(args):
    net, data = read_network(args.network)
    stored = data.get("length")
    if not isinstance(stored, (int, float)):
        raise InputError(args.network, None, None, 'network has no numeric "length"')
    again = network_length_from_json(data)
    ok = abs(again - stored) <= ROUNDTRIP_TOL * max(1.0, abs(stored))
    _emit(args, {"length": r12(stored), "recomputed": r12(again), "ok": ok})
    return EXIT_OK if ok else EXIT_INPUT


def cmd_repro(args):
    from .repro import run

    return EXIT_OK if run() else EXIT_INPUT


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not guard violations
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="optnet", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"optnet {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def points_cmd(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--points", required=True, help="CSV 'x,y' lines or JSON {\"points\": [...]}")
        s.add_argument("--json", help="also write the JSON result here")
        s.set_defaults(fn=fn)
        return s

    def matrix_cmd(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--matrix", required=True, help="square distance matrix CSV")
        s.add_argument("--float", action="store_true", help="floating point instead of exact rationals")
        s.add_argument("--nmax", type=_positive, default=NMAX)
        s.add_argument("--json", help="also write the JSON result here")
        s.set_defaults(fn=fn)
        return s

    s = points_cmd("mst", cmd_mst, "Euclidean minimal spanning tree")
    s.add_argument("--svg")
    s = points_cmd("smt", cmd_smt, "Euclidean Steiner minimal tree")
    s.add_argument("--svg")
    s.add_argument("--nmax", type=_positive, default=8)
    s.add_argument("--method", choices=("branch-and-bound", "exhaustive"), default="branch-and-bound")
    s = sub.add_parser("ratios", help="mst, smt, mf and the three ratios")
    s.add_argument("--points", required=True, nargs="+", help="one or more point files (batch)")
    s.add_argument("--nmax", type=_positive, default=8)
    s.add_argument("--csv", help="write one table row per point file")
    s.add_argument("--json")
    s.set_defaults(fn=cmd_ratios)

    s = matrix_cmd("mf", cmd_mf, "minimal filling")
    s.add_argument("--method", choices=("branch-and-bound", "exhaustive"), default="branch-and-bound")
    s = matrix_cmd("mpf", cmd_mpf, "minimal parametric filling of a given tree type")
    s.add_argument("--topology", required=True, help="topology JSON {n_vertices, edges, boundary}")
    s.add_argument("--generalized", action="store_true", help="allow negative edge weights")
    s.add_argument("--eremin", action="store_true", help="also report the best tour/multitour bound")
    s.add_argument("--kmax", type=_positive, default=KMAX)
    matrix_cmd("additive", cmd_additive, "four point classification and generating tree")
    s = matrix_cmd("embed", cmd_embed, "Kuratowski embedding")
    s.add_argument("--network", action="store_true", help="also embed the minimal filling network")

    s = sub.add_parser("search", help="empirical ratio search")
    s.add_argument("--kind", choices=KINDS, required=True)
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--trials", type=_positive, default=10000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=_positive, default=None)
    s.add_argument("--json")
    s.set_defaults(fn=cmd_search)

    s = sub.add_parser("graph", help="MST and spanning tree count of a weighted graph")
    s.add_argument("--graph", required=True, help="'n=<count>' then 'u,v,weight' lines")
    s.add_argument("--json")
    s.set_defaults(fn=cmd_graph)

    s = sub.add_parser("verify", help="recompute the length of an emitted network JSON")
    s.add_argument("--network", required=True)
    s.add_argument("--json")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("repro", help="run the golden value table")
    s.set_defaults(fn=cmd_repro)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.fn(args)
    except GuardError as exc:
        print(f"optnet: guard violation: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (InputError, MetricError, GeometryError, GraphError, LpError) as exc:
        print(f"optnet: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
