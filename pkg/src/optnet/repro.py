"""Golden values: every desk-scale number checked in one table."""

from __future__ import annotations

import math
import time
from fractions import Fraction

from .fillings import (
    cherry_topology,
    eremin_value,
    four_point_mf,
    mf,
    mpf,
    reconstruct_additive_tree,
    star_weights,
)
from .graphs import (
    WeightedGraph,
    binary_topology_count,
    enumerate_binary_topologies,
    spanning_tree_count,
)
from .metric import check_four_point, half_perimeter, min_half_perimeter
from .plane import delaunay_graph, euclidean_mst
from .ratios import du_smith_points, euclidean_mst_any_dim, ratio_report, sgr_metric
from .samples import (
    obtuse_triangle,
    rectangle_space,
    regular_simplex_space,
    regular_triangle,
    unit_square,
)
from .steiner import smt, torricelli_point

SQRT3 = math.sqrt(3)


def _close(a, b, tol=1e-9):
    return abs(float(a) - float(b)) <= tol * max(1.0, abs(float(b)))


def checks():
    tri = regular_triangle()
    rect = rectangle_space()
    diag = cherry_topology(((0, 2), (1, 3)))

    def c_triangle():
        m = euclidean_mst(tri)[1]
        s = smt(tri).length
        f = mf(regular_simplex_space(3)).value
        return (_close(m, 2) and _close(s, SQRT3) and f == Fraction(3, 2) and _close(s / m, SQRT3 / 2)), (
            f"mst={m:.12g} smt={s:.12g} mf={f} sr={s / m:.12g}"
        )

    def c_obtuse():
        r = torricelli_point(*obtuse_triangle())
        return (r.degenerate and _close(r.smt3, 2)), f"degenerate={r.degenerate} smt3={r.smt3:.12g}"

    def c_rect_mpf():
        a = mpf(rect, diag).value
        b = mpf(rect, diag, allow_negative=True).value
        return (a == 10 and b == 9), f"mpf={a} mpf-={b}"

    def c_rect_mf():
        v, pairing = four_point_mf(rect)
        e = mf(rect, method="exhaustive").value
        return (v == 8 and e == 8 and pairing == ((0, 1), (2, 3))), f"closed form={v} LP={e} pairing={pairing}"

    def c_rect_tours():
        hp = half_perimeter(rect, [0, 2, 1, 3])
        mh = min_half_perimeter(rect)[0]
        er = eremin_value(rect, diag, kmax=1)
        return (hp == 9 and mh == 7 and er.lower_bound == 9 and er.exact), (
            f"crossing tour={hp} min half-perimeter={mh} Eremin={er.lower_bound}"
        )

    def c_rect_class():
        return check_four_point(rect).cls == "neither", check_four_point(rect).cls

    def c_cayley():
        bad = []
        for n in range(2, 9):
            g = WeightedGraph(n, tuple((i, j, 1) for i in range(n) for j in range(i + 1, n)))
            if spanning_tree_count(g) != n ** (n - 2):
                bad.append(n)
        return not bad, "n^(n-2) for n=2..8" + (f" fails at {bad}" if bad else "")

    def c_topologies():
        c = [sum(1 for _ in enumerate_binary_topologies(n)) for n in (3, 4, 5, 6)]
        return c == [1, 3, 15, 105] and binary_topology_count(6) == 105, f"counts n=3..6: {c}"

    def c_square():
        dg = delaunay_graph(unit_square())
        s = smt(unit_square()).length
        return (dg.edges == ((0, 1), (0, 3), (1, 2), (2, 3)) and _close(s, 1 + SQRT3)), (
            f"Delaunay edges={list(dg.edges)} smt={s:.12g}"
        )

    def c_simplex():
        bad = []
        for n in range(3, 9):
            if sgr_metric(regular_simplex_space(n)) != Fraction(n, 2 * n - 2):
                bad.append(n)
        return not bad, "sgr = n/(2n-2) for n=3..8" + (f" fails at {bad}" if bad else "")

    def c_345():
        sp = rectangle_space().subspace([0, 1, 2])
        w = star_weights(sp).weights
        t = reconstruct_additive_tree(sp)
        return tuple(w) == (2, 1, 3) and mf(sp).value == 6, (
            f"star weights={[str(x) for x in w]} mf={mf(sp).value} tree edges={len(t.topology.edges)}"
        )

    def c_ratios():
        r = ratio_report(tri)
        o = ratio_report(obtuse_triangle())
        return (_close(r.sgr, 0.75) and _close(r.ssr, SQRT3 / 2) and _close(o.sr, 1)), (
            f"sr={r.sr:.12g} sgr={r.sgr:.12g} ssr={r.ssr:.12g}; obtuse sr={o.sr:.12g}"
        )

    def c_du_smith():
        P, parts = du_smith_points(2)
        a = euclidean_mst_any_dim(P)
        b = [euclidean_mst_any_dim(q) for q in parts]
        return all(_close(a, 3 * x, 1e-12) for x in b), f"mst(P)={a:.12g} mst(P^i)={b[0]:.12g}"

    return [
        ("regular triangle mst/smt/mf/sr", c_triangle),
        ("150-degree triangle smt = 2", c_obtuse),
        ("rectangle mpf = 10, mpf- = 9", c_rect_mpf),
        ("rectangle mf = 8", c_rect_mf),
        ("rectangle tours 9 and 7", c_rect_tours),
        ("rectangle four point class", c_rect_class),
        ("Cayley counts", c_cayley),
        ("binary topology counts", c_topologies),
        ("unit square Delaunay and smt", c_square),
        ("simplex Steiner-Gromov ratio", c_simplex),
        ("3-4-5 star filling", c_345),
        ("triangle ratios", c_ratios),
        ("simplex union mst identity", c_du_smith),
    ]


def run(stream=print) -> bool:
    ok_all = True
    for name, fn in checks():
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # report and keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        ok_all &= bool(ok)
        stream(f"{'PASS' if ok else 'FAIL'}  {name:<34} {detail}  ({time.perf_counter() - t0:.2f}s)")
    return ok_all
