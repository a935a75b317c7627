"""Steiner minimal trees in the Euclidean plane.

``smt`` searches full binary topologies by leaf insertion: the relaxed
length of a partial topology on the first ``k`` terminals never exceeds
that of any completion, so subtrees whose partial length already matches
the incumbent are skipped.  Relaxation may collapse Steiner points onto
terminals or each other, which realises the degenerate topologies; a
post-pass contracts such edges and polishes each full component with
Melzak's construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .graphs import GraphError, TreeTopology, enumerate_binary_topologies, insertion_search
from .plane import GeometryError, PlaneNetwork, as_points, check_distinct, euclidean_mst, tree_network

EPS_ANGLE = 1e-6
EPS_COLLAPSE = 1e-9
EPS_RELAX = 1e-12
MAX_RELAX_ITER = 100_000
NMAX = 8

SQRT3 = math.sqrt(3.0)


class GuardError(ValueError):
    """Input exceeds a configured size guard."""


def _diameter(p: np.ndarray) -> float:
    if len(p) < 2:
        return 0.0
    d = p[:, None, :] - p[None, :, :]
    return float(np.sqrt((d ** 2).sum(axis=2)).max())


# ---------------------------------------------------------------------------
# three points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorricelliResult:
    point: tuple
    smt3: float
    degenerate: bool
    vertex: int | None = None  # index of the >= 120 degree corner when degenerate


def _angle_at_least_120(p, q, r) -> bool:
    """Exact test: angle at ``p`` in triangle ``pqr`` is at least 120 degrees."""
    px, py = Fraction(float(p[0])), Fraction(float(p[1]))
    ux, uy = Fraction(float(q[0])) - px, Fraction(float(q[1])) - py
    vx, vy = Fraction(float(r[0])) - px, Fraction(float(r[1])) - py
    dot = ux * vx + uy * vy
    # cos <= -1/2  <=>  dot < 0 and 4 dot^2 >= |u|^2 |v|^2
    return dot < 0 and 4 * dot * dot >= (ux * ux + uy * uy) * (vx * vx + vy * vy)


def equilateral_apexes(p, q) -> tuple[np.ndarray, np.ndarray]:
    """The two apexes of equilateral triangles on ``pq``: left of ``p -> q`` first."""
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    m = (p + q) / 2
    d = q - p
    h = np.array([-d[1], d[0]]) * (SQRT3 / 2)
    return m + h, m - h


def _line_intersection(a, b, c, d) -> np.ndarray:
    r = b - a
    s = d - c
    den = r[0] * s[1] - r[1] * s[0]
    t = ((c[0] - a[0]) * s[1] - (c[1] - a[1]) * s[0]) / den
    return a + t * r


def torricelli_point(a, b, c) -> TorricelliResult:
    """Fermat-Torricelli point of a triangle and the length of the shortest tree.

    With all angles below 120 degrees the point is where the Simpson lines
    ``A A'`` and ``B B'`` meet (``A'`` the outer equilateral apex on ``BC``)
    and the tree length is ``|A A'|``.  Otherwise the wide corner itself is
    the answer and the length is the sum of its two sides.
    """
    pts = [np.asarray(x, dtype=np.float64) for x in (a, b, c)]
    for i in range(3):
        for j in range(i + 1, 3):
            if np.array_equal(pts[i], pts[j]):
                raise GeometryError(f"triangle corners {i} and {j} coincide")
    for i in range(3):
        p, q, r = pts[i], pts[(i + 1) % 3], pts[(i + 2) % 3]
        if _angle_at_least_120(p, q, r):
            smt3 = math.hypot(*(q - p)) + math.hypot(*(r - p))
            return TorricelliResult((float(p[0]), float(p[1])), smt3, True, i)
    A, B, C = pts

    def outer(p, q, r):
        left, right = equilateral_apexes(p, q)
        side = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
        return right if side > 0 else left

    A1 = outer(B, C, A)
    B1 = outer(C, A, B)
    T = _line_intersection(A, A1, B, B1)
    return TorricelliResult((float(T[0]), float(T[1])), float(math.hypot(*(A - A1))), False, None)


# ---------------------------------------------------------------------------
# relaxation
# ---------------------------------------------------------------------------


@dataclass
class RelaxResult:
    network: PlaneNetwork
    iterations: int
    converged: bool
    restarts: int = 0

    @property
    def length(self) -> float:
        return self.network.length


def _harmonic_start(n_fixed: int, V: int, edges, pos: np.ndarray) -> None:
    S = V - n_fixed
    if S <= 0:
        return
    L = np.zeros((S, S))
    rhs = np.zeros((S, 2))
    for u, v in edges:
        for a, b in ((u, v), (v, u)):
            if a >= n_fixed:
                L[a - n_fixed, a - n_fixed] += 1.0
                if b >= n_fixed:
                    L[a - n_fixed, b - n_fixed] -= 1.0
                else:
                    rhs[a - n_fixed] += pos[b]
    pos[n_fixed:] = np.linalg.solve(L, rhs)


def _relabel(topology: TreeTopology):
    """Permutation putting boundary vertices first (in boundary order)."""
    order = list(topology.boundary) + topology.interior
    new = {v: i for i, v in enumerate(order)}
    return order, new


def relax_topology(
    topology: TreeTopology,
    terminals,
    tol: float | None = None,
    max_iter: int = MAX_RELAX_ITER,
    start: np.ndarray | None = None,
    restarts: int = 2,
    seed: int = 0,
) -> RelaxResult:
    """Shortest realisation of ``topology`` with boundary vertices pinned to ``terminals``.

    Steiner points may end up on terminals or on each other.  When the run
    finishes with collapsed Steiner points it is restarted from a perturbed
    layout (seeded) and the shorter result is kept.
    """
    P = as_points(terminals)
    n = len(topology.boundary)
    if len(P) != n:
        raise GeometryError(f"{len(P)} terminals for a topology with {n} boundary vertices")
    order, new = _relabel(topology)
    V = topology.n_vertices
    edges = [(new[u], new[v]) for u, v in topology.edges]
    eu = np.array([e[0] for e in edges], dtype=np.int64)
    ev = np.array([e[1] for e in edges], dtype=np.int64)
    diam = _diameter(P)
    scale = diam if diam > 0 else 1.0
    tol = EPS_RELAX * scale if tol is None else tol
    ptol = 1e-10 * scale
    delta = 1e-13 * scale
    pos = np.zeros((V, 2))
    pos[:n] = P
    if start is not None:
        pos[n:] = np.asarray(start, float)[[order[k] for k in range(n, V)]]
    else:
        _harmonic_start(n, V, edges, pos)

    def run(p):
        it, ok = kernels.relax(p, eu, ev, n, tol, ptol, delta, int(max_iter))
        return p, int(it), bool(ok)

    best_pos, iters, ok = run(pos)
    best_len = kernels._tree_length_py(best_pos, eu, ev)
    used = 0
    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        if not _has_cluster(best_pos, edges, n, 1e-7 * scale):
            break
        trial = best_pos.copy()
        trial[n:] += rng.normal(scale=1e-2 * scale, size=(V - n, 2))
        trial, it2, ok2 = run(trial)
        used += 1
        iters += it2
        tl = kernels._tree_length_py(trial, eu, ev)
        if tl < best_len:
            best_pos, best_len, ok = trial, tl, ok2
    out = np.empty_like(best_pos)
    for k, v in enumerate(order):
        out[v] = best_pos[k]
    return RelaxResult(PlaneNetwork(topology, out), iters, ok, used)


def _has_cluster(pos, edges, n_fixed, eps) -> bool:
    for u, v in edges:
        if (u >= n_fixed or v >= n_fixed) and math.hypot(*(pos[u] - pos[v])) <= eps:
            return True
    return False


# ---------------------------------------------------------------------------
# Melzak
# ---------------------------------------------------------------------------


@dataclass
class MelzakResult:
    network: PlaneNetwork | None
    branches: int
    successes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.network is not None


def _second_intersection(E, T, O):
    """Parameter of the second meeting point of segment ``E + t (T - E)`` with the circle
    centred at ``O`` through ``E``."""
    d = T - E
    dd = float(d @ d)
    if dd == 0.0:
        return None
    return -2.0 * float((E - O) @ d) / dd


def _cross(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def melzak_solve(
    topology: TreeTopology,
    terminals,
    explore_all: bool = False,
    bound: float | None = None,
    eps_angle: float = EPS_ANGLE,
) -> MelzakResult:
    """Full Steiner tree of a full binary topology by Melzak's forward/back trace.

    Each merge of two sibling leaves replaces them by one of the two
    equilateral apexes on their segment, so there are ``2**(n-2)``
    branches.  The back trace places each Steiner point where the segment
    from its apex toward its already-placed neighbour meets the circle
    through the two merged points again; the point must fall strictly on
    the arc between them that avoids the apex.  By default the search stops
    at the first surviving branch (the full tree of a topology is unique);
    ``explore_all`` collects every surviving branch.  Branches whose final
    Simpson segment is longer than ``bound`` are skipped.
    """
    P = as_points(terminals)
    n = len(topology.boundary)
    if len(P) != n:
        raise GeometryError("one terminal per boundary vertex required")
    topo = topology
    V = topo.n_vertices
    bset = set(topo.boundary)
    pos0 = np.zeros((V, 2))
    for i, b in enumerate(topo.boundary):
        pos0[b] = P[i]
    if n == 2:
        if V != 2:
            raise GraphError("two-terminal topology must be a single edge")
        net = PlaneNetwork(topo, pos0)
        return MelzakResult(net, 1, [net])
    for v in range(V):
        if (v in bset and topo.degree(v) != 1) or (v not in bset and topo.degree(v) != 3):
            raise GraphError("Melzak's construction needs a full binary topology")
    for i in range(n):
        for j in range(i + 1, n):
            if np.array_equal(P[i], P[j]):
                raise GeometryError(f"terminals {i} and {j} coincide")

    # merge schedule, fixed independently of the apex choices
    adj = {v: set(topo.adjacency[v]) for v in range(V)}
    leaf = set(topo.boundary)
    merges = []  # (steiner s, child x, child y, attach z)
    alive = set(range(V))
    while len(leaf & alive) > 2:
        s = min(
            v for v in alive if v not in bset and v not in leaf and sum(1 for w in adj[v] if w in leaf) >= 2
        )
        kids = sorted(w for w in adj[s] if w in leaf)
        x, y = kids[0], kids[1]
        rest = [w for w in adj[s] if w not in (x, y)]
        z = rest[0]
        merges.append((s, x, y, z))
        for w in (x, y):
            alive.discard(w)
            adj[w].discard(s)
        adj[s] = {z}
        leaf.add(s)  # s now stands for the apex leaf
    last_pair = sorted(leaf & alive)

    results = []
    branches = 0
    m = len(merges)

    def point(v, placed):
        return placed[v]

    def back_trace(choice_apex):
        # every merged Steiner s stands for apex choice_apex[s]
        pos = pos0.copy()
        placed = {b: True for b in topo.boundary}
        info = {s: (x, y, z) for s, x, y, z in merges}

        def pt_leaf(v):
            return choice_apex[v] if v in info else pos[v]

        def place(s, toward):
            x, y, _ = info[s]
            E = choice_apex[s]
            X, Y = pt_leaf(x), pt_leaf(y)
            O = (X + Y + E) / 3
            t = _second_intersection(E, toward, O)
            if t is None or not (0.0 < t < 1.0):
                return False
            S = E + t * (toward - E)
            ce = _cross(X, Y, E)
            cs = _cross(X, Y, S)
            if not ((ce > 0 and cs < 0) or (ce < 0 and cs > 0)):
                return False
            pos[s] = S
            placed[s] = True
            return True

        # the final segment joins the last two leaves
        u, w = last_pair
        U, W = pt_leaf(u), pt_leaf(w)
        for a, b, B in ((u, w, W), (w, u, U)):
            if a in info and not place(a, B):
                return None
        # remaining Steiner points in reverse merge order: attach point known
        for s, x, y, z in reversed(merges):
            for c in (x, y):
                if c in info and c not in placed:
                    if not place(c, pos[s]):
                        return None
        net = PlaneNetwork(topo, pos)
        rep = check_local_structure(net, eps_angle)
        if not rep.passed:
            return None
        return net

    def rec(k, cur, choice_apex):
        nonlocal branches
        if k == m:
            branches += 1
            u, w = last_pair
            pu = choice_apex[u] if u in choice_apex else cur[u]
            pw = choice_apex[w] if w in choice_apex else cur[w]
            if bound is not None and math.hypot(*(pu - pw)) > bound:
                return False
            net = back_trace(choice_apex)
            if net is not None:
                results.append(net)
                return not explore_all
            return False
        s, x, y, _ = merges[k]
        X = choice_apex[x] if x in choice_apex else cur[x]
        Y = choice_apex[y] if y in choice_apex else cur[y]
        if np.allclose(X, Y, rtol=0, atol=0):
            raise GeometryError("merge points coincide")
        for E in equilateral_apexes(X, Y):
            choice_apex[s] = E
            if rec(k + 1, cur, choice_apex):
                return True
        del choice_apex[s]
        return False

    rec(0, pos0, {})
    return MelzakResult(results[0] if results else None, branches, results)


# ---------------------------------------------------------------------------
# local structure audit
# ---------------------------------------------------------------------------


@dataclass
class LocalStructureReport:
    min_angle: float
    max_degree: int
    violations: list

    @property
    def passed(self) -> bool:
        return not self.violations


def check_local_structure(network: PlaneNetwork, eps_angle: float = EPS_ANGLE) -> LocalStructureReport:
    """Degree and angle audit of a plane network.

    Every vertex has degree at most 3 and neighbouring edges meet at no
    less than 120 degrees; Steiner points of degree 3 have three 120 degree
    angles and Steiner points of degree 2 are straight.
    """
    topo = network.topology
    pos = network.positions
    bset = set(topo.boundary)
    violations = []
    min_angle = math.pi * 2
    max_deg = 0
    lim = 2 * math.pi / 3
    for u, v in topo.edges:
        if pos[u, 0] == pos[v, 0] and pos[u, 1] == pos[v, 1]:
            violations.append(f"edge ({u}, {v}) has zero length")
    for v in range(topo.n_vertices):
        nb = topo.adjacency[v]
        deg = len(nb)
        max_deg = max(max_deg, deg)
        steiner = v not in bset
        if deg > 3:
            violations.append(f"vertex {v} has degree {deg}")
        if steiner and deg == 1:
            violations.append(f"Steiner vertex {v} is a leaf")
        if deg < 2:
            continue
        dirs = sorted(math.atan2(pos[w, 1] - pos[v, 1], pos[w, 0] - pos[v, 0]) for w in nb)
        gaps = [dirs[i + 1] - dirs[i] for i in range(deg - 1)] + [dirs[0] + 2 * math.pi - dirs[-1]]
        angs = [min(g, 2 * math.pi - g) for g in gaps] if deg == 2 else gaps
        a = min(angs)
        min_angle = min(min_angle, a)
        if a < lim - eps_angle:
            violations.append(f"angle {math.degrees(a):.9f} deg at vertex {v}")
        elif steiner and deg == 3 and max(abs(g - lim) for g in gaps) > eps_angle:
            violations.append(f"Steiner vertex {v} angles not 120 deg")
        elif steiner and deg == 2 and abs(a - math.pi) > eps_angle:
            violations.append(f"Steiner vertex {v} of degree 2 is bent")
    return LocalStructureReport(min_angle, max_deg, violations)


# ---------------------------------------------------------------------------
# whole problem
# ---------------------------------------------------------------------------


@dataclass
class SteinerResult:
    network: PlaneNetwork
    length: float
    topology_index: int | None
    relaxed_length: float
    report: LocalStructureReport
    evaluated: int = 0
    method: str = "branch-and-bound"


def simplify_network(network: PlaneNetwork, eps: float) -> PlaneNetwork:
    """Contract edges shorter than ``eps`` and splice out Steiner points of degree <= 2.

    Terminals are never merged with each other; a Steiner point collapsing
    onto a terminal is absorbed by it.
    """
    topo = network.topology
    pos = network.positions.copy()
    bset = set(topo.boundary)
    V = topo.n_vertices
    parent = list(range(V))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in topo.edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            continue
        if math.hypot(*(pos[ru] - pos[rv])) > eps:
            continue
        bu, bv = ru in bset, rv in bset
        if bu and bv:
            continue
        if bv:
            ru, rv = rv, ru
        parent[rv] = ru
    adj = {}
    for u, v in topo.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            adj.setdefault(ru, set()).add(rv)
            adj.setdefault(rv, set()).add(ru)
    # splice out Steiner points of degree <= 2
    changed = True
    while changed:
        changed = False
        for v in list(adj):
            if v in bset:
                continue
            nb = adj[v]
            if len(nb) == 1:
                (w,) = nb
                adj[w].discard(v)
                del adj[v]
                changed = True
            elif len(nb) == 2:
                a, b = nb
                adj[a].discard(v)
                adj[b].discard(v)
                adj[a].add(b)
                adj[b].add(a)
                del adj[v]
                changed = True
    keep = list(topo.boundary) + sorted(v for v in adj if v not in bset)
    new = {v: i for i, v in enumerate(keep)}
    edges = sorted({(min(new[u], new[w]), max(new[u], new[w])) for u in adj for w in adj[u]})
    n = len(topo.boundary)
    new_topo = TreeTopology(len(keep), tuple(edges), tuple(range(n)))
    return PlaneNetwork(new_topo, pos[keep])


def _full_components(network: PlaneNetwork):
    """Split at terminals of degree >= 2; yield (vertex list, edge list) per component."""
    topo = network.topology
    bset = set(topo.boundary)
    seen_edges = set()
    for u0, v0 in topo.edges:
        key = (min(u0, v0), max(u0, v0))
        if key in seen_edges:
            continue
        comp_edges = []
        stack = [(u0, v0)]
        while stack:
            a, b = stack.pop()
            k = (min(a, b), max(a, b))
            if k in seen_edges:
                continue
            seen_edges.add(k)
            comp_edges.append(k)
            for x in (a, b):
                if x in bset:
                    continue
                for y in topo.adjacency[x]:
                    if (min(x, y), max(x, y)) not in seen_edges:
                        stack.append((x, y))
        verts = sorted({x for e in comp_edges for x in e})
        yield verts, comp_edges


def polish_network(network: PlaneNetwork, eps_angle: float = EPS_ANGLE) -> PlaneNetwork:
    """Re-place the Steiner points of every full component by Melzak's construction
    when it succeeds and is not longer."""
    topo = network.topology
    bset = set(topo.boundary)
    pos = network.positions.copy()
    scale = max(_diameter(network.terminals), 1e-300)
    for verts, edges in _full_components(network):
        terms = [v for v in verts if v in bset]
        steins = [v for v in verts if v not in bset]
        if len(terms) < 3 or not steins:
            continue
        local = {v: i for i, v in enumerate(terms + steins)}
        sub = TreeTopology(len(verts), tuple((local[a], local[b]) for a, b in edges), tuple(range(len(terms))))
        if not sub.is_binary:
            continue
        try:
            res = melzak_solve(sub, pos[terms], eps_angle=eps_angle)
        except (GeometryError, GraphError):
            continue
        if not res.ok:
            continue
        old = sum(math.hypot(*(pos[a] - pos[b])) for a, b in edges)
        if res.network.length <= old + 1e-12 * scale:
            for v in steins:
                pos[v] = res.network.positions[local[v]]
    return PlaneNetwork(topo, pos)


def _finish(net: PlaneNetwork, P: np.ndarray) -> tuple[PlaneNetwork, LocalStructureReport]:
    eps = EPS_COLLAPSE * max(_diameter(P), 1e-300)
    net = simplify_network(net, eps)
    net = polish_network(net)
    return net, check_local_structure(net)


def smt(points, nmax: int = NMAX, method: str = "branch-and-bound") -> SteinerResult:
    """Steiner minimal tree of ``2 <= n <= nmax`` plane points.

    ``method`` is ``"branch-and-bound"`` (default) or ``"exhaustive"``; both
    return the optimum of the lowest canonical topology index among
    topologies within the relaxation tolerance of the best.
    """
    P = as_points(points)
    n = len(P)
    if n < 2:
        raise GeometryError("need at least two terminals")
    if n > nmax:
        raise GuardError(f"n = {n} exceeds the guard nmax = {nmax}")
    check_distinct(P)
    if n == 2:
        net = tree_network(P, [(0, 1)])
        return SteinerResult(net, net.length, 0, net.length, check_local_structure(net), 1, "segment")
    if n == 3:
        tr = torricelli_point(*P)
        if tr.degenerate:
            k = tr.vertex
            net = tree_network(P, [tuple(sorted((k, (k + 1) % 3))), tuple(sorted((k, (k + 2) % 3)))])
        else:
            topo = TreeTopology(4, ((0, 3), (1, 3), (2, 3)), (0, 1, 2))
            net = PlaneNetwork(topo, np.vstack([P, [tr.point]]))
        return SteinerResult(net, tr.smt3, 0, tr.smt3, check_local_structure(net), 1, "torricelli")

    scale = _diameter(P)
    tol = EPS_RELAX * scale * 10
    mst_net, mst_len = euclidean_mst(P)
    best = {"len": mst_len, "net": None, "idx": None}
    count = {"full": 0, "evaluated": 0}

    if method == "exhaustive":
        for idx, topo in enumerate(enumerate_binary_topologies(n)):
            r = relax_topology(topo, P)
            count["evaluated"] += 1
            if r.length < best["len"] - tol:
                best.update(len=r.length, net=r.network, idx=idx)
    elif method == "branch-and-bound":

        def visit(k, topo):
            r = relax_topology(topo, P[:k])
            count["evaluated"] += 1
            if k < n:
                if r.length >= best["len"] - tol:
                    count["full"] += _subtree_leaves(k, n)
                    return False
                return True
            idx = count["full"]
            count["full"] += 1
            if r.length < best["len"] - tol:
                best.update(len=r.length, net=r.network, idx=idx)
            return True

        insertion_search(n, visit)
    else:
        raise ValueError(f"unknown method {method!r}")

    if best["net"] is None:
        net, rep = mst_net, check_local_structure(mst_net)
        return SteinerResult(net, net.length, None, mst_len, rep, count["evaluated"], method)
    relaxed = best["len"]
    net, rep = _finish(best["net"], P)
    return SteinerResult(net, net.length, best["idx"], relaxed, rep, count["evaluated"], method)


def _subtree_leaves(k: int, n: int) -> int:
    # number of full topologies below a partial one on k leaves
    out = 1
    for j in range(k, n):
        out *= 2 * j - 3
    return out
