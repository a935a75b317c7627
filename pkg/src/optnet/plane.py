"""Plane geometry: networks, Delaunay graph, Euclidean MST, hull peeling, twisting number."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graphs import GraphError, TreeTopology, WeightedGraph, kruskal_mst
from .predicates import incircle, on_segment, orient2d

GHOST = -1


class GeometryError(ValueError):
    pass


def as_points(points) -> np.ndarray:
    p = np.asarray(points, dtype=np.float64)
    if p.ndim != 2 or p.shape[1] != 2:
        raise GeometryError(f"expected an (n, 2) array of points, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise GeometryError("point coordinates must be finite")
    return p


def check_distinct(p: np.ndarray) -> None:
    seen = {}
    for i, (x, y) in enumerate(p):
        key = (float(x), float(y))
        if key in seen:
            raise GeometryError(f"duplicate points {seen[key]} and {i} at {key}")
        seen[key] = i


@dataclass(eq=False)
class PlaneNetwork:
    """A tree topology drawn in the plane with straight edges.

    Boundary vertex ``topology.boundary[i]`` sits at terminal ``i``.
    """

    topology: TreeTopology
    positions: np.ndarray

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=np.float64).reshape(-1, 2)
        if len(self.positions) != self.topology.n_vertices:
            raise GeometryError("one position per topology vertex required")

    @property
    def edge_lengths(self) -> np.ndarray:
        if not self.topology.edges:
            return np.zeros(0)
        e = np.array(self.topology.edges)
        return np.hypot(*(self.positions[e[:, 0]] - self.positions[e[:, 1]]).T)

    @property
    def length(self) -> float:
        return float(math.fsum(self.edge_lengths))

    @property
    def terminals(self) -> np.ndarray:
        return self.positions[list(self.topology.boundary)]

    @property
    def steiner_vertices(self) -> list[int]:
        return self.topology.interior

    def kind(self, v: int) -> str:
        return "terminal" if v in set(self.topology.boundary) else "steiner"

    def to_dict(self) -> dict:
        """Plain-python view; terminals first in boundary order, then Steiner points."""
        topo = self.topology
        order = list(topo.boundary) + topo.interior
        new_id = {v: i for i, v in enumerate(order)}
        verts = [
            {"id": new_id[v], "x": float(self.positions[v, 0]), "y": float(self.positions[v, 1]), "kind": self.kind(v)}
            for v in order
        ]
        lens = self.edge_lengths
        edges = sorted(
            (min(new_id[u], new_id[v]), max(new_id[u], new_id[v]), float(w))
            for (u, v), w in zip(topo.edges, lens)
        )
        return {
            "vertices": verts,
            "edges": [{"u": u, "v": v, "weight": w} for u, v, w in edges],
            "length": self.length,
        }


# ---------------------------------------------------------------------------
# Delaunay graph
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DelaunayGraph:
    points: np.ndarray
    edges: tuple

    def __contains__(self, e) -> bool:
        u, v = e
        return (min(u, v), max(u, v)) in self._set

    @property
    def _set(self) -> frozenset:
        s = self.__dict__.get("_edge_set")
        if s is None:
            s = frozenset(self.edges)
            object.__setattr__(self, "_edge_set", s)
        return s


class _Triangulation:
    """Bowyer-Watson insertion over ghost triangles.

    Triangles are counter-clockwise vertex triples; ``nbr[t][i]`` is the
    triangle across the edge opposite ``tri[t][i]``.  A ghost triangle
    ``(u, v, GHOST)`` sits outside the hull edge ``u -> v`` (outside is to
    the left of ``u -> v``).
    """

    def __init__(self, pts: np.ndarray):
        self.p = pts
        self.tri: list[list[int]] = []
        self.nbr: list[list[int]] = []
        self.alive: list[bool] = []
        self.last = 0

    def _new(self, verts) -> int:
        self.tri.append(list(verts))
        self.nbr.append([-1, -1, -1])
        self.alive.append(True)
        return len(self.tri) - 1

    def start(self, a: int, b: int, c: int) -> None:
        if orient2d(self.p[a], self.p[b], self.p[c]) < 0:
            b, c = c, b
        t = self._new((a, b, c))
        g = [self._new((b, a, GHOST)), self._new((c, b, GHOST)), self._new((a, c, GHOST))]
        # real triangle: edge opposite a is (b, c) -> ghost (c, b)
        self.nbr[t] = [g[1], g[2], g[0]]
        self._link_all([t] + g)

    def _link_all(self, ids) -> None:
        edge_at = {}
        for t in ids:
            v = self.tri[t]
            for i in range(3):
                edge_at[(v[(i + 1) % 3], v[(i + 2) % 3])] = (t, i)
        for (u, v), (t, i) in edge_at.items():
            other = edge_at.get((v, u))
            if other is not None:
                self.nbr[t][i] = other[0]

    def in_conflict(self, t: int, q: int) -> bool:
        v = self.tri[t]
        P = self.p
        if GHOST in v:
            k = v.index(GHOST)
            a, b = v[(k + 1) % 3], v[(k + 2) % 3]
            o = orient2d(P[a], P[b], P[q])
            return o > 0 or (o == 0 and on_segment(P[a], P[b], P[q]))
        return incircle(P[v[0]], P[v[1]], P[v[2]], P[q]) > 0

    def locate(self, q: int) -> int:
        """A triangle in conflict with point ``q`` (visibility walk, scan fallback)."""
        P = self.p
        t = self.last if self.alive[self.last] else next(i for i, al in enumerate(self.alive) if al)
        if GHOST in self.tri[t]:
            t = next(x for x in self.nbr[t] if GHOST not in self.tri[x])
        for _ in range(4 * len(self.tri) + 16):
            v = self.tri[t]
            moved = False
            for i in range(3):
                a, b = v[(i + 1) % 3], v[(i + 2) % 3]
                if orient2d(P[a], P[b], P[q]) < 0:
                    t = self.nbr[t][i]
                    moved = True
                    break
            if not moved:
                return t
            if GHOST in self.tri[t]:
                if self.in_conflict(t, q):
                    return t
                break
        for i, al in enumerate(self.alive):
            if al and self.in_conflict(i, q):
                return i
        raise GeometryError(f"point {q} could not be located")  # pragma: no cover

    def insert(self, q: int) -> None:
        t0 = self.locate(q)
        cavity = {t0}
        stack = [t0]
        while stack:
            t = stack.pop()
            for s in self.nbr[t]:
                if s not in cavity and self.in_conflict(s, q):
                    cavity.add(s)
                    stack.append(s)
        new = []
        for t in cavity:
            v = self.tri[t]
            for i in range(3):
                s = self.nbr[t][i]
                if s in cavity:
                    continue
                a, b = v[(i + 1) % 3], v[(i + 2) % 3]
                nt = self._new((a, b, q))
                # edge (a, b) is opposite q (index 2)
                self.nbr[nt][2] = s
                j = self.nbr[s].index(t)
                self.nbr[s][j] = nt
                new.append(nt)
        for t in cavity:
            self.alive[t] = False
        edge_at = {}
        for t in new:
            a, b, _ = self.tri[t]
            edge_at[(b, q)] = (t, 0)
            edge_at[(q, a)] = (t, 1)
        for (u, v), (t, i) in edge_at.items():
            self.nbr[t][i] = edge_at[(v, u)][0]
        self.last = next(t for t in new if GHOST not in self.tri[t]) if any(
            GHOST not in self.tri[t] for t in new
        ) else new[0]

    def triangles(self):
        for t, al in enumerate(self.alive):
            if al and GHOST not in self.tri[t]:
                yield t


def _collinear_path(p: np.ndarray) -> list[tuple[int, int]]:
    order = sorted(range(len(p)), key=lambda i: (p[i, 0], p[i, 1]))
    return [(min(a, b), max(a, b)) for a, b in zip(order, order[1:])]


def delaunay_graph(points, seed: int = 0) -> DelaunayGraph:
    """Dual graph of the Voronoi diagram.

    Two points are joined exactly when their Voronoi cells share a segment
    of positive length; for cocircular groups this drops the diagonals an
    arbitrary triangulation would add.  Collinear sets give the path of
    consecutive points.
    """
    p = as_points(points)
    n = len(p)
    if n < 2:
        raise GeometryError("need at least two points")
    check_distinct(p)
    order = [int(x) for x in np.random.default_rng(seed).permutation(n)]
    # find a non-degenerate starting triple
    a, b = order[0], order[1]
    third = next((k for k in range(2, n) if orient2d(p[a], p[b], p[order[k]]) != 0), None)
    if third is None:
        return DelaunayGraph(p, tuple(sorted(_collinear_path(p))))
    c = order[third]
    rest = order[2:third] + order[third + 1:]
    tr = _Triangulation(p)
    tr.start(a, b, c)
    for q in rest:
        tr.insert(int(q))
    edges = set()
    for t in tr.triangles():
        v = tr.tri[t]
        for i in range(3):
            u, w = v[(i + 1) % 3], v[(i + 2) % 3]
            s = tr.nbr[t][i]
            if GHOST not in tr.tri[s]:
                d = next(x for x in tr.tri[s] if x != u and x != w)
                if incircle(p[v[0]], p[v[1]], p[v[2]], p[d]) == 0:
                    continue
            edges.add((min(u, w), max(u, w)))
    return DelaunayGraph(p, tuple(sorted(edges)))


# ---------------------------------------------------------------------------
# Euclidean MST
# ---------------------------------------------------------------------------


def _distance(p, i, j) -> float:
    return float(math.hypot(p[i, 0] - p[j, 0], p[i, 1] - p[j, 1]))


def tree_network(points, edges) -> PlaneNetwork:
    """Network whose vertices are exactly the given points."""
    p = as_points(points)
    return PlaneNetwork(TreeTopology(len(p), tuple(edges), tuple(range(len(p)))), p.copy())


def euclidean_mst(points, delaunay: DelaunayGraph | None = None) -> tuple[PlaneNetwork, float]:
    """Kruskal over the Delaunay edges; every spanning-tree edge is checked to be one."""
    p = as_points(points)
    if len(p) == 1:
        return tree_network(p, ()), 0.0
    dg = delaunay if delaunay is not None else delaunay_graph(p)
    g = WeightedGraph(len(p), tuple((u, v, _distance(p, u, v)) for u, v in dg.edges))
    tree, _ = kruskal_mst(g)
    for u, v, _ in tree.edges:
        assert (u, v) in dg, f"spanning edge ({u}, {v}) is not a Delaunay edge"
    net = tree_network(p, [(u, v) for u, v, _ in tree.edges])
    return net, net.length


def complete_mst_length(points) -> float:
    """MST length by Kruskal on the complete distance graph (reference path)."""
    p = as_points(points)
    n = len(p)
    g = WeightedGraph(n, tuple((i, j, _distance(p, i, j)) for i in range(n) for j in range(i + 1, n)))
    tree, _ = kruskal_mst(g)
    return float(math.fsum(w for _, _, w in tree.edges))


# ---------------------------------------------------------------------------
# convexity levels
# ---------------------------------------------------------------------------


def convex_hull(points, idx: Sequence[int] | None = None) -> list[int]:
    """Hull vertices (corners only) in counter-clockwise order, monotone chain with exact turns."""
    p = as_points(points)
    idx = list(range(len(p))) if idx is None else list(idx)
    pts = sorted(set(idx), key=lambda i: (p[i, 0], p[i, 1]))
    if len(pts) <= 2:
        return pts

    def chain(seq):
        out = []
        for i in seq:
            while len(out) >= 2 and orient2d(p[out[-2]], p[out[-1]], p[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    return hull


def _on_hull_boundary(p, hull, i) -> bool:
    if i in hull:
        return True
    h = len(hull)
    for k in range(h):
        a, b = hull[k], hull[(k + 1) % h]
        if on_segment(p[a], p[b], p[i]):
            return True
    return False


def convexity_levels(points) -> list[list[int]]:
    """Partition into nested hull boundaries (points on hull edges belong to the level)."""
    p = as_points(points)
    remaining = list(range(len(p)))
    levels = []
    while remaining:
        hull = convex_hull(p, remaining)
        if len(hull) <= 2:
            levels.append(sorted(remaining))
            break
        level = [i for i in remaining if _on_hull_boundary(p, hull, i)]
        levels.append(sorted(level))
        taken = set(level)
        remaining = [i for i in remaining if i not in taken]
    return levels


# ---------------------------------------------------------------------------
# twisting number
# ---------------------------------------------------------------------------


def turn_sign(a, b, c) -> int:
    """+1 left turn at ``b`` walking ``a -> b -> c``, -1 right, 0 straight."""
    return orient2d(a, b, c)


def twisting_number(network: PlaneNetwork) -> int:
    """Largest left-minus-right turn count along a path between two edges.

    Turns are read off the orientation of consecutive edge vectors at each
    intermediate vertex; a straight continuation counts as no turn.
    """
    topo = network.topology
    pos = network.positions
    adj = topo.adjacency
    bset = set(topo.boundary)
    for v in range(topo.n_vertices):
        if v not in bset and topo.degree(v) != 3:
            raise GraphError(f"interior vertex {v} has degree {topo.degree(v)}, expected 3")
    for u, v in topo.edges:
        if pos[u, 0] == pos[v, 0] and pos[u, 1] == pos[v, 1]:
            raise GeometryError(f"edge ({u}, {v}) has zero length")
    best = 0
    for u0, v0 in topo.edges:
        for start, nxt in ((u0, v0), (v0, u0)):
            stack = [(start, nxt, 0)]
            while stack:
                prev, cur, tw = stack.pop()
                for w in adj[cur]:
                    if w == prev:
                        continue
                    t = tw + turn_sign(pos[prev], pos[cur], pos[w])
                    if t > best:
                        best = t
                    stack.append((cur, w, t))
    return best
