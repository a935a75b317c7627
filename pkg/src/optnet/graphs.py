"""Weighted graphs and trees.

Kruskal's minimal spanning tree, Kirchhoff's spanning tree count (exact,
fraction-free), brute-force spanning tree enumeration, and enumeration of
boundary-labelled binary tree topologies by leaf insertion.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterator, Sequence

log = logging.getLogger(__name__)

ENUMERATION_MAX_VERTICES = 10


class GraphError(ValueError):
    """Structural problem with a graph or tree."""


class DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


@dataclass(frozen=True)
class WeightedGraph:
    """Simple undirected graph on vertices ``0..n-1`` with an edge weight per edge."""

    n: int
    edges: tuple  # ((u, v, w), ...)
    boundary: tuple | None = None

    def __post_init__(self):
        edges = tuple((int(u), int(v), w) for u, v, w in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.n < 1:
            raise GraphError("graph needs at least one vertex")
        seen = set()
        for u, v, w in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) has a vertex out of range 0..{self.n - 1}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
            if not math.isfinite(float(w)):
                raise GraphError(f"edge {key} has non-finite weight {w!r}")

    @property
    def weight(self):
        return sum((w for _, _, w in self.edges), 0)

    def is_connected(self) -> bool:
        ds = DisjointSet(self.n)
        comps = self.n
        for u, v, _ in self.edges:
            if ds.union(u, v):
                comps -= 1
        return comps == 1

    @classmethod
    def complete(cls, dist: Sequence[Sequence]) -> "WeightedGraph":
        """Complete graph whose weights are the entries of a distance matrix."""
        n = len(dist)
        return cls(n, tuple((i, j, dist[i][j]) for i in range(n) for j in range(i + 1, n)))


def kruskal_mst(graph: WeightedGraph) -> tuple[WeightedGraph, object]:
    """Minimal spanning tree and its weight.

    Ties are broken by ``(weight, smaller endpoint, larger endpoint)`` so the
    returned tree does not depend on the input edge order.
    """
    order = sorted(graph.edges, key=lambda e: (e[2], min(e[0], e[1]), max(e[0], e[1])))
    ds = DisjointSet(graph.n)
    chosen = []
    for u, v, w in order:
        if ds.union(u, v):
            chosen.append((min(u, v), max(u, v), w))
            if len(chosen) == graph.n - 1:
                break
    if len(chosen) != graph.n - 1:
        raise GraphError("graph is disconnected; no spanning tree")
    tree = WeightedGraph(graph.n, tuple(chosen), graph.boundary)
    return tree, tree.weight


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def kirchhoff_matrix(graph: WeightedGraph) -> list[list[int]]:
    b = [[0] * graph.n for _ in range(graph.n)]
    for u, v, _ in graph.edges:
        b[u][u] += 1
        b[v][v] += 1
        b[u][v] -= 1
        b[v][u] -= 1
    return b


def spanning_tree_count(graph: WeightedGraph, minor: int | None = None) -> int:
    """Number of spanning trees: cofactor of the Kirchhoff matrix (exact)."""
    if graph.n < 2:
        raise GraphError("need at least two vertices")
    b = kirchhoff_matrix(graph)
    k = graph.n - 1 if minor is None else minor
    sub = [[b[i][j] for j in range(graph.n) if j != k] for i in range(graph.n) if i != k]
    count = bareiss_determinant(sub)
    if count == 0:
        log.warning("spanning_tree_count: graph is disconnected")
    return count


def enumerate_spanning_trees(graph: WeightedGraph) -> Iterator[WeightedGraph]:
    """Every spanning tree exactly once (brute force; ``n <= 10``)."""
    if graph.n > ENUMERATION_MAX_VERTICES:
        raise GraphError(f"enumeration guard: n={graph.n} > {ENUMERATION_MAX_VERTICES}")
    edges = graph.edges
    m = len(edges)
    need = graph.n - 1
    if need == 0:
        yield WeightedGraph(graph.n, (), graph.boundary)
        return

    def rec(i: int, parent: list[int], chosen: list[int]):
        if len(chosen) == need:
            yield WeightedGraph(graph.n, tuple(edges[j] for j in chosen), graph.boundary)
            return
        if m - i < need - len(chosen):
            return
        u, v, _ = edges[i]

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        ru, rv = find(u), find(v)
        if ru != rv:
            p2 = parent.copy()
            p2[ru] = rv
            chosen.append(i)
            yield from rec(i + 1, p2, chosen)
            chosen.pop()
        yield from rec(i + 1, parent, chosen)

    yield from rec(0, list(range(graph.n)), [])


# ---------------------------------------------------------------------------
# trees with boundary
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeTopology:
    """Tree on vertices ``0..n_vertices-1`` with an ordered boundary.

    Vertices of degree 1 or 2 must be boundary vertices.
    """

    n_vertices: int
    edges: tuple
    boundary: tuple
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "boundary", tuple(int(b) for b in self.boundary))
        if self.check:
            self.validate()

    def validate(self) -> None:
        n = self.n_vertices
        if len(self.edges) != n - 1:
            raise GraphError(f"a tree on {n} vertices has {n - 1} edges, got {len(self.edges)}")
        ds = DisjointSet(n)
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise GraphError(f"bad edge ({u}, {v})")
            if not ds.union(u, v):
                raise GraphError(f"edge ({u}, {v}) closes a cycle")
        if len(set(self.boundary)) != len(self.boundary):
            raise GraphError("repeated boundary vertex")
        bset = set(self.boundary)
        for v in range(n):
            if self.degree(v) <= 2 and v not in bset and n > 1:
                raise GraphError(f"vertex {v} has degree {self.degree(v)} but is not a boundary vertex")

    @cached_property
    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n_vertices)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    @cached_property
    def edge_index(self) -> dict:
        idx = {}
        for i, (u, v) in enumerate(self.edges):
            idx[(u, v)] = i
            idx[(v, u)] = i
        return idx

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def interior(self) -> list[int]:
        b = set(self.boundary)
        return [v for v in range(self.n_vertices) if v not in b]

    @property
    def is_binary(self) -> bool:
        b = set(self.boundary)
        return all(
            (self.degree(v) == 1) == (v in b) and self.degree(v) in (1, 3) for v in range(self.n_vertices)
        ) or (self.n_vertices == 2 and len(b) == 2)

    @cached_property
    def _parents(self) -> dict:
        return {}

    def _bfs_parent(self, root: int) -> list[int]:
        cache = self._parents
        if root not in cache:
            parent = [-2] * self.n_vertices
            parent[root] = -1
            queue = deque([root])
            while queue:
                x = queue.popleft()
                for y in self.adjacency[x]:
                    if parent[y] == -2:
                        parent[y] = x
                        queue.append(y)
            cache[root] = parent
        return cache[root]

    def path_vertices(self, u: int, v: int) -> list[int]:
        parent = self._bfs_parent(u)
        path = [v]
        while path[-1] != u:
            path.append(parent[path[-1]])
        path.reverse()
        return path

    def path_edge_indices(self, u: int, v: int) -> list[int]:
        pv = self.path_vertices(u, v)
        return [self.edge_index[(a, b)] for a, b in zip(pv, pv[1:])]

    def boundary_paths(self) -> list[tuple[int, int, list[int]]]:
        """``(i, j, edge indices)`` for every pair ``i < j`` of boundary positions."""
        out = []
        b = self.boundary
        for i in range(len(b)):
            for j in range(i + 1, len(b)):
                out.append((i, j, self.path_edge_indices(b[i], b[j])))
        return out

    def to_dict(self) -> dict:
        return {"n_vertices": self.n_vertices, "edges": [list(e) for e in self.edges], "boundary": list(self.boundary)}

    @classmethod
    def from_dict(cls, data: dict) -> "TreeTopology":
        return cls(int(data["n_vertices"]), tuple(tuple(e) for e in data["edges"]), tuple(data["boundary"]))


def tree_path(topology: TreeTopology, u: int, v: int) -> list[tuple[int, int]]:
    """Edges of the unique ``u``-``v`` path, in walking order (empty when ``u == v``)."""
    pv = topology.path_vertices(u, v)
    return list(zip(pv, pv[1:]))


def star_topology(n: int) -> TreeTopology:
    """Star with leaves ``0..n-1`` around the centre ``n`` (a single edge for ``n == 2``)."""
    if n == 2:
        return TreeTopology(2, ((0, 1),), (0, 1))
    return TreeTopology(n + 1, tuple((i, n) for i in range(n)), tuple(range(n)))


# ---------------------------------------------------------------------------
# binary topologies by leaf insertion
# ---------------------------------------------------------------------------


def double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def binary_topology_count(n: int) -> int:
    """``(2n-5)!!`` boundary-labelled binary trees with ``n`` leaves."""
    return 1 if n <= 3 else double_factorial(2 * n - 5)


def _compact(k: int, n: int, edges: list) -> TreeTopology:
    # interior ids n.. -> k..
    def rel(x):
        return x if x < n else k + (x - n)

    return TreeTopology(2 * k - 2, tuple((rel(u), rel(v)) for u, v in edges), tuple(range(k)), check=False)


def insertion_search(n: int, visit: Callable[[int, TreeTopology], bool]) -> None:
    """Depth-first walk of the leaf-insertion tree.

    ``visit(k, topology)`` is called on each partial topology over leaves
    ``0..k-1`` (``3 <= k <= n``) in canonical order; returning ``False``
    skips all its extensions.  The full topologies (``k == n``) are met in
    the same order as :func:`enumerate_binary_topologies` yields them.
    """
    if n < 3:
        raise GraphError("insertion search needs n >= 3")

    def rec(k: int, edges: list):
        if not visit(k, _compact(k, n, edges)) or k == n:
            return
        s = n + k - 2
        for idx, (u, v) in enumerate(edges):
            rec(k + 1, edges[:idx] + [(u, s), (s, v)] + edges[idx + 1:] + [(k, s)])

    rec(3, [(0, n), (1, n), (2, n)])


def enumerate_binary_topologies(n: int) -> Iterator[TreeTopology]:
    """All ``(2n-5)!!`` binary topologies with leaves ``0..n-1`` and interior ``n..2n-3``."""
    if n < 2:
        raise GraphError("need at least two boundary vertices")
    if n == 2:
        yield TreeTopology(2, ((0, 1),), (0, 1))
        return

    def rec(k: int, edges: list):
        if k == n:
            yield TreeTopology(2 * n - 2, tuple(edges), tuple(range(n)), check=False)
            return
        s = n + k - 2
        for idx, (u, v) in enumerate(edges):
            yield from rec(k + 1, edges[:idx] + [(u, s), (s, v)] + edges[idx + 1:] + [(k, s)])

    yield from rec(3, [(0, n), (1, n), (2, n)])


# ---------------------------------------------------------------------------
# weighted trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightedTree:
    """A tree topology with one (possibly negative) weight per edge."""

    topology: TreeTopology
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        if len(self.weights) != len(self.topology.edges):
            raise GraphError("one weight per edge required")

    @property
    def total(self):
        return sum(self.weights, 0 * self.weights[0]) if self.weights else 0

    def distance(self, u: int, v: int):
        return sum((self.weights[e] for e in self.topology.path_edge_indices(u, v)), 0 * self.weights[0])

    def boundary_matrix(self) -> list[list]:
        b = self.topology.boundary
        zero = 0 * self.weights[0] if self.weights else 0
        d = [[zero] * len(b) for _ in b]
        for i, j, path in self.topology.boundary_paths():
            s = sum((self.weights[e] for e in path), zero)
            d[i][j] = d[j][i] = s
        return d

    def contract(self, tol=0, interior_only: bool = False) -> "WeightedTree":
        """Contract edges with ``|weight| <= tol`` (never two boundary vertices together).

        With ``interior_only`` edges touching the boundary are kept.
        """
        topo = self.topology
        bset = set(topo.boundary)
        ds = DisjointSet(topo.n_vertices)
        rep_is_boundary = {v: v in bset for v in range(topo.n_vertices)}
        keep = []
        for i, (u, v) in enumerate(topo.edges):
            ru, rv = ds.find(u), ds.find(v)
            if interior_only and (u in bset or v in bset):
                keep.append(i)
                continue
            if abs(self.weights[i]) <= tol and not (rep_is_boundary[ru] and rep_is_boundary[rv]):
                boundary_root = ru if rep_is_boundary[ru] else rv
                other = rv if boundary_root == ru else ru
                ds.parent[other] = boundary_root
            else:
                keep.append(i)
        roots = {}
        for b in topo.boundary:
            roots.setdefault(ds.find(b), len(roots))
        for v in range(topo.n_vertices):
            roots.setdefault(ds.find(v), len(roots))
        edges = tuple((roots[ds.find(topo.edges[i][0])], roots[ds.find(topo.edges[i][1])]) for i in keep)
        boundary = tuple(roots[ds.find(b)] for b in topo.boundary)
        return WeightedTree(TreeTopology(len(roots), edges, boundary), tuple(self.weights[i] for i in keep))

    def splits(self) -> dict:
        """Map each edge's boundary bipartition (side without boundary position 0) to its weight."""
        topo = self.topology
        pos_of = {b: i for i, b in enumerate(topo.boundary)}
        out = {}
        for i, (u, v) in enumerate(topo.edges):
            # vertices on v's side when the edge is removed
            side = set()
            stack = [v]
            seen = {u, v}
            while stack:
                x = stack.pop()
                if x in pos_of:
                    side.add(pos_of[x])
                for y in topo.adjacency[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            if 0 in side:
                side = set(range(len(topo.boundary))) - side
            out[frozenset(side)] = self.weights[i]
        return out

    def to_dict(self) -> dict:
        return {"topology": self.topology.to_dict(), "weights": list(self.weights)}
