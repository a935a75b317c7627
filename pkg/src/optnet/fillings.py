"""Minimal fillings of finite metric spaces.

A filling of a space ``(M, rho)`` is a weighted tree whose boundary is
``M`` and whose path distances dominate ``rho``.  For a fixed tree type the
lightest filling is a small linear program; the minimal filling minimises
that over binary tree types (degenerate types appear as zero-weight edges).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterator, Sequence

import numpy as np

from .graphs import (
    GraphError,
    TreeTopology,
    WeightedTree,
    enumerate_binary_topologies,
    insertion_search,
    star_topology,
)
from .lp import EPS_LP, OPTIMAL, LpError, LpProblem, lp_solve
from .metric import (
    FiniteMetricSpace,
    MetricError,
    check_four_point,
    gromov_product,
)
from .steiner import GuardError

NMAX = 8
KMAX = 2
MULTITOUR_NMAX = 7
# float values this close to the best are treated as ties (canonical index wins)
_TIE = 1e-12


def _zero(space: FiniteMetricSpace):
    return Fraction(0) if space.exact else 0.0


def _scale(space: FiniteMetricSpace) -> float:
    d = float(space.diameter)
    return d if d > 0 else 1.0


@dataclass
class FillingResult:
    """Outcome of a filling computation; unpacks as ``(tree, value)``."""

    tree: WeightedTree
    value: object
    topology: TreeTopology | None = None
    weights: tuple | None = None
    topology_index: int | None = None
    exact: bool = False
    evaluated: int = 0

    def __iter__(self):
        yield self.tree
        yield self.value


# ---------------------------------------------------------------------------
# parametric fillings
# ---------------------------------------------------------------------------


def filling_lp(space: FiniteMetricSpace, topology: TreeTopology, allow_negative: bool = False) -> LpProblem:
    """``min sum(w)`` subject to ``sum of w along each boundary path >= rho``."""
    if len(topology.boundary) != space.n:
        raise GraphError(f"topology has {len(topology.boundary)} boundary vertices, space has {space.n} points")
    m = len(topology.edges)
    one = Fraction(1) if space.exact else 1.0
    zero = _zero(space)
    prob = LpProblem([one] * m, [], [allow_negative] * m)
    d = space.dist
    for i, j, path in topology.boundary_paths():
        row = [zero] * m
        for e in path:
            row[e] = one
        prob.constraints.append((row, ">=", d[i, j]))
    return prob


def mpf(
    space: FiniteMetricSpace,
    topology: TreeTopology,
    allow_negative: bool = False,
    exact: bool | None = None,
) -> FillingResult:
    """Minimal parametric filling of type ``topology``; generalized when ``allow_negative``."""
    exact = space.exact if exact is None else exact
    sp = space if not exact else space.to_exact()
    prob = filling_lp(sp if exact else FiniteMetricSpace(space.as_float()), topology, allow_negative)
    sol = lp_solve(prob, exact=exact)
    if sol.status != OPTIMAL:
        raise LpError(f"filling LP ended with status {sol.status!r}")
    w = tuple(sol.x)
    if not allow_negative and not exact:
        w = tuple(max(0.0, x) for x in w)
    value = sol.value if exact else math.fsum(w)
    tree = WeightedTree(topology, w)
    return FillingResult(tree, value, topology, w, None, exact, 1)


def is_filling(space: FiniteMetricSpace, tree: WeightedTree, tol: float | None = None) -> bool:
    if len(tree.topology.boundary) != space.n:
        return False
    tol = (0 if space.exact else EPS_LP * _scale(space)) if tol is None else tol
    m = tree.boundary_matrix()
    return all(m[i][j] >= space.dist[i, j] - tol for i in range(space.n) for j in range(i + 1, space.n))


# ---------------------------------------------------------------------------
# minimal fillings
# ---------------------------------------------------------------------------


def _two_point(space: FiniteMetricSpace) -> FillingResult:
    topo = TreeTopology(2, ((0, 1),), (0, 1))
    w = (space.dist[0, 1],)
    return FillingResult(WeightedTree(topo, w), w[0], topo, w, 0, space.exact, 0)


def _report(space, topo, w, value, idx, exact, evaluated) -> FillingResult:
    tol = 0 if exact else EPS_LP * _scale(space)
    tree = WeightedTree(topo, w).contract(tol, interior_only=True)
    return FillingResult(tree, value, topo, tuple(w), idx, exact, evaluated)


def mf(space: FiniteMetricSpace, nmax: int = NMAX, method: str = "branch-and-bound") -> FillingResult:
    """Minimal filling: the lightest nonnegative filling over all binary tree types.

    ``"branch-and-bound"`` walks the leaf-insertion tree with float LPs; the
    nonnegative parametric filling weight of a partial type on the first
    ``k`` points bounds every completion from below.  For rational input the
    winning type is then re-solved exactly.

    ``"exhaustive"`` takes the minimum of the generalized parametric fillings
    over every binary type and then recovers a nonnegative filling of the
    same weight on the first type that admits one; it stays in the input's
    arithmetic throughout.

    Ties between types are broken by the lower canonical index.
    """
    n = space.n
    if n > nmax:
        raise GuardError(f"n = {n} exceeds the guard nmax = {nmax}")
    if n == 2:
        return _two_point(space)
    if method == "exhaustive":
        return _mf_exhaustive(space)
    if method != "branch-and-bound":
        raise ValueError(f"unknown method {method!r}")
    fspace = FiniteMetricSpace(space.as_float())
    scale = _scale(space)
    slack = EPS_LP * scale
    if n == 3:
        res = mpf(space, star_topology(3))
        return _report(space, res.topology, res.weights, res.value, 0, space.exact, 1)

    best = [math.inf]
    cands = []  # (float value, index, topology)
    count = {"full": 0, "evaluated": 0}
    subs = {k: fspace.subspace(range(k)) for k in range(3, n + 1)}

    def visit(k, topo):
        count["evaluated"] += 1
        val = mpf(subs[k], topo, exact=False).value
        if k < n:
            if val > best[0] + slack:
                count["full"] += _below(k, n)
                return False
            return True
        idx = count["full"]
        count["full"] += 1
        if val <= best[0] + slack:
            cands.append((val, idx, topo))
            best[0] = min(best[0], val)
        return True

    insertion_search(n, visit)
    fmin = best[0]
    val, idx, topo = min((c for c in cands if c[0] <= fmin + _TIE * scale), key=lambda c: c[1])
    res = mpf(space, topo)
    return _report(space, topo, res.weights, res.value, idx, space.exact, count["evaluated"] + 1)


def _below(k: int, n: int) -> int:
    out = 1
    for j in range(k, n):
        out *= 2 * j - 3
    return out


def _mf_exhaustive(space: FiniteMetricSpace) -> FillingResult:
    exact = space.exact
    tops = list(enumerate_binary_topologies(space.n))
    gen = [mpf(space, t, allow_negative=True).value for t in tops]
    value = min(gen)
    tol = 0 if exact else _TIE * _scale(space)
    for idx, t in enumerate(tops):
        if gen[idx] > value + tol:
            continue
        res = mpf(space, t)
        if res.value <= value + (0 if exact else EPS_LP * _scale(space)):
            return _report(space, t, res.weights, value, idx, exact, 2 * len(tops))
    raise LpError("no nonnegative filling attains the generalized minimum")  # pragma: no cover


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def four_point_mf(space: FiniteMetricSpace):
    """Minimal filling weight of a four-point space: half the sum of the smallest and
    largest of the three pairing sums.  Returns ``(value, pairing)`` with the pairing
    of smallest sum (the two cherries of the minimal filling)."""
    if space.n != 4:
        raise MetricError([f"four_point_mf needs 4 points, got {space.n}"])
    d = space.dist
    pairings = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]
    sums = [d[a] + d[b] for a, b in pairings]
    k = min(range(3), key=lambda i: (sums[i], i))
    return (min(sums) + max(sums)) / 2, pairings[k]


def cherry_topology(pairing) -> TreeTopology:
    """Four-leaf binary tree with the two given cherries (interior vertices 4, 5)."""
    (a, b), (c, d) = pairing
    return TreeTopology(6, ((a, 4), (b, 4), (4, 5), (c, 5), (d, 5)), (0, 1, 2, 3))


class NotAdditiveError(MetricError):
    pass


def star_weights(space: FiniteMetricSpace) -> WeightedTree:
    """Star filling with leaf weights given by Gromov products.

    The weight at ``p_i`` is ``(p_j, p_k)_{p_i}``; the space must be additive
    and the value must not depend on the choice of ``j, k``.
    """
    n = space.n
    if n == 2:
        return WeightedTree(star_topology(2), (space.dist[0, 1],))
    rep = check_four_point(space)
    if not rep.additive:
        raise NotAdditiveError([f"space is not additive (four point rule fails at {rep.witness})"])
    eps = 0 if space.exact else 1e-9 * _scale(space)
    w = []
    for i in range(n):
        others = [j for j in range(n) if j != i]
        ref = gromov_product(space, i, others[0], others[1])
        for j, k in combinations(others, 2):
            g = gromov_product(space, i, j, k)
            if abs(g - ref) > eps:
                raise MetricError(
                    [f"Gromov products at point {i} disagree: ({others[0]},{others[1]}) -> {ref}, ({j},{k}) -> {g}"]
                )
        w.append(ref)
    return WeightedTree(star_topology(n), tuple(w))


# ---------------------------------------------------------------------------
# tours and multitours
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Multitour:
    """Closed sequence of boundary positions; each appears ``k`` times.

    The bijection on ``k`` copies of ``M`` sends the copy at slot ``t`` to
    the copy at slot ``t + 1``.
    """

    k: int
    sequence: tuple

    def mapping(self) -> list[int]:
        m = len(self.sequence)
        return [(t + 1) % m for t in range(m)]

    def half_perimeter(self, space: FiniteMetricSpace):
        s = self.sequence
        d = space.dist
        total = sum((d[s[t], s[(t + 1) % len(s)]] for t in range(len(s))), _zero(space))
        return total / (2 * self.k)


def _canonical(seq: Sequence[int]) -> tuple:
    m = len(seq)
    best = None
    for s in (list(seq), list(reversed(seq))):
        for r in range(m):
            if s[r] != 0:
                continue
            c = tuple(s[r:] + s[:r])
            if best is None or c < best:
                best = c
    return best


def _require_binary(topology: TreeTopology) -> None:
    b = set(topology.boundary)
    for v in range(topology.n_vertices):
        if (v in b) != (topology.degree(v) == 1) and topology.n_vertices > 2:
            raise GraphError("tours are defined here for trees whose boundary is exactly the leaf set")


def enumerate_tours(topology: TreeTopology) -> Iterator[Multitour]:
    """Cyclic boundary orders met by walking around planar drawings of the tree.

    Every choice of cyclic neighbour order at the interior vertices is
    walked; results are deduplicated up to rotation and reflection.
    """
    _require_binary(topology)
    topo = topology
    pos_of = {b: i for i, b in enumerate(topo.boundary)}
    if len(topo.boundary) == 2:
        yield Multitour(1, (0, 1))
        return
    interior = topo.interior
    choices = []
    for v in interior:
        nb = topo.adjacency[v]
        first, rest = nb[0], nb[1:]
        choices.append([[first, *p] for p in permutations(rest)])
    seen = set()

    def rec(i, rot):
        if i == len(interior):
            yield from _walk(rot)
            return
        for c in choices[i]:
            rot[interior[i]] = c
            yield from rec(i + 1, rot)

    def _walk(rot):
        start = topo.boundary[0]
        prev, cur = start, topo.adjacency[start][0]
        seq = [pos_of[start]]
        while True:
            if cur in pos_of:
                if cur == start:
                    break
                seq.append(pos_of[cur])
                prev, cur = cur, prev
                continue
            r = rot[cur]
            nxt = r[(r.index(prev) + 1) % len(r)]
            prev, cur = cur, nxt
        key = _canonical(seq)
        if key not in seen:
            seen.add(key)
            yield Multitour(1, key)

    yield from rec(0, {})


def enumerate_multitours(topology: TreeTopology, k: int) -> Iterator[Multitour]:
    """Closed boundary sequences visiting each point ``k`` times whose consecutive
    tree paths cover every edge exactly ``2k`` times (up to rotation and reflection)."""
    if k < 1:
        raise ValueError("multiplicity must be positive")
    if k > KMAX:
        raise GuardError(f"multiplicity {k} exceeds the guard kmax = {KMAX}")
    n = len(topology.boundary)
    if n > MULTITOUR_NMAX:
        raise GuardError(f"n = {n} exceeds the multitour guard {MULTITOUR_NMAX}")
    _require_binary(topology)
    if n == 2:
        yield Multitour(k, tuple([0, 1] * k))
        return
    E = len(topology.edges)
    cap = 2 * k
    # edge cover counts packed into 4-bit fields biased by 7 - cap, so a count
    # above cap sets the field's top bit
    bias = sum((7 - cap) << (4 * e) for e in range(E))
    top = sum(8 << (4 * e) for e in range(E))
    full = sum(7 << (4 * e) for e in range(E))
    mask = {}
    for i, j, p in topology.boundary_paths():
        mask[(i, j)] = mask[(j, i)] = sum(1 << (4 * e) for e in p)
    left = [k] * n
    L = k * n
    seq = [0]
    left[0] -= 1
    seen = set()

    def rec(cover):
        last = seq[-1]
        if len(seq) == L:
            if last != 0 and cover + mask[(last, 0)] == full:
                key = _canonical(seq)
                if key not in seen:
                    seen.add(key)
                    yield Multitour(k, key)
            return
        for j in range(n):
            if j == last or left[j] == 0:
                continue
            c = cover + mask[(last, j)]
            if c & top:
                continue
            seq.append(j)
            left[j] -= 1
            yield from rec(c)
            left[j] += 1
            seq.pop()

    yield from rec(bias)


@dataclass
class EreminResult:
    lower_bound: object
    exact: bool
    mpf_minus: object
    witness: Multitour | None
    counts: dict = field(default_factory=dict)


def eremin_value(space: FiniteMetricSpace, topology: TreeTopology, kmax: int = KMAX) -> EreminResult:
    """Best multitour half-perimeter for ``k <= kmax`` against the generalized
    parametric filling weight (which it can never exceed)."""
    gen = mpf(space, topology, allow_negative=True).value
    best = None
    wit = None
    counts = {}
    for k in range(1, kmax + 1):
        it = enumerate_tours(topology) if k == 1 else enumerate_multitours(topology, k)
        c = 0
        for mt in it:
            c += 1
            hp = mt.half_perimeter(space)
            if best is None or hp > best:
                best, wit = hp, mt
        counts[k] = c
    tol = 0 if space.exact else EPS_LP * _scale(space)
    exact = best is not None and abs(gen - best) <= tol
    return EreminResult(best, exact, gen, wit, counts)


# ---------------------------------------------------------------------------
# additive spaces
# ---------------------------------------------------------------------------


def reconstruct_additive_tree(space: FiniteMetricSpace, nmax: int = NMAX) -> WeightedTree:
    """Generating tree of an additive space: the minimal filling with every
    zero-weight edge contracted, checked to reproduce the distances."""
    rep = check_four_point(space)
    if not rep.additive:
        raise NotAdditiveError([f"space is not additive (four point rule fails at {rep.witness})"])
    res = mf(space, nmax=nmax)
    exact = res.exact
    tol = 0 if exact else EPS_LP * _scale(space)
    tree = WeightedTree(res.topology, res.weights).contract(tol)
    m = tree.boundary_matrix()
    for i in range(space.n):
        for j in range(i + 1, space.n):
            if abs(m[i][j] - space.dist[i, j]) > tol:
                raise LpError(f"reconstructed tree misses distance ({i}, {j}): {m[i][j]} vs {space.dist[i, j]}")
    return tree


def trees_isomorphic(a: WeightedTree, b: WeightedTree, tol=0) -> bool:
    """Same boundary splits with equal weights (boundary labels fixed)."""
    sa, sb = a.splits(), b.splits()
    if set(sa) != set(sb):
        return False
    return all(abs(sa[s] - sb[s]) <= tol for s in sa)


def equal_tour_tree(space: FiniteMetricSpace, nmax: int = 7):
    """Search binary types for one whose tours all have the same half-perimeter.

    Returns ``("found", topology)``, ``("none", None)`` after a complete
    search, or ``("inconclusive", None)`` when ``n > nmax``.  Binary types
    suffice: the tours of a refinement are among the tours of the coarser tree.
    """
    if space.n > nmax:
        return "inconclusive", None
    tol = 0 if space.exact else EPS_LP * _scale(space)
    for topo in enumerate_binary_topologies(space.n):
        vals = [t.half_perimeter(space) for t in enumerate_tours(topo)]
        if max(vals) - min(vals) <= tol:
            return "found", topo
    return "none", None


# ---------------------------------------------------------------------------
# Kuratowski network
# ---------------------------------------------------------------------------


@dataclass
class KuratowskiNetwork:
    topology: TreeTopology
    points: np.ndarray  # one max-norm point per vertex

    @property
    def edge_lengths(self) -> list:
        out = []
        for u, v in self.topology.edges:
            out.append(max(abs(a - b) for a, b in zip(self.points[u], self.points[v])))
        return out

    @property
    def length(self):
        ls = self.edge_lengths
        return sum(ls[1:], ls[0]) if ls else 0


def kuratowski_network(space: FiniteMetricSpace, filling: WeightedTree) -> KuratowskiNetwork:
    """Vertex ``v`` goes to the vector of its distances to ``p_1..p_n`` in the tree
    completed by the boundary edges of weight ``rho``."""
    topo = filling.topology
    if any(w < 0 for w in filling.weights):
        raise GraphError("Kuratowski network needs nonnegative weights")
    if not is_filling(space, filling):
        raise GraphError("weighted tree is not a filling of the space")
    V = topo.n_vertices
    INF = None
    dist = [[INF] * V for _ in range(V)]
    zero = _zero(space) if space.exact else 0.0
    for v in range(V):
        dist[v][v] = zero
    for (u, v), w in zip(topo.edges, filling.weights):
        w = Fraction(w) if space.exact else float(w)
        dist[u][v] = dist[v][u] = w if dist[u][v] is None else min(dist[u][v], w)
    b = topo.boundary
    for i in range(space.n):
        for j in range(space.n):
            if i != j:
                w = space.dist[i, j]
                cur = dist[b[i]][b[j]]
                dist[b[i]][b[j]] = w if cur is None else min(cur, w)
    for k in range(V):
        dk = dist[k]
        for i in range(V):
            dik = dist[i][k]
            if dik is None:
                continue
            di = dist[i]
            for j in range(V):
                if dk[j] is None:
                    continue
                s = dik + dk[j]
                if di[j] is None or s < di[j]:
                    di[j] = s
    pts = np.empty((V, space.n), dtype=object if space.exact else np.float64)
    for v in range(V):
        for i in range(space.n):
            pts[v, i] = dist[v][b[i]]
    return KuratowskiNetwork(topo, pts)
