"""Finite metric spaces.

Distances are carried either as ``float64`` or, when every input entry is an
``int``/``Fraction``, exactly as ``Fraction`` in an ``object`` array; all
operations here stay inside the rationals in the exact case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from numbers import Rational
from typing import Sequence

import numpy as np

from . import kernels
from .graphs import WeightedTree

EPS_METRIC = 1e-9
EPS_ADDITIVE = 1e-9

ADDITIVE = "additive"
PSEUDO_ADDITIVE = "pseudo-additive"
NEITHER = "neither"


class MetricError(ValueError):
    """Raised with the full list of violated metric axioms."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("invalid metric: " + "; ".join(violations))


def _is_exact(x) -> bool:
    return isinstance(x, Rational) and not isinstance(x, bool)


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    dist: np.ndarray
    labels: tuple | None = None

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    @property
    def exact(self) -> bool:
        return self.dist.dtype == object

    @property
    def diameter(self):
        return max((self.dist[i, j] for i in range(self.n) for j in range(self.n)), default=0)

    @property
    def eps(self):
        """Comparison slack: zero for exact spaces, else relative to the diameter."""
        return 0 if self.exact else EPS_METRIC * float(self.diameter)

    def __getitem__(self, ij):
        return self.dist[ij]

    def as_float(self) -> np.ndarray:
        return np.asarray(self.dist, dtype=np.float64)

    def to_exact(self) -> "FiniteMetricSpace":
        if self.exact:
            return self
        d = np.empty(self.dist.shape, dtype=object)
        for i in range(self.n):
            for j in range(self.n):
                d[i, j] = Fraction(float(self.dist[i, j]))
        return FiniteMetricSpace(d, self.labels)

    def scaled(self, factor) -> "FiniteMetricSpace":
        return FiniteMetricSpace(self.dist * factor, self.labels)

    def subspace(self, idx: Sequence[int]) -> "FiniteMetricSpace":
        idx = list(idx)
        labels = tuple(self.labels[i] for i in idx) if self.labels else None
        return FiniteMetricSpace(self.dist[np.ix_(idx, idx)], labels)

    def rows(self) -> list[list]:
        return [list(r) for r in self.dist]


def validate_metric(matrix, labels=None, exact: bool | None = None) -> FiniteMetricSpace:
    """Check the metric axioms and return the validated space.

    ``exact=None`` picks exact arithmetic when every entry is an int or a
    Fraction.  Raises :class:`MetricError` listing every violation by index.
    """
    rows = [list(r) for r in matrix]
    n = len(rows)
    problems = []
    if n < 2:
        raise MetricError([f"need at least 2 points, got {n}"])
    for i, r in enumerate(rows):
        if len(r) != n:
            raise MetricError([f"row {i} has {len(r)} entries, expected {n}"])
    if exact is None:
        exact = all(_is_exact(x) for r in rows for x in r)
    if exact:
        d = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                d[i, j] = Fraction(rows[i][j])
    else:
        d = np.array(rows, dtype=np.float64)
        if not np.all(np.isfinite(d)):
            bad = np.argwhere(~np.isfinite(d))[0]
            raise MetricError([f"non-finite entry at ({bad[0]}, {bad[1]})"])
    big = max(abs(d[i, j]) for i in range(n) for j in range(n))
    eps = 0 if exact else EPS_METRIC * float(big)
    for i in range(n):
        if d[i, i] != 0:
            problems.append(f"nonzero diagonal at ({i}, {i})")
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if d[i, j] < 0:
                problems.append(f"negative entry at ({i}, {j})")
            elif d[i, j] == 0:
                problems.append(f"zero distance between distinct points ({i}, {j})")
            if j > i and abs(d[i, j] - d[j, i]) > eps:
                problems.append(f"asymmetry at ({i}, {j}): {d[i, j]} != {d[j, i]}")
    if not problems:
        if not exact:
            d = (d + d.T) / 2
        for i, k in combinations(range(n), 2):
            for j in range(n):
                if j != i and j != k and d[i, k] > d[i, j] + d[j, k] + eps:
                    problems.append(
                        f"triangle violation at ({i}, {k}) via {j}: {d[i, k]} > {d[i, j]} + {d[j, k]}"
                    )
    if problems:
        raise MetricError(problems)
    if labels is not None:
        labels = tuple(str(x) for x in labels)
        if len(labels) != n:
            raise MetricError([f"{len(labels)} labels for {n} points"])
    return FiniteMetricSpace(d, labels)


def euclidean_space(points, exact: bool = False) -> FiniteMetricSpace:
    """Metric space induced by plane points (float distances)."""
    p = np.asarray(points, dtype=np.float64)
    d = np.sqrt(((p[:, None, :] - p[None, :, :]) ** 2).sum(axis=2))
    return validate_metric(d, exact=exact)


def gromov_product(space: FiniteMetricSpace, i: int, j: int, k: int):
    """``(p_j, p_k)_{p_i} = (rho_ij + rho_ik - rho_jk) / 2``."""
    n = space.n
    for x in (i, j, k):
        if not 0 <= x < n:
            raise IndexError(f"point index {x} out of range 0..{n - 1}")
    if len({i, j, k}) != 3:
        raise ValueError("Gromov product needs three distinct points")
    d = space.dist
    return (d[i, j] + d[i, k] - d[j, k]) / 2


@dataclass(frozen=True)
class AdditivityReport:
    cls: str
    witness: tuple | None = None
    weak_witness: tuple | None = None
    eps: float = 0.0

    @property
    def additive(self) -> bool:
        return self.cls == ADDITIVE

    @property
    def pseudo_additive(self) -> bool:
        return self.cls in (ADDITIVE, PSEUDO_ADDITIVE)


def _four_sums(d, i, j, k, l):
    return sorted((d[i, j] + d[k, l], d[i, k] + d[j, l], d[i, l] + d[j, k]))


def check_four_point(space: FiniteMetricSpace, eps=None) -> AdditivityReport:
    """Classify by the four point rule.

    Additive: for every quadruple the two largest of the three pair sums
    coincide.  Pseudo-additive: some two of the three sums coincide.
    """
    n = space.n
    if n <= 3:
        return AdditivityReport(ADDITIVE, eps=0.0)
    if eps is None:
        eps = 0 if space.exact else EPS_ADDITIVE * float(space.diameter)
    if space.exact:
        d = space.dist
        strong = weak = None
        for q in combinations(range(n), 4):
            s1, s2, s3 = _four_sums(d, *q)
            if s3 - s2 > eps:
                if strong is None:
                    strong = q
                if s2 - s1 > eps:
                    weak = q
                    break
    else:
        sw, ww = kernels.four_point(np.ascontiguousarray(space.as_float()), float(eps))
        strong = tuple(int(x) for x in sw) if sw[0] >= 0 else None
        weak = tuple(int(x) for x in ww) if ww[0] >= 0 else None
    if strong is None:
        cls = ADDITIVE
    elif weak is None:
        cls = PSEUDO_ADDITIVE
    else:
        cls = NEITHER
    return AdditivityReport(cls, strong, weak, float(eps))


@dataclass(frozen=True)
class KuratowskiImage:
    """Rows of the distance matrix, viewed as points of the max-norm space."""

    points: np.ndarray

    def linf(self, i: int, j: int):
        return max(abs(a - b) for a, b in zip(self.points[i], self.points[j]))

    def distance_matrix(self) -> np.ndarray:
        n = len(self.points)
        out = np.empty((n, n), dtype=self.points.dtype)
        for i in range(n):
            for j in range(n):
                out[i, j] = self.linf(i, j)
        return out


def kuratowski_embed(space: FiniteMetricSpace) -> KuratowskiImage:
    return KuratowskiImage(space.dist.copy())


def linf_distance(a, b):
    return max(abs(x - y) for x, y in zip(a, b))


def cycle_from_mapping(pi: Sequence[int]) -> list[int]:
    """Visiting order of a cyclic permutation given as ``pi[x] = next point``.

    Raises ``ValueError`` unless ``pi`` is a single cycle through all points.
    """
    n = len(pi)
    if sorted(pi) != list(range(n)):
        raise ValueError("not a permutation")
    order = [0]
    while len(order) < n:
        nxt = pi[order[-1]]
        if nxt == 0:
            raise ValueError(f"permutation splits into several cycles (cycle of length {len(order)})")
        order.append(nxt)
    if pi[order[-1]] != 0:
        raise ValueError("not a single cycle")
    return order


def half_perimeter(space: FiniteMetricSpace, order: Sequence[int]):
    """Half of the closed tour length visiting the points in ``order``."""
    order = list(order)
    if sorted(order) != list(range(space.n)):
        raise ValueError("order must visit every point exactly once")
    d = space.dist
    total = sum((d[order[t], order[(t + 1) % len(order)]] for t in range(len(order))), 0 * d[0, 0])
    return total / 2


def cyclic_orders(n: int):
    """Cyclic orders of ``0..n-1`` starting at 0, one per direction pair, in lexicographic order."""
    if n <= 2:
        yield list(range(n))
        return
    for perm in permutations(range(1, n)):
        if perm[0] < perm[-1]:
            yield [0, *perm]


def min_half_perimeter(space: FiniteMetricSpace):
    """Smallest half-perimeter over all ``(n-1)!/2`` cyclic orders; ties go to the lexicographically first order."""
    d = space.dist
    if not space.exact:
        d = space.as_float()
    best = None
    best_order = None
    for order in cyclic_orders(space.n):
        val = sum(d[order[t], order[t - 1]] for t in range(len(order)))
        if best is None or val < best:
            best, best_order = val, order
    return best / 2, best_order


def metric_from_weighted_tree(tree: WeightedTree) -> FiniteMetricSpace:
    """Path metric of a weighted tree restricted to its boundary (validated)."""
    m = tree.boundary_matrix()
    exact = all(_is_exact(w) for w in tree.weights)
    return validate_metric(m, exact=exact)


def is_close(a, b, rel: float = 1e-9, abs_tol: float = 0.0) -> bool:
    if _is_exact(a) and _is_exact(b):
        return a == b
    return math.isclose(float(a), float(b), rel_tol=rel, abs_tol=abs_tol)
