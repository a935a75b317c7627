"""Standard instances and seeded random generators."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .graphs import TreeTopology, WeightedTree
from .metric import FiniteMetricSpace, validate_metric


def regular_triangle(side: float = 1.0) -> np.ndarray:
    return np.array([[0.0, 0.0], [side, 0.0], [side / 2, side * math.sqrt(3) / 2]])


def obtuse_triangle() -> np.ndarray:
    """Two unit sides meeting at 150 degrees at the origin."""
    return np.array([[0.0, 0.0], [1.0, 0.0], [math.cos(5 * math.pi / 6), math.sin(5 * math.pi / 6)]])


def unit_square() -> np.ndarray:
    return np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def rectangle_points(a: float = 3, b: float = 4) -> np.ndarray:
    """Corners in boundary order; sides ``a`` (p1p2, p3p4) and ``b``."""
    return np.array([[0.0, 0.0], [a, 0.0], [a, b], [0.0, b]], dtype=float)


def rectangle_space(a: int = 3, b: int = 4) -> FiniteMetricSpace:
    """Exact distance space of the rectangle corners (needs an integer diagonal)."""
    c = math.isqrt(a * a + b * b)
    if c * c != a * a + b * b:
        raise ValueError("diagonal is not an integer")
    return validate_metric([[0, a, c, b], [a, 0, b, c], [c, b, 0, a], [b, c, a, 0]])


def regular_simplex_space(n: int, d=1) -> FiniteMetricSpace:
    return validate_metric([[0 if i == j else d for j in range(n)] for i in range(n)])


def random_integer_space(rng: np.random.Generator, n: int, low: int = 10) -> FiniteMetricSpace:
    """Integer distances drawn from ``[low, 2 low]``: always a metric, exact."""
    d = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d[i][j] = d[j][i] = int(rng.integers(low, 2 * low + 1))
    return validate_metric(d)


def random_binary_tree(rng: np.random.Generator, n: int) -> TreeTopology:
    """Random binary topology on leaves ``0..n-1`` by random leaf insertion."""
    if n == 2:
        return TreeTopology(2, ((0, 1),), (0, 1))
    edges = [(0, n), (1, n), (2, n)]
    for k in range(3, n):
        s = n + k - 2
        idx = int(rng.integers(len(edges)))
        u, v = edges[idx]
        edges = edges[:idx] + [(u, s), (s, v)] + edges[idx + 1:] + [(k, s)]
    return TreeTopology(2 * n - 2, tuple(edges), tuple(range(n)))


def random_weighted_tree(
    rng: np.random.Generator, n: int, max_weight: int = 10, zero_prob: float = 0.15, leaf_min: int = 1
) -> WeightedTree:
    """Binary tree with rational nonnegative weights; interior edges are zero with
    probability ``zero_prob`` (degenerate generating trees)."""
    topo = random_binary_tree(rng, n)
    b = set(topo.boundary)
    w = []
    for u, v in topo.edges:
        leaf = u in b or v in b
        if not leaf and rng.random() < zero_prob:
            w.append(Fraction(0))
        else:
            lo = leaf_min if leaf else 1
            w.append(Fraction(int(rng.integers(lo * 2, 2 * max_weight + 1)), 2))
    return WeightedTree(topo, tuple(w))


def random_points(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.random((n, 2))


def random_convex_points(rng: np.random.Generator, n: int) -> np.ndarray:
    """Points in convex position: sorted random angles on a random ellipse."""
    ang = np.sort(rng.uniform(0, 2 * math.pi, n))
    a, b = rng.uniform(0.5, 1.5, 2)
    return np.column_stack([a * np.cos(ang), b * np.sin(ang)])
