import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from optnet.graphs import (
    GraphError,
    TreeTopology,
    WeightedGraph,
    WeightedTree,
    bareiss_determinant,
    binary_topology_count,
    double_factorial,
    enumerate_binary_topologies,
    enumerate_spanning_trees,
    kruskal_mst,
    spanning_tree_count,
    star_topology,
    tree_path,
)

from oracles import mst_bruteforce


def complete(n, w=1):
    return WeightedGraph(n, tuple((i, j, w) for i, j in itertools.combinations(range(n), 2)))


def random_connected(rng, n, extra=0.5, wmax=9):
    edges = {}
    for v in range(1, n):
        u = rng.randrange(v)
        edges[(u, v)] = rng.randint(1, wmax)
    for i, j in itertools.combinations(range(n), 2):
        if (i, j) not in edges and rng.random() < extra:
            edges[(i, j)] = rng.randint(1, wmax)
    return WeightedGraph(n, tuple((u, v, w) for (u, v), w in edges.items()))


def test_kruskal_triangle_and_single_edge():
    assert kruskal_mst(complete(3))[1] == 2
    assert kruskal_mst(WeightedGraph(2, ((0, 1, 7),)))[1] == 7


def test_kruskal_disconnected():
    with pytest.raises(GraphError):
        kruskal_mst(WeightedGraph(4, ((0, 1, 1), (2, 3, 1))))


def test_kruskal_tie_break_is_order_independent():
    g = complete(5)
    rng = random.Random(3)
    edges = list(g.edges)
    trees = set()
    for _ in range(10):
        rng.shuffle(edges)
        t, w = kruskal_mst(WeightedGraph(5, tuple(edges)))
        assert w == 4
        trees.add(t.edges)
    assert len(trees) == 1


def test_kruskal_matches_enumeration_n7():
    rng = random.Random(11)
    for _ in range(20):
        g = random_connected(rng, 7)
        best = min(t.weight for t in enumerate_spanning_trees(g))
        assert kruskal_mst(g)[1] == best == mst_bruteforce(7, g.edges)


def test_kruskal_exact_fractions():
    g = WeightedGraph(3, ((0, 1, Fraction(1, 3)), (1, 2, Fraction(1, 6)), (0, 2, Fraction(1, 2))))
    assert kruskal_mst(g)[1] == Fraction(1, 2)


def test_bareiss():
    assert bareiss_determinant([[2, 1], [1, 2]]) == 3
    assert bareiss_determinant([[0, 1], [1, 0]]) == -1
    assert bareiss_determinant([[1, 2], [2, 4]]) == 0


@pytest.mark.parametrize("n,count", [(2, 1), (3, 3), (4, 16), (5, 125), (6, 1296), (7, 16807), (8, 262144)])
def test_cayley(n, count):
    assert spanning_tree_count(complete(n)) == count


def test_spanning_tree_count_small_cases():
    cycle4 = WeightedGraph(4, ((0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)))
    assert spanning_tree_count(cycle4) == 4
    assert sum(1 for _ in enumerate_spanning_trees(cycle4)) == 4
    path = WeightedGraph(4, ((0, 1, 1), (1, 2, 1), (2, 3, 1)))
    assert spanning_tree_count(path) == 1
    assert spanning_tree_count(WeightedGraph(4, ((0, 1, 1), (2, 3, 1)))) == 0


def test_enumeration_guard():
    with pytest.raises(GraphError):
        list(enumerate_spanning_trees(complete(11)))


@given(st.integers(min_value=0, max_value=10_000))
def test_kirchhoff_agrees_with_enumeration(seed):
    rng = random.Random(seed)
    g = random_connected(rng, rng.randint(2, 6))
    trees = list(enumerate_spanning_trees(g))
    assert len(trees) == spanning_tree_count(g)
    assert len({t.edges for t in trees}) == len(trees)


@given(st.integers(min_value=0, max_value=10_000))
def test_kirchhoff_minor_independent(seed):
    rng = random.Random(seed)
    g = random_connected(rng, rng.randint(2, 7))
    counts = {spanning_tree_count(g, minor=k) for k in range(g.n)}
    assert len(counts) == 1


def test_double_factorial_and_counts():
    assert [double_factorial(k) for k in (-1, 1, 3, 5, 7)] == [1, 1, 3, 15, 105]
    assert [binary_topology_count(n) for n in (2, 3, 4, 5, 6, 7)] == [1, 1, 3, 15, 105, 945]


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_binary_topologies(n):
    topos = list(enumerate_binary_topologies(n))
    assert len(topos) == binary_topology_count(n)
    splits = set()
    for t in topos:
        assert t.is_binary
        assert t.n_vertices == 2 * n - 2
        assert all(t.degree(v) == 1 for v in t.boundary)
        assert all(t.degree(v) == 3 for v in t.interior)
        splits.add(frozenset(WeightedTree(t, (1,) * len(t.edges)).splits()))
    assert len(splits) == len(topos)


def test_binary_topologies_deterministic():
    a = [t.edges for t in enumerate_binary_topologies(6)]
    b = [t.edges for t in enumerate_binary_topologies(6)]
    assert a == b


def test_tree_path():
    star = star_topology(3)
    assert len(tree_path(star, 0, 1)) == 2
    four = TreeTopology(6, ((0, 4), (1, 4), (4, 5), (2, 5), (3, 5)), (0, 1, 2, 3))
    p = tree_path(four, 0, 2)
    assert len(p) == 3 and (4, 5) in p
    line = TreeTopology(6, tuple((i, i + 1) for i in range(5)), (0, 1, 2, 3, 4, 5))
    assert len(tree_path(line, 0, 5)) == 5
    assert tree_path(line, 2, 2) == []


def test_topology_validation():
    with pytest.raises(GraphError):
        TreeTopology(3, ((0, 1), (1, 2), (0, 2)), (0, 1, 2))
    with pytest.raises(GraphError):
        # interior vertex 3 of degree 2
        TreeTopology(4, ((0, 3), (3, 1), (1, 2)), (0, 1, 2))
    t = TreeTopology.from_dict(star_topology(4).to_dict())
    assert t == star_topology(4)


def test_weighted_tree_contract_and_splits():
    t = TreeTopology(6, ((0, 4), (1, 4), (4, 5), (2, 5), (3, 5)), (0, 1, 2, 3))
    w = WeightedTree(t, (1, 1, 0, 1, 1))
    c = w.contract()
    assert len(c.topology.edges) == 4 and c.total == 4
    assert set(c.splits()) == {frozenset({1}), frozenset({2}), frozenset({3}), frozenset({1, 2, 3})}
    assert w.distance(0, 2) == 2
    assert c.boundary_matrix() == w.boundary_matrix()
