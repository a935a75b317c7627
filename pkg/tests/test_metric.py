import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from optnet.fillings import mf
from optnet.graphs import TreeTopology, WeightedTree, star_topology
from optnet.metric import (
    ADDITIVE,
    NEITHER,
    PSEUDO_ADDITIVE,
    MetricError,
    check_four_point,
    cycle_from_mapping,
    cyclic_orders,
    euclidean_space,
    gromov_product,
    half_perimeter,
    kuratowski_embed,
    metric_from_weighted_tree,
    min_half_perimeter,
    validate_metric,
)
from optnet.samples import random_integer_space, random_weighted_tree, rectangle_space, regular_simplex_space

TRI345 = [[0, 3, 4], [3, 0, 5], [4, 5, 0]]


def test_validate_examples():
    sp = validate_metric([[0, 1], [1, 0]])
    assert sp.n == 2 and sp.exact
    assert validate_metric(TRI345).diameter == 5
    with pytest.raises(MetricError) as err:
        validate_metric([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    assert "(0, 2)" in str(err.value)


@pytest.mark.parametrize(
    "matrix,needle",
    [
        ([[0, 1], [2, 0]], "asymmetry"),
        ([[0, -1], [-1, 0]], "negative"),
        ([[0, 0], [0, 0]], "zero distance"),
        ([[1, 1], [1, 0]], "diagonal"),
        ([[0, 1, 1], [1, 0]], "entries"),
        ([[0]], "at least 2"),
    ],
)
def test_validate_errors(matrix, needle):
    with pytest.raises(MetricError) as err:
        validate_metric(matrix)
    assert needle in str(err.value)


def test_validate_reports_every_violation():
    with pytest.raises(MetricError) as err:
        validate_metric([[0, 1, -2], [1, 0, 1], [5, 1, 0]])
    assert len(err.value.violations) >= 2


def test_float_tolerance():
    d = [[0, 1, 2 + 1e-12], [1, 0, 1], [2 + 1e-12, 1, 0]]
    validate_metric(d, exact=False)
    with pytest.raises(MetricError):
        validate_metric([[0, 1, 2.001], [1, 0, 1], [2.001, 1, 0]], exact=False)


def test_gromov_product():
    eq = regular_simplex_space(3)
    assert gromov_product(eq, 0, 1, 2) == Fraction(1, 2)
    sp = validate_metric(TRI345)
    # vertex 0 is opposite the side of length 5
    assert gromov_product(sp, 0, 1, 2) == 1
    line = validate_metric([[0, 1, 3], [1, 0, 2], [3, 2, 0]])
    assert gromov_product(line, 1, 0, 2) == 0
    with pytest.raises((ValueError, IndexError)):
        gromov_product(sp, 0, 0, 1)


@given(st.integers(0, 10_000), st.integers(3, 6))
def test_gromov_product_bounds(seed, n):
    sp = random_integer_space(np.random.default_rng(seed), n)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if len({i, j, k}) == 3:
                    g = gromov_product(sp, i, j, k)
                    assert 0 <= g <= min(sp.dist[i, j], sp.dist[i, k])


def test_four_point_examples():
    assert check_four_point(validate_metric(TRI345)).cls == ADDITIVE
    for n in range(2, 8):
        assert check_four_point(regular_simplex_space(n)).additive
    rep = check_four_point(rectangle_space())
    assert rep.cls == NEITHER and rep.witness == (0, 1, 2, 3)


def test_four_point_pseudo_additive():
    # sums 6, 6, 8: two smallest equal, the largest alone (negative interior edge)
    d = [[0, 2, 3, 4], [2, 0, 4, 3], [3, 4, 0, 4], [4, 3, 4, 0]]
    sp = validate_metric(d)
    rep = check_four_point(sp)
    assert rep.cls == PSEUDO_ADDITIVE and rep.pseudo_additive and not rep.additive


def test_four_point_float_matches_exact():
    rng = np.random.default_rng(5)
    for _ in range(30):
        sp = random_integer_space(rng, 6, low=3)
        a = check_four_point(sp)
        b = check_four_point(validate_metric(sp.as_float(), exact=False))
        assert a.cls == b.cls


@given(st.integers(0, 10_000), st.integers(2, 7))
def test_tree_metrics_are_additive(seed, n):
    tree = random_weighted_tree(np.random.default_rng(seed), n)
    sp = metric_from_weighted_tree(tree)
    assert check_four_point(sp).additive


def test_metric_from_weighted_tree_examples():
    sp = metric_from_weighted_tree(WeightedTree(star_topology(3), (1, 2, 3)))
    assert sp.rows() == [[0, 3, 4], [3, 0, 5], [4, 5, 0]]
    sp = metric_from_weighted_tree(WeightedTree(TreeTopology(2, ((0, 1),), (0, 1)), (Fraction(7),)))
    assert sp.dist[0, 1] == 7
    h = Fraction(1, 2)
    four = TreeTopology(6, ((0, 4), (1, 4), (4, 5), (2, 5), (3, 5)), (0, 1, 2, 3))
    sp = metric_from_weighted_tree(WeightedTree(four, (h, h, 0, h, h)))
    assert sp.rows() == regular_simplex_space(4).rows()


def test_metric_from_weighted_tree_rejects_non_metric():
    four = TreeTopology(6, ((0, 4), (1, 4), (4, 5), (2, 5), (3, 5)), (0, 1, 2, 3))
    with pytest.raises(MetricError):
        metric_from_weighted_tree(WeightedTree(four, (1, 1, -3, 1, 1)))


def test_kuratowski_examples():
    img = kuratowski_embed(regular_simplex_space(3))
    assert [list(r) for r in img.points] == [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
    img = kuratowski_embed(validate_metric([[0, 5], [5, 0]]))
    assert img.linf(0, 1) == 5


@given(st.integers(0, 10_000), st.integers(2, 8))
def test_kuratowski_isometry_exact(seed, n):
    sp = random_integer_space(np.random.default_rng(seed), n)
    d = kuratowski_embed(sp).distance_matrix()
    assert all(d[i, j] == sp.dist[i, j] for i in range(n) for j in range(n))


def test_kuratowski_isometry_float_exact():
    rng = np.random.default_rng(1)
    sp = euclidean_space(rng.random((6, 2)))
    d = kuratowski_embed(sp).distance_matrix()
    assert np.array_equal(d, sp.dist)


def test_half_perimeter_examples():
    assert half_perimeter(regular_simplex_space(3), [0, 2, 1]) == Fraction(3, 2)
    rect = rectangle_space()
    assert half_perimeter(rect, [0, 2, 1, 3]) == 9
    assert half_perimeter(rect, [0, 1, 2, 3]) == 7
    assert min_half_perimeter(rect) == (7, [0, 1, 2, 3])
    with pytest.raises(ValueError):
        half_perimeter(rect, [0, 1, 1, 3])


def test_cyclic_orders_count():
    for n in range(3, 8):
        orders = list(cyclic_orders(n))
        assert len(orders) == math.factorial(n - 1) // 2
        assert orders == sorted(orders)


def test_cycle_from_mapping():
    assert cycle_from_mapping([2, 0, 1]) == [0, 2, 1]
    with pytest.raises(ValueError):
        cycle_from_mapping([1, 0, 3, 2])


@given(st.integers(0, 10_000), st.integers(3, 6))
def test_half_perimeter_bounds_mf_from_below(seed, n):
    # every tour of a filling tree walks each edge twice, so no half-perimeter exceeds mf
    sp = random_integer_space(np.random.default_rng(seed), n, low=4)
    hp = min_half_perimeter(sp)[0]
    f = mf(sp).value
    assert hp <= f
    assert (f == hp) == check_four_point(sp).additive


def test_subspace_and_scaling():
    sp = rectangle_space()
    assert sp.subspace([0, 1, 2]).rows() == [[0, 3, 5], [3, 0, 4], [5, 4, 0]]
    assert sp.scaled(2).dist[0, 2] == 10
    assert sp.to_exact().exact and not validate_metric(sp.as_float(), exact=False).exact
