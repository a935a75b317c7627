from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from optnet.fillings import (
    MetricError,
    NotAdditiveError,
    cherry_topology,
    enumerate_multitours,
    enumerate_tours,
    equal_tour_tree,
    eremin_value,
    four_point_mf,
    is_filling,
    kuratowski_network,
    mf,
    mpf,
    reconstruct_additive_tree,
    star_weights,
    trees_isomorphic,
)
from optnet.graphs import GraphError, WeightedTree, enumerate_binary_topologies, star_topology
from optnet.metric import (
    check_four_point,
    kuratowski_embed,
    metric_from_weighted_tree,
    min_half_perimeter,
    validate_metric,
)
from optnet.ratios import metric_mst
from optnet.samples import (
    random_binary_tree,
    random_integer_space,
    random_weighted_tree,
    rectangle_space,
    regular_simplex_space,
)
from optnet.steiner import GuardError

TRI345 = validate_metric([[0, 3, 4], [3, 0, 5], [4, 5, 0]])
DIAG = cherry_topology(((0, 2), (1, 3)))
HALF = Fraction(1, 2)


def test_mpf_rectangle():
    rect = rectangle_space()
    assert mpf(rect, DIAG).value == 10
    gen = mpf(rect, DIAG, allow_negative=True)
    assert gen.value == 9
    assert min(gen.weights) < 0


def test_mpf_equilateral_star():
    r = mpf(regular_simplex_space(3), star_topology(3))
    assert r.value == Fraction(3, 2) and r.weights == (HALF, HALF, HALF)


def test_mpf_boundary_mismatch():
    with pytest.raises(GraphError):
        mpf(rectangle_space(), star_topology(3))


def test_mpf_float_agrees_with_exact():
    rng = np.random.default_rng(2)
    for _ in range(10):
        sp = random_integer_space(rng, 5)
        topo = random_binary_tree(rng, 5)
        for neg in (False, True):
            a = mpf(sp, topo, allow_negative=neg).value
            b = mpf(sp, topo, allow_negative=neg, exact=False).value
            assert b == pytest.approx(float(a), rel=1e-9)


@pytest.mark.parametrize("n", range(2, 8))
def test_mf_simplex(n):
    d = Fraction(3, 2)
    res = mf(regular_simplex_space(n, d))
    assert res.value == d * n / 2
    assert res.exact


def test_mf_examples():
    res = mf(TRI345)
    assert res.value == 6 and sorted(res.weights) == [1, 2, 3]
    rect = mf(rectangle_space())
    assert rect.value == 8
    assert four_point_mf(rectangle_space()) == (8, ((0, 1), (2, 3)))
    # mustaches pair the two sides of length 3
    cherries = {frozenset(s) for s in rect.tree.splits() if len(s) in (1, 2)}
    assert frozenset({2, 3}) in cherries or frozenset({1}) in cherries


def test_mf_guard():
    with pytest.raises(GuardError):
        mf(regular_simplex_space(9))


@settings(max_examples=15)
@given(st.integers(0, 100_000), st.integers(3, 6))
def test_mf_methods_agree(seed, n):
    sp = random_integer_space(np.random.default_rng(seed), n)
    a = mf(sp)
    b = mf(sp, method="exhaustive")
    assert a.value == b.value
    assert is_filling(sp, a.tree) and all(w >= 0 for w in a.tree.weights)
    assert a.tree.total == a.value


@settings(max_examples=10)
@given(st.integers(0, 100_000))
def test_mf_at_most_every_mpf(seed):
    rng = np.random.default_rng(seed)
    sp = random_integer_space(rng, 5)
    f = mf(sp).value
    for topo in enumerate_binary_topologies(5):
        gen = mpf(sp, topo, allow_negative=True).value
        non = mpf(sp, topo).value
        assert f <= non and gen <= non


@given(st.integers(0, 100_000), st.integers(2, 6), st.fractions(Fraction(1, 7), 7))
def test_mf_homogeneous(seed, n, lam):
    sp = random_integer_space(np.random.default_rng(seed), n)
    assert mf(sp.scaled(lam)).value == lam * mf(sp).value


@given(st.integers(0, 100_000), st.integers(2, 7))
def test_pakhomova_bound(seed, n):
    sp = random_integer_space(np.random.default_rng(seed), n, low=3)
    assert mf(sp).value >= Fraction(n, 2 * n - 2) * metric_mst(sp)


def test_mf_float_input():
    sp = validate_metric(rectangle_space().as_float(), exact=False)
    assert mf(sp).value == pytest.approx(8, rel=1e-12)


def test_four_point_examples():
    assert four_point_mf(regular_simplex_space(4))[0] == 2
    with pytest.raises(MetricError):
        four_point_mf(TRI345)


@given(st.integers(0, 100_000))
def test_four_point_closed_form_matches_lp(seed):
    sp = random_integer_space(np.random.default_rng(seed), 4)
    v, pairing = four_point_mf(sp)
    assert v == mf(sp, method="exhaustive").value
    assert mpf(sp, cherry_topology(pairing)).value == v


@given(st.integers(0, 100_000))
def test_four_point_additive_equals_half_perimeter(seed):
    tree = random_weighted_tree(np.random.default_rng(seed), 4)
    sp = metric_from_weighted_tree(tree)
    assert four_point_mf(sp)[0] == min_half_perimeter(sp)[0]


def test_star_weights():
    # Gromov products at points 0, 1, 2 of the 3-4-5 space
    assert star_weights(TRI345).weights == (1, 2, 3)
    assert star_weights(regular_simplex_space(5, 4)).weights == (2,) * 5
    with pytest.raises(NotAdditiveError):
        star_weights(rectangle_space())


def test_star_weights_inconsistent_products():
    # additive, but the generating tree has a positive interior edge
    t = WeightedTree(cherry_topology(((0, 1), (2, 3))), (1, 1, 2, 1, 1))
    with pytest.raises(MetricError):
        star_weights(metric_from_weighted_tree(t))


def test_tour_counts():
    assert len(list(enumerate_tours(star_topology(3)))) == 1
    tours = list(enumerate_tours(DIAG))
    assert len(tours) == 2
    for t in tours:
        s = list(t.sequence)
        # cherries {0, 2} and {1, 3} stay adjacent
        i = s.index(0)
        assert 2 in (s[i - 1], s[(i + 1) % 4])


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_tour_count_formula(n):
    # a binary tree with n leaves has 2^(n-2) embeddings, halved by reflection
    for topo in list(enumerate_binary_topologies(n))[:4]:
        assert len(list(enumerate_tours(topo))) == 2 ** (n - 3)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_k1_multitours_are_tours(n):
    for topo in enumerate_binary_topologies(n):
        a = {t.sequence for t in enumerate_tours(topo)}
        b = {t.sequence for t in enumerate_multitours(topo, 1)}
        assert a == b


def test_multitour_guards():
    with pytest.raises(GuardError):
        list(enumerate_multitours(DIAG, 3))
    with pytest.raises(GuardError):
        list(enumerate_multitours(random_binary_tree(np.random.default_rng(0), 8), 2))


def test_eremin_examples():
    er = eremin_value(rectangle_space(), DIAG, kmax=1)
    assert er.lower_bound == 9 and er.exact
    assert list(er.witness.sequence) in ([0, 2, 1, 3], [0, 3, 1, 2])
    er = eremin_value(regular_simplex_space(3), star_topology(3))
    assert er.lower_bound == Fraction(3, 2) and er.exact


@given(st.integers(0, 100_000))
def test_eremin_weak_duality(seed):
    rng = np.random.default_rng(seed)
    sp = random_integer_space(rng, 5)
    topo = random_binary_tree(rng, 5)
    er = eremin_value(sp, topo)
    gen = mpf(sp, topo, allow_negative=True).value
    assert er.mpf_minus == gen
    for k in (1, 2):
        for t in enumerate_multitours(topo, k):
            assert t.half_perimeter(sp) <= gen


@given(st.integers(0, 100_000), st.integers(2, 7))
def test_reconstruct_round_trip(seed, n):
    tree = random_weighted_tree(np.random.default_rng(seed), n)
    sp = metric_from_weighted_tree(tree)
    rec = reconstruct_additive_tree(sp)
    assert trees_isomorphic(rec, tree.contract())
    assert metric_from_weighted_tree(rec).rows() == sp.rows()


def test_reconstruct_examples():
    rec = reconstruct_additive_tree(TRI345)
    assert sorted(rec.weights) == [1, 2, 3] and len(rec.topology.edges) == 3
    rec = reconstruct_additive_tree(regular_simplex_space(6, 2))
    assert rec.weights == (1,) * 6 and len(rec.topology.interior) == 1
    with pytest.raises(NotAdditiveError):
        reconstruct_additive_tree(rectangle_space())


def test_equal_tour_tree():
    # pseudo-additive: the cherries of the negative-edge tree give equal tours
    sp = validate_metric([[0, 2, 3, 4], [2, 0, 4, 3], [3, 4, 0, 4], [4, 3, 4, 0]])
    status, topo = equal_tour_tree(sp)
    assert check_four_point(sp).pseudo_additive and status == "found"
    assert equal_tour_tree(rectangle_space()) == ("none", None)
    assert equal_tour_tree(regular_simplex_space(8))[0] == "inconclusive"


@given(st.integers(0, 100_000))
def test_equal_tours_iff_pseudo_additive_n5(seed):
    rng = np.random.default_rng(seed)
    sp = random_integer_space(rng, 5, low=2)
    status, _ = equal_tour_tree(sp)
    assert (status == "found") == check_four_point(sp).pseudo_additive


def test_kuratowski_network_examples():
    sp = regular_simplex_space(3)
    kn = kuratowski_network(sp, mf(sp).tree)
    assert [list(r) for r in kn.points[3:]] == [[HALF, HALF, HALF]]
    assert kn.edge_lengths == [HALF] * 3 and kn.length == Fraction(3, 2)
    two = validate_metric([[0, 5], [5, 0]])
    kn = kuratowski_network(two, mf(two).tree)
    assert [list(r) for r in kn.points] == [[0, 5], [5, 0]]
    kn = kuratowski_network(TRI345, mf(TRI345).tree)
    assert kn.length == 6


@given(st.integers(0, 100_000), st.integers(3, 6))
def test_kuratowski_network_weights_equal_lp(seed, n):
    rng = np.random.default_rng(seed)
    sp = random_integer_space(rng, n)
    res = mpf(sp, random_binary_tree(rng, n))
    kn = kuratowski_network(sp, res.tree)
    assert kn.edge_lengths == list(res.weights)
    img = kuratowski_embed(sp)
    for i, b in enumerate(res.topology.boundary):
        assert list(kn.points[b]) == list(img.points[i])


def test_kuratowski_network_rejects():
    sp = rectangle_space()
    with pytest.raises(GraphError):
        kuratowski_network(sp, mpf(sp, DIAG, allow_negative=True).tree)
    with pytest.raises(GraphError):
        kuratowski_network(sp, WeightedTree(DIAG, (1, 1, 1, 1, 1)))
