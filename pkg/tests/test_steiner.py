import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from optnet.fillings import mf
from optnet.graphs import GraphError, TreeTopology, enumerate_binary_topologies, star_topology
from optnet.metric import euclidean_space
from optnet.plane import euclidean_mst
from optnet.samples import obtuse_triangle, rectangle_points, regular_triangle, unit_square
from optnet.steiner import (
    GuardError,
    check_local_structure,
    equilateral_apexes,
    melzak_solve,
    relax_topology,
    smt,
    torricelli_point,
)

from oracles import angle_at, fermat_point_bruteforce

SQRT3 = math.sqrt(3)
TRI_TOPO = TreeTopology(4, ((0, 3), (1, 3), (2, 3)), (0, 1, 2))
# left pair {0, 3} and right pair {1, 2} of the unit square
SQUARE_LR = TreeTopology(6, ((0, 4), (3, 4), (4, 5), (1, 5), (2, 5)), (0, 1, 2, 3))


def test_torricelli_regular():
    r = torricelli_point(*regular_triangle())
    assert not r.degenerate
    assert r.smt3 == pytest.approx(SQRT3, abs=1e-12)
    assert r.point == pytest.approx(regular_triangle().mean(axis=0), abs=1e-12)


def test_torricelli_obtuse():
    r = torricelli_point(*obtuse_triangle())
    assert r.degenerate and r.vertex == 0
    assert r.smt3 == pytest.approx(2, abs=1e-15)
    assert r.point == pytest.approx([0, 0])


def test_torricelli_exactly_120_is_degenerate():
    c = (math.cos(2 * math.pi / 3), math.sin(2 * math.pi / 3))
    r = torricelli_point([0, 0], [1, 0], c)
    # the float corner sits within rounding of 120 degrees; either branch gives length 2
    assert r.smt3 == pytest.approx(2, abs=1e-12)


def test_torricelli_tall_isosceles_matches_relax():
    p = np.array([[0, 0], [1, 0], [0.5, 10]], float)
    r = torricelli_point(*p)
    rel = relax_topology(TRI_TOPO, p)
    assert r.smt3 == pytest.approx(rel.length, rel=1e-9)


@given(st.integers(0, 100_000))
def test_torricelli_against_weiszfeld(seed):
    p = np.random.default_rng(seed).random((3, 2))
    r = torricelli_point(*p)
    ref, _ = fermat_point_bruteforce(p)
    assert r.smt3 <= ref + 1e-9
    assert r.smt3 == pytest.approx(ref, rel=1e-6)
    if not r.degenerate:
        x = r.point
        for i, j in ((0, 1), (1, 2), (0, 2)):
            assert angle_at(p[i], x, p[j]) == pytest.approx(2 * math.pi / 3, abs=1e-6)


def test_torricelli_coincident_corners():
    with pytest.raises(ValueError):
        torricelli_point([0, 0], [0, 0], [1, 1])


def test_equilateral_apexes():
    left, right = equilateral_apexes(np.array([0.0, 0]), np.array([1.0, 0]))
    assert left == pytest.approx([0.5, SQRT3 / 2])
    assert right == pytest.approx([0.5, -SQRT3 / 2])


def test_melzak_small_cases():
    m = melzak_solve(TRI_TOPO, regular_triangle())
    assert m.ok and m.network.length == pytest.approx(SQRT3, abs=1e-12)
    seg = melzak_solve(TreeTopology(2, ((0, 1),), (0, 1)), [[0, 0], [3, 4]])
    assert seg.network.length == 5


def test_melzak_square_double_y():
    m = melzak_solve(SQUARE_LR, unit_square())
    assert m.ok
    assert m.network.length == pytest.approx(1 + SQRT3, abs=1e-12)
    assert m.network.length == pytest.approx(relax_topology(SQUARE_LR, unit_square()).length, rel=1e-9)
    assert check_local_structure(m.network).passed


def test_melzak_fails_on_obtuse():
    m = melzak_solve(TRI_TOPO, obtuse_triangle())
    assert not m.ok and m.branches >= 1


def test_melzak_rejects_non_full():
    with pytest.raises(GraphError):
        melzak_solve(star_topology(4), unit_square())


@pytest.mark.parametrize("seed", range(15))
def test_melzak_agrees_with_relax(seed):
    rng = np.random.default_rng(seed)
    n = 4 + seed % 3
    p = rng.random((n, 2))
    for topo in enumerate_binary_topologies(n):
        m = melzak_solve(topo, p, explore_all=True)
        if not m.ok:
            continue
        r = relax_topology(topo, p)
        for net in m.successes:
            assert net.length == pytest.approx(r.length, rel=1e-7)


def test_relax_examples():
    r = relax_topology(TRI_TOPO, obtuse_triangle())
    assert r.length == pytest.approx(2, rel=1e-9)
    assert np.linalg.norm(r.network.positions[3]) < 1e-6
    assert relax_topology(TRI_TOPO, regular_triangle()).length == pytest.approx(SQRT3, rel=1e-12)


def test_relax_tiny_cluster():
    rng = np.random.default_rng(4)
    delta = 1e-6
    p = 5 + delta * rng.random((5, 2))
    d = max(np.linalg.norm(a - b) for a in p for b in p)
    for topo in list(enumerate_binary_topologies(5))[:5]:
        r = relax_topology(topo, p)
        assert r.length <= (2 * 5 - 3) * d


def test_smt_examples():
    assert smt(regular_triangle()).length == pytest.approx(SQRT3, abs=1e-9)
    res = smt(obtuse_triangle())
    assert res.length == pytest.approx(2) and res.network.steiner_vertices == []
    assert smt([[0, 0], [2, 0]]).length == 2
    assert smt(unit_square()).length == pytest.approx(1 + SQRT3, rel=1e-12)


def test_smt_rectangle_sandwich():
    p = rectangle_points()
    s = smt(p).length
    assert euclidean_mst(p)[1] == 10
    assert 8 <= s < 10
    assert float(mf(euclidean_space(p)).value) == pytest.approx(8, rel=1e-12)


def test_smt_guard():
    with pytest.raises(GuardError):
        smt(np.random.default_rng(0).random((9, 2)))
    with pytest.raises(ValueError):
        smt([[0, 0], [1, 1], [0, 0]])


@pytest.mark.parametrize("seed", range(6))
def test_smt_branch_and_bound_equals_exhaustive(seed):
    rng = np.random.default_rng(seed)
    p = rng.random((5 + seed % 2, 2))
    a = smt(p)
    b = smt(p, method="exhaustive")
    assert a.length == pytest.approx(b.length, rel=1e-9)


@pytest.mark.parametrize("seed", range(10))
def test_smt_local_structure(seed):
    rng = np.random.default_rng(1000 + seed)
    p = rng.random((int(rng.integers(3, 8)), 2))
    res = smt(p)
    assert res.report.passed, res.report.violations
    assert res.length <= euclidean_mst(p)[1] + 1e-12
    for v in res.network.steiner_vertices:
        assert res.network.topology.degree(v) == 3


@given(st.integers(0, 100_000), st.floats(0, 2 * math.pi), st.floats(0.1, 10))
def test_smt_rigid_motion_and_scaling(seed, theta, lam):
    p = np.random.default_rng(seed).random((4, 2))
    R = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
    q = lam * (p @ R.T) + [3, -1]
    assert smt(q).length == pytest.approx(lam * smt(p).length, rel=1e-9)


@given(st.integers(0, 100_000))
def test_smt_triangle_is_torricelli(seed):
    p = np.random.default_rng(seed).random((3, 2))
    assert smt(p).length == pytest.approx(torricelli_point(*p).smt3, rel=1e-9)


def test_local_structure_report():
    tri = regular_triangle()
    from optnet.plane import PlaneNetwork

    net = PlaneNetwork(TRI_TOPO, np.vstack([tri, tri.mean(axis=0)]))
    rep = check_local_structure(net)
    assert rep.passed and rep.min_angle == pytest.approx(2 * math.pi / 3)
    mst_net, _ = euclidean_mst(unit_square())
    rep = check_local_structure(mst_net)
    assert not rep.passed
    assert rep.min_angle == pytest.approx(math.pi / 2)
