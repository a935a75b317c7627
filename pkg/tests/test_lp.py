import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from optnet.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LpProblem, check_solution, lp_solve

from oracles import lp_vertex_enumeration


def test_single_bound():
    p = LpProblem([1], [([1], ">=", 3)])
    s = lp_solve(p)
    assert s.ok and s.value == 3 and s.x == [3]


def test_triangle_filling_lp():
    # star with leaf weights a, b, c against the 3-4-5 distances
    p = LpProblem([1, 1, 1], [([1, 1, 0], ">=", 3), ([1, 0, 1], ">=", 4), ([0, 1, 1], ">=", 5)])
    s = lp_solve(p)
    assert s.value == 6 and isinstance(s.value, Fraction)
    assert s.x == [1, 2, 3]
    f = lp_solve(LpProblem([1.0] * 3, [(r, sn, float(b)) for r, sn, b in p.constraints]))
    assert abs(f.value - 6) < 1e-12


def test_free_variables():
    # min x + y, x + y >= 1, x - y == 5 with x, y free
    p = LpProblem([1, 1], [([1, 1], ">=", 1), ([1, -1], "==", 5)], free=[True, True])
    s = lp_solve(p)
    assert s.value == 1 and s.x == [3, -2]


def test_negative_optimum_with_free_variable():
    p = LpProblem([1], [([1], ">=", -4)], free=[True])
    assert lp_solve(p).value == -4


def test_unbounded_and_infeasible():
    assert lp_solve(LpProblem([-1], [([1], ">=", 1)])).status == UNBOUNDED
    p = LpProblem([1, 1], [([1, 1], "<=", 1), ([1, 1], ">=", 2)])
    assert lp_solve(p).status == INFEASIBLE
    assert lp_solve(p, exact=False).status == INFEASIBLE


def test_le_and_eq_rows():
    p = LpProblem([-1, -2], [([1, 1], "<=", 4), ([1, 3], "<=", 6)])
    s = lp_solve(p)
    assert s.value == -5 and s.x == [3, 1]
    p = LpProblem([1, 2, 3], [([1, 1, 1], "==", 1)])
    assert lp_solve(p).value == 1


def test_degenerate_redundant_rows():
    p = LpProblem([1, 1], [([1, 1], "==", 2), ([2, 2], "==", 4), ([1, 0], ">=", 0)])
    s = lp_solve(p)
    assert s.status == OPTIMAL and s.value == 2


def test_add_validates():
    p = LpProblem([1, 1])
    with pytest.raises(ValueError):
        p.add([1], ">=", 0)
    with pytest.raises(ValueError):
        p.add([1, 1], ">", 0)


@given(st.integers(0, 100_000))
def test_random_lps_match_vertex_enumeration(seed):
    rng = random.Random(seed)
    nv = rng.randint(1, 4)
    m = rng.randint(1, 5)
    c = [rng.randint(1, 6) for _ in range(nv)]
    A = [[rng.randint(0, 4) for _ in range(nv)] for _ in range(m)]
    for row in A:
        if not any(row):
            row[rng.randrange(nv)] = 1
    b = [rng.randint(-3, 9) for _ in range(m)]
    expect = lp_vertex_enumeration(c, A, b)
    prob = LpProblem(c, [(row, ">=", bi) for row, bi in zip(A, b)])
    s = lp_solve(prob)
    assert s.value == expect
    assert check_solution(prob, s.x, tol=0) == []
    f = lp_solve(prob, exact=False)
    assert abs(f.value - float(expect)) <= 1e-9 * max(1.0, abs(float(expect)))
    assert check_solution(prob, f.x) == []
