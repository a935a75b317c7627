from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from optnet.predicates import incircle, on_segment, orient2d

coord = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
point = st.tuples(coord, coord)


def _orient_exact(a, b, c):
    ax, ay, bx, by, cx, cy = (Fraction(v) for v in (*a, *b, *c))
    d = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (d > 0) - (d < 0)


def _incircle_exact(a, b, c, d):
    m = []
    for p in (a, b, c):
        x, y = Fraction(p[0]) - Fraction(d[0]), Fraction(p[1]) - Fraction(d[1])
        m.append((x, y, x * x + y * y))
    (a1, a2, a3), (b1, b2, b3), (c1, c2, c3) = m
    det = a1 * (b2 * c3 - b3 * c2) - a2 * (b1 * c3 - b3 * c1) + a3 * (b1 * c2 - b2 * c1)
    return (det > 0) - (det < 0)


def test_orient_basic():
    assert orient2d((0, 0), (1, 0), (0, 1)) == 1
    assert orient2d((0, 0), (0, 1), (1, 0)) == -1
    assert orient2d((0, 0), (1, 1), (2, 2)) == 0


def test_orient_near_degenerate():
    # classic failure of naive evaluation: points almost on y = x
    a, b = (0.5, 0.5), (12.0, 12.0)
    for k in range(64):
        c = (0.5 + k * 2.0 ** -53, 0.5)
        assert orient2d(a, b, c) == _orient_exact(a, b, c)


def test_incircle_square_is_cocircular():
    sq = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
    assert incircle(*sq) == 0
    assert incircle(sq[0], sq[1], sq[2], (0.5, 0.5)) == 1
    assert incircle(sq[0], sq[1], sq[2], (2.0, 2.0)) == -1


def test_incircle_tiny_perturbations():
    a, b, c = (0.0, 0.0), (1.0, 0.0), (1.0, 1.0)
    for k in range(-5, 6):
        d = (0.0, 1.0 + k * 2.0 ** -52)
        assert incircle(a, b, c, d) == _incircle_exact(a, b, c, d)


@given(point, point, point)
def test_orient_matches_exact(a, b, c):
    assert orient2d(a, b, c) == _orient_exact(a, b, c)
    assert orient2d(a, b, c) == -orient2d(b, a, c)


@given(point, point, point, point)
def test_incircle_matches_exact(a, b, c, d):
    assert incircle(a, b, c, d) == _incircle_exact(a, b, c, d)


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_incircle_on_integer_grid(x, y, u, v):
    # grid points make exact cocircularity common
    a, b, c, d = (float(x), 0.0), (0.0, float(y)), (float(u), float(v)), (float(x), float(y))
    assert incircle(a, b, c, d) == _incircle_exact(a, b, c, d)


def test_on_segment():
    assert on_segment((0, 0), (2, 2), (1, 1))
    assert not on_segment((0, 0), (2, 2), (2, 2))
    assert not on_segment((0, 0), (2, 2), (3, 3))
    assert on_segment((0, 0), (0, 2), (0, 1))
    assert not on_segment((0, 0), (2, 2), (1, 1.0000001))
