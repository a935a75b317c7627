"""Adaptive orientation and in-circle predicates.

A floating evaluation is accepted when it clears Shewchuk's forward error
bound; otherwise the determinant is recomputed exactly with ``Fraction``
(every double converts to a rational exactly).  Results are therefore the
signs of the exact determinants for any finite double input.
"""

from __future__ import annotations

from fractions import Fraction

_EPS = 2.0 ** -53
_CCW_BOUND = (3.0 + 16.0 * _EPS) * _EPS
_ICC_BOUND = (10.0 + 96.0 * _EPS) * _EPS


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def orient2d(a, b, c) -> int:
    """Sign of the signed area of ``abc``: +1 counter-clockwise, -1 clockwise, 0 collinear."""
    ax, ay = a[0], a[1]
    bx, by = b[0], b[1]
    cx, cy = c[0], c[1]
    if isinstance(ax, Fraction) or isinstance(bx, Fraction) or isinstance(cx, Fraction):
        return _orient_exact(a, b, c)
    left = (ax - cx) * (by - cy)
    right = (ay - cy) * (bx - cx)
    det = left - right
    bound = _CCW_BOUND * (abs(left) + abs(right))
    if det > bound or -det > bound:
        return 1 if det > 0 else -1
    return _orient_exact(a, b, c)


def _orient_exact(a, b, c) -> int:
    ax, ay, bx, by, cx, cy = (Fraction(v) for v in (a[0], a[1], b[0], b[1], c[0], c[1]))
    return _sign((ax - cx) * (by - cy) - (ay - cy) * (bx - cx))


def incircle(a, b, c, d) -> int:
    """+1 if ``d`` lies inside the circle through ``a, b, c`` (given counter-clockwise),
    -1 outside, 0 on it.  For clockwise ``abc`` the sign flips."""
    if any(isinstance(p[0], Fraction) for p in (a, b, c, d)):
        return _incircle_exact(a, b, c, d)
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady)
    permanent = (
        (abs(bdxcdy) + abs(cdxbdy)) * alift
        + (abs(cdxady) + abs(adxcdy)) * blift
        + (abs(adxbdy) + abs(bdxady)) * clift
    )
    bound = _ICC_BOUND * permanent
    if det > bound or -det > bound:
        return 1 if det > 0 else -1
    return _incircle_exact(a, b, c, d)


def _incircle_exact(a, b, c, d) -> int:
    dx, dy = Fraction(d[0]), Fraction(d[1])
    rows = []
    for p in (a, b, c):
        px, py = Fraction(p[0]) - dx, Fraction(p[1]) - dy
        rows.append((px, py, px * px + py * py))
    (a1, a2, a3), (b1, b2, b3), (c1, c2, c3) = rows
    det = a3 * (b1 * c2 - c1 * b2) + b3 * (c1 * a2 - a1 * c2) + c3 * (a1 * b2 - b1 * a2)
    return _sign(det)


def on_segment(a, b, p) -> bool:
    """True if ``p`` is collinear with ``ab`` and lies strictly between ``a`` and ``b``."""
    if orient2d(a, b, p) != 0:
        return False
    if a[0] != b[0]:
        return min(a[0], b[0]) < p[0] < max(a[0], b[0])
    return min(a[1], b[1]) < p[1] < max(a[1], b[1])
