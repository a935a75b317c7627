"""Numeric inner loops.

Every kernel exists twice: ``*_jit`` (numba, nopython) and ``*_np`` (plain
numpy / math).  The public names at the bottom of the module are bound to
one flavour according to :data:`optnet._accel.USE_JIT`; both flavours stay
importable so tests and ``benchmarks/bench_kernels.py`` can compare them.
"""

from __future__ import annotations

import math
import types
from itertools import combinations

import numpy as np

from ._accel import USE_JIT, njit

TWO_PI_3 = 2.0 * math.pi / 3.0
PI_3 = math.pi / 3.0

SIMPLEX_OPTIMAL = 0
SIMPLEX_UNBOUNDED = 1
SIMPLEX_ITERATION_LIMIT = 2


# ---------------------------------------------------------------------------
# Fermat point of three points
# ---------------------------------------------------------------------------


def _fermat3_py(ax, ay, bx, by, cx, cy):
    la = math.hypot(bx - cx, by - cy)
    lb = math.hypot(cx - ax, cy - ay)
    lc = math.hypot(ax - bx, ay - by)
    if lb == 0.0 or lc == 0.0:
        return ax, ay
    if la == 0.0:
        return bx, by
    ang_a = math.atan2(abs((bx - ax) * (cy - ay) - (by - ay) * (cx - ax)),
                       (bx - ax) * (cx - ax) + (by - ay) * (cy - ay))
    if ang_a >= TWO_PI_3:
        return ax, ay
    ang_b = math.atan2(abs((cx - bx) * (ay - by) - (cy - by) * (ax - bx)),
                       (cx - bx) * (ax - bx) + (cy - by) * (ay - by))
    if ang_b >= TWO_PI_3:
        return bx, by
    ang_c = math.pi - ang_a - ang_b
    if ang_c >= TWO_PI_3:
        return cx, cy
    # barycentric weights of the first isogonic centre
    wa = la / math.sin(ang_a + PI_3)
    wb = lb / math.sin(ang_b + PI_3)
    wc = lc / math.sin(ang_c + PI_3)
    s = wa + wb + wc
    return (wa * ax + wb * bx + wc * cx) / s, (wa * ay + wb * by + wc * cy) / s


fermat3_np = _fermat3_py
fermat3_jit = njit(_fermat3_py)


# ---------------------------------------------------------------------------
# Length relaxation of a tree with fixed terminals
# ---------------------------------------------------------------------------


def _tree_length_py(pos, eu, ev):
    total = 0.0
    for e in range(eu.shape[0]):
        total += math.hypot(pos[eu[e], 0] - pos[ev[e], 0], pos[eu[e], 1] - pos[ev[e], 1])
    return total


_tree_length_jit = njit(_tree_length_py)


def _median_update(pos, s, nb, deg_s, out):
    # geometric median of nb[:deg_s]; snaps to a neighbour when it is optimal there
    for t in range(deg_s):
        q = nb[t]
        gx = 0.0
        gy = 0.0
        mult = 0
        for r in range(deg_s):
            p = nb[r]
            dx = pos[p, 0] - pos[q, 0]
            dy = pos[p, 1] - pos[q, 1]
            d = math.hypot(dx, dy)
            if d == 0.0:
                mult += 1
            else:
                gx += dx / d
                gy += dy / d
        if math.hypot(gx, gy) <= mult:
            out[0] = pos[q, 0]
            out[1] = pos[q, 1]
            return
    x = pos[s, 0]
    y = pos[s, 1]
    for _ in range(20):
        nx = 0.0
        ny = 0.0
        wsum = 0.0
        for r in range(deg_s):
            p = nb[r]
            d = math.hypot(pos[p, 0] - x, pos[p, 1] - y)
            if d < 1e-300:
                d = 1e-300
            nx += pos[p, 0] / d
            ny += pos[p, 1] / d
            wsum += 1.0 / d
        x = nx / wsum
        y = ny / wsum
    out[0] = x
    out[1] = y


def _find(root, x):
    while root[x] != x:
        x = root[x]
    return x


def _cluster_move(pos, eu, ev, n_fixed, eps, out):
    # Free vertices joined by edges no longer than eps move as one point to the
    # geometric median of their outside neighbours; single-vertex updates
    # cannot shift such a pair.  Kept only when it shortens the tree.
    V = pos.shape[0]
    E = eu.shape[0]
    root = np.arange(V)
    found = False
    for e in range(E):
        u = eu[e]
        v = ev[e]
        if u >= n_fixed and v >= n_fixed:
            if math.hypot(pos[u, 0] - pos[v, 0], pos[u, 1] - pos[v, 1]) <= eps:
                ru = _k_find(root, u)
                rv = _k_find(root, v)
                if ru != rv:
                    root[ru] = rv
                    found = True
    if not found:
        return
    comp = np.empty(V, np.int64)
    for v in range(V):
        comp[v] = _k_find(root, v)
    nb = np.empty(E, np.int64)
    saved = np.empty((V, 2))
    for r in range(n_fixed, V):
        if comp[r] != r:
            continue
        size = 0
        for v in range(V):
            if comp[v] == r:
                size += 1
        if size < 2:
            continue
        k = 0
        before = 0.0
        for e in range(E):
            a_in = comp[eu[e]] == r
            b_in = comp[ev[e]] == r
            if a_in or b_in:
                before += math.hypot(pos[eu[e], 0] - pos[ev[e], 0], pos[eu[e], 1] - pos[ev[e], 1])
            if a_in != b_in:
                nb[k] = ev[e] if a_in else eu[e]
                k += 1
        _k_median(pos, r, nb, k, out)
        for v in range(V):
            if comp[v] == r:
                saved[v, 0] = pos[v, 0]
                saved[v, 1] = pos[v, 1]
                pos[v, 0] = out[0]
                pos[v, 1] = out[1]
        after = 0.0
        for e in range(E):
            if comp[eu[e]] == r or comp[ev[e]] == r:
                after += math.hypot(pos[eu[e], 0] - pos[ev[e], 0], pos[eu[e], 1] - pos[ev[e], 1])
        if after >= before:
            for v in range(V):
                if comp[v] == r:
                    pos[v, 0] = saved[v, 0]
                    pos[v, 1] = saved[v, 1]


def _relax_py(pos, eu, ev, n_fixed, tol, ptol, delta, max_iter):
    """Minimise total length over the free vertices ``n_fixed..V-1``.

    Alternates a global reweighted-Laplacian step (accepted only when it
    shortens the tree) with a sweep of exact per-vertex updates.  Stops
    when one round shortens the tree by at most ``tol`` and moves no
    vertex farther than ``ptol``.
    Returns ``(iterations, converged)``; ``pos`` is updated in place.
    """
    V = pos.shape[0]
    E = eu.shape[0]
    S = V - n_fixed
    if S <= 0:
        return 0, True
    deg = np.zeros(V, np.int64)
    for e in range(E):
        deg[eu[e]] += 1
        deg[ev[e]] += 1
    maxd = 1
    for v in range(V):
        if deg[v] > maxd:
            maxd = deg[v]
    nbr = -np.ones((V, maxd), np.int64)
    fill = np.zeros(V, np.int64)
    for e in range(E):
        u = eu[e]
        v = ev[e]
        nbr[u, fill[u]] = v
        fill[u] += 1
        nbr[v, fill[v]] = u
        fill[v] += 1
    length = _k_length(pos, eu, ev)
    out = np.zeros(2)
    trial = pos.copy()
    prev = pos.copy()
    lap = np.zeros((S, S))
    rhs = np.zeros((S, 2))
    it = 0
    while it < max_iter:
        it += 1
        start = length
        move = 0.0
        for v in range(V):
            prev[v, 0] = pos[v, 0]
            prev[v, 1] = pos[v, 1]
        lap[:, :] = 0.0
        rhs[:, :] = 0.0
        for e in range(E):
            u = eu[e]
            v = ev[e]
            d = math.hypot(pos[u, 0] - pos[v, 0], pos[u, 1] - pos[v, 1])
            w = 1.0 / max(d, delta)
            su = u - n_fixed
            sv = v - n_fixed
            if su >= 0:
                lap[su, su] += w
            if sv >= 0:
                lap[sv, sv] += w
            if su >= 0 and sv >= 0:
                lap[su, sv] -= w
                lap[sv, su] -= w
            elif su >= 0:
                rhs[su, 0] += w * pos[v, 0]
                rhs[su, 1] += w * pos[v, 1]
            elif sv >= 0:
                rhs[sv, 0] += w * pos[u, 0]
                rhs[sv, 1] += w * pos[u, 1]
        sol = _k_solve(lap, rhs)
        for v in range(V):
            trial[v, 0] = pos[v, 0]
            trial[v, 1] = pos[v, 1]
        for k in range(S):
            trial[n_fixed + k, 0] = sol[k, 0]
            trial[n_fixed + k, 1] = sol[k, 1]
        tl = _k_length(trial, eu, ev)
        if tl < length:
            for v in range(V):
                pos[v, 0] = trial[v, 0]
                pos[v, 1] = trial[v, 1]
            length = tl
        for s in range(n_fixed, V):
            d = deg[s]
            if d == 0:
                continue
            a = nbr[s, 0]
            if d == 1:
                pos[s, 0] = pos[a, 0]
                pos[s, 1] = pos[a, 1]
            elif d == 2:
                b = nbr[s, 1]
                dx = pos[b, 0] - pos[a, 0]
                dy = pos[b, 1] - pos[a, 1]
                dd = dx * dx + dy * dy
                t = 0.0
                if dd > 0.0:
                    t = ((pos[s, 0] - pos[a, 0]) * dx + (pos[s, 1] - pos[a, 1]) * dy) / dd
                    t = min(1.0, max(0.0, t))
                pos[s, 0] = pos[a, 0] + t * dx
                pos[s, 1] = pos[a, 1] + t * dy
            elif d == 3:
                b = nbr[s, 1]
                c = nbr[s, 2]
                x, y = _k_fermat3(pos[a, 0], pos[a, 1], pos[b, 0], pos[b, 1], pos[c, 0], pos[c, 1])
                pos[s, 0] = x
                pos[s, 1] = y
            else:
                _k_median(pos, s, nbr[s], d, out)
                pos[s, 0] = out[0]
                pos[s, 1] = out[1]
        _k_cluster(pos, eu, ev, n_fixed, ptol, out)
        length = _k_length(pos, eu, ev)
        for v in range(n_fixed, V):
            dv = math.hypot(pos[v, 0] - prev[v, 0], pos[v, 1] - prev[v, 1])
            if dv > move:
                move = dv
        if start - length <= tol and move <= ptol:
            return it, True
    return it, False


def _solve_np(a, b):
    return np.linalg.solve(a, b)


_solve_jit = njit(_solve_np)
_median_update_jit = njit(_median_update)

# the relaxation calls its helpers through these globals; the jit copy gets
# its own globals dict so both flavours share one source (and numba's cache)
_k_fermat3, _k_length, _k_median, _k_solve = _fermat3_py, _tree_length_py, _median_update, _solve_np
_k_find, _k_cluster = _find, _cluster_move
_find_jit = njit(_find)
_cluster_move_jit = njit(
    types.FunctionType(
        _cluster_move.__code__,
        {**globals(), "_k_find": _find_jit, "_k_median": _median_update_jit},
        "_cluster_move",
    )
)
relax_np = _relax_py
relax_jit = njit(
    types.FunctionType(
        _relax_py.__code__,
        {
            **globals(),
            "_k_fermat3": fermat3_jit,
            "_k_length": _tree_length_jit,
            "_k_median": _median_update_jit,
            "_k_solve": _solve_jit,
            "_k_find": _find_jit,
            "_k_cluster": _cluster_move_jit,
        },
        "_relax_py",
    )
)


# ---------------------------------------------------------------------------
# Dense tableau simplex, Bland's rule
# ---------------------------------------------------------------------------


def _simplex_py(T, basis, ncols, tol, max_iter):
    m = T.shape[0] - 1
    N = T.shape[1] - 1
    for it in range(max_iter):
        j = -1
        for c in range(ncols):
            if T[m, c] < -tol:
                j = c
                break
        if j < 0:
            return SIMPLEX_OPTIMAL, it
        r = -1
        best = 0.0
        for i in range(m):
            a = T[i, j]
            if a > tol:
                ratio = T[i, N] / a
                if r < 0 or ratio < best or (ratio == best and basis[i] < basis[r]):
                    r = i
                    best = ratio
        if r < 0:
            return SIMPLEX_UNBOUNDED, it
        piv = T[r, j]
        for c in range(N + 1):
            T[r, c] /= piv
        for i in range(m + 1):
            if i != r:
                f = T[i, j]
                if f != 0.0:
                    for c in range(N + 1):
                        T[i, c] -= f * T[r, c]
                    T[i, j] = 0.0
        basis[r] = j
    return SIMPLEX_ITERATION_LIMIT, max_iter


simplex_jit = njit(_simplex_py)


def simplex_np(T, basis, ncols, tol, max_iter):
    """Vectorised twin of the jitted pivot loop.

    Also serves exact arithmetic: with an ``object`` tableau of ``Fraction``
    entries and ``tol=0`` every pivot is exact.
    """
    m = T.shape[0] - 1
    for it in range(max_iter):
        neg = np.flatnonzero(T[m, :ncols] < -tol)
        if neg.size == 0:
            return SIMPLEX_OPTIMAL, it
        j = int(neg[0])
        col = T[:m, j]
        rows = np.flatnonzero(col > tol)
        if rows.size == 0:
            return SIMPLEX_UNBOUNDED, it
        r = -1
        best = None
        for i in rows:
            ratio = T[i, -1] / col[i]
            if r < 0 or ratio < best or (ratio == best and basis[i] < basis[r]):
                r, best = int(i), ratio
        T[r, :] = T[r, :] / T[r, j]
        f = T[:, j].copy()
        f[r] = 0
        T -= np.outer(f, T[r, :])
        basis[r] = j
    return SIMPLEX_ITERATION_LIMIT, max_iter


# ---------------------------------------------------------------------------
# Four point rule scan
# ---------------------------------------------------------------------------


def _four_point_py(D, eps):
    # returns (strong_witness, weak_witness); -1 entries when the rule holds
    n = D.shape[0]
    strong = -np.ones(4, np.int64)
    weak = -np.ones(4, np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for l in range(k + 1, n):
                    s1 = D[i, j] + D[k, l]
                    s2 = D[i, k] + D[j, l]
                    s3 = D[i, l] + D[j, k]
                    lo = min(s1, min(s2, s3))
                    hi = max(s1, max(s2, s3))
                    mid = s1 + s2 + s3 - lo - hi
                    if strong[0] < 0 and hi - mid > eps:
                        strong[0] = i
                        strong[1] = j
                        strong[2] = k
                        strong[3] = l
                    if weak[0] < 0 and hi - mid > eps and mid - lo > eps:
                        weak[0] = i
                        weak[1] = j
                        weak[2] = k
                        weak[3] = l
                        return strong, weak
    return strong, weak


four_point_jit = njit(_four_point_py)


def four_point_np(D, eps):
    n = D.shape[0]
    strong = -np.ones(4, np.int64)
    weak = -np.ones(4, np.int64)
    if n < 4:
        return strong, weak
    q = np.array(list(combinations(range(n), 4)), dtype=np.int64)
    i, j, k, l = q.T
    sums = np.stack([D[i, j] + D[k, l], D[i, k] + D[j, l], D[i, l] + D[j, k]], axis=1)
    sums.sort(axis=1)
    bad_strong = sums[:, 2] - sums[:, 1] > eps
    bad_weak = bad_strong & (sums[:, 1] - sums[:, 0] > eps)
    if bad_strong.any():
        strong[:] = q[np.argmax(bad_strong)]
    if bad_weak.any():
        weak[:] = q[np.argmax(bad_weak)]
    return strong, weak


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

if USE_JIT:
    fermat3 = fermat3_jit
    relax = relax_jit
    simplex = simplex_jit
    four_point = four_point_jit
else:
    fermat3 = fermat3_np
    relax = relax_np
    simplex = simplex_np
    four_point = four_point_np
