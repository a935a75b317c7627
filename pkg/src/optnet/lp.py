"""Dense two-phase simplex with Bland's rule.

Problems are tiny here (a few dozen rows), so a dense tableau is fine.
Rational input is pivoted exactly with ``Fraction``; floating input goes
through the jitted pivot loop in :mod:`optnet.kernels`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from . import kernels

EPS_LP = 1e-9
_PIVOT_TOL = 1e-11
_MAX_PIVOTS = 50_000

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration-limit"


class LpError(RuntimeError):
    pass


@dataclass
class LpProblem:
    """Minimise ``c . x`` subject to rows ``(coeffs, sense, rhs)``.

    ``sense`` is one of ``">="``, ``"<="``, ``"=="``.  Variables are
    nonnegative unless flagged in ``free``.
    """

    c: Sequence
    constraints: list = field(default_factory=list)
    free: Sequence[bool] | None = None

    @property
    def n_vars(self) -> int:
        return len(self.c)

    def add(self, coeffs, sense: str, rhs) -> None:
        if sense not in (">=", "<=", "=="):
            raise ValueError(f"unknown constraint sense {sense!r}")
        if len(coeffs) != self.n_vars:
            raise ValueError("constraint width does not match the objective")
        self.constraints.append((list(coeffs), sense, rhs))

    @property
    def is_rational(self) -> bool:
        vals = list(self.c) + [x for row, _, b in self.constraints for x in (*row, b)]
        return all(isinstance(v, Rational) and not isinstance(v, bool) for v in vals)


@dataclass
class LpSolution:
    status: str
    x: list | None = None
    value: object = None
    pivots: int = 0

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


def lp_solve(problem: LpProblem, exact: bool | None = None) -> LpSolution:
    """Optimal basic solution of ``problem``.

    ``exact=None`` selects rational pivoting when all data are rational.
    """
    if exact is None:
        exact = problem.is_rational
    nv = problem.n_vars
    free = list(problem.free) if problem.free is not None else [False] * nv
    if exact:
        conv = Fraction
        zero, one = Fraction(0), Fraction(1)
    else:
        conv = float
        zero, one = 0.0, 1.0

    # scale floating data so tolerances are absolute
    c_scale = 1.0
    b_scale = 1.0
    if not exact:
        c_scale = max([abs(float(v)) for v in problem.c] + [1e-300])
        b_scale = max([abs(float(b)) for _, _, b in problem.constraints] + [1e-300])
        if c_scale == 1e-300:
            c_scale = 1.0
        if b_scale == 1e-300:
            b_scale = 1.0

    # column layout: [x+ (nv)] [x- (free only)] [slack/surplus] [artificial]
    neg_cols = [j for j in range(nv) if free[j]]
    rows = problem.constraints
    m = len(rows)
    n_slack = sum(1 for _, s, _ in rows if s != "==")
    base = nv + len(neg_cols)
    slack_col = {}
    k = base
    for i, (_, s, _) in enumerate(rows):
        if s != "==":
            slack_col[i] = k
            k += 1
    n_struct = base + n_slack

    A = []
    b = []
    for i, (coeffs, s, rhs) in enumerate(rows):
        row = [zero] * n_struct
        for j in range(nv):
            row[j] = conv(coeffs[j])
        for t, j in enumerate(neg_cols):
            row[nv + t] = -conv(coeffs[j])
        if s == ">=":
            row[slack_col[i]] = -one
        elif s == "<=":
            row[slack_col[i]] = one
        r = conv(rhs) / b_scale if not exact else conv(rhs)
        if r < 0:
            row = [-x for x in row]
            r = -r
        A.append(row)
        b.append(r)

    basis = []
    art_rows = []
    for i in range(m):
        sc = slack_col.get(i)
        if sc is not None and A[i][sc] == one:
            basis.append(sc)
        else:
            basis.append(-1)
            art_rows.append(i)
    n_art = len(art_rows)
    N = n_struct + n_art
    dtype = object if exact else np.float64
    T = np.empty((m + 1, N + 1), dtype=dtype)
    T[:, :] = zero
    for i in range(m):
        T[i, :n_struct] = A[i]
        T[i, N] = b[i]
    for t, i in enumerate(art_rows):
        T[i, n_struct + t] = one
        basis[i] = n_struct + t
    basis_arr = np.array(basis, dtype=np.int64)
    tol = 0 if exact else _PIVOT_TOL
    pivots = 0

    def run(ncols):
        nonlocal pivots
        if exact or not kernels.USE_JIT:
            status, it = kernels.simplex_np(T, basis_arr, ncols, tol, _MAX_PIVOTS)
        else:
            status, it = kernels.simplex(T, basis_arr, ncols, tol, _MAX_PIVOTS)
        pivots += it
        return status

    if n_art:
        T[m, :] = zero
        for i in art_rows:
            T[m, :] -= T[i, :]
        for t in range(n_art):
            T[m, n_struct + t] = zero
        status = run(N)
        if status == kernels.SIMPLEX_ITERATION_LIMIT:
            return LpSolution(ITERATION_LIMIT, pivots=pivots)
        infeas = -T[m, N]
        if infeas > (0 if exact else 1e-9):
            return LpSolution(INFEASIBLE, pivots=pivots)
        # drive artificials out of the basis; drop redundant rows
        keep = []
        for i in range(m):
            if basis_arr[i] >= n_struct:
                cand = [j for j in range(n_struct) if abs(T[i, j]) > tol]
                if not cand:
                    continue
                j = cand[0]
                T[i, :] = T[i, :] / T[i, j]
                for r in range(m + 1):
                    if r != i and T[r, j] != 0:
                        T[r, :] = T[r, :] - T[r, j] * T[i, :]
                basis_arr[i] = j
                pivots += 1
            keep.append(i)
        T2 = np.empty((len(keep) + 1, n_struct + 1), dtype=dtype)
        T2[:-1, :n_struct] = T[keep, :n_struct]
        T2[:-1, n_struct] = T[keep, N]
        T = T2
        basis_arr = basis_arr[keep].copy()
        m = len(keep)

    # phase two cost row
    cost = [zero] * n_struct
    for j in range(nv):
        cost[j] = conv(problem.c[j]) / c_scale if not exact else conv(problem.c[j])
    for t, j in enumerate(neg_cols):
        cost[nv + t] = -cost[j]
    T[m, :n_struct] = cost
    T[m, -1] = zero
    for i in range(m):
        cb = cost[basis_arr[i]]
        if cb != 0:
            T[m, :] = T[m, :] - cb * T[i, :]
    status = run(n_struct)
    if status == kernels.SIMPLEX_UNBOUNDED:
        return LpSolution(UNBOUNDED, pivots=pivots)
    if status == kernels.SIMPLEX_ITERATION_LIMIT:
        return LpSolution(ITERATION_LIMIT, pivots=pivots)
    xs = [zero] * n_struct
    for i in range(m):
        xs[basis_arr[i]] = T[i, -1]
    x = []
    for j in range(nv):
        v = xs[j]
        if free[j]:
            v = v - xs[nv + neg_cols.index(j)]
        if not exact:
            v = float(v) * b_scale
        x.append(v)
    value = sum((conv(problem.c[j]) * x[j] for j in range(nv)), zero)
    return LpSolution(OPTIMAL, x, value, pivots)


def check_solution(problem: LpProblem, x: Sequence, tol: float = EPS_LP) -> list[str]:
    """Constraint violations of ``x`` (empty when feasible within ``tol``)."""
    bad = []
    free = problem.free or [False] * problem.n_vars
    for j, v in enumerate(x):
        if not free[j] and v < -tol:
            bad.append(f"x[{j}] = {v} < 0")
    for i, (coeffs, s, rhs) in enumerate(problem.constraints):
        lhs = sum(a * v for a, v in zip(coeffs, x))
        if (s == ">=" and lhs < rhs - tol) or (s == "<=" and lhs > rhs + tol) or (
            s == "==" and abs(lhs - rhs) > tol
        ):
            bad.append(f"row {i}: {lhs} {s} {rhs} violated")
    return bad
