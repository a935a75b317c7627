"""Steiner ratio, Steiner-Gromov ratio and Steiner subratio.

Per-instance values are exact computations; the degree-``n`` search is an
empirical lower envelope (random restarts with perturbation descent) and
claims nothing about the true infimum.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import _accel
from .fillings import four_point_mf, mf
from .graphs import WeightedGraph, kruskal_mst
from .metric import FiniteMetricSpace, euclidean_space, min_half_perimeter
from .plane import as_points, euclidean_mst
from .steiner import GuardError, smt, torricelli_point

KINDS = ("sr", "sgr", "ssr")
SLACK = 1e-9
DESCENT_STEPS = 50


class InvariantError(AssertionError):
    pass


@dataclass
class RatioReport:
    description: str
    n: int
    mst: float
    smt: float | None
    mf: object
    points: list | None = None

    @property
    def sr(self) -> float | None:
        return None if self.smt is None else self.smt / self.mst

    @property
    def sgr(self):
        return self.mf / self.mst

    @property
    def ssr(self) -> float | None:
        return None if self.smt is None else float(self.mf) / self.smt

    def value(self, kind: str) -> float:
        return float(getattr(self, kind))

    def violations(self, slack: float = SLACK) -> list[str]:
        out = []
        eps = slack * max(1.0, float(self.mst))
        n = self.n
        low = max(0.5, n / (2 * n - 2)) if n >= 2 else 0.5
        if self.sgr < low - slack:
            out.append(f"sgr {float(self.sgr)} below {low}")
        if self.sgr > 1 + slack:
            out.append(f"sgr {float(self.sgr)} above 1")
        if self.smt is not None:
            if self.smt > self.mst + eps:
                out.append(f"smt {self.smt} exceeds mst {self.mst}")
            if float(self.mf) > self.smt + eps:
                out.append(f"mf {float(self.mf)} exceeds smt {self.smt}")
            if not self.sr > 0.5:
                out.append(f"sr {self.sr} not above 1/2")
        return out

    def to_dict(self) -> dict:
        return {
            "description": self.description,
            "n": self.n,
            "mst": float(self.mst),
            "smt": None if self.smt is None else float(self.smt),
            "mf": float(self.mf),
            "sr": None if self.sr is None else float(self.sr),
            "sgr": float(self.sgr),
            "ssr": None if self.ssr is None else float(self.ssr),
            "points": self.points,
        }


def metric_mst(space: FiniteMetricSpace):
    """Kruskal on the complete graph of the space (exact for rational spaces)."""
    n = space.n
    g = WeightedGraph(n, tuple((i, j, space.dist[i, j]) for i, j in combinations(range(n), 2)))
    tree, _ = kruskal_mst(g)
    zero = Fraction(0) if space.exact else 0.0
    return sum((w for _, _, w in tree.edges), zero)


def ratio_report(points, description: str = "", nmax: int = 8) -> RatioReport:
    """mst, smt and mf of a plane point set with the three ratios; the chain
    ``mf <= smt <= mst`` and the ratio bounds are checked."""
    p = as_points(points)
    n = len(p)
    if n > nmax:
        raise GuardError(f"n = {n} exceeds the guard nmax = {nmax}")
    _, m = euclidean_mst(p)
    s = smt(p, nmax=nmax).length
    f = mf(euclidean_space(p), nmax=nmax).value
    rep = RatioReport(description, n, m, s, float(f), p.tolist())
    bad = rep.violations()
    if bad:
        raise InvariantError("; ".join(bad))
    return rep


def sgr_metric(space: FiniteMetricSpace, nmax: int = 8):
    """``mf / mst`` of a metric space; exact for rational input."""
    n = space.n
    m = metric_mst(space)
    f = mf(space, nmax=nmax).value
    r = f / m
    low = max(Fraction(1, 2), Fraction(n, 2 * n - 2))
    slack = 0 if space.exact else SLACK
    if r < low - slack:
        raise InvariantError(f"sgr {r} below {low}")
    return r


# ---------------------------------------------------------------------------
# fast evaluation for the search
# ---------------------------------------------------------------------------


def _pair_dist(p):
    d = p[:, None, :] - p[None, :, :]
    return np.sqrt((d ** 2).sum(axis=2))


def _mst_small(d) -> float:
    # Prim on a dense matrix
    n = len(d)
    inside = np.zeros(n, bool)
    inside[0] = True
    best = d[0].copy()
    total = 0.0
    for _ in range(n - 1):
        cand = np.where(inside, np.inf, best)
        j = int(np.argmin(cand))
        total += cand[j]
        inside[j] = True
        best = np.minimum(best, d[j])
    return float(total)


def _evaluate(kind: str, p: np.ndarray) -> tuple[float, float, float | None, float | None]:
    """(ratio, mst, smt, mf) for a configuration; NaN ratio on degenerate input."""
    n = len(p)
    d = _pair_dist(p)
    iu = np.triu_indices(n, 1)
    if np.min(d[iu]) <= 1e-9 * max(np.max(d[iu]), 1e-300):
        return math.nan, math.nan, None, None
    m = _mst_small(d)
    s = f = None
    if kind in ("sr", "ssr"):
        if n == 2:
            s = float(d[0, 1])
        elif n == 3:
            s = torricelli_point(*p).smt3
        else:
            s = smt(p).length
    if kind in ("sgr", "ssr"):
        if n == 2:
            f = float(d[0, 1])
        elif n == 3:
            f = float(d[0, 1] + d[1, 2] + d[0, 2]) / 2
        else:
            sp = FiniteMetricSpace(d)
            f = float(four_point_mf(sp)[0]) if n == 4 else float(mf(sp).value)
    if kind == "sr":
        r = s / m
    elif kind == "sgr":
        r = f / m
    else:
        r = f / s
    return r, m, s, f


@dataclass
class SearchResult:
    kind: str
    n: int
    value: float
    report: RatioReport
    configuration: list
    evaluations: int
    restarts: int
    history: list = field(default_factory=list)


def _restart(kind, n, steps, seq, sigma0, decay):
    rng = np.random.default_rng(seq)
    p = rng.random((n, 2))
    best = _evaluate(kind, p)
    while math.isnan(best[0]):
        p = rng.random((n, 2))
        best = _evaluate(kind, p)
    evals = 1
    sigma = sigma0
    for _ in range(steps):
        q = p + rng.normal(scale=sigma, size=p.shape)
        val = _evaluate(kind, q)
        evals += 1
        if not math.isnan(val[0]) and val[0] < best[0]:
            p, best = q, val
        sigma *= decay
    return best, p, evals


def ratio_search(
    kind: str,
    n: int,
    trials: int,
    seed: int = 0,
    steps: int = DESCENT_STEPS,
    threads: int | None = None,
) -> SearchResult:
    """Smallest ratio found among random plane configurations of ``n`` points.

    ``trials`` is the total number of configuration evaluations: each restart
    spends one on a uniform random start and ``steps`` on Gaussian
    perturbation descent with geometrically shrinking scale.  Restart ``r``
    draws from the ``r``-th child of ``SeedSequence(seed)``, so results do not
    depend on the thread count.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    if trials <= 0:
        raise ValueError("trial budget must be positive")
    if n < 2:
        raise ValueError("need at least two points")
    if kind in ("sr", "ssr") and n > 7:
        raise GuardError(f"n = {n} exceeds the search guard 7 for {kind}")
    if kind == "sgr" and n > 8:
        raise GuardError(f"n = {n} exceeds the search guard 8 for sgr")
    per = steps + 1
    restarts = max(1, math.ceil(trials / per))
    seqs = np.random.SeedSequence(seed).spawn(restarts)
    sigma0, decay = 0.1, (0.01) ** (1.0 / max(steps, 1))
    threads = threads or _accel.threads()

    def job(r):
        return _restart(kind, n, steps, seqs[r], sigma0, decay)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(job, range(restarts)))
    else:
        results = [job(r) for r in range(restarts)]
    evals = sum(r[2] for r in results)
    k = min(range(restarts), key=lambda r: (results[r][0][0], r))
    (val, m, s, f), p, _ = results[k]
    rep = RatioReport(f"{kind} search n={n} seed={seed}", n, m, s, f if f is not None else math.nan, p.tolist())
    history = [float(r[0][0]) for r in results]
    return SearchResult(kind, n, float(val), rep, p.tolist(), evals, restarts, history)


# ---------------------------------------------------------------------------
# simplex construction used in the multidimensional comparison
# ---------------------------------------------------------------------------


def du_smith_points(n: int = 2):
    """The origin plus every vector with one coordinate 1, one coordinate -1 in
    ``R^(n+1)``, and its ``n + 1`` regular simplices ``P^i`` (origin and the
    vectors with ``x^i = 1``)."""
    pts = [tuple([0] * (n + 1))]
    for i in range(n + 1):
        for j in range(n + 1):
            if i != j:
                v = [0] * (n + 1)
                v[i], v[j] = 1, -1
                pts.append(tuple(v))
    P = np.array(pts, dtype=float)
    parts = [np.array([pts[0]] + [q for q in pts[1:] if q[i] == 1], dtype=float) for i in range(n + 1)]
    return P, parts


def euclidean_mst_any_dim(points) -> float:
    p = np.asarray(points, float)
    return _mst_small(_pair_dist(p))


def rubleva_gap(space: FiniteMetricSpace):
    """``mf - min_half_perimeter``: never negative, zero exactly for additive spaces."""
    return mf(space).value - min_half_perimeter(space)[0]
