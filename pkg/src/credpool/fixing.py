"""Coherence repair: the nearest coherent credence function under a divergence.

``fix_d1`` minimizes the divergence *from* the coherent point to the credence,
``fix_d2`` the divergence *to* it. On a partition both reduce to a
one-dimensional search for a Lagrange multiplier ``K`` (``fix_d2`` falls back
to multi-start local search when D(c, .) is not convex); on a general agenda
we minimize over distributions on worlds instead.
"""
from __future__ import annotations

import warnings

import numpy as np
from scipy.optimize import brentq, minimize

from .agenda import Agenda, SolveReport, as_credence
from .divergence import BregmanGenerator, bregman
from .errors import DegenerateCredence, InvalidAgenda, SolverError
from .simplex import mirror_descent, project_simplex

EPS = 1e-12


def _require_partition(agenda: Agenda):
    if not agenda.is_partition:
        raise InvalidAgenda("this operation needs a partition agenda")


def fix_sed(agenda: Agenda, c) -> np.ndarray:
    """Add the same amount to every cell; fall back to the exact projection if that leaves [0, 1]."""
    _require_partition(agenda)
    c = as_credence(c, agenda.m)
    shifted = c + (1.0 - c.sum()) / c.size
    if np.all(shifted >= 0):
        return shifted
    return project_simplex(c)


def fix_gkl(agenda: Agenda, c) -> np.ndarray:
    """Rescale so the cells sum to one."""
    _require_partition(agenda)
    c = as_credence(c, agenda.m)
    total = c.sum()
    if total <= 0:
        raise DegenerateCredence("cannot normalize an all-zero credence function")
    return c / total


def solve_shift(gen: BregmanGenerator, base, tol: float = 1e-12):
    """Find K with sum_j phi'^{-1}(base_j + K) = 1, clamping at the box.

    ``base`` holds phi'-values (possibly -inf for cells pinned at 0). Returns
    ``(x, K, active, iterations)``.
    """
    base = np.asarray(base, dtype=float)
    finite = np.isfinite(base)
    if not np.any(finite):
        if np.any(base == np.inf) and np.sum(base == np.inf) == 1:
            x = (base == np.inf).astype(float)
            return x, 0.0, (), 0
        raise DegenerateCredence("no cell can carry positive credence")
    lo_slope, hi_slope = gen.slope_lo, gen.slope_hi
    lo_edge = lo_slope if np.isfinite(lo_slope) else gen.slope_at(EPS)
    hi_edge = hi_slope if np.isfinite(hi_slope) else gen.slope_at(1.0 - EPS)
    k_lo = lo_edge - np.max(base[finite])
    k_hi = hi_edge - np.min(base[finite])
    calls = [0]

    def excess(k):
        calls[0] += 1
        with np.errstate(invalid="ignore"):
            return float(np.sum(gen.invert(base + k))) - 1.0

    f_lo, f_hi = excess(k_lo), excess(k_hi)
    if f_lo > 0 or f_hi < 0:
        if abs(f_hi) <= tol:
            k = k_hi
        elif abs(f_lo) <= tol:
            k = k_lo
        else:
            raise SolverError("K bracket does not straddle the simplex constraint",
                              diagnostics={"k_lo": k_lo, "k_hi": k_hi, "excess_lo": f_lo, "excess_hi": f_hi})
    elif f_lo == 0:
        k = k_lo
    elif f_hi == 0:
        k = k_hi
    else:
        k = brentq(excess, k_lo, k_hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    with np.errstate(invalid="ignore"):
        y = base + k
    x = gen.invert(y)
    margin = 1e-12 * (1.0 + abs(k))
    active = tuple(int(j) for j in np.nonzero(finite & ((y < lo_slope - margin) | (y > hi_slope + margin)))[0])
    return x, k, active, calls[0]


def _shift_residual(gen, x, base, k, active):
    interior = np.isfinite(base) & (x > 0) & (x < 1)
    if active:
        interior[list(active)] = False
    res = abs(x.sum() - 1.0)
    if np.any(interior):
        res = max(res, float(np.max(np.abs(gen.phi_prime(x[interior]) - base[interior] - k))))
    return res


def fix_d1(gen: BregmanGenerator, agenda: Agenda, c) -> SolveReport:
    """argmin over coherent c' of D(c', c) on a partition."""
    _require_partition(agenda)
    c = as_credence(c, agenda.m)
    with np.errstate(divide="ignore"):
        base = gen.phi_prime(c)
    x, k, active, iters = solve_shift(gen, base)
    return SolveReport(x, float(bregman(gen, x, c)), iters, _shift_residual(gen, x, base, k, active), active)


def _d2_starts(c, starts):
    m = c.size
    pts = [np.full(m, 1.0 / m)]
    if c.sum() > 0:
        pts.append(c / c.sum())
    pts.append(project_simplex(c))
    for i in range(m):
        e = np.full(m, 0.1 / m)
        e[i] += 0.9
        pts.append(e)
    # fill the remaining starts with a deterministic low-discrepancy sweep
    j = 1
    while len(pts) < starts:
        raw = np.modf(j * np.sqrt(np.arange(2, m + 2, dtype=float)) + 0.5)[0] + 1e-3
        pts.append(raw / raw.sum())
        j += 1
    return pts[:max(starts, 1)]


def _d2_polish(gen, c, x, iters=50):
    """Newton on the interior first-order system (x_j - c_j) phi''(x_j) = K, sum x = 1."""
    def s(v):
        with np.errstate(divide="ignore", invalid="ignore"):
            return (v - c_i) * gen.phi_double_prime(v)

    x = x.copy()
    free = (x > 1e-10) & (x < 1 - 1e-10)
    if not np.any(free):
        return x
    c_i = c[free]
    xi = x[free]
    budget = 1.0 - x[~free].sum()
    k = float(np.mean(s(xi)))
    h = 1e-7
    for _ in range(iters):
        F = np.append(s(xi) - k, xi.sum() - budget)
        if np.max(np.abs(F)) < 1e-15:
            break
        ds = (s(np.minimum(xi + h, 1.0)) - s(np.maximum(xi - h, 0.0))) / (np.minimum(xi + h, 1.0) - np.maximum(xi - h, 0.0))
        n = xi.size
        J = np.zeros((n + 1, n + 1))
        J[np.arange(n), np.arange(n)] = ds
        J[:n, n] = -1.0
        J[n, :n] = 1.0
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            break
        nxt = xi + step[:n]
        if not np.all(np.isfinite(nxt)) or np.any(nxt <= 0) or np.any(nxt >= 1):
            break
        xi, k = nxt, k + step[n]
    x[free] = xi
    return x


def fix_d2(gen: BregmanGenerator, agenda: Agenda, c, starts: int = 8) -> SolveReport:
    """argmin over coherent c' of D(c, c') on a partition.

    SED and GKL use their closed forms. D(c, .) need not be convex for other
    generators, so the minimum is taken over ``starts`` local solves from
    spread-out starting points, each polished by Newton steps on the
    first-order system (c'_j - c_j) phi''(c'_j) = K.
    """
    _require_partition(agenda)
    c = as_credence(c, agenda.m)
    if gen.kind == "SED":
        x = fix_sed(agenda, c)
        shift_fails = np.any(c + (1.0 - c.sum()) / c.size < 0)
        active = tuple(int(j) for j in np.nonzero(x == 0)[0]) if shift_fails else ()
        return SolveReport(x, float(bregman(gen, c, x)), 0, abs(x.sum() - 1.0), active)
    if gen.kind == "GKL":
        x = fix_gkl(agenda, c)
        return SolveReport(x, float(bregman(gen, c, x)), 0, abs(x.sum() - 1.0))
    if abs(c.sum() - 1.0) <= EPS:
        # D(c, c) = 0 is the global minimum
        return SolveReport(c.copy(), 0.0, 0, abs(c.sum() - 1.0))

    def f(x):
        return float(bregman(gen, c, x))

    def grad(x):
        with np.errstate(divide="ignore", invalid="ignore"):
            g = (x - c) * gen.phi_double_prime(x)
        return np.nan_to_num(g, nan=0.0, posinf=1e12, neginf=-1e12)

    cons = ({"type": "eq", "fun": lambda x: x.sum() - 1.0, "jac": lambda x: np.ones_like(x)},)
    best, iters = None, 0
    for x0 in _d2_starts(c, starts):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            r = minimize(f, x0, jac=grad, method="SLSQP", bounds=[(0.0, 1.0)] * c.size,
                         constraints=cons, options={"ftol": 1e-15, "maxiter": 500})
        iters += int(r.nit)
        x = np.clip(r.x, 0.0, 1.0)
        x = np.where(x < 1e-10, 0.0, x)
        x = x / x.sum()
        x = _d2_polish(gen, c, x)
        val = f(x)
        if best is None or val < best[0] - 1e-15:
            best = (val, x)
    if best is None or not np.isfinite(best[0]):
        raise SolverError("no finite coherent minimizer found", best=None if best is None else best[1])
    val, x = best
    free = (x > 0) & (x < 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (x - c) * gen.phi_double_prime(x)
    res = abs(x.sum() - 1.0)
    if np.any(free):
        k = float(np.mean(s[free]))
        res = max(res, float(np.max(np.abs(s[free] - k))))
        # a cell resting at 0 must not want to grow, one at 1 must not want to shrink
        low = (x == 0) & np.isfinite(s)
        if np.any(low):
            res = max(res, float(np.max(np.maximum(k - s[low], 0.0))))
        high = (x == 1) & np.isfinite(s)
        if np.any(high):
            res = max(res, float(np.max(np.maximum(s[high] - k, 0.0))))
    active = tuple(int(j) for j in np.nonzero(~free)[0])
    return SolveReport(x, val, iters, res, active)


def coherent_minimize(gen: BregmanGenerator, agenda: Agenda, credences, weights, direction: int,
                      tol: float = 1e-9, max_iter: int = 100_000) -> SolveReport:
    """Minimize the weighted divergence from (1) or to (2) the agents over coherent credences.

    Coherent credences are parameterized by distributions q over worlds,
    c' = V q, and q is found by mirror descent from the barycenter.
    """
    if direction not in (1, 2):
        raise ValueError("direction must be 1 or 2")
    V = agenda.truth_table
    C = np.atleast_2d(np.asarray(credences, dtype=float))
    w = np.asarray(weights, dtype=float)
    live = w > 0
    C, w = C[live], w[live]
    lp = w @ C
    support = np.ones(V.shape[1], dtype=bool)
    rows = V.any(axis=1)

    if direction == 1:
        with np.errstate(divide="ignore", invalid="ignore"):
            slopes = np.where(w[:, None] > 0, gen.phi_prime(C), 0.0)
        target = w @ slopes
        dead = ~np.isfinite(target)
        if np.any(dead & (target > 0)):
            raise DegenerateCredence("generator slope is +inf at an agent's credence")
        if np.any(dead):
            support &= ~V[dead].any(axis=0)
            rows &= ~dead
        if not np.any(support):
            raise DegenerateCredence("every world is ruled out by zero credences")

        def f(q):
            x = V @ q
            return float(np.sum(w * bregman(gen, x[None, :], C)))

        def grad(q):
            x = V @ q
            with np.errstate(divide="ignore", invalid="ignore"):
                g = np.where(rows, gen.phi_prime(x) - np.where(rows, target, 0.0), 0.0)
            return V.T @ g
    else:
        def f(q):
            x = V @ q
            return float(np.sum(w * bregman(gen, C, x[None, :])))

        def grad(q):
            x = V @ q
            with np.errstate(divide="ignore", invalid="ignore"):
                g = np.where(rows, (x - lp) * gen.phi_double_prime(x), 0.0)
            return V.T @ g

    Vs = V[:, support]
    q0 = np.full(Vs.shape[1], 1.0 / Vs.shape[1])

    def f_s(qs):
        return f(_embed(qs, support))

    def grad_s(qs):
        return grad(_embed(qs, support))[support]

    rep = mirror_descent(f_s, grad_s, q0, tol=tol, max_iter=max_iter)
    q = _embed(rep.argmin, support)
    x = V @ q
    return SolveReport(x, rep.objective, rep.iterations, rep.residual, (), rep.converged)


def _embed(qs, support):
    q = np.zeros(support.size)
    q[support] = qs
    return q


def project_coherent_general(gen: BregmanGenerator, agenda: Agenda, c, direction: int,
                             tol: float = 1e-9, max_iter: int = 100_000) -> SolveReport:
    """Nearest coherent credence on any agenda, in either divergence direction."""
    c = as_credence(c, agenda.m)
    return coherent_minimize(gen, agenda, c[None, :], np.ones(1), direction, tol, max_iter)


def fix(gen: BregmanGenerator, agenda: Agenda, c, direction: int = 1) -> np.ndarray:
    """Convenience dispatcher returning only the fixed credence."""
    if not agenda.is_partition:
        return project_coherent_general(gen, agenda, c, direction).argmin
    if gen.kind == "SED":
        return fix_sed(agenda, c)
    if gen.kind == "GKL":
        return fix_gkl(agenda, c)
    return (fix_d1 if direction == 1 else fix_d2)(gen, agenda, c).argmin
