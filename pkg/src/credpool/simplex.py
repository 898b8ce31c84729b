"""Simplex machinery: Euclidean projection and entropic mirror descent."""
from __future__ import annotations

import numpy as np

from .agenda import SolveReport
from .errors import SolverError


def project_simplex(y) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based KKT)."""
    y = np.asarray(y, dtype=float)
    u = np.sort(y)[::-1]
    css = np.cumsum(u) - 1.0
    ind = np.arange(1, y.size + 1)
    rho = np.nonzero(u - css / ind > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(y - theta, 0.0)


def kkt_residual(q, g) -> float:
    """First-order residual for min f(q) over the simplex given gradient ``g``."""
    gbar = float(q @ g)
    spread = float(np.max(q * np.abs(g - gbar)))
    return max(spread, max(0.0, gbar - float(np.min(g))))


def mirror_descent(f, grad, q0, tol: float = 1e-9, max_iter: int = 100_000,
                   abs_tol: float = 1e-16, kkt_tol: float = 1e-10) -> SolveReport:
    """Minimize ``f`` over the probability simplex with exponentiated gradient steps.

    Step size starts at 1/(1 + L) for L the initial gradient sup-norm, is
    halved whenever a step would increase the objective and grows by 25% after
    each accepted step. Stops once the decrease falls below
    ``tol * |f| + abs_tol`` and either the first-order residual is under
    ``kkt_tol`` or the objective has stopped changing in floating point.
    """
    q = np.asarray(q0, dtype=float)
    q = q / q.sum()
    fq = float(f(q))
    g = grad(q)
    if not np.all(np.isfinite(g)):
        raise SolverError("gradient is not finite at the starting point", best=q)
    eta = 1.0 / (1.0 + float(np.max(np.abs(g))))
    flat = 0
    for it in range(1, max_iter + 1):
        shifted = g - g.min()
        while True:
            cand = q * np.exp(-eta * shifted)
            cand /= cand.sum()
            fc = float(f(cand))
            if fc <= fq:
                break
            eta *= 0.5
            if eta < 1e-300:
                return SolveReport(q, fq, it, kkt_residual(q, g))
        decrease = fq - fc
        q, fq = cand, fc
        g = grad(q)
        if not np.all(np.isfinite(g)):
            raise SolverError("gradient became non-finite", best=q, diagnostics={"iteration": it})
        # objective no longer resolvable in floating point
        flat = flat + 1 if decrease <= 0 else 0
        if decrease <= tol * abs(fq) + abs_tol:
            res = kkt_residual(q, g)
            if res <= kkt_tol or flat >= 25:
                return SolveReport(q, fq, it, res)
        eta *= 1.25
    raise SolverError(f"mirror descent hit the iteration cap ({max_iter})", best=q,
                      diagnostics={"objective": fq, "residual": kkt_residual(q, g)})
