"""Weighted coherent approximation: fix and aggregate in one step."""
from __future__ import annotations

import numpy as np

from .agenda import Profile, SolveReport
from .divergence import BregmanGenerator, bregman
from .errors import InvalidAgenda
from .fixing import coherent_minimize, fix_d2, solve_shift, _shift_residual
from .pooling import linear_pool


def _objective(gen, profile, x, direction):
    C, w = profile.credences, profile.weights
    d = bregman(gen, x[None, :], C) if direction == 1 else bregman(gen, C, x[None, :])
    return float(np.sum(np.where(w > 0, w * d, 0.0)))


def wcap_d1(gen: BregmanGenerator, profile: Profile) -> SolveReport:
    """Coherent c' minimizing sum_k a_k D(c', c_k) on a partition.

    The first-order conditions say phi'(c'_j) exceeds the weighted average
    slope by the same K in every cell; K is found by root bracketing.
    """
    if not profile.agenda.is_partition:
        raise InvalidAgenda("wcap_d1 needs a partition agenda; use wcap_general")
    w = profile.weights
    live = w > 0
    with np.errstate(divide="ignore"):
        slopes = gen.phi_prime(profile.credences[live])
    base = w[live] @ slopes
    x, k, active, iters = solve_shift(gen, base)
    return SolveReport(x, _objective(gen, profile, x, 1), iters,
                       _shift_residual(gen, x, base, k, active), active)


def wcap_d2(gen: BregmanGenerator, profile: Profile) -> SolveReport:
    """Coherent c' minimizing sum_k a_k D(c_k, c'), computed as Fix_D2 of the linear pool.

    The weighted objective equals D(LP, c') plus a constant for any additive
    Bregman divergence, so nothing is lost by fixing the pool.
    """
    if not profile.agenda.is_partition:
        raise InvalidAgenda("wcap_d2 needs a partition agenda; use wcap_general")
    rep = fix_d2(gen, profile.agenda, linear_pool(profile))
    return SolveReport(rep.argmin, _objective(gen, profile, rep.argmin, 2), rep.iterations,
                       rep.residual, rep.active)


def wcap_general(gen: BregmanGenerator, profile: Profile, direction: int,
                 tol: float = 1e-9, max_iter: int = 100_000) -> SolveReport:
    """Either direction on any agenda, by mirror descent over world distributions."""
    return coherent_minimize(gen, profile.agenda, profile.credences, profile.weights,
                             direction, tol, max_iter)
