"""Pooling operators: linear, geometric, divergence-based and the geometric dictators."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .agenda import Profile, is_coherent
from .divergence import BregmanGenerator, bregman
from .errors import DegenerateProfile, GeneralNormalizationError
from .simplex import project_simplex


def linear_pool(profile: Profile) -> np.ndarray:
    return profile.weights @ profile.credences


def geometric_pool_unnormalized(profile: Profile) -> np.ndarray:
    """Weighted geometric mean per proposition, computed in the log domain.

    Zero-weight agents are skipped, which realizes 0**0 = 1.
    """
    w = profile.weights
    live = w > 0
    C, w = profile.credences[live], w[live]
    with np.errstate(divide="ignore"):
        logs = np.log(C)
    return np.exp(w @ logs)


def geometric_pool(profile: Profile) -> np.ndarray:
    if not profile.agenda.is_partition:
        raise GeneralNormalizationError()
    g = geometric_pool_unnormalized(profile)
    total = g.sum()
    if total <= 0:
        raise DegenerateProfile("every cell is zeroed by some positively weighted agent")
    return g / total


def agg_d1(gen: BregmanGenerator, profile: Profile) -> np.ndarray:
    """Unconstrained minimizer of sum_k a_k D(c', c_k): phi'^{-1} of the averaged slopes."""
    w = profile.weights
    live = w > 0
    with np.errstate(divide="ignore"):
        slopes = gen.phi_prime(profile.credences[live])
    return gen.invert(w[live] @ slopes)


def agg_d2(gen: BregmanGenerator, profile: Profile) -> np.ndarray:
    """Unconstrained minimizer of sum_k a_k D(c_k, c'); the linear pool for every generator."""
    return linear_pool(profile)


def geometric_objective(gen: BregmanGenerator, profile: Profile, point, direction: int = 1):
    """prod_k D(point, c_k)^{a_k} (direction 1) or prod_k D(c_k, point)^{a_k} (direction 2).

    Broadcasts over leading axes of ``point``.
    """
    point = np.asarray(point, dtype=float)
    out = np.ones(point.shape[:-1])
    for c, a in zip(profile.credences, profile.weights):
        if a == 0:
            continue
        d = bregman(gen, point, c) if direction == 1 else bregman(gen, c, point)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = out * np.power(d, a)
    return out


@dataclass(frozen=True)
class DictatorResult:
    """Outcome of WGCAP/GAgg. ``index`` is None when no agent achieves the minimum."""

    index: object
    credence: np.ndarray
    objective: float
    dictatorship: bool


def dictator_select(gen: BregmanGenerator, profile: Profile, constrained: bool = False,
                    direction: int = 1) -> DictatorResult:
    """Minimize the weighted geometric mean of divergences (WGCAP if constrained, else GAgg).

    Any positively weighted agent admissible as a minimizer zeroes the product;
    ties go to the lowest index. With ``constrained`` and no coherent
    positively weighted agent, the minimum over coherent credences is found
    numerically and reported as a non-dictatorship.
    """
    if direction not in (1, 2):
        raise ValueError("direction must be 1 or 2")
    agenda = profile.agenda
    for k, (c, a) in enumerate(zip(profile.credences, profile.weights)):
        if a > 0 and (not constrained or is_coherent(agenda, c)):
            return DictatorResult(k, c.copy(), float(geometric_objective(gen, profile, c, direction)), True)
    if not agenda.is_partition:
        raise NotImplementedError("WGCAP fallback search is only implemented for partition agendas")

    def f(x):
        with np.errstate(divide="ignore"):
            return float(np.log(max(float(geometric_objective(gen, profile, x, direction)), 1e-300)))

    m = agenda.m
    starts = [np.full(m, 1.0 / m)] + [project_simplex(c) for c in profile.credences]
    cons = ({"type": "eq", "fun": lambda x: x.sum() - 1.0},)
    best = None
    for x0 in starts:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            r = minimize(f, x0, method="SLSQP", bounds=[(1e-9, 1.0)] * m, constraints=cons,
                         options={"ftol": 1e-12, "maxiter": 500})
        x = np.clip(r.x, 0.0, 1.0)
        x = x / x.sum()
        val = float(geometric_objective(gen, profile, x, direction))
        if best is None or val < best[1]:
            best = (x, val)
    return DictatorResult(None, best[0], best[1], False)
