"""Additive Bregman divergences and their generators.

A generator ``phi`` is strictly convex on [0, 1] and twice differentiable on the
open interval. The divergence it generates is the coordinate-wise sum of
``phi(x) - phi(y) - phi'(y) (x - y)``. Values are extended reals: GKL is
infinite when the second argument puts 0 where the first does not.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import rel_entr, xlogy

from .errors import RangeError, ShapeError

Func = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class BregmanGenerator:
    """Convex generator with its first two derivatives.

    ``inverse`` is an optional closed-form inverse of ``phi_prime`` that the
    solvers use as a fast path; :func:`phi_prime_inverse` never consults it.
    """

    name: str
    kind: str
    phi: Func = field(repr=False, compare=False)
    phi_prime: Func = field(repr=False, compare=False)
    phi_double_prime: Func = field(repr=False, compare=False)
    inverse: Optional[Func] = field(default=None, repr=False, compare=False)
    params: tuple = ()

    def slope_at(self, x: float) -> float:
        """One-sided limit of phi' at a boundary point (may be infinite)."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return float(self.phi_prime(np.asarray(x, dtype=float)))

    @property
    def slope_lo(self) -> float:
        return self.slope_at(0.0)

    @property
    def slope_hi(self) -> float:
        return self.slope_at(1.0)

    def invert(self, y) -> np.ndarray:
        """phi'^{-1}, clamped to [0, 1]; closed form when available."""
        y = np.asarray(y, dtype=float)
        if self.inverse is not None:
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                return np.clip(self.inverse(y), 0.0, 1.0)
        return phi_prime_inverse(self, y)


def _sed_gen():
    return BregmanGenerator(
        name="sed", kind="SED",
        phi=lambda x: np.square(x),
        phi_prime=lambda x: 2.0 * x,
        phi_double_prime=lambda x: np.full_like(np.asarray(x, dtype=float), 2.0),
        inverse=lambda y: y / 2.0,
    )


def _gkl_gen():
    return BregmanGenerator(
        name="gkl", kind="GKL",
        phi=lambda x: xlogy(x, x) - x,
        phi_prime=lambda x: np.log(x),
        phi_double_prime=lambda x: 1.0 / np.asarray(x, dtype=float),
        inverse=lambda y: np.exp(y),
    )


SED = _sed_gen()
GKL = _gkl_gen()


def power(p: float) -> BregmanGenerator:
    """Generator x**p for p > 1."""
    p = float(p)
    if not p > 1:
        raise ValueError(f"power generator needs p > 1, got {p}")

    def inverse(y):
        y = np.asarray(y, dtype=float)
        return np.where(y > 0, np.power(np.maximum(y, 0.0) / p, 1.0 / (p - 1.0)), 0.0)

    return BregmanGenerator(
        name=f"power:{p:g}", kind="POWER",
        phi=lambda x: np.power(x, p),
        phi_prime=lambda x: p * np.power(x, p - 1.0),
        phi_double_prime=lambda x: p * (p - 1.0) * np.power(x, p - 2.0),
        inverse=inverse,
        params=(p,),
    )


def affine_shifted(base: BregmanGenerator, k: float, c: float, scale: float = 1.0) -> BregmanGenerator:
    """Generator ``scale * base(x) + k x + c``.

    The affine part leaves the divergence untouched; ``scale`` multiplies it,
    so every such generator yields a positive linear transformation of the
    base divergence.
    """
    if not scale > 0:
        raise ValueError("scale must be positive")
    k, c, scale = float(k), float(c), float(scale)
    inverse = None
    if base.inverse is not None:
        base_inv = base.inverse
        inverse = lambda y: base_inv((np.asarray(y, dtype=float) - k) / scale)
    return BregmanGenerator(
        name=f"affine({base.name},{k:g},{c:g},{scale:g})", kind="AFFINE_SHIFTED",
        phi=lambda x: scale * base.phi(x) + k * np.asarray(x, dtype=float) + c,
        phi_prime=lambda x: scale * base.phi_prime(x) + k,
        phi_double_prime=lambda x: scale * base.phi_double_prime(x),
        inverse=inverse,
        params=(base.name, k, c, scale),
    )


def generator(name: str) -> BregmanGenerator:
    """Look up a generator by its name string: ``sed``, ``gkl`` or ``power:<p>``."""
    key = name.strip().lower()
    if key == "sed":
        return SED
    if key == "gkl":
        return GKL
    if key.startswith("power:"):
        try:
            p = float(key.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad power exponent in {name!r}") from None
        return power(p)
    raise ValueError(f"unknown divergence {name!r}; expected sed, gkl or power:<p>")


def _pair(c, d):
    c = np.asarray(c, dtype=float)
    d = np.asarray(d, dtype=float)
    if c.shape[-1:] != d.shape[-1:]:
        raise ShapeError(f"length mismatch: {c.shape} vs {d.shape}")
    try:
        np.broadcast_shapes(c.shape, d.shape)
    except ValueError:
        raise ShapeError(f"cannot pair shapes {c.shape} and {d.shape}") from None
    return c, d


def bregman_terms(gen: BregmanGenerator, c, d) -> np.ndarray:
    """Per-coordinate divergence terms (broadcasting)."""
    c, d = _pair(c, d)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        slope = gen.phi_prime(d)
        t = gen.phi(c) - gen.phi(d) - slope * (c - d)
    t = np.where(c == d, 0.0, t)
    t = np.where(np.isinf(slope) & (c != d), np.inf, t)
    return np.maximum(t, 0.0)


def bregman(gen: BregmanGenerator, c, d):
    """Additive Bregman divergence from ``c`` to ``d``; sums over the last axis."""
    return np.sum(bregman_terms(gen, c, d), axis=-1)


def sed(c, d):
    c, d = _pair(c, d)
    return np.sum(np.square(c - d), axis=-1)


def gkl(c, d):
    c, d = _pair(c, d)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = rel_entr(c, d) - c + d
    return np.sum(t, axis=-1)


def phi_prime_inverse(gen: BregmanGenerator, y, iterations: int = 200) -> np.ndarray:
    """Solve phi'(x) = y for x in [0, 1] by bisection.

    Targets at or beyond the one-sided limits of phi' clamp to 0 or 1. Works
    elementwise on arrays.
    """
    y = np.asarray(y, dtype=float)
    if np.any(np.isnan(y)):
        raise RangeError("cannot invert phi' at NaN")
    lo_slope, hi_slope = gen.slope_lo, gen.slope_hi
    lo = np.zeros_like(y)
    hi = np.ones_like(y)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            # interval no longer splittable in floating point
            if np.all((mid <= lo) | (mid >= hi)):
                break
            below = gen.phi_prime(mid) < y
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        # pick the endpoint with the smaller residual
        r_lo = np.abs(gen.phi_prime(lo) - y)
        r_hi = np.abs(gen.phi_prime(hi) - y)
    x = np.where(r_lo <= r_hi, lo, hi)
    x = np.where(y <= lo_slope, 0.0, x)
    x = np.where(y >= hi_slope, 1.0, x)
    return x
