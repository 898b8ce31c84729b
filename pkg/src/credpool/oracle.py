"""Brute-force reference minimizers and derivative checks.

These exist to certify the solvers, so they deliberately share no code with
them: exhaustive lattice scans plus local refinement, and central differences.
"""
from __future__ import annotations

import itertools

import numpy as np

from .errors import ScaleError

MAX_DIM = 4
MAX_POINTS = 30_000_000
_CHUNK = 2_000_000


def _simplex_chunks(m, s):
    """Integer lattice points with m coordinates summing to s, in lexicographic order."""
    if m == 1:
        yield np.array([[s]])
        return
    if m == 2:
        a = np.arange(s + 1)
        yield np.stack([a, s - a], axis=1)
        return
    for head in itertools.product(range(s + 1), repeat=m - 3):
        r0 = s - sum(head)
        if r0 < 0:
            continue
        a, b = np.meshgrid(np.arange(r0 + 1), np.arange(r0 + 1), indexing="ij")
        keep = a + b <= r0
        a, b = a[keep], b[keep]
        pts = np.empty((a.size, m), dtype=np.int64)
        pts[:, :m - 3] = head
        pts[:, m - 3] = a
        pts[:, m - 2] = b
        pts[:, m - 1] = r0 - a - b
        yield pts


def _box_chunks(m, s):
    rest = m - 1
    tail = np.stack(np.meshgrid(*[np.arange(s + 1)] * rest, indexing="ij"), -1).reshape(-1, rest) if rest else np.zeros((1, 0), dtype=np.int64)
    for first in range(s + 1):
        yield np.concatenate([np.full((tail.shape[0], 1), first), tail], axis=1)


def _lattice_size(domain, m, s):
    from math import comb
    return comb(s + m - 1, m - 1) if domain == "simplex" else (s + 1) ** m


def _scan(objective, chunks, scale):
    best_x, best_v = None, np.inf
    for pts in chunks:
        x = pts / scale
        v = np.asarray(objective(x), dtype=float)
        v = np.where(np.isnan(v), np.inf, v)
        i = int(np.argmin(v))
        if best_x is None or v[i] < best_v:
            best_x, best_v = x[i], float(v[i])
    return best_x, best_v


def grid_minimize(objective, domain: str, m: int, resolution: float, refine: int = 2):
    """Minimize a vectorized objective over the simplex or the unit box by lattice scan.

    ``objective`` maps an (N, m) array of candidates to N values. After the
    scan at ``resolution``, each refinement round rescans a +/- one-step window
    around the incumbent at a tenth of the step. Ties keep the earliest point
    in scan order.
    """
    if domain not in ("simplex", "box"):
        raise ValueError("domain must be 'simplex' or 'box'")
    if m > MAX_DIM:
        raise ScaleError(f"grid oracle is limited to {MAX_DIM} dimensions, got {m}")
    if not resolution > 0:
        raise ValueError("resolution must be positive")
    s = int(round(1.0 / resolution))
    if _lattice_size(domain, m, s) > MAX_POINTS:
        raise ScaleError(f"lattice at resolution {resolution} in {m} dimensions is too large")
    chunks = _simplex_chunks(m, s) if domain == "simplex" else _box_chunks(m, s)
    x, v = _scan(objective, chunks, s)
    step = 1.0 / s
    for _ in range(refine):
        fine = step / 10.0
        offsets = np.arange(-10, 11) * fine
        free = m - 1 if domain == "simplex" else m
        grids = np.stack(np.meshgrid(*[x[i] + offsets for i in range(free)], indexing="ij"), -1).reshape(-1, free)
        if domain == "simplex":
            last = 1.0 - grids.sum(axis=1, keepdims=True)
            cand = np.concatenate([grids, last], axis=1)
        else:
            cand = grids
        cand = cand[np.all((cand >= -1e-12) & (cand <= 1 + 1e-12), axis=1)]
        cand = np.clip(cand, 0.0, 1.0)
        vals = np.asarray(objective(cand), dtype=float)
        vals = np.where(np.isnan(vals), np.inf, vals)
        i = int(np.argmin(vals))
        if vals[i] < v:
            x, v = cand[i], float(vals[i])
        step = fine
    return x


def finite_diff_check(f, f_prime, points, h: float = 1e-6) -> float:
    """Largest relative gap between ``f_prime`` and central differences of ``f``."""
    pts = np.asarray(points, dtype=float)
    fd = (f(pts + h) - f(pts - h)) / (2.0 * h)
    exact = f_prime(pts)
    return float(np.max(np.abs(fd - exact) / np.maximum(np.abs(exact), 1.0)))
