"""Agendas, credence functions, weights and profiles.

An agenda is a finite list of propositions together with a binary truth table
whose columns are the possible worlds. Credences are plain float arrays
aligned with the agenda's propositions; nothing forces them to be coherent.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import nnls

from .errors import (
    DegenerateAgenda,
    InvalidAgenda,
    InvalidCredence,
    InvalidWeights,
    InvalidWorld,
    ShapeError,
)

COHERENCE_TOL = 1e-9
WEIGHT_TOL = 1e-12


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Agenda:
    """Propositions over finitely many distinguishable worlds.

    ``truth_table[i, t]`` is 1 when proposition ``i`` is true at world ``t``.
    Worlds are stored in a canonical order: columns sorted lexicographically
    with the first proposition most significant, largest first, so the
    identity matrix is its own canonical form.
    """

    propositions: tuple
    truth_table: np.ndarray
    is_partition: bool = field(init=False)

    def __post_init__(self):
        raw = np.asarray(self.truth_table)
        if raw.ndim != 2 or raw.size == 0:
            raise InvalidAgenda("truth table must be a nonempty 2-d matrix")
        try:
            table = raw.astype(float)
        except (TypeError, ValueError) as exc:
            raise InvalidAgenda(f"truth table is not numeric: {exc}") from None
        if not np.all((table == 0) | (table == 1)):
            bad = np.argwhere((table != 0) & (table != 1))[0]
            raise InvalidAgenda(f"non-binary entry {raw[tuple(bad)]!r} at row {bad[0]}, column {bad[1]}")
        m, w = table.shape
        props = tuple(str(p) for p in self.propositions) if self.propositions is not None else ()
        if not props:
            props = tuple(f"X{i + 1}" for i in range(m))
        if len(props) != m:
            raise ShapeError(f"{len(props)} proposition labels for a truth table with {m} rows")
        columns = [tuple(int(v) for v in table[:, t]) for t in range(w)]
        if len(set(columns)) != w:
            raise DegenerateAgenda("two worlds have identical truth-table columns")
        order = sorted(range(w), key=lambda t: columns[t], reverse=True)
        table = table[:, order]
        partition = bool(np.all(table.sum(axis=0) == 1) and np.all(table.sum(axis=1) >= 1))
        object.__setattr__(self, "propositions", props)
        object.__setattr__(self, "truth_table", _frozen(table))
        object.__setattr__(self, "is_partition", partition)

    @classmethod
    def partition(cls, m: int, names: Optional[Sequence[str]] = None) -> "Agenda":
        return cls(tuple(names) if names else None, np.eye(m))

    @property
    def m(self) -> int:
        return self.truth_table.shape[0]

    @property
    def n_worlds(self) -> int:
        return self.truth_table.shape[1]

    def __eq__(self, other):
        if not isinstance(other, Agenda):
            return NotImplemented
        return self.propositions == other.propositions and np.array_equal(self.truth_table, other.truth_table)

    def __hash__(self):
        return hash((self.propositions, self.truth_table.tobytes()))


def validate_agenda(truth_table, propositions: Optional[Sequence[str]] = None) -> Agenda:
    return Agenda(tuple(propositions) if propositions is not None else None, truth_table)


def as_credence(values, m: Optional[int] = None) -> np.ndarray:
    """Validate a credence vector and return it as a float array."""
    c = np.asarray(values, dtype=float)
    if c.ndim != 1:
        raise ShapeError(f"credence must be one-dimensional, got shape {c.shape}")
    if m is not None and c.shape[0] != m:
        raise ShapeError(f"credence has {c.shape[0]} entries, agenda has {m} propositions")
    if not np.all(np.isfinite(c)) or np.any(c < 0) or np.any(c > 1):
        raise InvalidCredence(f"credences must lie in [0, 1], got {c.tolist()}")
    return c


def omniscient(agenda: Agenda, world: int) -> np.ndarray:
    """Credence function assigning 1 to the truths and 0 to the falsehoods at ``world``."""
    if not 0 <= world < agenda.n_worlds:
        raise InvalidWorld(f"world {world} out of range for {agenda.n_worlds} worlds")
    return agenda.truth_table[:, world].copy()


def world_distribution(agenda: Agenda, c) -> np.ndarray:
    """Closest distribution over worlds whose image under the truth table is ``c``.

    Solved as nonnegative least squares with a heavily weighted sum-to-one row,
    then renormalized.
    """
    c = as_credence(c, agenda.m)
    V = agenda.truth_table
    scale = 1e3
    A = np.vstack([V, scale * np.ones((1, V.shape[1]))])
    b = np.concatenate([c, [scale]])
    q, _ = nnls(A, b)
    total = q.sum()
    if total <= 0:
        return np.full(agenda.n_worlds, 1.0 / agenda.n_worlds)
    return q / total


def is_coherent(agenda: Agenda, c, tol: float = COHERENCE_TOL) -> bool:
    c = np.asarray(c, dtype=float)
    if c.shape != (agenda.m,):
        raise ShapeError(f"credence shape {c.shape} does not match agenda with {agenda.m} propositions")
    if np.any(c < -tol) or np.any(c > 1 + tol):
        return False
    if agenda.is_partition:
        return bool(abs(c.sum() - 1.0) <= tol)
    q = world_distribution(agenda, np.clip(c, 0.0, 1.0))
    return bool(np.max(np.abs(agenda.truth_table @ q - c)) <= tol)


def normalize_weights(weights) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise InvalidWeights("weights must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise InvalidWeights(f"weights must be finite and nonnegative, got {w.tolist()}")
    total = w.sum()
    if total <= 0:
        raise InvalidWeights("weights must not all be zero")
    return w / total


@dataclass(frozen=True)
class Profile:
    """A group of agents' credences over one agenda, plus their weights."""

    agenda: Agenda
    names: tuple
    credences: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        C = np.asarray(self.credences, dtype=float)
        if C.ndim != 2 or C.shape[0] < 1:
            raise ShapeError("profile needs at least one agent")
        n = C.shape[0]
        for k in range(n):
            as_credence(C[k], self.agenda.m)
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (n,):
            raise ShapeError(f"{w.shape[0] if w.ndim == 1 else w.shape} weights for {n} agents")
        if not np.all(np.isfinite(w)) or np.any(w < 0) or abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise InvalidWeights(f"weights must be nonnegative and sum to 1, got {w.tolist()}")
        names = tuple(str(s) for s in self.names) if self.names else tuple(f"agent{k + 1}" for k in range(n))
        if len(names) != n:
            raise ShapeError(f"{len(names)} names for {n} agents")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "credences", _frozen(C))
        object.__setattr__(self, "weights", _frozen(w))

    @classmethod
    def build(cls, agenda: Agenda, credences, weights=None, names=None) -> "Profile":
        C = np.atleast_2d(np.asarray(credences, dtype=float))
        if weights is None:
            weights = np.ones(C.shape[0])
        return cls(agenda, tuple(names) if names else None, C, normalize_weights(weights))

    @property
    def n(self) -> int:
        return self.credences.shape[0]

    def with_credences(self, credences) -> "Profile":
        return Profile(self.agenda, self.names, credences, self.weights)

    def with_weights(self, weights) -> "Profile":
        return Profile(self.agenda, self.names, self.credences, normalize_weights(weights))

    def drop(self, k: int) -> "Profile":
        keep = [i for i in range(self.n) if i != k]
        return Profile.build(self.agenda, self.credences[keep], self.weights[keep],
                             [self.names[i] for i in keep])

    def __eq__(self, other):
        if not isinstance(other, Profile):
            return NotImplemented
        return (self.agenda == other.agenda and self.names == other.names
                and np.array_equal(self.credences, other.credences)
                and np.array_equal(self.weights, other.weights))

    def __hash__(self):
        return hash((self.agenda, self.names, self.credences.tobytes(), self.weights.tobytes()))


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a numeric minimization.

    ``residual`` is the largest violated first-order or feasibility condition;
    ``active`` lists coordinates pinned to 0 or 1 by the box constraints.
    """

    argmin: np.ndarray
    objective: float
    iterations: int
    residual: float
    active: tuple = ()
    converged: bool = True

    @property
    def interior(self) -> bool:
        return not self.active
