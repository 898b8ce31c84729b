import numpy as np
import pytest

from credpool.divergence import GKL, SED, bregman
from credpool.errors import ScaleError
from credpool.oracle import finite_diff_check, grid_minimize
from credpool.theoremlab import carmen_donal


def test_sed_simplex():
    c = np.array([0.5, 0.1])
    got = grid_minimize(lambda X: bregman(SED, X, c[None, :]), "simplex", 2, 1e-4)
    assert np.allclose(got, [0.7, 0.3], atol=2e-4)


def test_constant_objective_returns_first_point():
    got = grid_minimize(lambda X: np.zeros(len(X)), "simplex", 3, 0.1)
    assert got.tolist() == [0.0, 0.0, 1.0]
    got = grid_minimize(lambda X: np.zeros(len(X)), "box", 2, 0.1)
    assert got.tolist() == [0.0, 0.0]


def test_forecast_polytope():
    p = carmen_donal()
    V = p.agenda.truth_table

    def f(Q):
        X = Q @ V.T
        return sum(a * bregman(GKL, X, c[None, :]) for a, c in zip(p.weights, p.credences))

    q = grid_minimize(f, "simplex", 3, 1e-3)
    assert np.allclose(V @ q, [0.390, 0.338, 0.272, 0.728], atol=1e-3)


def test_scale_limits():
    with pytest.raises(ScaleError):
        grid_minimize(lambda X: X.sum(axis=1), "simplex", 5, 0.1)
    with pytest.raises(ScaleError):
        grid_minimize(lambda X: X.sum(axis=1), "box", 4, 1e-3)
    with pytest.raises(ValueError):
        grid_minimize(lambda X: X.sum(axis=1), "ball", 2, 0.1)


def test_finer_grid_never_worse():
    rng = np.random.default_rng(0)
    for _ in range(5):
        c = rng.random(3)
        f = lambda X: bregman(GKL, c[None, :], X)
        coarse = grid_minimize(f, "simplex", 3, 0.02)
        fine = grid_minimize(f, "simplex", 3, 0.01)
        assert f(fine[None, :])[0] <= f(coarse[None, :])[0] + 1e-15


def test_finite_diff_check():
    pts = np.linspace(0.05, 0.95, 19)
    assert finite_diff_check(lambda x: x ** 2, lambda x: 2 * x, pts) <= 1e-8
    assert finite_diff_check(lambda x: x * np.log(x) - x, np.log, [0.5]) <= 1e-6
    assert finite_diff_check(lambda x: x ** 2, lambda x: 3 * x, pts) > 1e-2
