import numpy as np
import pytest

from adaptsph.errors import DataError
from adaptsph.neighbors import brute_force_pairs, build_neighbors


def pairs_of(nl):
    return sorted(zip(nl.owners.tolist(), nl.indices.tolist()))


def test_matches_brute_force_on_random_points():
    rng = np.random.default_rng(3)
    x = rng.uniform(0, 1, size=(1000, 2))
    nl = build_neighbors(x, 0.05)
    assert pairs_of(nl) == [tuple(map(int, p)) for p in brute_force_pairs(x, 0.05)]


def test_geometry_and_symmetry():
    rng = np.random.default_rng(4)
    x = rng.uniform(-1, 2, size=(300, 2))
    nl = build_neighbors(x, 0.3)
    own = nl.owners
    assert np.allclose(nl.dx, x[own, 0] - x[nl.indices, 0])
    assert np.allclose(nl.r, np.hypot(nl.dx, nl.dy))
    assert np.all(nl.r < 0.3)
    forward = set(pairs_of(nl))
    assert all((j, i) in forward for i, j in forward)


def test_cutoff_is_strict():
    x = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 0.999]])
    nl = build_neighbors(x, 1.0)
    assert pairs_of(nl) == [(0, 2), (2, 0)]


def test_empty_and_single():
    assert build_neighbors(np.zeros((0, 2)), 1.0).n_pairs == 0
    assert build_neighbors(np.zeros((1, 2)), 1.0).n_pairs == 0


def test_coincident_particles_are_neighbours():
    nl = build_neighbors(np.array([[0.5, 0.5], [0.5, 0.5]]), 0.1)
    assert nl.n_pairs == 2 and np.all(nl.r == 0)


def test_rejects_non_finite():
    with pytest.raises(DataError):
        build_neighbors(np.array([[0.0, 0.0], [np.nan, 1.0]]), 1.0)


def test_deterministic_order():
    rng = np.random.default_rng(5)
    x = rng.uniform(0, 1, size=(500, 2))
    a, b = build_neighbors(x, 0.08), build_neighbors(x.copy(), 0.08)
    assert np.array_equal(a.indices, b.indices) and np.array_equal(a.offsets, b.offsets)
