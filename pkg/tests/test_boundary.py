import math

import numpy as np
import pytest

from adaptsph.boundary import (
    boundary_particles,
    dummy_pressure,
    horizontal_wall,
    nearest_wall_index,
    support_is_complete,
    wall_pressure,
)
from adaptsph.errors import ConfigurationError
from adaptsph.interactions import pair_kernel
from adaptsph.neighbors import build_neighbors
from adaptsph.particles import DUMMY, FLUID, WALL, Particles

DP = 0.01
H = 2 * DP


def test_layout_depth_covers_support():
    lay = horizontal_wall(0.0, -0.1, 0.1, DP, H)
    assert lay.depth >= 2 * H
    assert len(lay.wall) == 21
    assert len(lay.dummy) == 21 * math.ceil(2 * H / DP)
    assert np.all(lay.dummy[:, 1] < 0)


def test_nearest_wall_mapping():
    lay = horizontal_wall(0.0, 0.0, 0.05, DP, H)
    for d, w in zip(lay.dummy, lay.nearest_wall):
        assert lay.wall[w, 0] == pytest.approx(d[0])
    # equidistant dummy picks the lower index
    assert nearest_wall_index([[0.5, -1.0]], [[0.0, 0.0], [1.0, 0.0]])[0] == 0


def test_wall_and_dummy_pressure_from_fluid():
    lay = horizontal_wall(0.0, -0.1, 0.1, DP, H)
    g = DP * np.arange(-10, 11)
    X, Y = np.meshgrid(g, DP * np.arange(1, 8), indexing="ij")
    fluid = Particles.create(np.column_stack([X.ravel(), Y.ravel()]), rho=1000.0,
                             m=1000 * DP * DP, dp=DP)
    fluid.P[:] = 250.0
    wall = boundary_particles(lay, DP, 1000.0)
    p = Particles.concatenate([fluid, wall])
    nl = build_neighbors(p.x, 2 * H)
    pk = pair_kernel(nl, p.a, p.b, H)
    P = wall_pressure(nl, pk, p.P, p.m, p.rho, p.kind == FLUID)
    assert np.allclose(P[p.kind == WALL], 250.0)
    nw = len(fluid) + lay.nearest_wall
    assert np.allclose(dummy_pressure(P, nw), 250.0)
    assert set(np.unique(p.kind)) == {FLUID, WALL, DUMMY}


def test_support_check():
    lay = horizontal_wall(0.0, -0.05, 0.05, DP, H)
    assert support_is_complete(lay, [[0.0, 0.01]], H)
    assert not support_is_complete(lay, [[0.04, 0.01]], H)
    assert support_is_complete(lay, [[0.04, 0.5]], H)


def test_invalid_wall():
    with pytest.raises(ConfigurationError):
        horizontal_wall(0.0, 1.0, 0.0, DP, H)
