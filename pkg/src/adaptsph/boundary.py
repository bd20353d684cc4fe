"""No-slip rigid wall built from wall and dummy particle layers.

Wall particles sit on the wall line at the fluid spacing; dummy particles
fill a grid below it at least ``2h`` deep. Wall pressure is a Shepard
average of the fluid pressure, and each dummy copies the pressure of its
closest wall particle. Both layers take part in the continuity and momentum
sums with zero velocity and stress ``-P I``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .interactions import PairKernel, shepard_average
from .neighbors import NeighborList
from .particles import DUMMY, WALL, Particles


@dataclass
class WallLayout:
    wall: np.ndarray
    dummy: np.ndarray
    nearest_wall: np.ndarray
    y_wall: float
    depth: float


def nearest_wall_index(dummy, wall):
    """Index of the closest wall particle for each dummy; ties go to the lowest index."""
    dummy = np.asarray(dummy, dtype=float).reshape(-1, 2)
    wall = np.asarray(wall, dtype=float).reshape(-1, 2)
    out = np.empty(len(dummy), dtype=np.int64)
    for start in range(0, len(dummy), 1024):
        chunk = dummy[start : start + 1024]
        d2 = ((chunk[:, None, :] - wall[None, :, :]) ** 2).sum(-1)
        out[start : start + 1024] = np.argmin(d2, axis=1)
    return out


def horizontal_wall(y_wall, x_min, x_max, dp, h) -> WallLayout:
    """Wall line at ``y_wall`` over ``[x_min, x_max]`` with ``ceil(2h/dp)`` dummy rows."""
    if dp <= 0 or h <= 0 or x_max <= x_min:
        raise ConfigurationError("wall needs dp > 0, h > 0 and x_max > x_min")
    n = int(math.floor((x_max - x_min) / dp + 1e-9)) + 1
    xs = x_min + dp * np.arange(n)
    rows = int(math.ceil(2.0 * h / dp - 1e-9))
    wall = np.column_stack([xs, np.full(n, float(y_wall))])
    dummy = np.array([(xx, y_wall - k * dp) for k in range(1, rows + 1) for xx in xs])
    return WallLayout(wall, dummy, nearest_wall_index(dummy, wall), float(y_wall), rows * dp)


def boundary_particles(layout: WallLayout, dp, rho0) -> Particles:
    """Stationary particles for ``layout``; knots stay at the standard (1, 2)."""
    wall = Particles.create(layout.wall, rho=rho0, m=rho0 * dp * dp, kind=WALL, dp=dp)
    dummy = Particles.create(layout.dummy, rho=rho0, m=rho0 * dp * dp, kind=DUMMY, dp=dp)
    return Particles.concatenate([wall, dummy])


def wall_pressure(nl: NeighborList, pk: PairKernel, P, m, rho, fluid):
    """Shepard-weighted fluid pressure seen by every particle (0 when no fluid is near)."""
    return shepard_average(nl, pk, P, np.asarray(m) / np.asarray(rho), fluid)


def dummy_pressure(wall_P, nearest_wall):
    """Each dummy takes the pressure of its mapped wall particle."""
    return np.asarray(wall_P)[np.asarray(nearest_wall)]


def support_is_complete(layout: WallLayout, fluid_x, h) -> bool:
    """True when every fluid particle within 2h of the wall sees a full boundary layer."""
    fluid_x = np.asarray(fluid_x, dtype=float).reshape(-1, 2)
    near = fluid_x[:, 1] - layout.y_wall < 2.0 * h
    if layout.depth < 2.0 * h - 1e-12:
        return False
    if not np.any(near):
        return True
    xs = fluid_x[near, 0]
    return bool(xs.min() - 2.0 * h >= layout.wall[:, 0].min() - 1e-12
                and xs.max() + 2.0 * h <= layout.wall[:, 0].max() + 1e-12)
