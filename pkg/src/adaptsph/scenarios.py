"""Initial states for the drop-impact and rotating-patch problems."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import constitutive as cm
from .boundary import boundary_particles, horizontal_wall, support_is_complete
from .config import SimulationConfig
from .errors import ConfigurationError
from .particles import FLUID, Particles

# Lattice points within R + PERIPHERY_TOL * dp of the centre belong to the
# drop; this keeps the outermost ring that straddles the circle.
PERIPHERY_TOL = 0.25


@dataclass
class Scenario:
    particles: Particles
    nearest_wall: np.ndarray | None = None
    info: dict = field(default_factory=dict)


def disc_stencil(radius, dp):
    """Square-lattice points of a disc centred at the origin.

    Returns ``(x, periphery)`` where ``periphery`` flags points missing at
    least one of their four axial lattice neighbours.
    """
    if radius <= 0 or dp <= 0:
        raise ConfigurationError("radius and dp must be positive")
    reach = radius / dp + PERIPHERY_TOL
    n = int(math.ceil(reach))
    i, j = np.meshgrid(np.arange(-n, n + 1), np.arange(-n, n + 1), indexing="ij")
    inside = np.hypot(i, j) <= reach + 1e-9
    keep = np.argwhere(inside) - n
    pad = np.pad(inside, 1)
    ii, jj = keep[:, 0] + n + 1, keep[:, 1] + n + 1
    full = pad[ii + 1, jj] & pad[ii - 1, jj] & pad[ii, jj + 1] & pad[ii, jj - 1]
    return keep.astype(float) * dp, ~full


def disc_volumes(periphery, radius, dp):
    """Interior volume ``dp^2``; periphery volumes scaled so the sum is ``pi R^2``."""
    periphery = np.asarray(periphery, dtype=bool)
    n_int = int((~periphery).sum())
    n_per = int(periphery.sum())
    rest = math.pi * radius**2 - n_int * dp * dp
    if n_per == 0 or rest <= 0:
        raise ConfigurationError("disc too coarse to distribute the periphery volume")
    vol = np.full(len(periphery), dp * dp)
    vol[periphery] = rest / n_per
    return vol


def build_drop(cfg: SimulationConfig) -> Scenario:
    """Disc of fluid above a no-slip wall, falling at ``drop_speed``."""
    if cfg.scenario != "drop":
        raise ConfigurationError("build_drop needs a drop config")
    mat, dp, h = cfg.material, cfg.dp, cfg.h
    R = cfg.drop_radius
    if cfg.drop_height - R <= 2.0 * h:
        raise ConfigurationError("drop must start clear of the wall's kernel support")
    offsets, periphery = disc_stencil(R, dp)
    vol = disc_volumes(periphery, R, dp)
    x = offsets + np.array([0.0, cfg.drop_height])
    fluid = Particles.create(x, v=np.tile([0.0, -cfg.drop_speed], (len(x), 1)), rho=mat.rho0,
                             m=mat.rho0 * vol, kind=FLUID, dp=dp, gamma=cfg.gamma)

    layout = horizontal_wall(0.0, -cfg.wall_half_width, cfg.wall_half_width, dp, h)
    if not support_is_complete(layout, x, h):
        raise ConfigurationError("wall too narrow for the drop")
    wall = boundary_particles(layout, dp, mat.rho0)
    particles = Particles.concatenate([fluid, wall])
    nearest = len(fluid) + layout.nearest_wall  # walls precede dummies
    info = {"n_fluid": len(fluid), "n_periphery": int(periphery.sum()), "radius": R}
    return Scenario(particles, nearest, info)


def patch_pressure(x, y, length=1.0, omega=1.0, rho=1000.0, n_series=25):
    """Pressure balancing the rigid-rotation field on a square patch.

    Double sine series over odd indices up to ``n_series`` (inclusive when
    odd). Coordinates are relative to the patch centre.
    """
    if n_series < 1:
        raise ConfigurationError("n_series must be >= 1")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    L = float(length)
    odd = np.arange(1, n_series + 1, 2, dtype=float)
    xs = (x + 0.5 * L)[..., None]
    ys = (y + 0.5 * L)[..., None]
    sx = np.sin(odd * np.pi * xs / L)
    sy = np.sin(odd * np.pi * ys / L)
    mm, nn = np.meshgrid(odd, odd, indexing="ij")
    coef = -32.0 * omega**2 / (mm * nn * np.pi**2) / ((nn * np.pi / L) ** 2 + (mm * np.pi / L) ** 2)
    return rho * np.einsum("...m,mn,...n->...", sx, coef, sy)


def viscosity_schedule(P, p_max_tension, gamma_min=(0.1, 0.1), gamma_max=(0.8, 0.8)):
    """Artificial-viscosity pair interpolated linearly in pressure.

    Compressive points (``P >= 0``) get ``gamma_min``, the point of largest
    tension ``p_max_tension < 0`` gets ``gamma_max``.
    """
    if p_max_tension >= 0:
        raise ConfigurationError("p_max_tension must be negative")
    s = np.clip(np.asarray(P, dtype=float) / p_max_tension, 0.0, 1.0)
    g1 = gamma_min[0] + s * (gamma_max[0] - gamma_min[0])
    g2 = gamma_min[1] + s * (gamma_max[1] - gamma_min[1])
    return g1, g2


def build_patch(cfg: SimulationConfig) -> Scenario:
    """Square patch in rigid rotation with its balancing pressure field."""
    if cfg.scenario != "patch":
        raise ConfigurationError("build_patch needs a patch config")
    mat, dp, L = cfg.material, cfg.dp, cfg.patch_length
    n = int(round(L / dp))
    if n < 2 or abs(n * dp - L) > 1e-9 * L:
        raise ConfigurationError(f"patch_length {L} is not a multiple of dp {dp}")
    c = -0.5 * L + dp * (np.arange(n) + 0.5)
    X, Y = np.meshgrid(c, c, indexing="ij")
    x = np.column_stack([X.ravel(), Y.ravel()])
    v = cfg.omega * np.column_stack([x[:, 1], -x[:, 0]])
    P = patch_pressure(x[:, 0], x[:, 1], L, cfg.omega, mat.rho0, cfg.n_series)
    rho = cm.density_from_pressure(P, mat)
    p = Particles.create(x, v=v, rho=rho, m=rho * dp * dp, kind=FLUID, dp=dp, gamma=cfg.gamma)
    info = {"n_fluid": len(p), "p_max_tension": float(P.min())}
    if cfg.visc == "pressure_scheduled":
        p.gamma1, p.gamma2 = viscosity_schedule(P, P.min(), cfg.gamma_min, cfg.gamma_max)
    return Scenario(p, None, info)


def build(cfg: SimulationConfig) -> Scenario:
    return build_drop(cfg) if cfg.scenario == "drop" else build_patch(cfg)
