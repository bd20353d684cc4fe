"""Rate assembly and modified-Euler (Heun) time stepping."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import constitutive as cm
from .boundary import dummy_pressure, wall_pressure
from .errors import ConfigurationError, SimulationError
from .interactions import AVERAGED, PER_PARTICLE, corrected, mls_density, pair_kernel
from .interactions import continuity_rate, momentum_rate, velocity_gradient
from .neighbors import NeighborList, build_neighbors, pair_geometry
from .particles import DUMMY, FLUID, KIND_NAMES, WALL, Particles
from .strain import INVISCID, VISCOUS, accumulate_strain, update_knots

log = logging.getLogger(__name__)

STANDARD, ADAPTIVE = "standard", "adaptive"


@dataclass
class SolverSettings:
    h: float
    dt: float
    material: cm.MaterialParams
    kernel_mode: str = ADAPTIVE
    A: float = 1.05
    allow_extension: bool = True
    interaction_mode: str = AVERAGED
    strain_mode: str = VISCOUS
    gradient_correction: bool = False
    reinit_every: int = 0

    def __post_init__(self):
        if self.h <= 0 or self.dt <= 0:
            raise ConfigurationError("h and dt must be positive")
        if self.kernel_mode not in (STANDARD, ADAPTIVE):
            raise ConfigurationError(f"unknown kernel mode {self.kernel_mode!r}")
        if self.interaction_mode not in (AVERAGED, PER_PARTICLE):
            raise ConfigurationError(f"unknown interaction mode {self.interaction_mode!r}")
        if self.strain_mode not in (VISCOUS, INVISCID):
            raise ConfigurationError(f"unknown strain mode {self.strain_mode!r}")
        if self.reinit_every < 0:
            raise ConfigurationError("reinit_every must be >= 0")


@dataclass
class Rates:
    drho: np.ndarray
    dv: np.ndarray
    dtau: np.ndarray
    k: np.ndarray
    P: np.ndarray
    fallbacks: int = 0


@dataclass
class Counters:
    correction_fallbacks: int = 0
    mls_fallbacks: int = 0
    saturated: int = 0


def refresh(nl: NeighborList, x) -> NeighborList:
    """Same pair table, geometry recomputed for positions ``x``."""
    dx, dy, r = pair_geometry(np.ascontiguousarray(x, dtype=float), nl.offsets, nl.indices)
    return NeighborList(nl.offsets, nl.indices, dx, dy, r, nl.cutoff)


def boundary_pressure(p: Particles, nl, pk, nearest_wall):
    """Overwrite wall and dummy pressures in a copy of ``p.P``."""
    P = p.P.copy()
    walls = p.kind == WALL
    if not walls.any():
        return P
    shep = wall_pressure(nl, pk, p.P, p.m, p.rho, p.kind == FLUID)
    P[walls] = shep[walls]
    dummies = p.kind == DUMMY
    if dummies.any():
        P[dummies] = dummy_pressure(P, nearest_wall)
    return P


def evaluate_rates(p: Particles, nl: NeighborList, s: SolverSettings, nearest_wall=None) -> Rates:
    """All time derivatives for the configuration ``p`` using pairs ``nl``."""
    mat = s.material
    fluid = p.kind == FLUID
    vol = p.m / p.rho
    pk = pair_kernel(nl, p.a, p.b, s.h, s.interaction_mode)
    if s.gradient_correction:
        pk = corrected(nl, pk, vol, active=fluid)
    P = boundary_pressure(p, nl, pk, nearest_wall)

    k = velocity_gradient(nl, pk, p.v, p.m, p.rho)
    k[~fluid] = 0.0
    sigma = np.zeros((len(p), 3))
    sigma[fluid] = cm.total_stress(P[fluid], cm.solvent_stress(k[fluid], mat), p.tau[fluid], mat)
    sigma[~fluid, 0] = -P[~fluid]
    sigma[~fluid, 1] = -P[~fluid]
    c = cm.sound_speed(p.rho, mat)

    drho = continuity_rate(nl, pk, p.v, p.m)
    dv = momentum_rate(nl, pk, p.m, p.rho, sigma, c, p.gamma1, p.gamma2, p.v, s.h,
                       gravity=mat.gravity, active=fluid)
    dtau = np.zeros_like(p.tau)
    if mat.theta == 1:
        dtau[fluid] = cm.polymer_stress_rate(p.tau[fluid], k[fluid], mat)
    return Rates(drho, dv, dtau, k, P, pk.fallbacks)


def total_energy(p: Particles, mat: cm.MaterialParams, datum=(0.0, 0.0)):
    """Kinetic + gravitational + compression energy of the fluid particles."""
    f = p.fluid
    m = p.m[f]
    ke = 0.5 * np.sum(m * np.sum(p.v[f] ** 2, axis=1))
    g = np.asarray(mat.gravity, dtype=float)
    pe = -np.sum(m * ((p.x[f] - np.asarray(datum)) @ g))
    ie = np.sum(m * cm.internal_energy(p.rho[f], mat))
    return float(ke + pe + ie)


def _check_finite(p: Particles, step):
    fields = np.column_stack([p.x, p.v, p.rho, p.tau])
    bad = ~np.all(np.isfinite(fields), axis=1) | (p.rho <= 0)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        dump = {
            "id": int(p.id[i]), "kind": KIND_NAMES[int(p.kind[i])],
            "x": p.x[i].tolist(), "v": p.v[i].tolist(), "rho": float(p.rho[i]),
            "P": float(p.P[i]), "tau": p.tau[i].tolist(), "a": float(p.a[i]), "b": float(p.b[i]),
        }
        raise SimulationError(f"non-finite state at step {step}: {dump}", step=step, particle=dump)


class Solver:
    """Owns the particle state and advances it with a fixed time step."""

    def __init__(self, particles: Particles, settings: SolverSettings, nearest_wall=None):
        self.p = particles
        self.s = settings
        self.t = 0.0
        self.step_count = 0
        self.counters = Counters()
        self.nearest_wall = nearest_wall
        fluid = self.p.fluid
        self.p.P[fluid] = cm.pressure_eos(self.p.rho[fluid], settings.material)
        if settings.kernel_mode == STANDARD:
            self.p.a[:] = 1.0
            self.p.b[:] = 2.0
            self.p.extended[:] = False
        else:
            self._adapt()

    @property
    def cutoff(self):
        return 2.0 * self.s.h

    def neighbors(self, x=None) -> NeighborList:
        return build_neighbors(self.p.x if x is None else x, self.cutoff)

    def _adapt(self):
        s = self.s
        self.counters.saturated = update_knots(self.p, s.h, s.A, s.allow_extension, s.strain_mode)

    def rates(self, p=None, nl=None) -> Rates:
        p = self.p if p is None else p
        nl = self.neighbors(p.x) if nl is None else nl
        return evaluate_rates(p, nl, self.s, self.nearest_wall)

    def step(self):
        p, s, dt = self.p, self.s, self.s.dt
        f = p.fluid
        nl = self.neighbors()
        if s.kernel_mode == ADAPTIVE:
            self._adapt()
        r0 = evaluate_rates(p, nl, s, self.nearest_wall)
        if s.kernel_mode == ADAPTIVE:
            accumulate_strain(p, r0.k, dt, f)

        q = p.copy()
        q.x[f] += dt * p.v[f]
        q.v[f] += dt * r0.dv[f]
        q.rho += dt * r0.drho
        q.tau[f] += dt * r0.dtau[f]
        q.P[f] = cm.pressure_eos(q.rho[f], s.material)
        q.P[~f] = r0.P[~f]
        r1 = evaluate_rates(q, refresh(nl, q.x), s, self.nearest_wall)

        half = 0.5 * dt
        p.x[f] += half * (p.v[f] + q.v[f])
        p.v[f] += half * (r0.dv[f] + r1.dv[f])
        p.rho += half * (r0.drho + r1.drho)
        p.tau[f] += half * (r0.dtau[f] + r1.dtau[f])
        p.P[f] = cm.pressure_eos(p.rho[f], s.material)
        p.P[~f] = r1.P[~f]
        self.counters.correction_fallbacks += r0.fallbacks + r1.fallbacks

        self.step_count += 1
        self.t = self.step_count * dt
        if s.reinit_every and self.step_count % s.reinit_every == 0:
            self.reinitialize_density()
        _check_finite(p, self.step_count)

    def reinitialize_density(self):
        p = self.p
        f = p.fluid
        nl = self.neighbors()
        pk = pair_kernel(nl, p.a, p.b, self.s.h, self.s.interaction_mode)
        rho, fallbacks = mls_density(nl, pk, p.m, p.rho, active=f)
        p.rho[f] = rho[f]
        p.P[f] = cm.pressure_eos(p.rho[f], self.s.material)
        self.counters.mls_fallbacks += fallbacks

    def energy(self):
        return total_energy(self.p, self.s.material)
