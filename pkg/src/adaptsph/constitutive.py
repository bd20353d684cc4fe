"""Weakly compressible equation of state and Oldroyd-B stresses.

Symmetric 2x2 tensors are stored as ``(..., 3)`` arrays ordered
``(xx, yy, xy)``. Velocity gradients are full ``(..., 2, 2)`` arrays with
``k[..., alpha, beta] = d v^alpha / d x^beta``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class MaterialParams:
    rho0: float = 1000.0
    c0: float = 12.5
    gamma_eos: float = 7.0
    eta_s: float = 0.0
    eta_p: float = 0.0
    lambda1: float = 1.0
    theta: int = 0
    gravity: tuple = field(default=(0.0, 0.0))

    def __post_init__(self):
        if self.rho0 <= 0 or self.c0 <= 0:
            raise ConfigurationError("rho0 and c0 must be positive")
        if self.gamma_eos < 1:
            raise ConfigurationError(f"gamma_eos must be >= 1, got {self.gamma_eos}")
        if self.eta_s < 0 or self.eta_p < 0:
            raise ConfigurationError("viscosities must be non-negative")
        if self.theta not in (0, 1):
            raise ConfigurationError(f"theta must be 0 or 1, got {self.theta}")
        if self.theta == 1 and self.lambda1 <= 0:
            raise ConfigurationError("relaxation time must be positive for Oldroyd-B")

    @property
    def pressure_scale(self) -> float:
        return self.rho0 * self.c0**2 / self.gamma_eos


@dataclass(frozen=True)
class StressState:
    pressure: np.ndarray
    tau_s: np.ndarray
    tau_p: np.ndarray
    total: np.ndarray


def pressure_eos(rho, p: MaterialParams):
    """Tait pressure ``rho0 c0^2/gamma ((rho/rho0)^gamma - 1)``."""
    return p.pressure_scale * ((np.asarray(rho) / p.rho0) ** p.gamma_eos - 1.0)


def density_from_pressure(P, p: MaterialParams):
    """Inverse of :func:`pressure_eos`."""
    return p.rho0 * (1.0 + np.asarray(P) / p.pressure_scale) ** (1.0 / p.gamma_eos)


def sound_speed(rho, p: MaterialParams):
    """Local sound speed ``sqrt(dP/drho)``."""
    return p.c0 * (np.asarray(rho) / p.rho0) ** (0.5 * (p.gamma_eos - 1.0))


def internal_energy(rho, p: MaterialParams):
    """Specific compression energy ``int_{rho0}^{rho} P(s)/s^2 ds`` (closed form)."""
    rho = np.asarray(rho, dtype=float)
    g = p.gamma_eos
    B = p.pressure_scale
    if g == 1.0:
        power = np.log(rho / p.rho0) / p.rho0
    else:
        power = (rho ** (g - 1.0) - p.rho0 ** (g - 1.0)) / ((g - 1.0) * p.rho0**g)
    return B * (power + 1.0 / rho - 1.0 / p.rho0)


def sym(k):
    """``k + k^T`` of full gradients packed as ``(xx, yy, xy)``."""
    k = np.asarray(k, dtype=float)
    return np.stack(
        [2.0 * k[..., 0, 0], 2.0 * k[..., 1, 1], k[..., 0, 1] + k[..., 1, 0]], axis=-1
    )


def solvent_stress(k, p: MaterialParams):
    return p.eta_s * sym(k)


def polymer_stress_rate(tau_p, k, p: MaterialParams):
    """Upper-convected Maxwell rate of the polymer stress.

    ``k tau + (k tau)^T - tau/lambda1 + eta_p/lambda1 (k + k^T)``.
    """
    if p.lambda1 <= 0:
        raise ConfigurationError("relaxation time must be positive")
    tau = np.asarray(tau_p, dtype=float)
    k = np.asarray(k, dtype=float)
    txx, tyy, txy = tau[..., 0], tau[..., 1], tau[..., 2]
    kxx, kxy, kyx, kyy = k[..., 0, 0], k[..., 0, 1], k[..., 1, 0], k[..., 1, 1]
    lam = p.lambda1
    g = p.eta_p / lam
    rxx = 2.0 * (kxx * txx + kxy * txy) - txx / lam + 2.0 * g * kxx
    ryy = 2.0 * (kyx * txy + kyy * tyy) - tyy / lam + 2.0 * g * kyy
    rxy = kxx * txy + kxy * tyy + kyx * txx + kyy * txy - txy / lam + g * (kxy + kyx)
    return np.stack([rxx, ryy, rxy], axis=-1)


def total_stress(P, tau_s, tau_p, p: MaterialParams):
    """``-P I + tau_s + theta tau_p`` packed as ``(xx, yy, xy)``."""
    P = np.asarray(P, dtype=float)
    out = np.array(tau_s, dtype=float, copy=True)
    if p.theta:
        out = out + np.asarray(tau_p, dtype=float)
    out[..., 0] -= P
    out[..., 1] -= P
    return out


def stress_state(rho, k, tau_p, p: MaterialParams) -> StressState:
    P = pressure_eos(rho, p)
    tau_s = solvent_stress(k, p)
    tau_p = np.asarray(tau_p, dtype=float)
    return StressState(P, tau_s, tau_p, total_stress(P, tau_s, tau_p, p))
