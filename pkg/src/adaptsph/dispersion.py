"""1D dispersion relations of an Oldroyd-B bar: continuum and SPH lattice.

The polymer relaxation is treated in the long-time limit
(``|omega| << 1/lambda1``), which turns both relations into quadratics in
``omega``. A wavenumber is a zero-energy mode when the real part of the
dominant root vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigurationError
from .kernel import CUTOFF, KernelSpec, KnotPair, adapt_knots, shape

DEFAULT_SAMPLES = 512
ZERO_TOL = 1e-9


@dataclass(frozen=True)
class DispersionSpec:
    rho_bar: float
    rho0: float = 1000.0
    c0: float = 12.5
    gamma_eos: float = 7.0
    eta_s: float = 0.4
    eta_p: float = 3.6
    lambda1: float = 0.02
    theta: int = 1
    tau_p_bar: float = 0.0
    sigma_bar: float | None = None
    dp: float = 1.0
    h: float = 2.0
    knots: KnotPair = field(default_factory=KnotPair)
    k_grid: np.ndarray | None = None
    gradient_correction: bool = True

    def __post_init__(self):
        if self.rho_bar <= 0 or self.rho0 <= 0 or self.c0 <= 0:
            raise ConfigurationError("densities and sound speed must be positive")
        if self.dp <= 0 or self.h <= 0:
            raise ConfigurationError("dp and h must be positive")
        if self.theta == 1 and self.lambda1 <= 0:
            raise ConfigurationError("relaxation time must be positive")

    @classmethod
    def from_density_ratio(cls, ratio, rho0=1000.0, c0=12.5, gamma_eos=7.0, **kw):
        """Spec at ``rho_bar = ratio * rho0`` with the stress left to the EOS."""
        return cls(rho_bar=ratio * rho0, rho0=rho0, c0=c0, gamma_eos=gamma_eos, **kw)

    @property
    def pressure_bar(self) -> float:
        g = self.gamma_eos
        return self.rho0 * self.c0**2 / g * ((self.rho_bar / self.rho0) ** g - 1.0)

    @property
    def stress(self) -> float:
        """Base total stress ``-P + theta tau_p`` unless given explicitly."""
        if self.sigma_bar is not None:
            return self.sigma_bar
        return -self.pressure_bar + self.theta * self.tau_p_bar

    @property
    def modulus(self) -> float:
        """``M = c0^2 (rho_bar/rho0)^(gamma-1)``."""
        return self.c0**2 * (self.rho_bar / self.rho0) ** (self.gamma_eos - 1.0)

    @property
    def viscosity(self) -> float:
        """Effective damping coefficient ``Z``."""
        polymer = (self.tau_p_bar + self.eta_p / self.lambda1) * self.lambda1 if self.theta else 0.0
        return self.eta_s + polymer

    @property
    def k_max(self) -> float:
        return math.pi / self.dp

    def wavenumbers(self) -> np.ndarray:
        if self.k_grid is not None:
            return np.asarray(self.k_grid, dtype=float)
        return self.k_max * np.arange(1, DEFAULT_SAMPLES + 1) / DEFAULT_SAMPLES


def exact_omega(k, spec: DispersionSpec):
    """Dominant continuum root ``-i k^2 Z/rho + sqrt(M k^2 - k^4 Z^2/rho^2)``."""
    k = np.asarray(k, dtype=float)
    Z, rho = spec.viscosity, spec.rho_bar
    disc = spec.modulus * k**2 - k**4 * Z**2 / rho**2
    return -1j * k**2 * Z / rho + np.sqrt(disc.astype(complex))


def exact_wave_speed(k, spec: DispersionSpec):
    k = np.asarray(k, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        c = np.real(exact_omega(k, spec)) / k
    return np.where(k == 0, math.sqrt(spec.modulus), c)


def _neighbor_offsets(spec: DispersionSpec):
    n = np.arange(1, int(math.ceil(CUTOFF * spec.h / spec.dp)) + 1)
    xi = n * spec.dp
    return xi[xi < CUTOFF * spec.h]


def _derivatives(spec: DispersionSpec, xi):
    kern = KernelSpec(spec.knots, spec.h, dim=1)
    alpha = kern.alpha
    prof = np.array([shape(x / spec.h, spec.knots.a, spec.knots.b) for x in xi]).reshape(-1, 3)
    return alpha * prof[:, 1] / spec.h, alpha * prof[:, 2] / spec.h**2


def gradient_renormalization(spec: DispersionSpec) -> float:
    """1D correction factor ``(-sum_b dp xi dW/dx)^-1`` (1 when disabled)."""
    if not spec.gradient_correction:
        return 1.0
    xi = _neighbor_offsets(spec)
    if len(xi) == 0:
        return 1.0
    d1, _ = _derivatives(spec, xi)
    return 1.0 / (-2.0 * spec.dp * np.sum(xi * d1))


def lattice_terms(k, spec: DispersionSpec):
    """Per-neighbour contributions to A and B for offsets ``xi = +/- n dp``.

    Returns ``(xi, a_terms, b_terms)`` with one column per signed offset.
    """
    k = np.atleast_1d(np.asarray(k, dtype=float))
    xi = _neighbor_offsets(spec)
    d1, d2 = _derivatives(spec, xi)
    corr = gradient_renormalization(spec)
    xi_all = np.concatenate([xi, -xi])
    grad = corr * np.concatenate([d1, -d1])  # dW/dx_a is odd in xi
    curv = corr * np.concatenate([d2, d2])
    kx = k[:, None] * xi_all[None, :]
    return xi_all, np.sin(kx) * grad, (1.0 - np.cos(kx)) * curv


def lattice_sums(k, spec: DispersionSpec):
    """``A = sum sin(k xi) dW/dx`` and ``B = sum (1 - cos k xi) d2W/dx2``."""
    scalar = np.ndim(k) == 0
    _, ta, tb = lattice_terms(k, spec)
    A, B = ta.sum(axis=1), tb.sum(axis=1)
    if scalar:
        return float(A[0]), float(B[0])
    return A, B


def quadratic_coefficients(k, spec: DispersionSpec):
    """Coefficients ``(c2, c1, c0)`` of the SPH quadratic in omega."""
    A, B = lattice_sums(k, spec)
    dp, rho, sig = spec.dp, spec.rho_bar, spec.stress
    A2 = np.asarray(A) ** 2
    c2 = rho * np.ones_like(A2)
    c1 = 2j * A2 * dp**2 * spec.viscosity
    c0 = -spec.modulus * rho * dp**2 * A2 - 2.0 * sig * dp**2 * A2 + 2.0 * sig * dp * np.asarray(B)
    return c2, c1, c0


def sph_omega(k, spec: DispersionSpec):
    """Both roots of the SPH dispersion quadratic, dominant (+) root first."""
    A, B = lattice_sums(k, spec)
    A = np.asarray(A)
    dp, rho, sig, Z = spec.dp, spec.rho_bar, spec.stress, spec.viscosity
    damp = -1j * Z * dp**2 * A**2 / rho
    disc = (
        -(Z**2) * dp**4 * A**4 / rho**2
        - 2.0 * sig * dp * np.asarray(B) / rho
        + A**2 * dp**2 * (spec.modulus + 2.0 * sig / rho)
    )
    root = np.sqrt(np.asarray(disc, dtype=complex))
    return damp + root, damp - root


def sph_wave_speed(k, spec: DispersionSpec):
    k = np.asarray(k, dtype=float)
    return np.real(sph_omega(k, spec)[0]) / k


def zero_energy_scan(spec: DispersionSpec):
    """Contiguous wavenumber intervals where the dominant root is non-propagating."""
    k = spec.wavenumbers()
    re = np.real(sph_omega(k, spec)[0])
    dead = re < ZERO_TOL * math.sqrt(spec.modulus) * spec.k_max
    intervals = []
    start = None
    for i, flag in enumerate(dead):
        if flag and start is None:
            start = i
        if not flag and start is not None:
            intervals.append((float(k[start]), float(k[i - 1])))
            start = None
    if start is not None:
        intervals.append((float(k[start]), float(k[-1])))
    return intervals


def dispersion_table(spec: DispersionSpec):
    """Columns ``k, re_omega, im_omega, c_sph, c_exact`` over the spec's grid."""
    k = spec.wavenumbers()
    om = sph_omega(k, spec)[0]
    return {
        "k": k,
        "re_omega": om.real,
        "im_omega": om.imag,
        "c_sph": om.real / k,
        "c_exact": exact_wave_speed(k, spec),
    }


def long_wave_error(spec: DispersionSpec, fraction=0.1):
    """Largest relative wave-speed error for ``k <= fraction * pi/dp``."""
    k = spec.wavenumbers()
    k = k[k <= fraction * spec.k_max * (1 + 1e-12)]
    c_sph = sph_wave_speed(k, spec)
    c_ex = exact_wave_speed(k, spec)
    return float(np.max(np.abs(c_sph - c_ex) / c_ex))


def with_adapted_knots(spec: DispersionSpec, A=1.05, allow_extension=True) -> DispersionSpec:
    """Copy of ``spec`` whose knots come from the lattice spacing (``r_i = dp``)."""
    return replace(spec, knots=adapt_knots(spec.dp, spec.h, A, allow_extension))
