import math

import numpy as np
import pytest

from adaptsph.dispersion import (
    DispersionSpec,
    exact_omega,
    exact_wave_speed,
    gradient_renormalization,
    lattice_sums,
    long_wave_error,
    quadratic_coefficients,
    sph_omega,
    with_adapted_knots,
    zero_energy_scan,
)
from adaptsph.errors import ConfigurationError
from adaptsph.kernel import KnotPair


def tensile(dp, **kw):
    return DispersionSpec.from_density_ratio(0.99, tau_p_bar=2000.0, dp=dp, h=2.0, **kw)


def test_base_state():
    s = tensile(2.5)
    assert s.pressure_bar < 0
    assert s.stress == pytest.approx(-s.pressure_bar + 2000.0)
    assert s.modulus == pytest.approx(12.5**2 * 0.99**6)
    assert s.viscosity == pytest.approx(0.4 + (2000.0 + 3.6 / 0.02) * 0.02)


def test_exact_relation_inviscid_limit():
    s = DispersionSpec(rho_bar=1000.0, eta_s=0.0, eta_p=0.0, theta=0)
    k = np.array([0.1, 1.0])
    assert np.allclose(exact_omega(k, s), 12.5 * k)
    assert np.allclose(exact_wave_speed(k, s), 12.5)


def test_roots_solve_the_quadratic():
    s = tensile(2.5, knots=KnotPair(1.3, 2.0))
    k = s.wavenumbers()[::37]
    c2, c1, c0 = quadratic_coefficients(k, s)
    for om in sph_omega(k, s):
        assert np.max(np.abs(c2 * om**2 + c1 * om + c0) / np.abs(c0)) < 1e-9


def test_lattice_sums_parity():
    s = tensile(1.5)
    k = np.array([0.3, 1.1])
    A, B = lattice_sums(k, s)
    Am, Bm = lattice_sums(-k, s)
    assert np.allclose(Am, -A) and np.allclose(Bm, B)
    assert np.all(A < 0)  # dW/dr < 0 on the near neighbours


def test_gradient_renormalization_recovers_slope():
    s = tensile(1.5)
    k = 1e-4
    A, _ = lattice_sums(k, s)
    # corrected first moment makes A -> -k/dp for long waves
    assert A / k == pytest.approx(-1.0 / 1.5, rel=1e-6)
    assert gradient_renormalization(tensile(1.5, gradient_correction=False)) == 1.0


@pytest.mark.parametrize("dp", [2.5, 3.5])
def test_standard_knots_unstable_in_tension(dp):
    assert zero_energy_scan(tensile(dp)) != []


@pytest.mark.parametrize("dp", [1.5, 2.5, 3.5])
def test_adapted_knots_remove_zero_energy_modes(dp):
    s = with_adapted_knots(tensile(dp))
    assert zero_energy_scan(s) == []


def test_adapted_knots_follow_spacing():
    s = with_adapted_knots(tensile(2.5))
    assert s.knots.a == pytest.approx(2.556, abs=1e-3)
    assert s.knots.b == pytest.approx(2.691, abs=1e-3)


def test_compression_stability_follows_second_derivative_sign():
    # nearest neighbour beyond ab/(a+b) h = 4/3 sees W'' > 0: stable in compression
    stable = DispersionSpec.from_density_ratio(1.01, dp=1.5, h=2.0)
    assert stable.stress < 0
    assert zero_energy_scan(stable) == []
    # nearest neighbour inside the W'' < 0 zone: the k = pi/dp mode is lost
    unstable = DispersionSpec.from_density_ratio(1.01, dp=1.0, h=2.0)
    assert zero_energy_scan(unstable)[-1][1] == pytest.approx(unstable.k_max)


def test_long_wave_error_is_finite_and_small():
    err = long_wave_error(with_adapted_knots(tensile(2.5)))
    assert math.isfinite(err) and err < 0.05


def test_invalid_spec():
    with pytest.raises(ConfigurationError):
        DispersionSpec(rho_bar=-1.0)
    with pytest.raises(ConfigurationError):
        DispersionSpec(rho_bar=1000.0, dp=0.0)
