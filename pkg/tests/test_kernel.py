import math

import numpy as np
import pytest
from scipy.integrate import quad

from adaptsph.errors import ConfigurationError
from adaptsph.kernel import (
    KernelSpec,
    KnotPair,
    adapt_knots,
    adapt_knots_array,
    closed_form_alpha,
    evaluate,
    evaluate_array,
    extremum_location,
    shape,
    swegle_stable_tension,
)


def classic_cubic(q):
    """Textbook cubic B-spline shape (unnormalised, peak 2/3 at q = 0)."""
    if q < 1:
        return 2 / 3 - q**2 + 0.5 * q**3
    if q < 2:
        return (2 - q) ** 3 / 6
    return 0.0


def integral(spec: KernelSpec):
    h = spec.h
    pts = sorted({x * h for x in (abs(spec.knots.a), min(spec.knots.b, 2.0)) if 0 < x < 2})
    if spec.dim == 1:
        f = lambda r: 2 * evaluate(r / h, spec).w  # noqa: E731
    else:
        f = lambda r: 2 * math.pi * r * evaluate(r / h, spec).w  # noqa: E731
    return quad(f, 0, 2 * h, points=pts or None, limit=200, epsabs=1e-13, epsrel=1e-12)[0]


def test_classic_recovery():
    for q in np.linspace(0, 2.2, 57):
        f, _, _ = shape(q, 1.0, 2.0)
        assert abs(f - classic_cubic(q)) < 1e-12
    spec = KernelSpec(KnotPair(1.0, 2.0), h=1.3, dim=1)
    assert abs(evaluate(0.0, spec).w - 2 / 3 / 1.3) < 1e-12
    spec2 = KernelSpec(KnotPair(1.0, 2.0), h=0.7, dim=2)
    # textbook 2D constant 10/(7 pi h^2) goes with the 3/2-scaled shape
    assert abs(spec2.alpha - 1.5 * 10 / (7 * math.pi * 0.49)) < 1e-12


def test_closed_form_alpha():
    assert closed_form_alpha(1.0, 2.0, 1.0, 1) == pytest.approx(1.0)
    assert closed_form_alpha(1.0, 2.0, 1.0, 2) == pytest.approx(30 / (2 * math.pi * 7))


@pytest.mark.parametrize("dim", [1, 2])
def test_normalisation_random_knots(dim):
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(60):
        b = rng.uniform(0.3, 3.0)
        a = rng.uniform(0.05, 0.98) * b
        spec = KernelSpec(KnotPair(a, b), h=rng.uniform(0.5, 2.0), dim=dim)
        worst = max(worst, abs(integral(spec) - 1.0))
    assert worst < 1e-6


def test_truncated_kernel_is_renormalised():
    spec = KernelSpec(KnotPair(2.5561, 2.6906), h=2.0, dim=2)
    assert spec.renorm > 1.0
    assert evaluate(2.0, spec).w == 0.0
    assert abs(integral(spec) - 1) < 1e-8


@pytest.mark.parametrize("a,b", [(1.0, 2.0), (1.3, 2.0), (1.9, 2.0), (0.5, 1.5)])
def test_second_derivative_sign_change(a, b):
    spec = KernelSpec(KnotPair(a, b), h=1.0, dim=2)
    q0 = extremum_location(spec.knots, 1.0)
    assert evaluate(0.98 * q0, spec).d2w < 0
    assert evaluate(1.02 * q0, spec).d2w > 0
    assert abs(evaluate(q0, spec).d2w) < 1e-10
    assert swegle_stable_tension(0.98 * q0, spec)
    assert not swegle_stable_tension(1.02 * q0, spec)


@pytest.mark.parametrize("a", [0.0, -1.0])
def test_compression_mode_convex(a):
    spec = KernelSpec(KnotPair(a, 2.0, compression=True), h=1.0, dim=2)
    q = np.linspace(1e-6, 1.999, 400)
    _, dw, d2w = evaluate_array(q, spec)
    assert np.all(d2w >= -1e-12)
    assert np.all(dw <= 0)
    assert abs(integral(spec) - 1) < 1e-8


def test_derivatives_match_finite_differences():
    spec = KernelSpec(KnotPair(1.3, 2.0), h=1.0, dim=1)
    for q in (0.3, 0.9, 1.5, 1.8):
        e = 1e-6
        w0, w1 = evaluate(q - e, spec), evaluate(q + e, spec)
        assert (w1.w - w0.w) / (2 * e) == pytest.approx(evaluate(q, spec).dw, rel=1e-6)
        assert (w1.dw - w0.dw) / (2 * e) == pytest.approx(evaluate(q, spec).d2w, rel=1e-5)


def test_continuity_at_inner_knot():
    a, b = 1.4, 2.0
    lo = np.array(shape(a - 1e-9, a, b))
    hi = np.array(shape(a, a, b))
    assert np.allclose(lo, hi, atol=1e-7)


@pytest.mark.parametrize("r,a,b", [(1.5, 1.30, 2.0), (2.5, 2.56, 2.69), (3.5, 3.58, 3.77)])
def test_adapt_knots_reference_triples(r, a, b):
    k = adapt_knots(r, h=2.0, A=1.05)
    assert k.a == pytest.approx(a, abs=0.01)
    assert k.b == pytest.approx(b, abs=0.01)


def test_adapt_knots_places_extremum_beyond_neighbour():
    for r in (1.0, 1.5, 1.9, 2.5, 3.5):
        k = adapt_knots(r, h=2.0)
        q_star = extremum_location(k, 2.0)
        if not k.extended:
            assert q_star == pytest.approx(1.05 * r)
        assert q_star > r


def test_adapt_knots_saturation_without_extension():
    k = adapt_knots(3.5, h=2.0, allow_extension=False)
    assert (k.a, k.b) == (1.95, 2.0) and k.saturated and not k.extended


def test_adapt_knots_monotone_within_regimes():
    r = np.linspace(0.2, 4.0, 400)
    a, b, ext, _ = adapt_knots_array(r, 2.0)
    assert np.all(np.diff(b) >= 0)
    for region in (~ext, ext):
        assert np.all(np.diff(a[region]) > 0)


def test_invalid_inputs():
    with pytest.raises(ConfigurationError):
        KnotPair(2.0, 1.0)
    with pytest.raises(ConfigurationError):
        KernelSpec(KnotPair(), h=0.0)
    with pytest.raises(ValueError):
        adapt_knots(0.0, 2.0)
    with pytest.raises(ValueError):
        evaluate(-0.1, KernelSpec())
