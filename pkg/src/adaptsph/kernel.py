"""Variable-knot cubic B-spline kernel.

The kernel is the cubic basis function built over the symmetric knot vector
``{-b, -a, 0, a, b}``. Moving the inner knot ``a`` slides the extremum of the
first derivative (located at ``ab/(a+b)``), which is what the adaptive scheme
exploits. With ``a = 1, b = 2`` the classic cubic B-spline is recovered.

The support is always truncated at ``2h``. When ``b > 2`` the truncated kernel
is renormalised so it still integrates to one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numba import njit

from .errors import ConfigurationError

CUTOFF = 2.0
A_SWITCH = 1.95
EXTENDED_RATIO = 0.95
EXTENSION_FACTOR = 2.05
DEFAULT_A = 1.05


@dataclass(frozen=True)
class KnotPair:
    """Inner and outer knot of the kernel, in units of ``h``."""

    a: float = 1.0
    b: float = 2.0
    extended: bool = False
    saturated: bool = False
    compression: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ConfigurationError(f"non-finite knots ({self.a}, {self.b})")
        if self.b <= 0:
            raise ConfigurationError(f"outer knot must be positive, got b={self.b}")
        if self.compression:
            if not (-self.b < self.a <= 0 or 0 < self.a < self.b):
                raise ConfigurationError(f"invalid compression-mode knots ({self.a}, {self.b})")
        elif not (0 < self.a < self.b):
            raise ConfigurationError(
                f"tension-mode knots need 0 < a < b, got ({self.a}, {self.b})"
            )


@dataclass(frozen=True)
class KernelEval:
    w: float
    dw: float
    d2w: float


@dataclass(frozen=True)
class KernelSpec:
    knots: KnotPair = field(default_factory=KnotPair)
    h: float = 1.0
    dim: int = 2

    def __post_init__(self):
        if self.h <= 0:
            raise ConfigurationError(f"smoothing length must be positive, got {self.h}")
        if self.dim not in (1, 2):
            raise ConfigurationError(f"dim must be 1 or 2, got {self.dim}")

    @property
    def truncation_radius(self) -> float:
        return CUTOFF * self.h

    @property
    def support(self) -> float:
        return min(self.knots.b, CUTOFF) * self.h

    @property
    def alpha(self) -> float:
        return normalization_constant(self.knots, self.h, self.dim)

    @property
    def renorm(self) -> float:
        """Ratio between the applied normalisation and the closed form."""
        closed = closed_form_alpha(self.knots.a, self.knots.b, self.h, self.dim)
        return self.alpha / closed


# ---------------------------------------------------------------------------
# compiled scalar core, shared with the particle solver


@njit(cache=True)
def shape(q, a, b):
    """Unnormalised kernel profile and its first two derivatives in ``q``."""
    if q >= b or q >= CUTOFF:
        return 0.0, 0.0, 0.0
    if q < a:
        d1 = a * a * b * (a + b)
        f = ((a + b) * q**3 - 3.0 * a * b * q * q + a * a * b * b) / d1
        f1 = (3.0 * (a + b) * q * q - 6.0 * a * b * q) / d1
        f2 = (6.0 * (a + b) * q - 6.0 * a * b) / d1
        return f, f1, f2
    d2 = b * (b * b - a * a)
    s = b - q
    return s**3 / d2, -3.0 * s * s / d2, 6.0 * s / d2


@njit(cache=True)
def _moment(a, b, m, cut):
    # integral of q**m * profile(q) over [0, cut]
    total = 0.0
    if a > 0.0:
        hi = min(a, cut)
        d1 = a * a * b * (a + b)
        total += (
            (a + b) * hi ** (m + 4) / (m + 4)
            - 3.0 * a * b * hi ** (m + 3) / (m + 3)
            + a * a * b * b * hi ** (m + 1) / (m + 1)
        ) / d1
    lo = max(a, 0.0)
    hi = min(b, cut)
    if hi > lo:
        d2 = b * (b * b - a * a)
        # (b - q)^3 = b^3 - 3 b^2 q + 3 b q^2 - q^3
        coef = (b**3, -3.0 * b * b, 3.0 * b, -1.0)
        acc = 0.0
        for p in range(4):
            e = p + m + 1
            acc += coef[p] * (hi**e - lo**e) / e
        total += acc / d2
    return total


@njit(cache=True)
def _closed_alpha(a, b, h, dim):
    if dim == 1:
        return 2.0 / (b * h)
    return 10.0 * (a + b) / (math.pi * b * (a * a + a * b + b * b) * h * h)


@njit(cache=True)
def alpha_for(a, b, h, dim):
    """Normalisation constant of the (possibly truncated) kernel."""
    if a > 0.0 and b <= CUTOFF:
        return _closed_alpha(a, b, h, dim)
    if dim == 1:
        return 1.0 / (h * 2.0 * _moment(a, b, 0, CUTOFF))
    return 1.0 / (h * h * 2.0 * math.pi * _moment(a, b, 1, CUTOFF))


# ---------------------------------------------------------------------------
# public API


def closed_form_alpha(a: float, b: float, h: float, dim: int) -> float:
    return float(_closed_alpha(a, b, h, dim))


@lru_cache(maxsize=4096)
def _cached_alpha(a, b, h, dim):
    return float(alpha_for(a, b, h, dim))


def normalization_constant(knots: KnotPair, h: float, dim: int) -> float:
    """Kernel normalisation constant.

    Closed form for ``0 < a < b <= 2``; otherwise the exact integral of the
    profile truncated at ``2h`` (renormalised truncation, compression mode).
    """
    if dim not in (1, 2):
        raise ConfigurationError(f"dim must be 1 or 2, got {dim}")
    return _cached_alpha(float(knots.a), float(knots.b), float(h), int(dim))


def evaluate(q: float, spec: KernelSpec) -> KernelEval:
    """Kernel value and radial derivatives at dimensionless distance ``q``."""
    if q < 0:
        raise ValueError(f"q must be non-negative, got {q}")
    alpha = spec.alpha
    f, f1, f2 = shape(float(q), spec.knots.a, spec.knots.b)
    return KernelEval(alpha * f, alpha * f1 / spec.h, alpha * f2 / spec.h**2)


def evaluate_array(q, spec: KernelSpec):
    """Vectorised ``evaluate``; returns ``(w, dw, d2w)`` arrays."""
    q = np.asarray(q, dtype=float)
    out = np.array([shape(qq, spec.knots.a, spec.knots.b) for qq in q.ravel()])
    out = out.reshape(q.shape + (3,))
    alpha = spec.alpha
    return alpha * out[..., 0], alpha * out[..., 1] / spec.h, alpha * out[..., 2] / spec.h**2


def extremum_location(knots: KnotPair, h: float) -> float:
    """Distance at which ``|dW/dr|`` peaks: ``ab/(a+b) h``."""
    return knots.a * knots.b / (knots.a + knots.b) * h


def swegle_stable_tension(q: float, spec: KernelSpec) -> bool:
    """True when ``W'' < 0`` at ``q``, i.e. a neighbour there is stable in tension.

    The inflection point itself counts as unstable.
    """
    if spec.knots.a <= 0:
        return False
    return q * spec.h < extremum_location(spec.knots, spec.h)


def adapt_knots_array(r_i, h, A=DEFAULT_A, allow_extension=True):
    """Knot update for an array of farthest-immediate-neighbour distances.

    Returns ``(a, b, extended, saturated)`` arrays.
    """
    r_i = np.asarray(r_i, dtype=float)
    if np.any(~(r_i > 0)):
        raise ValueError("farthest-neighbour distance must be positive")
    r_star = A * r_i
    denom = CUTOFF * h - r_star
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(denom > 0, CUTOFF * r_star / denom, np.inf)
    b = np.full_like(a, CUTOFF)
    over = a > A_SWITCH
    extended = over & bool(allow_extension)
    saturated = over & (not allow_extension)
    b = np.where(extended, EXTENSION_FACTOR * r_star / h, b)
    a = np.where(extended, EXTENDED_RATIO * b, a)
    a = np.where(saturated, A_SWITCH, a)
    return a, b, extended, saturated


def adapt_knots(r_i: float, h: float, A: float = DEFAULT_A, allow_extension: bool = True) -> KnotPair:
    """Place the derivative extremum just beyond the farthest immediate neighbour.

    ``r* = A r_i`` and ``a = 2 r*/(2h - r*)`` with ``b = 2``. Once ``a`` exceeds
    1.95 the outer knot moves too (``b = 2.05 r*/h``, ``a = 0.95 b``) or, when
    extension is not allowed, the knots saturate at ``(1.95, 2)``.
    """
    if not r_i > 0:
        raise ValueError(f"farthest-neighbour distance must be positive, got {r_i}")
    if not 1.0 < A:
        raise ConfigurationError(f"knot multiplier A must exceed 1, got {A}")
    a, b, ext, sat = adapt_knots_array(np.array([r_i]), h, A, allow_extension)
    return KnotPair(float(a[0]), float(b[0]), extended=bool(ext[0]), saturated=bool(sat[0]))
