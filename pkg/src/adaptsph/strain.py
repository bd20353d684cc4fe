"""Strain-based estimate of the farthest immediate neighbour and knot updates."""

from __future__ import annotations

import numpy as np

from .kernel import adapt_knots_array
from .particles import Particles

VISCOUS, INVISCID = "viscous", "inviscid"


def strain_rates(k):
    """``(exx, eyy, exy)`` from velocity gradients ``k[..., alpha, beta]``."""
    k = np.asarray(k, dtype=float)
    return k[..., 0, 0], k[..., 1, 1], 0.5 * (k[..., 0, 1] + k[..., 1, 0])


def accumulate_strain(p: Particles, k, dt, mask=None):
    """Advance the lattice-edge accumulators by one step of strain rate ``k``.

    Edge lengths grow multiplicatively, shear offsets by the strain rate times
    the previous edge length.
    """
    idx = slice(None) if mask is None else np.asarray(mask)
    exx, eyy, exy = strain_rates(np.asarray(k)[idx])
    dx_prev = p.dx_acc[idx].copy()
    dy_prev = p.dy_acc[idx].copy()
    p.dx_acc[idx] = dx_prev * (1.0 + exx * dt)
    p.dy_acc[idx] = dy_prev * (1.0 + eyy * dt)
    p.sxy_acc[idx] += exy * dy_prev * dt
    p.syx_acc[idx] += exy * dx_prev * dt


def farthest_neighbor_distance(dx_acc, dy_acc, sxy_acc, syx_acc, mode=VISCOUS):
    """Diagonal of the deformed lattice cell.

    Viscous mode takes the longer diagonal of the sheared cell; inviscid mode
    ignores shear.
    """
    dx_acc = np.asarray(dx_acc, dtype=float)
    dy_acc = np.asarray(dy_acc, dtype=float)
    if mode == INVISCID:
        return np.hypot(dx_acc, dy_acc)
    if mode != VISCOUS:
        raise ValueError(f"unknown strain mode {mode!r}")
    s1 = np.hypot(dx_acc + sxy_acc, dy_acc + syx_acc)
    s2 = np.hypot(dx_acc - sxy_acc, dy_acc - syx_acc)
    return np.maximum(s1, s2)


def update_knots(p: Particles, h, A=1.05, allow_extension=True, mode=VISCOUS):
    """Adapt fluid knots in place; boundary particles keep (1, 2).

    Returns the number of fluid particles that hit the (1.95, 2) clamp.
    """
    f = p.fluid
    r = farthest_neighbor_distance(p.dx_acc[f], p.dy_acc[f], p.sxy_acc[f], p.syx_acc[f], mode)
    a, b, ext, sat = adapt_knots_array(r, h, A, allow_extension)
    p.a[f] = a
    p.b[f] = b
    p.extended[f] = ext
    p.a[~f] = 1.0
    p.b[~f] = 2.0
    p.extended[~f] = False
    return int(sat.sum())


def pair_knots(a_i, b_i, a_j, b_j, mode="averaged"):
    """Knots used for the ``i``-owned pair ``(i, j)``."""
    if mode == "averaged":
        return 0.5 * (a_i + a_j), 0.5 * (b_i + b_j)
    return a_i, b_i
