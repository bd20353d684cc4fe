"""Pairwise SPH sums: kernel tables, gradient correction, rates, MLS density.

Every function works on the directed pair table of a :class:`NeighborList`;
``gx``/``gy`` always denote ``dW_ij/dx_i`` for the pair owned by ``i``.
Loops are serial so reductions happen in a fixed order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .kernel import alpha_for, shape
from .neighbors import NeighborList

AVERAGED, PER_PARTICLE = "averaged", "per_particle"
COND_LIMIT = 1e8
EPS_VISC = 0.01


@dataclass
class PairKernel:
    """Kernel table for one configuration."""

    w: np.ndarray
    dwdr: np.ndarray
    gx: np.ndarray
    gy: np.ndarray
    w_self: np.ndarray
    corrected: bool = False
    fallbacks: int = 0


@njit(cache=True)
def _pair_table(offsets, indices, r, dx, dy, a, b, h, averaged):
    n = offsets.shape[0] - 1
    npair = indices.shape[0]
    w = np.empty(npair)
    dwdr = np.empty(npair)
    gx = np.empty(npair)
    gy = np.empty(npair)
    w_self = np.empty(n)
    for i in range(n):
        al = alpha_for(a[i], b[i], h, 2)
        w_self[i] = al * shape(0.0, a[i], b[i])[0]
        for s in range(offsets[i], offsets[i + 1]):
            j = indices[s]
            if averaged:
                aa = 0.5 * (a[i] + a[j])
                bb = 0.5 * (b[i] + b[j])
                alpha = alpha_for(aa, bb, h, 2)
            else:
                aa = a[i]
                bb = b[i]
                alpha = al
            f, f1, _ = shape(r[s] / h, aa, bb)
            w[s] = alpha * f
            d = alpha * f1 / h
            dwdr[s] = d
            if r[s] > 0.0:
                gx[s] = d * dx[s] / r[s]
                gy[s] = d * dy[s] / r[s]
            else:
                gx[s] = 0.0
                gy[s] = 0.0
    return w, dwdr, gx, gy, w_self


def pair_kernel(nl: NeighborList, a, b, h, mode=AVERAGED) -> PairKernel:
    """Evaluate ``W_ij`` and ``grad_i W_ij`` for every directed pair.

    In averaged mode the pair uses ``((a_i+a_j)/2, (b_i+b_j)/2)`` so that
    ``W_ij = W_ji``; in per-particle mode the owner's knots are used.
    """
    w, dwdr, gx, gy, w_self = _pair_table(
        nl.offsets, nl.indices, nl.r, nl.dx, nl.dy,
        np.ascontiguousarray(a, dtype=float), np.ascontiguousarray(b, dtype=float),
        float(h), mode == AVERAGED,
    )
    return PairKernel(w, dwdr, gx, gy, w_self)


@njit(cache=True)
def _correction(offsets, indices, dx, dy, gx, gy, vol, active, cond_limit):
    n = offsets.shape[0] - 1
    M = np.zeros((n, 2, 2))
    fallbacks = 0
    for i in range(n):
        M[i, 0, 0] = 1.0
        M[i, 1, 1] = 1.0
        if not active[i]:
            continue
        l00 = 0.0
        l01 = 0.0
        l10 = 0.0
        l11 = 0.0
        for s in range(offsets[i], offsets[i + 1]):
            vj = vol[indices[s]]
            l00 -= vj * dx[s] * gx[s]
            l01 -= vj * dx[s] * gy[s]
            l10 -= vj * dy[s] * gx[s]
            l11 -= vj * dy[s] * gy[s]
        # the moment matrix is symmetric for radial kernels; enforce it
        off = 0.5 * (l01 + l10)
        det = l00 * l11 - off * off
        tr = l00 + l11
        disc = np.sqrt(max(0.25 * (l00 - l11) ** 2 + off * off, 0.0))
        lmax = abs(0.5 * tr) + disc
        lmin = abs(abs(0.5 * tr) - disc)
        if det == 0.0 or lmin == 0.0 or lmax / lmin > cond_limit:
            fallbacks += 1
            continue
        M[i, 0, 0] = l11 / det
        M[i, 1, 1] = l00 / det
        M[i, 0, 1] = -off / det
        M[i, 1, 0] = -off / det
    return M, fallbacks


def correction_matrices(nl: NeighborList, pk: PairKernel, vol, active=None):
    """Renormalisation matrices ``M_i = (-sum_j V_j x_ij (x) grad W_ij)^-1``.

    Particles that are inactive, singular or worse conditioned than 1e8 get
    the identity; their number is returned alongside.
    """
    n = len(nl)
    active = np.ones(n, dtype=bool) if active is None else np.asarray(active, dtype=bool)
    return _correction(
        nl.offsets, nl.indices, nl.dx, nl.dy, pk.gx, pk.gy,
        np.ascontiguousarray(vol, dtype=float), active, COND_LIMIT,
    )


@njit(cache=True)
def _apply_correction(offsets, gx, gy, M):
    n = offsets.shape[0] - 1
    cx = np.empty_like(gx)
    cy = np.empty_like(gy)
    for i in range(n):
        for s in range(offsets[i], offsets[i + 1]):
            cx[s] = M[i, 0, 0] * gx[s] + M[i, 0, 1] * gy[s]
            cy[s] = M[i, 1, 0] * gx[s] + M[i, 1, 1] * gy[s]
    return cx, cy


def corrected(nl: NeighborList, pk: PairKernel, vol, active=None) -> PairKernel:
    """Copy of ``pk`` with gradients multiplied by the owner's matrix."""
    M, fallbacks = correction_matrices(nl, pk, vol, active)
    gx, gy = _apply_correction(nl.offsets, pk.gx, pk.gy, M)
    return PairKernel(pk.w, pk.dwdr, gx, gy, pk.w_self, corrected=True, fallbacks=fallbacks)


@njit(cache=True)
def _velocity_gradient(offsets, indices, gx, gy, v, vol):
    n = offsets.shape[0] - 1
    k = np.zeros((n, 2, 2))
    for i in range(n):
        for s in range(offsets[i], offsets[i + 1]):
            j = indices[s]
            vj = vol[j]
            du = v[j, 0] - v[i, 0]
            dv = v[j, 1] - v[i, 1]
            k[i, 0, 0] += vj * du * gx[s]
            k[i, 0, 1] += vj * du * gy[s]
            k[i, 1, 0] += vj * dv * gx[s]
            k[i, 1, 1] += vj * dv * gy[s]
    return k


def velocity_gradient(nl: NeighborList, pk: PairKernel, v, m, rho):
    """``k_i = sum_j (m_j/rho_j)(v_j - v_i) (x) grad_i W_ij`` for all particles."""
    return _velocity_gradient(nl.offsets, nl.indices, pk.gx, pk.gy,
                              np.ascontiguousarray(v, dtype=float), np.asarray(m) / np.asarray(rho))


@njit(cache=True)
def _continuity(offsets, indices, gx, gy, v, m):
    n = offsets.shape[0] - 1
    out = np.zeros(n)
    for i in range(n):
        acc = 0.0
        for s in range(offsets[i], offsets[i + 1]):
            j = indices[s]
            acc += m[j] * ((v[i, 0] - v[j, 0]) * gx[s] + (v[i, 1] - v[j, 1]) * gy[s])
        out[i] = acc
    return out


def continuity_rate(nl: NeighborList, pk: PairKernel, v, m):
    """``drho_i/dt = sum_j m_j (v_i - v_j) . grad_i W_ij``."""
    return _continuity(nl.offsets, nl.indices, pk.gx, pk.gy,
                       np.ascontiguousarray(v, dtype=float), np.ascontiguousarray(m, dtype=float))


@njit(cache=True)
def artificial_viscosity(xij, yij, uij, vij, cbar, rhobar, g1, g2, eps, h):
    """Monaghan-type pair viscosity; zero unless the pair is approaching."""
    vx = uij * xij + vij * yij
    if vx >= 0.0:
        return 0.0
    mu = h * vx / (xij * xij + yij * yij + eps * h * h)
    return (-g1 * cbar * mu + g2 * mu * mu) / rhobar


@njit(cache=True)
def _momentum(offsets, indices, dx, dy, gx, gy, m, rho, sig, c, g1, g2, v, h, eps, gravity, active):
    n = offsets.shape[0] - 1
    acc = np.zeros((n, 2))
    for i in range(n):
        if not active[i]:
            continue
        ri2 = rho[i] * rho[i]
        ax = 0.0
        ay = 0.0
        for s in range(offsets[i], offsets[i + 1]):
            j = indices[s]
            rj2 = rho[j] * rho[j]
            pi = artificial_viscosity(
                dx[s], dy[s], v[i, 0] - v[j, 0], v[i, 1] - v[j, 1],
                0.5 * (c[i] + c[j]), 0.5 * (rho[i] + rho[j]),
                0.5 * (g1[i] + g1[j]), 0.5 * (g2[i] + g2[j]), eps, h,
            )
            txx = sig[i, 0] / ri2 + sig[j, 0] / rj2 - pi
            tyy = sig[i, 1] / ri2 + sig[j, 1] / rj2 - pi
            txy = sig[i, 2] / ri2 + sig[j, 2] / rj2
            ax += m[j] * (txx * gx[s] + txy * gy[s])
            ay += m[j] * (txy * gx[s] + tyy * gy[s])
        acc[i, 0] = ax + gravity[0]
        acc[i, 1] = ay + gravity[1]
    return acc


def momentum_rate(nl: NeighborList, pk: PairKernel, m, rho, sigma, c, gamma1, gamma2, v, h,
                  gravity=(0.0, 0.0), active=None, eps=EPS_VISC):
    """Symmetric-form acceleration including the pair viscosity and gravity.

    ``sigma`` is the total stress ``(xx, yy, xy)``; pair viscosity uses the
    mean of the two particles' coefficients. Inactive particles get zero.
    """
    n = len(nl)
    active = np.ones(n, dtype=bool) if active is None else np.asarray(active, dtype=bool)
    return _momentum(
        nl.offsets, nl.indices, nl.dx, nl.dy, pk.gx, pk.gy,
        np.ascontiguousarray(m, dtype=float), np.ascontiguousarray(rho, dtype=float),
        np.ascontiguousarray(sigma, dtype=float), np.ascontiguousarray(c, dtype=float),
        np.ascontiguousarray(gamma1, dtype=float), np.ascontiguousarray(gamma2, dtype=float),
        np.ascontiguousarray(v, dtype=float), float(h), float(eps),
        np.asarray(gravity, dtype=float), active,
    )


@njit(cache=True)
def _mls(offsets, indices, dx, dy, w, w_self, m, rho, active):
    n = offsets.shape[0] - 1
    out = rho.copy()
    fallbacks = 0
    A = np.zeros((3, 3))
    for i in range(n):
        if not active[i]:
            continue
        A[:, :] = 0.0
        vi = m[i] / rho[i]
        A[0, 0] = vi * w_self[i]
        for s in range(offsets[i], offsets[i + 1]):
            j = indices[s]
            ww = w[s] * m[j] / rho[j]
            px = dx[s]
            py = dy[s]
            A[0, 0] += ww
            A[0, 1] += ww * px
            A[0, 2] += ww * py
            A[1, 1] += ww * px * px
            A[1, 2] += ww * px * py
            A[2, 2] += ww * py * py
        A[1, 0] = A[0, 1]
        A[2, 0] = A[0, 2]
        A[2, 1] = A[1, 2]
        ok = True
        if abs(np.linalg.det(A)) < 1e-300:
            ok = False
        else:
            beta = np.linalg.solve(A, np.array([1.0, 0.0, 0.0]))
            if not np.all(np.isfinite(beta)) or np.linalg.cond(A) > 1e12:
                ok = False
        if ok:
            acc = m[i] * beta[0] * w_self[i]
            for s in range(offsets[i], offsets[i + 1]):
                j = indices[s]
                acc += m[j] * (beta[0] + beta[1] * dx[s] + beta[2] * dy[s]) * w[s]
            out[i] = acc
        else:
            fallbacks += 1
            num = m[i] * w_self[i]
            den = vi * w_self[i]
            for s in range(offsets[i], offsets[i + 1]):
                j = indices[s]
                num += m[j] * w[s]
                den += m[j] / rho[j] * w[s]
            out[i] = num / den
    return out, fallbacks


def mls_density(nl: NeighborList, pk: PairKernel, m, rho, active=None):
    """Linear-basis moving-least-squares density ``rho_i = sum_j m_j W^MLS_ij``.

    The moment matrix is volume weighted. A singular or badly conditioned
    matrix falls back to the Shepard estimate; the fallback count is returned.
    """
    n = len(nl)
    active = np.ones(n, dtype=bool) if active is None else np.asarray(active, dtype=bool)
    return _mls(nl.offsets, nl.indices, nl.dx, nl.dy, pk.w, pk.w_self,
                np.ascontiguousarray(m, dtype=float), np.ascontiguousarray(rho, dtype=float), active)


@njit(cache=True)
def _shepard(offsets, indices, w, values, vol, source):
    n = offsets.shape[0] - 1
    out = np.zeros(n)
    for i in range(n):
        num = 0.0
        den = 0.0
        for s in range(offsets[i], offsets[i + 1]):
            j = indices[s]
            if not source[j]:
                continue
            ww = vol[j] * w[s]
            num += ww * values[j]
            den += ww
        out[i] = num / den if den > 1e-12 else 0.0
    return out


def shepard_average(nl: NeighborList, pk: PairKernel, values, vol, source):
    """Shepard-normalised interpolation of ``values`` from ``source`` neighbours."""
    return _shepard(nl.offsets, nl.indices, pk.w, np.ascontiguousarray(values, dtype=float),
                    np.ascontiguousarray(vol, dtype=float), np.asarray(source, dtype=bool))
