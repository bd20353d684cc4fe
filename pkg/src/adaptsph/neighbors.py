"""Uniform-grid cell list with a fixed cutoff radius."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import DataError


@dataclass
class NeighborList:
    """CSR neighbour table.

    Neighbours of particle ``i`` are ``indices[offsets[i]:offsets[i+1]]``,
    ordered by cell index then particle index. ``dx``/``dy`` hold
    ``x_i - x_j`` and ``r`` the pair distance for every directed pair.
    """

    offsets: np.ndarray
    indices: np.ndarray
    dx: np.ndarray
    dy: np.ndarray
    r: np.ndarray
    cutoff: float

    def __len__(self):
        return len(self.offsets) - 1

    def of(self, i):
        return self.indices[self.offsets[i] : self.offsets[i + 1]]

    @property
    def owners(self):
        """Owning particle of each directed pair."""
        return np.repeat(np.arange(len(self)), np.diff(self.offsets))

    @property
    def n_pairs(self):
        return len(self.indices)


@njit(cache=True)
def _scan(x, order, cell_start, cell_of, ncx, ncy, cutoff2, count_only, offsets, out):
    n = x.shape[0]
    for i in range(n):
        c = cell_of[i]
        cy = c // ncx
        cx = c - cy * ncx
        k = 0 if count_only else offsets[i]
        cnt = 0
        for oy in (-1, 0, 1):
            yy = cy + oy
            if yy < 0 or yy >= ncy:
                continue
            for ox in (-1, 0, 1):
                xx = cx + ox
                if xx < 0 or xx >= ncx:
                    continue
                cc = yy * ncx + xx
                for s in range(cell_start[cc], cell_start[cc + 1]):
                    j = order[s]
                    if j == i:
                        continue
                    ddx = x[i, 0] - x[j, 0]
                    ddy = x[i, 1] - x[j, 1]
                    if ddx * ddx + ddy * ddy < cutoff2:
                        if not count_only:
                            out[k] = j
                            k += 1
                        cnt += 1
        if count_only:
            offsets[i + 1] = cnt


def build_neighbors(x, cutoff: float) -> NeighborList:
    """All pairs closer than ``cutoff`` (strict), using cells of size ``cutoff``."""
    x = np.ascontiguousarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        bad = np.flatnonzero(~np.all(np.isfinite(x), axis=1))
        raise DataError(f"non-finite position for particle(s) {bad[:10].tolist()}")
    n = len(x)
    if n == 0:
        empty = np.zeros(0)
        return NeighborList(np.zeros(1, np.int64), np.zeros(0, np.int64), empty, empty, empty, cutoff)
    lo = x.min(axis=0)
    cells = np.floor((x - lo) / cutoff).astype(np.int64)
    ncx = int(cells[:, 0].max()) + 1
    ncy = int(cells[:, 1].max()) + 1
    cell_of = cells[:, 1] * ncx + cells[:, 0]
    order = np.argsort(cell_of, kind="stable").astype(np.int64)
    cell_start = np.zeros(ncx * ncy + 1, dtype=np.int64)
    np.cumsum(np.bincount(cell_of, minlength=ncx * ncy), out=cell_start[1:])

    offsets = np.zeros(n + 1, dtype=np.int64)
    dummy = np.zeros(0, dtype=np.int64)
    _scan(x, order, cell_start, cell_of, ncx, ncy, cutoff * cutoff, True, offsets, dummy)
    np.cumsum(offsets, out=offsets)
    indices = np.empty(offsets[-1], dtype=np.int64)
    _scan(x, order, cell_start, cell_of, ncx, ncy, cutoff * cutoff, False, offsets, indices)

    dx, dy, r = pair_geometry(x, offsets, indices)
    return NeighborList(offsets, indices, dx, dy, r, cutoff)


@njit(cache=True)
def pair_geometry(x, offsets, indices):
    """``x_i - x_j`` and its length for every directed pair."""
    npair = indices.shape[0]
    dx = np.empty(npair)
    dy = np.empty(npair)
    r = np.empty(npair)
    for i in range(offsets.shape[0] - 1):
        for s in range(offsets[i], offsets[i + 1]):
            j = indices[s]
            dx[s] = x[i, 0] - x[j, 0]
            dy[s] = x[i, 1] - x[j, 1]
            r[s] = math.sqrt(dx[s] * dx[s] + dy[s] * dy[s])
    return dx, dy, r


def brute_force_pairs(x, cutoff):
    """O(n^2) reference: sorted list of directed pairs ``(i, j)``."""
    x = np.asarray(x, dtype=float)
    d2 = ((x[:, None, :] - x[None, :, :]) ** 2).sum(-1)
    mask = d2 < cutoff * cutoff
    np.fill_diagonal(mask, False)
    return sorted(zip(*np.nonzero(mask)))
