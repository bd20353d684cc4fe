"""Scalar measurements taken from a particle state."""

from __future__ import annotations

import numpy as np
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .kernel import KernelSpec, KnotPair, evaluate_array
from .particles import Particles

CLOSE_FRACTION = 0.3


def measure_drop_width(p: Particles) -> float:
    """Horizontal extent ``max x - min x`` of the fluid."""
    xf = p.x[p.fluid, 0]
    return float(xf.max() - xf.min())


def measure_clustering(x, dp, close=CLOSE_FRACTION):
    """Smallest pair distance over ``dp`` and the number of pairs closer than ``close * dp``.

    Each unordered pair is counted once.
    """
    x = np.asarray(x, dtype=float).reshape(-1, 2)
    if len(x) < 2:
        return float("inf"), 0
    tree = cKDTree(x)
    d, _ = tree.query(x, k=2)
    n_close = len(tree.query_pairs(close * dp, output_type="ndarray"))
    return float(d[:, 1].min() / dp), int(n_close)


def count_fragments(x, link):
    """Number of connected groups when particles closer than ``link`` are joined."""
    x = np.asarray(x, dtype=float).reshape(-1, 2)
    if len(x) == 0:
        return 0
    graph = cKDTree(x).sparse_distance_matrix(cKDTree(x), link, output_type="coo_matrix")
    n, _ = connected_components(graph, directed=False)
    return int(n)


def probe_pressure(p: Particles, point, h):
    """Shepard interpolation of fluid pressure at ``point`` with the standard kernel."""
    f = p.fluid
    r = np.hypot(*(p.x[f] - np.asarray(point, dtype=float)).T)
    near = r < 2.0 * h
    if not near.any():
        return float("nan")
    w, _, _ = evaluate_array(r[near] / h, KernelSpec(KnotPair(), h, dim=2))
    vol = p.m[f][near] / p.rho[f][near]
    return float(np.sum(vol * p.P[f][near] * w) / np.sum(vol * w))
