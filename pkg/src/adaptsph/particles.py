"""Structure-of-arrays particle container."""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

FLUID, WALL, DUMMY = 0, 1, 2
KIND_NAMES = {FLUID: "fluid", WALL: "wall", DUMMY: "dummy"}


@dataclass
class Particles:
    """Per-particle state, one array entry per particle.

    ``tau`` holds the polymer stress as ``(xx, yy, xy)``. ``dx_acc``/``dy_acc``
    track the deformed lattice edge lengths and ``sxy_acc``/``syx_acc`` the
    accumulated shear offsets used to estimate the farthest immediate
    neighbour. ``gamma1``/``gamma2`` are the artificial-viscosity coefficients
    assigned to each particle.
    """

    id: np.ndarray
    kind: np.ndarray
    x: np.ndarray
    v: np.ndarray
    rho: np.ndarray
    m: np.ndarray
    P: np.ndarray
    tau: np.ndarray
    a: np.ndarray
    b: np.ndarray
    extended: np.ndarray
    dx_acc: np.ndarray
    dy_acc: np.ndarray
    sxy_acc: np.ndarray
    syx_acc: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray

    @classmethod
    def create(cls, x, v=None, rho=1000.0, m=1.0, kind=FLUID, dp=None, gamma=(0.0, 0.0)):
        x = np.array(x, dtype=float).reshape(-1, 2)
        n = len(x)
        v = np.zeros((n, 2)) if v is None else np.array(v, dtype=float).reshape(n, 2)
        spacing = 0.0 if dp is None else dp

        def full(val, dtype=float):
            return np.broadcast_to(np.asarray(val, dtype=dtype), (n,)).copy()

        return cls(
            id=np.arange(n, dtype=np.int64),
            kind=full(kind, np.int8),
            x=x,
            v=v,
            rho=full(rho),
            m=full(m),
            P=np.zeros(n),
            tau=np.zeros((n, 3)),
            a=np.ones(n),
            b=np.full(n, 2.0),
            extended=np.zeros(n, dtype=bool),
            dx_acc=np.full(n, spacing),
            dy_acc=np.full(n, spacing),
            sxy_acc=np.zeros(n),
            syx_acc=np.zeros(n),
            gamma1=full(gamma[0]),
            gamma2=full(gamma[1]),
        )

    def __len__(self):
        return len(self.id)

    @property
    def fluid(self):
        return self.kind == FLUID

    def copy(self) -> "Particles":
        return Particles(**{f.name: getattr(self, f.name).copy() for f in fields(self)})

    @staticmethod
    def concatenate(parts) -> "Particles":
        merged = Particles(
            **{f.name: np.concatenate([getattr(p, f.name) for p in parts]) for f in fields(Particles)}
        )
        merged.id = np.arange(len(merged), dtype=np.int64)
        return merged
