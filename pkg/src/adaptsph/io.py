"""CSV snapshots, time series and the run manifest."""

from __future__ import annotations

import csv
import hashlib
from pathlib import Path

from .particles import KIND_NAMES, Particles

SNAPSHOT_COLUMNS = ("id", "kind", "x", "y", "u", "v", "rho", "P", "txx", "tyy", "txy", "a", "b")
SERIES_COLUMNS = {
    "width": ("t", "T", "width_m"),
    "center_pressure": ("t", "t_omega", "p_center_pa"),
    "energy": ("t", "e_total_j", "rel_dev"),
    "clustering": ("t", "min_ratio", "close_pairs"),
}


def _fmt(v):
    if isinstance(v, (int, str)):
        return str(v)
    return repr(float(v))


def _open(path, mode="w"):
    try:
        return open(path, mode, newline="")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def write_snapshot(path, p: Particles, pressure=None):
    """One row per particle; ``pressure`` overrides ``p.P`` (e.g. with boundary values)."""
    P = p.P if pressure is None else pressure
    with _open(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SNAPSHOT_COLUMNS)
        for i in range(len(p)):
            w.writerow([
                int(p.id[i]), KIND_NAMES[int(p.kind[i])],
                *(_fmt(v) for v in (p.x[i, 0], p.x[i, 1], p.v[i, 0], p.v[i, 1], p.rho[i], P[i],
                                    p.tau[i, 0], p.tau[i, 1], p.tau[i, 2], p.a[i], p.b[i])),
            ])


def read_snapshot(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class SeriesWriter:
    """Appends rows to ``<name>.csv``; time stamps must strictly increase."""

    def __init__(self, directory, name):
        if name not in SERIES_COLUMNS:
            raise ValueError(f"unknown series {name!r}")
        self.name = name
        self.path = Path(directory) / f"{name}.csv"
        self._fh = _open(self.path)
        self._w = csv.writer(self._fh, lineterminator="\n")
        self._w.writerow(SERIES_COLUMNS[name])
        self.last_t = None

    def write(self, t, *values):
        if self.last_t is not None and t <= self.last_t:
            raise ValueError(f"{self.name}: time {t} not after {self.last_t}")
        self._w.writerow([_fmt(t), *(_fmt(v) for v in values)])
        self._fh.flush()
        self.last_t = t

    def close(self):
        self._fh.close()


def read_series(path):
    """Columns of a series CSV as a dict of float lists."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        with open(path) as fh:
            header = fh.readline().strip().split(",")
        return {k: [] for k in header}
    return {k: [float(r[k]) for r in rows] for k in rows[0]}


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def write_manifest(path, entries: dict, config_text: str):
    """``key = value`` metadata followed by the echoed config."""
    with _open(path) as fh:
        for k, v in entries.items():
            fh.write(f"{k} = {v}\n")
        fh.write("\n[config]\n")
        fh.write(config_text)


def read_manifest(path) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            if line.startswith("[config]"):
                break
            if "=" in line:
                k, v = line.split("=", 1)
                out[k.strip()] = v.strip()
    return out
