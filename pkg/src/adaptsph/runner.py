"""Run orchestration: build, step, measure, write."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .config import SimulationConfig
from .diagnostics import measure_clustering, measure_drop_width, probe_pressure
from .errors import SimulationError
from .io import SeriesWriter, file_digest, write_manifest, write_snapshot
from .scenarios import build
from .solver import Solver, SolverSettings

log = logging.getLogger(__name__)

OK, FAILED = 0, 2


@dataclass
class RunResult:
    status: int
    steps: int
    t: float
    out: Path
    manifest: dict = field(default_factory=dict)
    error: str = ""
    solver: Solver | None = None


def make_solver(cfg: SimulationConfig):
    scen = build(cfg)
    settings = SolverSettings(
        h=cfg.h, dt=cfg.dt, material=cfg.material, kernel_mode=cfg.kernel_mode, A=cfg.A,
        allow_extension=cfg.allow_extension, interaction_mode=cfg.interaction_mode,
        strain_mode=cfg.strain_mode, gradient_correction=cfg.gradient_correction,
        reinit_every=cfg.reinit_every,
    )
    return Solver(scen.particles, settings, scen.nearest_wall), scen


class _Recorder:
    def __init__(self, cfg: SimulationConfig, out: Path, e0):
        self.cfg = cfg
        self.e0 = e0
        self.writers = {name: SeriesWriter(out, name) for name in cfg.series}

    def record(self, solver: Solver):
        cfg, p, t = self.cfg, solver.p, solver.t
        w = self.writers
        if "width" in w:
            w["width"].write(t, t * cfg.drop_speed / (2.0 * cfg.drop_radius), measure_drop_width(p))
        if "center_pressure" in w:
            w["center_pressure"].write(t, t * cfg.omega, probe_pressure(p, (0.0, 0.0), cfg.h))
        if "energy" in w:
            e = solver.energy()
            w["energy"].write(t, e, (e - self.e0) / abs(self.e0) if self.e0 else 0.0)
        if "clustering" in w:
            ratio, close = measure_clustering(p.x[p.fluid], cfg.dp)
            w["clustering"].write(t, ratio, close)

    def close(self):
        for wr in self.writers.values():
            wr.close()


def run(cfg: SimulationConfig, out, particles_scale=1.0, deterministic=False,
        progress=None) -> RunResult:
    """Execute ``cfg`` and write series, snapshots and a manifest into ``out``.

    The solver is serial, so repeated runs are bitwise identical whether or
    not ``deterministic`` is requested; the flag is recorded in the manifest.
    On a non-finite state the partial series and the offending snapshot are
    kept and the status is ``FAILED``.
    """
    if particles_scale != 1.0:
        cfg = cfg.scaled(particles_scale)
    out = Path(out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc.strerror}") from exc

    solver, scen = make_solver(cfg)
    write_snapshot(out / "snapshot_initial.csv", solver.p)
    rec = _Recorder(cfg, out, solver.energy())
    rec.record(solver)
    n_steps = cfg.n_steps
    status, error = OK, ""
    started = time.perf_counter()
    try:
        for _ in range(n_steps):
            solver.step()
            k = solver.step_count
            if k % cfg.series_every == 0 or k == n_steps:
                rec.record(solver)
            if cfg.output_every and k % cfg.output_every == 0:
                write_snapshot(out / f"snapshot_{k:07d}.csv", solver.p)
            if progress is not None:
                progress(solver)
    except SimulationError as exc:
        status, error = FAILED, str(exc)
        log.error("run aborted: %s", exc)
        write_snapshot(out / "snapshot_failed.csv", solver.p)
    finally:
        rec.close()
    log.info("%d steps in %.1f s", solver.step_count, time.perf_counter() - started)

    final = out / "snapshot_final.csv"
    if status == OK:
        write_snapshot(final, solver.p)
    entries = {
        "package_version": __version__,
        "scenario": cfg.scenario,
        "config_sha256": cfg.digest(),
        "particles_scale": repr(float(particles_scale)),
        "deterministic": "true" if deterministic else "false",
        "n_particles": len(solver.p),
        "n_fluid": scen.info.get("n_fluid", 0),
        "steps": solver.step_count,
        "status": "ok" if status == OK else "failed",
        "correction_fallbacks": solver.counters.correction_fallbacks,
        "mls_fallbacks": solver.counters.mls_fallbacks,
        "final_snapshot_sha256": file_digest(final) if status == OK else "",
    }
    for name in cfg.series:
        entries[f"{name}_sha256"] = file_digest(out / f"{name}.csv")
    if error:
        entries["error"] = error.replace("\n", " ")
    write_manifest(out / "manifest.txt", entries, cfg.to_text())
    return RunResult(status, solver.step_count, solver.t, out, entries, error, solver)
