"""Flat ``key = value`` configuration files.

One scenario per file, ``#`` starts a comment. Tuples are comma separated.
Unknown keys are rejected so typos do not silently fall back to defaults.
"""

from __future__ import annotations

import dataclasses
import hashlib
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .constitutive import MaterialParams
from .errors import ConfigurationError

TRUE = {"1", "true", "yes", "on"}
FALSE = {"0", "false", "no", "off"}
MATERIAL_KEYS = {f.name for f in dataclasses.fields(MaterialParams)}


@dataclass
class SimulationConfig:
    scenario: str
    dp: float
    dt: float
    t_end: float
    h_factor: float = 2.0
    A: float = 1.05
    allow_extension: bool = True
    interaction_mode: str = "averaged"
    kernel_mode: str = "adaptive"
    strain_mode: str = ""
    visc: str = "constant"
    gamma: tuple = (0.5, 0.5)
    gamma_min: tuple = (0.1, 0.1)
    gamma_max: tuple = (0.8, 0.8)
    reinit_every: int = 0
    gradient_correction: bool = False
    output_every: int = 0
    series_every: int = 10
    series: tuple = ()
    seed: int = 0
    material: MaterialParams = field(default_factory=MaterialParams)
    # drop
    drop_radius: float = 0.01
    drop_height: float = 0.04
    drop_speed: float = 1.0
    wall_half_width: float = 0.04
    # patch
    patch_length: float = 1.0
    omega: float = 1.0
    n_series: int = 25

    def __post_init__(self):
        if self.scenario not in ("drop", "patch"):
            raise ConfigurationError(f"scenario must be 'drop' or 'patch', got {self.scenario!r}")
        if self.dt <= 0 or self.dp <= 0:
            raise ConfigurationError("dt and dp must be positive")
        if self.t_end < 0:
            raise ConfigurationError("t_end must be non-negative")
        if min(self.gamma + self.gamma_min + self.gamma_max) < 0:
            raise ConfigurationError("artificial viscosity coefficients must be >= 0")
        if self.reinit_every < 0 or self.output_every < 0 or self.series_every < 1:
            raise ConfigurationError("cadences must be non-negative (series_every >= 1)")
        if self.visc not in ("constant", "pressure_scheduled"):
            raise ConfigurationError(f"unknown viscosity schedule {self.visc!r}")
        if not self.strain_mode:
            self.strain_mode = "viscous" if self.scenario == "drop" else "inviscid"
        if not self.series:
            self.series = (
                ("width", "energy", "clustering") if self.scenario == "drop"
                else ("center_pressure", "energy", "clustering")
            )

    @property
    def h(self) -> float:
        return self.h_factor * self.dp

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))

    def to_text(self) -> str:
        """Canonical ``key = value`` rendering (stable order, used for hashing)."""
        lines = []
        for f in dataclasses.fields(self):
            if f.name == "material":
                continue
            lines.append(f"{f.name} = {_render(getattr(self, f.name))}")
        for f in dataclasses.fields(MaterialParams):
            lines.append(f"{f.name} = {_render(getattr(self.material, f.name))}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()

    def scaled(self, particles_scale: float) -> "SimulationConfig":
        """Config with ``particles_scale`` times as many particles (dp and dt shrink alike)."""
        if particles_scale <= 0:
            raise ConfigurationError("particles scale must be positive")
        f = particles_scale**-0.5
        return dataclasses.replace(self, dp=self.dp * f, dt=self.dt * f)


def _render(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (tuple, list)):
        return ", ".join(_render(v) for v in value)
    return repr(value) if isinstance(value, float) else str(value)


def _convert(name, raw, default):
    try:
        if isinstance(default, bool):
            low = raw.lower()
            if low in TRUE:
                return True
            if low in FALSE:
                return False
            raise ValueError(raw)
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        if isinstance(default, tuple):
            items = [s.strip() for s in raw.split(",") if s.strip()]
            if name in ("gamma", "gamma_min", "gamma_max", "gravity"):
                return tuple(float(s) for s in items)
            return tuple(items)
        return raw
    except ValueError as exc:
        raise ConfigurationError(f"bad value for {name!r}: {raw!r}") from exc


def parse_pairs(text: str, source="<string>") -> dict:
    """``key = value`` lines into a dict of raw strings."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in out:
            raise ConfigurationError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


_SIM_DEFAULTS = {
    "scenario": "", "dp": 0.0, "dt": 0.0, "t_end": 0.0, "h_factor": 2.0, "A": 1.05,
    "allow_extension": True, "interaction_mode": "", "kernel_mode": "", "strain_mode": "",
    "visc": "", "gamma": (0.0,), "gamma_min": (0.0,), "gamma_max": (0.0,), "reinit_every": 0,
    "gradient_correction": False, "output_every": 0, "series_every": 0, "series": ("",),
    "seed": 0, "drop_radius": 0.0, "drop_height": 0.0, "drop_speed": 0.0,
    "wall_half_width": 0.0, "patch_length": 0.0, "omega": 0.0, "n_series": 0,
}
_MAT_DEFAULTS = {
    "rho0": 0.0, "c0": 0.0, "gamma_eos": 0.0, "eta_s": 0.0, "eta_p": 0.0,
    "lambda1": 0.0, "theta": 0, "gravity": (0.0,),
}


def config_from_text(text: str, source="<string>") -> SimulationConfig:
    raw = parse_pairs(text, source)
    sim, mat = {}, {}
    for key, value in raw.items():
        if key in _SIM_DEFAULTS:
            sim[key] = _convert(key, value, _SIM_DEFAULTS[key])
        elif key in _MAT_DEFAULTS:
            mat[key] = _convert(key, value, _MAT_DEFAULTS[key])
        else:
            raise ConfigurationError(f"{source}: unknown key {key!r}")
    for req in ("scenario", "dp", "dt", "t_end"):
        if req not in sim:
            raise ConfigurationError(f"{source}: missing required key {req!r}")
    for pair in ("gamma", "gamma_min", "gamma_max"):
        if pair in sim and len(sim[pair]) != 2:
            raise ConfigurationError(f"{source}: {pair} needs two values")
    if "gravity" in mat and len(mat["gravity"]) != 2:
        raise ConfigurationError(f"{source}: gravity needs two components")
    return SimulationConfig(material=MaterialParams(**mat), **sim)


def load_config(path) -> SimulationConfig:
    """Read a config file; a bare preset name (e.g. ``drop_desk``) also works."""
    p = Path(path)
    if not p.exists():
        name = str(path)
        if name in preset_names():
            return config_from_text(preset_text(name), f"preset:{name}")
        raise ConfigurationError(f"config file not found: {path}")
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {p}: {exc}") from exc
    return config_from_text(text, str(p))


def preset_names():
    files = resources.files("adaptsph").joinpath("presets").iterdir()
    return sorted(f.name[:-4] for f in files if f.name.endswith(".cfg"))


def preset_text(name: str) -> str:
    return resources.files("adaptsph").joinpath("presets", f"{name}.cfg").read_text()
