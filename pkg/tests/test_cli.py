import csv
import dataclasses

import pytest

from adaptsph.cli import dispersion_spec_from_text, main
from adaptsph.config import config_from_text, load_config, preset_names, preset_text
from adaptsph.errors import ConfigurationError
from adaptsph.io import read_manifest, read_series
from adaptsph.runner import OK, run

TINY_PATCH = """
scenario = patch
dp = 0.1
dt = 2e-3
t_end = 0.02        # ten steps
patch_length = 1.0
c0 = 7
reinit_every = 5
visc = pressure_scheduled
series_every = 2
"""


def test_parse_comments_and_types():
    cfg = config_from_text(TINY_PATCH + "gravity = 0, -1\nallow_extension = no\n")
    assert cfg.dp == 0.1 and cfg.n_steps == 10 and cfg.reinit_every == 5
    assert cfg.material.c0 == 7.0 and cfg.material.gravity == (0.0, -1.0)
    assert cfg.allow_extension is False
    assert cfg.strain_mode == "inviscid"
    assert cfg.h == pytest.approx(0.2)


@pytest.mark.parametrize("bad", [
    "scenario = drop\ndp = 0.1\ndt = 1e-3\nt_end = 1\nbogus = 3\n",
    "scenario = drop\ndp = 0.1\nt_end = 1\n",
    "scenario = drop\ndp = -1\ndt = 1e-3\nt_end = 1\n",
    "scenario = drop\ndp = 0.1\ndt = 1e-3\nt_end = 1\ngamma = -0.5, 0.5\n",
    "scenario = drop\ndp = 0.1\ndt = 1e-3\nt_end = 1\nreinit_every = -2\n",
    "scenario = drop\ndp = 0.1\ndt = 1e-3\nt_end = 1\ndp = 0.2\n",
    "scenario = drop\ndp = zero\ndt = 1e-3\nt_end = 1\n",
    "just some words\n",
])
def test_invalid_configs(bad):
    with pytest.raises(ConfigurationError):
        config_from_text(bad)


def test_presets_load():
    names = preset_names()
    for name in ("drop_desk", "drop_paper", "drop_newtonian_desk", "patch_desk", "patch_paper"):
        assert name in names
        load_config(name)
    assert "dispersion_example" in names
    assert load_config("drop_paper").dp == 0.0002


def test_config_digest_stable():
    a, b = config_from_text(TINY_PATCH), config_from_text(TINY_PATCH)
    assert a.digest() == b.digest()
    assert dataclasses.replace(a, dt=1e-3).digest() != a.digest()
    # echo parses back to the same config
    assert config_from_text(a.to_text()).digest() == a.digest()


def test_missing_file():
    with pytest.raises(ConfigurationError):
        load_config("/nonexistent/config.cfg")


def test_run_zero_duration(tmp_path):
    cfg = dataclasses.replace(config_from_text(TINY_PATCH), t_end=0.0)
    res = run(cfg, tmp_path)
    assert res.status == OK and res.steps == 0
    assert (tmp_path / "snapshot_initial.csv").exists()
    for name in cfg.series:
        assert read_series(tmp_path / f"{name}.csv")["t"] == [0.0]


def test_run_writes_series_and_manifest(tmp_path):
    cfg = config_from_text(TINY_PATCH)
    res = run(cfg, tmp_path, deterministic=True)
    assert res.status == OK
    series = read_series(tmp_path / "center_pressure.csv")
    assert series["t"] == pytest.approx([0.0, 0.004, 0.008, 0.012, 0.016, 0.02])
    assert all(b > a for a, b in zip(series["t"], series["t"][1:]))
    man = read_manifest(tmp_path / "manifest.txt")
    assert man["config_sha256"] == cfg.digest() and man["status"] == "ok"
    with open(tmp_path / "snapshot_final.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["id", "kind", "x", "y", "u", "v", "rho", "P", "txx", "tyy", "txy", "a", "b"]
    assert len(rows) == 101


def test_repeated_runs_identical(tmp_path):
    cfg = config_from_text(TINY_PATCH)
    a = run(cfg, tmp_path / "a", deterministic=True).manifest
    b = run(cfg, tmp_path / "b", deterministic=True).manifest
    assert a == b
    assert (tmp_path / "a" / "snapshot_final.csv").read_bytes() == \
        (tmp_path / "b" / "snapshot_final.csv").read_bytes()


def test_particles_scale(tmp_path):
    cfg = config_from_text(TINY_PATCH.replace("dp = 0.1", "dp = 0.2").replace("t_end = 0.02", "t_end = 0"))
    res = run(cfg, tmp_path, particles_scale=4.0)
    assert res.manifest["n_fluid"] == 100


def test_cli_run(tmp_path, capsys):
    path = tmp_path / "tiny.cfg"
    path.write_text(TINY_PATCH)
    assert main(["run", "--config", str(path), "--out", str(tmp_path / "o"), "--deterministic"]) == 0
    assert "ok:" in capsys.readouterr().out
    assert (tmp_path / "o" / "manifest.txt").exists()


def test_cli_bad_config(tmp_path, capsys):
    path = tmp_path / "bad.cfg"
    path.write_text("scenario = sideways\ndp = 1\ndt = 1\nt_end = 1\n")
    assert main(["run", "--config", str(path), "--out", str(tmp_path / "o")]) == 1
    assert "scenario" in capsys.readouterr().err


def test_cli_dispersion(tmp_path, capsys):
    out = tmp_path / "d.csv"
    assert main(["dispersion", "--config", "dispersion_example", "--out", str(out)]) == 0
    assert "zero-energy intervals: none" in capsys.readouterr().out
    rows = list(csv.reader(open(out)))
    assert rows[0] == ["k", "re_omega", "im_omega", "c_sph", "c_exact"] and len(rows) == 513
    std = preset_text("dispersion_example").replace("knots = adapted", "knots = 1, 2")
    (tmp_path / "std.cfg").write_text(std)
    assert main(["dispersion", "--config", str(tmp_path / "std.cfg"), "--out", str(out)]) == 0
    assert "intervals: [" in capsys.readouterr().out


def test_dispersion_config_keys():
    spec = dispersion_spec_from_text("density_ratio = 0.99\ndp = 1.5\nknots = adapted\n")
    assert spec.knots.a == pytest.approx(1.2988, abs=1e-3)
    with pytest.raises(ConfigurationError):
        dispersion_spec_from_text("knots = banana\n")
    with pytest.raises(ConfigurationError):
        dispersion_spec_from_text("colour = red\n")


def test_cli_kernel_inspect(capsys):
    assert main(["kernel-inspect", "--a", "1", "--b", "2", "--h", "1", "--dim", "1",
                 "--samples", "5"]) == 0
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert rows[0] == ["q", "w", "dw", "d2w"] and len(rows) == 6
    assert float(rows[1][1]) == pytest.approx(2 / 3)
    assert main(["kernel-inspect", "--a", "3", "--b", "2"]) == 1
