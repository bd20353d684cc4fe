"""Command line entry point: ``run``, ``dispersion`` and ``kernel-inspect``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from .config import _convert, load_config, parse_pairs, preset_names, preset_text
from .dispersion import DispersionSpec, dispersion_table, with_adapted_knots, zero_energy_scan
from .errors import ConfigurationError, DataError, SimulationError
from .kernel import KernelSpec, KnotPair, evaluate_array
from .runner import OK, run

_DISP_DEFAULTS = {
    "density_ratio": 1.0, "rho0": 1000.0, "c0": 12.5, "gamma_eos": 7.0, "eta_s": 0.4,
    "eta_p": 3.6, "lambda1": 0.02, "theta": 1, "tau_p_bar": 0.0, "sigma_bar": 0.0,
    "dp": 1.0, "h": 2.0, "knots": "", "A": 1.05, "allow_extension": True,
    "gradient_correction": True, "samples": 512,
}


def dispersion_spec_from_text(text, source="<string>") -> DispersionSpec:
    """Build a :class:`DispersionSpec` from ``key = value`` text.

    ``knots`` is either ``adapted`` (from ``r_i = dp``) or ``a, b``.
    """
    raw = parse_pairs(text, source)
    vals = {}
    for key, value in raw.items():
        if key not in _DISP_DEFAULTS:
            raise ConfigurationError(f"{source}: unknown key {key!r}")
        vals[key] = _convert(key, value, _DISP_DEFAULTS[key])
    get = lambda k: vals.get(k, _DISP_DEFAULTS[k])  # noqa: E731
    knots_raw = get("knots").strip().lower()
    if knots_raw in ("", "standard"):
        knots = KnotPair()
    elif knots_raw != "adapted":
        try:
            a, b = (float(s) for s in knots_raw.split(","))
        except ValueError as exc:
            raise ConfigurationError(f"{source}: knots must be 'adapted' or 'a, b'") from exc
        knots = KnotPair(a, b)
    else:
        knots = KnotPair()
    samples = get("samples")
    if samples < 2:
        raise ConfigurationError("samples must be >= 2")
    dp = get("dp")
    spec = DispersionSpec.from_density_ratio(
        get("density_ratio"), rho0=get("rho0"), c0=get("c0"), gamma_eos=get("gamma_eos"),
        eta_s=get("eta_s"), eta_p=get("eta_p"), lambda1=get("lambda1"), theta=get("theta"),
        tau_p_bar=get("tau_p_bar"), sigma_bar=vals.get("sigma_bar"), dp=dp, h=get("h"),
        knots=knots, gradient_correction=get("gradient_correction"),
        k_grid=np.pi / dp * np.arange(1, samples + 1) / samples,
    )
    if knots_raw == "adapted":
        spec = with_adapted_knots(spec, get("A"), get("allow_extension"))
    return spec


def _load_dispersion(path) -> DispersionSpec:
    p = Path(path)
    if p.exists():
        return dispersion_spec_from_text(p.read_text(), str(p))
    if str(path) in preset_names():
        return dispersion_spec_from_text(preset_text(str(path)), f"preset:{path}")
    raise ConfigurationError(f"config file not found: {path}")


def _cmd_run(args):
    cfg = load_config(args.config)
    result = run(cfg, args.out, args.particles_scale, args.deterministic)
    if result.status == OK:
        print(f"ok: {result.steps} steps to t = {result.t:.6g} s, outputs in {result.out}")
    else:
        print(f"failed after {result.steps} steps: {result.error}", file=sys.stderr)
    return result.status


def _cmd_dispersion(args):
    spec = _load_dispersion(args.config)
    table = dispersion_table(spec)
    cols = list(table)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for row in zip(*(table[c] for c in cols)):
            w.writerow([repr(float(v)) for v in row])
    finally:
        if args.out:
            fh.close()
    zones = zero_energy_scan(spec)
    text = "; ".join(f"[{lo:.6g}, {hi:.6g}]" for lo, hi in zones) if zones else "none"
    summary = (f"knots a={spec.knots.a:.6g} b={spec.knots.b:.6g} dp={spec.dp:g} "
               f"zero-energy intervals: {text}")
    print(summary, file=sys.stdout if args.out else sys.stderr)
    return 0


def _cmd_kernel(args):
    spec = KernelSpec(KnotPair(args.a, args.b), args.h, args.dim)
    if args.samples < 2:
        raise ConfigurationError("samples must be >= 2")
    q = np.linspace(0.0, spec.truncation_radius / args.h, args.samples)
    w, dw, d2w = evaluate_array(q, spec)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["q", "w", "dw", "d2w"])
    for row in zip(q, w, dw, d2w):
        out.writerow([repr(float(v)) for v in row])
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="adaptsph", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a drop or patch simulation")
    r.add_argument("--config", required=True, help="config file or preset name")
    r.add_argument("--out", required=True, help="output directory")
    r.add_argument("--particles-scale", type=float, default=1.0,
                   help="multiply the particle count (dp and dt shrink by its square root)")
    r.add_argument("--deterministic", action="store_true",
                   help="require bitwise-reproducible output (the solver is serial)")
    r.set_defaults(func=_cmd_run)

    d = sub.add_parser("dispersion", help="tabulate the 1D dispersion relation")
    d.add_argument("--config", required=True)
    d.add_argument("--out", help="CSV path (default: stdout, summary on stderr)")
    d.set_defaults(func=_cmd_dispersion)

    k = sub.add_parser("kernel-inspect", help="tabulate the kernel and its derivatives")
    k.add_argument("--a", type=float, default=1.0)
    k.add_argument("--b", type=float, default=2.0)
    k.add_argument("--h", type=float, default=1.0)
    k.add_argument("--dim", type=int, choices=(1, 2), default=2)
    k.add_argument("--samples", type=int, default=201)
    k.set_defaults(func=_cmd_kernel)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigurationError, DataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SimulationError as exc:
        print(f"simulation failed: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
