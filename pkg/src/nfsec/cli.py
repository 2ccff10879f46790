"""Command-line entry point: ``nfsec <command> --scenario <path> [options]``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import SchemeId
from .checks import run_validation
from .model import NLoSConfig
from .report import comment_line, emit_csv, emit_designs_csv, emit_spectrum_csv
from .scenario import load_scenario
from .sweeps import power_spectrum, scenario_designs, sweep_alpha, sweep_re


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _grid(text: str) -> np.ndarray:
    """``start:stop:count`` (inclusive linspace) or a comma list."""
    if ":" in text:
        start, stop, count = text.split(":")
        return np.linspace(float(start), float(stop), int(count))
    return np.array(_floats(text))


def _apply_overrides(scenario, args):
    if getattr(args, "seed", None) is not None:
        nlos = NLoSConfig(scenario.nlos.num_paths, scenario.nlos.power_offset_db, args.seed)
        values = tuple((k, args.seed if k == "seed" else v) for k, v in scenario.values)
        scenario = replace(scenario, seed=args.seed, nlos=nlos, values=values)
    if getattr(args, "schemes", None):
        schemes = tuple(SchemeId.parse(s) for s in args.schemes.split(",") if s.strip())
        values = tuple((k, tuple(s.value for s in schemes) if k == "schemes" else v) for k, v in scenario.values)
        scenario = replace(scenario, schemes=schemes, values=values)
    if getattr(args, "mode", None):
        values = tuple((k, args.mode if k == "correlation_mode" else v) for k, v in scenario.values)
        scenario = replace(scenario, correlation_mode=args.mode, values=values)
    return scenario


def _finish(path, plot_fn, obj, args):
    print(f"wrote {path}")
    if args.plot:
        from .plots import figure_path
        print(f"wrote {plot_fn(obj, figure_path(path))}")


def cmd_design(scenario, args):
    designs = scenario_designs(scenario)
    meta = {"scenario": scenario.digest, "seed": scenario.seed, "version": __version__}
    if args.out:
        emit_designs_csv(designs, meta, args.out)
        print(f"wrote {args.out}")
    else:
        print(comment_line(meta))
        for scheme, d in designs.items():
            qa = f"{d.qa.radius:.4f} m" if d.qa is not None else "-"
            print(f"{scheme.value:>13}: r_S={d.qs.radius:.4f} m  r_A={qa}  alpha={d.alpha:.4f}  "
                  f"R_B={d.rate.rate_user:.4f}  R_E={d.rate.rate_eve:.4f}  R_S={d.rate.secrecy_rate:.4f}")


def cmd_sweep_alpha(scenario, args):
    from .plots import plot_sweep
    result = sweep_alpha(scenario, _grid(args.grid))
    emit_csv(result, args.out)
    _finish(args.out, plot_sweep, result, args)


def cmd_sweep_re(scenario, args):
    from .plots import plot_sweep
    result = sweep_re(scenario, _grid(args.grid), channel="nlos" if args.nlos else "los")
    emit_csv(result, args.out)
    _finish(args.out, plot_sweep, result, args)


def cmd_spectrum(scenario, args):
    from .plots import plot_spectrum
    radii = _grid(args.radii)
    angles = _grid(args.angles)
    spectrum = power_spectrum(scenario, args.which, radii, angles)
    emit_spectrum_csv(spectrum, args.out)
    _finish(args.out, plot_spectrum, spectrum, args)


def cmd_validate(scenario, args):
    counts = run_validation(scenario.system, count=args.count, seed=scenario.seed)
    failed = 0
    for name, c in counts.items():
        print(f"{name}: {c['passed']} passed, {c['failed']} failed")
        failed += c["failed"]
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nfsec", description=__doc__)
    parser.add_argument("--version", action="version", version=f"nfsec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", required=True, help="scenario file or bundled name")
    common.add_argument("--seed", type=int, help="override the scenario seed")
    common.add_argument("--schemes", help="comma-separated scheme ids")
    mode = common.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="mode", action="store_const", const="exact",
                      help="exact correlations for the final design (default)")
    mode.add_argument("--approx", dest="mode", action="store_const", const="approx",
                      help="Fresnel-approximated correlations for the final design")

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--out", required=True, type=Path, help="CSV output path")
    output.add_argument("--plot", action="store_true", help="also render a PNG next to the CSV")

    p = sub.add_parser("design", parents=[common], help="design every scheme for the scenario")
    p.add_argument("--out", type=Path, help="CSV output path (default: print)")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("sweep-alpha", parents=[common, output], help="secrecy rate versus power split")
    p.add_argument("--grid", default="0:0.99:100", help="alpha grid, start:stop:count or a list")
    p.set_defaults(func=cmd_sweep_alpha)

    p = sub.add_parser("sweep-re", parents=[common, output], help="secrecy rate versus eavesdropper range")
    p.add_argument("--grid", default="3:10:36", help="r_E grid in metres")
    p.add_argument("--nlos", action="store_true", help="average over the scenario's NLoS draws")
    p.set_defaults(func=cmd_sweep_re)

    p = sub.add_parser("spectrum", parents=[common, output], help="normalised beam power map")
    p.add_argument("--which", choices=("signal", "an"), default="signal")
    p.add_argument("--radii", default="3:7:400", help="range grid in metres")
    p.add_argument("--angles", default="-0.02:0.02:200", help="angle grid in radians")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("validate", parents=[common], help="run the internal consistency checks")
    p.add_argument("--count", type=int, default=200, help="random scenarios for the equivalence check")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = _apply_overrides(load_scenario(args.scenario), args)
        return args.func(scenario, args) or 0
    except (ValueError, OSError, ArithmeticError, RuntimeError) as exc:
        print(f"nfsec: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
