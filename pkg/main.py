#!/usr/bin/env python3
"""
Semi-harmonic well toolkit - command line
Reflection phase, time delay, sign-change energies, bound states, waveguide
cutoff profiles and the acceptance suite
"""

import argparse
import logging
import sys
from typing import Dict, List, Optional

from src import __version__
from src.config import build_run_config, load_config_file, RunConfig
from src.core import scattering, spectra, stepladder, timing
from src.monitoring import AcceptanceSuite
from src.utils import (
    ConfigurationError, FeatureNotFoundError, ModelError, NumericalError, SemiHarmonicError,
    write_csv, write_json
)

VERSION = __version__

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_NOT_FOUND = 4

logger = logging.getLogger(__name__)


def setup_logging(verbose: bool = False, log_file: Optional[str] = None):
    """Setup logging configuration; diagnostics go to stderr, results to stdout"""
    log_format = '%(asctime)s - %(levelname)s - %(message)s'
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format=log_format,
        handlers=handlers,
        force=True
    )


def _geometry_a(rc: RunConfig) -> float:
    well = rc.well
    return 0.0 if well.is_delta else well.a


def cmd_phase(rc: RunConfig) -> int:
    curve = scattering.phase_curve(rc.well, rc.e_min, rc.e_max, rc.n0, rc.tolerance("max_points"))
    logger.info(f"Phase curve for {rc.well.describe()}: {len(curve)} points")
    if rc.fmt == "json":
        write_json({
            "config": rc.well.describe(),
            "points": [{"E": p.e, "delta": p.delta, "S_re": p.s_re, "S_im": p.s_im} for p in curve],
        }, rc.output)
    else:
        write_csv(["E", "delta", "S_re", "S_im"], ((p.e, p.delta, p.s_re, p.s_im) for p in curve), rc.output)
    return EXIT_OK


def cmd_delay(rc: RunConfig) -> int:
    curve = timing.delay_curve(rc.well, rc.e_min, rc.e_max, rc.n0, rc.workers, rc.tolerance("max_points"))
    if rc.fmt == "json":
        write_json({
            "config": rc.well.describe(),
            "samples": [{"E": s.e, "tau_p": s.tau_p, "tau_e": s.tau_e, "tau_w": s.tau_w} for s in curve.samples],
            "features": {"E_a": curve.features.e_a, "maxima": curve.features.maxima},
        }, rc.output)
    else:
        write_csv(["E", "tau_p", "tau_e", "tau_w"],
                  ((s.e, s.tau_p, s.tau_e, s.tau_w) for s in curve.samples), rc.output)
    return EXIT_OK


def cmd_ea(rc: RunConfig) -> int:
    well = rc.well
    if rc.has_window:
        lo, hi = rc.e_min, rc.e_max
    else:
        lo, hi = timing.bracket_sign_change(well)
    e_a = timing.find_sign_change(well, lo, hi, rc.tolerance("ea_xtol"))
    logger.info(f"E_a = {e_a:.8f} for {well.describe()}")
    if rc.fmt == "json":
        write_json({"a": _geometry_a(rc), "E_a": e_a}, rc.output)
    else:
        print(f"{e_a:.8f}")
    return EXIT_OK


def cmd_bound(rc: RunConfig) -> int:
    states = spectra.bound_states(rc.well, xtol=rc.tolerance("bound_xtol"))
    logger.info(f"{len(states)} bound states for {rc.well.describe()}")
    if rc.fmt == "json":
        write_json({
            "config": rc.well.describe(),
            "states": [{"n": s.index, "E": s.e, "nodes": s.nodes} for s in states],
        }, rc.output)
    else:
        write_csv(["n", "E"], ((s.index, s.e) for s in states), rc.output)
    return EXIT_OK


def cmd_cutoff(rc: RunConfig) -> int:
    sections = stepladder.waveguide_profile(rc.well, rc.cutoff_steps, rc.tolerance("x_min"), rc.e0)
    if rc.fmt == "json":
        write_json({
            "config": rc.well.describe(),
            "sections": [{"x_left": s.x_left, "x_right": s.x_right, "V": s.v, "omega_c": s.omega_c}
                         for s in sections],
        }, rc.output)
    else:
        write_csv(["x_left", "x_right", "V", "omega_c"],
                  ((s.x_left, s.x_right, s.v, s.omega_c) for s in sections), rc.output)
    return EXIT_OK


def cmd_validate(rc: RunConfig) -> int:
    suite = AcceptanceSuite(ladder_steps=rc.tolerance("ladder_steps"), x_min=rc.tolerance("x_min"))
    results = suite.run(rc.only)
    print(suite.format_table(results))
    if rc.report:
        write_json(suite.report(results), rc.report)
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.error(f"{len(failed)} acceptance checks failed: {', '.join(failed)}")
        return EXIT_VALIDATION
    return EXIT_OK


COMMAND_HANDLERS = {
    "phase": cmd_phase,
    "delay": cmd_delay,
    "ea": cmd_ea,
    "bound": cmd_bound,
    "cutoff": cmd_cutoff,
    "validate": cmd_validate,
}


def _add_common(parser: argparse.ArgumentParser):
    geometry = parser.add_argument_group("geometry")
    exclusive = geometry.add_mutually_exclusive_group()
    exclusive.add_argument("--area", type=float, help="Area (a+b)v0 of the symmetric family b = a (with --a)")
    exclusive.add_argument("--delta", type=float, help="Strength g of a delta well")
    geometry.add_argument("--a", type=float, help="Left half-width a")
    geometry.add_argument("--b", type=float, help="Right edge b (raw geometry)")
    geometry.add_argument("--v0", type=float, help="Well depth (raw geometry)")

    window = parser.add_argument_group("energy window")
    window.add_argument("--emin", type=float, help="Lower energy")
    window.add_argument("--emax", type=float, help="Upper energy")
    window.add_argument("--n0", type=int, help="Initial uniform grid points (default 400)")

    output = parser.add_argument_group("output")
    output.add_argument("--output", "-o", help="Output file (default stdout)")
    output.add_argument("--format", choices=["csv", "json"], help="Output format (default csv)")
    output.add_argument("--workers", type=int, help="Worker processes (default $SEMIHARMONIC_WORKERS or 1)")

    tolerances = parser.add_argument_group("tolerances")
    tolerances.add_argument("--ea-xtol", type=float)
    tolerances.add_argument("--bound-xtol", type=float)
    tolerances.add_argument("--max-points", type=int)
    tolerances.add_argument("--ladder-steps", type=int)
    tolerances.add_argument("--x-min", type=float)

    parser.add_argument("--config", help="key=value settings file; flags override it")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    parser.add_argument("--log-file", help="Also write the log to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semiharmonic",
        description="Scattering, time delay and bound states of a rectangular well "
                    "with a harmonic background on the left"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("phase", "Unwrapped reflection phase delta(E)"),
        ("delay", "tau_p, tau_E and tau_W on the phase grid"),
        ("ea", "Energy E_a where the time delay changes sign"),
        ("bound", "Bound-state energies"),
        ("cutoff", "Cutoff-frequency profile of the equivalent waveguide"),
        ("validate", "Run the acceptance suite"),
    ):
        sub = commands.add_parser(name, help=help_text)
        _add_common(sub)
        if name == "cutoff":
            sub.add_argument("--e0", type=float, help="Baseline shift (default v0)")
            sub.add_argument("--cutoff-steps", type=int, help="Harmonic sections (default 200)")
        if name == "validate":
            sub.add_argument("--only", choices=["reference", "oracles", "structure"], help="Run one group only")
            sub.add_argument("--json", help="Write a JSON report to this path")
    return parser


def _flag_values(args: argparse.Namespace) -> Dict:
    skip = {"command", "config", "verbose", "log_file"}
    return {key: value for key, value in vars(args).items() if key not in skip}


def exit_code_for(error: SemiHarmonicError) -> int:
    if isinstance(error, (ModelError, ConfigurationError)):
        return EXIT_CONFIG
    if isinstance(error, FeatureNotFoundError):
        return EXIT_NOT_FOUND
    if isinstance(error, NumericalError):
        return EXIT_NUMERICAL
    return EXIT_NUMERICAL


def run(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose, args.log_file)

    try:
        file_values = load_config_file(args.config) if args.config else {}
        rc = build_run_config(args.command, _flag_values(args), file_values)
        return COMMAND_HANDLERS[args.command](rc)
    except SemiHarmonicError as e:
        code = exit_code_for(e)
        logger.error(f"{type(e).__name__}: {e.message}")
        if e.details:
            logger.error(f"Details: {e.details}")
        return code


def main():
    """Main application entry point"""
    sys.exit(run())


if __name__ == "__main__":
    main()
