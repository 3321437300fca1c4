"""Command-line scenario runner.

    wgapdc simulate <scenario|config.yaml> [--out DIR] [--set k=v ...] [--smooth-nm X]
    wgapdc verify [--quick]
    wgapdc export-tensor <path> [--out DIR]

Exit codes: 0 success, 1 physics or configuration failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import SimulationError


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="wgapdc",
        description="Spatio-spectral pair-generation simulator for waveguide arrays",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a named scenario or a configuration file")
    sim.add_argument("target", help="scenario name or path to a YAML configuration")
    sim.add_argument("--out", default=None, help="output directory")
    sim.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a configuration key (repeatable)",
    )
    sim.add_argument(
        "--smooth-nm",
        type=float,
        default=None,
        help="apply detector smoothing with this intensity FWHM in nm",
    )

    ver = sub.add_parser("verify")
    ver.add_argument("--quick", action="store_true", help="reduced sample counts")

    exp = sub.add_parser("export-tensor", help="export a stored tensor as CSV slices")
    exp.add_argument("path", help="tensor container file")
    exp.add_argument("--out", default=None, help="output directory")
    return parser


def _cmd_simulate(args) -> int:
    from .config import parse_config
    from .scenarios import SCENARIO_NAMES, run_scenario

    overrides = list(args.overrides)
    if args.smooth_nm is not None:
        overrides.append(f"smoothing_nm={args.smooth_nm}")

    target = args.target
    if target in SCENARIO_NAMES:
        manifest = run_scenario(target, overrides=overrides, out_dir=args.out)
    else:
        path = Path(target)
        if not path.is_file():
            print(
                f"error: '{target}' is neither a scenario "
                f"{SCENARIO_NAMES} nor a configuration file",
                file=sys.stderr,
            )
            return 2
        cfg = parse_config(path.read_text())
        name = cfg.data["scenario"] or "custom"
        if name not in SCENARIO_NAMES:
            print(f"error: configuration names unknown scenario '{name}'", file=sys.stderr)
            return 2
        manifest = run_scenario(
            name, overrides=overrides, out_dir=args.out, base_config=cfg
        )
    print(f"wrote {manifest}")
    return 0


def _cmd_verify(args) -> int:
    from .verify import run_verification

    rows = run_verification(quick=args.quick)
    width = max(len(name) for name, _, _ in rows)
    failed = False
    for name, passed, detail in rows:
        status = "PASS" if passed else "FAIL"
        failed = failed or not passed
        print(f"{name:<{width}}  {status}  {detail}")
    return 1 if failed else 0


def _cmd_export(args) -> int:
    from . import tensorio

    out_dir = Path(args.out) if args.out else Path(args.path).parent
    out_dir.mkdir(parents=True, exist_ok=True)
    jsa = tensorio.load_tensor(args.path)
    prefix = out_dir / Path(args.path).stem
    for written in tensorio.export_csv_slices(jsa, prefix):
        print(f"wrote {written}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "export-tensor":
            return _cmd_export(args)
    except KeyError as exc:
        print(f"error: unknown scenario {exc}", file=sys.stderr)
        return 2
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
