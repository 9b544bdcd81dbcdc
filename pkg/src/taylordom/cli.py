"""Command line entry point: ``taylordom run|validate|version``.

Exit status: 0 when every certificate check passed, 1 when some check failed,
2 for config errors.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import warnings

import yaml

from . import __version__
from .config import load_config
from .errors import ConfigError
from .runner import run_experiment, write_plot

log = logging.getLogger("taylordom")


def _parse_set(items):
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        out[key.strip()] = yaml.safe_load(value)
    return out


def _overrides(args) -> dict:
    ov = _parse_set(getattr(args, "set", None))
    if getattr(args, "seed", None) is not None:
        ov["params.seed"] = args.seed
    if getattr(args, "k_max", None) is not None:
        ov["params.k_max"] = args.k_max
    return ov


def cmd_run(args) -> int:
    cfg = load_config(args.config, _overrides(args))
    bundle = run_experiment(cfg)
    os.makedirs(args.out, exist_ok=True)
    for name, table in bundle.tables.items():
        with open(os.path.join(args.out, f"{name}.csv"), "w", encoding="utf-8", newline="") as fh:
            fh.write(table.to_csv())
    warning = write_plot(bundle, os.path.join(args.out, "dominate.svg"))
    if warning:
        warnings.warn(warning)
        bundle.note(warning)
    with open(os.path.join(args.out, "report.txt"), "w", encoding="utf-8", newline="") as fh:
        fh.write(bundle.report_text())
    print(bundle.report_text(), end="")
    return 0 if bundle.ok else 1


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    print(f"{args.config}: valid ({cfg.kind}, tasks: {', '.join(cfg.tasks)})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="taylordom", description="Taylor domination experiments")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the tasks of a config")
    run.add_argument("config")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--seed", type=int)
    run.add_argument("--k-max", type=int, dest="k_max")
    run.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a dotted config field")
    run.set_defaults(func=cmd_run)

    val = sub.add_parser("validate", help="check a config against the schema")
    val.add_argument("config")
    val.set_defaults(func=cmd_validate)

    ver = sub.add_parser("version", help="print the version")
    ver.set_defaults(func=lambda args: print(__version__) or 0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
