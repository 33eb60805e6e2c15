"""Command line entry point: ``spinbattery run <config> [overrides]``."""
from __future__ import annotations

import argparse
import logging
import sys
import time

from .config import PRESETS, coerce, load_config, load_preset, parse_grid
from .errors import ConfigError, ResourceLimitError
from .runner import emit_results, run_scenario

log = logging.getLogger("spinbattery")

EXIT_OK, EXIT_CONFIG, EXIT_RESOURCE = 0, 2, 3

# (flag, config key)
OVERRIDES = [("--model", "model"), ("--n", "n"), ("--two-j", "two_j"), ("--lambda", "lambda"),
             ("--gamma", "gamma"), ("--phi", "phi"), ("--beta", "beta"), ("--omega", "omega"),
             ("--sigma", "sigma"), ("--realizations", "realizations"), ("--seed", "seed")]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="spinbattery", description="Spin-j quantum battery simulations.")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario config or preset")
    run.add_argument("config", nargs="?", help="scenario file ([scenario] key = value)")
    run.add_argument("--preset", choices=PRESETS)
    for flag, key in OVERRIDES:
        run.add_argument(flag, dest=f"ov_{key}", metavar="VALUE",
                         help=f"override '{key}'; replaces the grid when it is the sweep axis")
    run.add_argument("--out", help="output directory (default: config 'out')")
    run.add_argument("--workers", type=int, help="worker processes (default: $SPINBATTERY_WORKERS or 1)")
    run.add_argument("-v", "--verbose", action="store_true")
    sub.add_parser("presets", help="list bundled presets")
    return p


def apply_overrides(cfg, args):
    changes = {}
    for _, key in OVERRIDES:
        raw = getattr(args, f"ov_{key}")
        if raw is None:
            continue
        if key == cfg.axis:
            changes["grid"] = parse_grid(raw, key)
        elif key == cfg.series:
            changes["series_values"] = parse_grid(raw, key)
        else:
            name, value = coerce(key, raw)
            changes[name] = value
    if args.out:
        changes["out"] = args.out
    return cfg.replace(**changes)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "presets":
        print("\n".join(PRESETS))
        return EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.preset and args.config:
            raise ConfigError("give either a config file or --preset, not both", field="preset")
        if args.preset:
            cfg = load_preset(args.preset)
        elif args.config:
            cfg = load_config(args.config)
        else:
            raise ConfigError("need a config file or --preset", field="config")
        cfg = apply_overrides(cfg, args).validate()
        log.info("running %s (%s, task=%s)", cfg.name, cfg.model, cfg.task)
        start = time.perf_counter()
        table = run_scenario(cfg, workers=args.workers)
        paths = emit_results(table, cfg.out, cfg, wall_time=time.perf_counter() - start)
    except ConfigError as exc:
        field = f" [{exc.field}]" if exc.field else ""
        print(f"config error{field}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    print(f"wrote {paths['csv']} ({len(table.rows)} rows) and {paths['manifest']}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
