"""Command-line front end.

Subcommands
-----------
simulate              run a config file or a shipped preset, append CSV rows
validate-emap         check the balanced-label property for a constellation
export-constellation  dump "re im label" lines for a kind/mapping

Exit codes: 0 success, 1 config error, 2 numeric failure, 3 I/O error.
"""

import argparse
import sys

import numpy as np

from . import constellation as cn
from .harness import ConfigError, load_config, preset_configs, run_sweep
from .numerics import NumericalError


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad usage; route through ConfigError so
    # usage problems land on exit code 1 like every other config mistake
    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="relaysec",
                     description="Untrusted-relay physical-layer security BER simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a Monte Carlo sweep")
    sim.add_argument("--config", help="experiment config file (key = value lines)")
    sim.add_argument("--preset", choices=("fig2", "fig3"),
                     help="run a shipped preset (all four schemes)")
    sim.add_argument("--seed", type=int, help="override the config seed")
    sim.add_argument("--out", default="ber_results.csv", help="CSV output path")
    sim.add_argument("--workers", type=int, help="override worker count")

    val = sub.add_parser("validate-emap", help="validate a balanced labeling")
    val.add_argument("--constellation", required=True, choices=cn.KINDS)

    exp = sub.add_parser("export-constellation", help="dump points and labels")
    exp.add_argument("--kind", required=True, choices=cn.KINDS)
    exp.add_argument("--mapping", required=True, choices=cn.MAPPINGS)
    exp.add_argument("--out", help="write to a file instead of stdout")
    return parser


def _cmd_simulate(args) -> int:
    if bool(args.config) == bool(args.preset):
        raise ConfigError("provide exactly one of --config or --preset")
    if args.config:
        cfg = load_config(args.config)
        configs = [cfg]
    else:
        configs = preset_configs(args.preset)
    for cfg in configs:
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.workers is not None:
            overrides["workers"] = args.workers
        if overrides:
            from dataclasses import replace
            cfg = replace(cfg, **overrides)
        run_sweep(cfg, csv_path=args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_validate_emap(args) -> int:
    c = cn.build_constellation(args.constellation, "emap")
    proj = cn.project(c)
    ok, report = cn.validate_emap(c)
    for ci, b in enumerate(proj.b_mats):
        sums = b.sum(axis=0)
        print(f"real coordinate {proj.s_r[ci]:+.6f}: rows={b.shape[0]} "
              f"column sums={sums.tolist()} target={b.shape[0] // 2}")
    if ok:
        print(f"{args.constellation}: balanced labeling valid")
        return 0
    for ci, col, msg in report:
        print(f"violation at coordinate {ci}, column {col}: {msg}")
    return 2


def _cmd_export(args) -> int:
    c = cn.build_constellation(args.kind, args.mapping)
    text = cn.export_text(c)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "validate-emap":
            return _cmd_validate_emap(args)
        return _cmd_export(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 1
    except (NumericalError, np.linalg.LinAlgError) as err:
        print(f"numeric failure: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
