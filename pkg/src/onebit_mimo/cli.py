"""Command-line front end.

Subcommands: ``uncoded`` (BER sweep), ``coded`` (FER sweep), ``partition-sweep``
(paired BER/complexity rows per partition spec), ``partition-stats`` (tree
report for one sampled block), ``complexity`` (closed-form counts only).

Every run can start from a JSON config file whose keys mirror the SimConfig
fields, and every field has a same-name flag that overrides the file value.
Exit codes: 0 success, 2 configuration problems, 3 numerical failures.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from .config import CSV_HEADER, SWEEP_CSV_HEADER, SimConfig
from .errors import CodeConstructionError, ConfigurationError, DegeneratePosteriorError
from .partition import estimate_complexity
from .sim import (
    partition_report,
    render_csv,
    run_coded,
    run_partition_sweep,
    run_uncoded,
    write_results,
)

_INT_FIELDS = (
    "n_users",
    "n_rx",
    "m",
    "t_c",
    "t_t",
    "t_d",
    "ldpc_n",
    "ldpc_seed",
    "ldpc_max_iter",
    "frames_per_block",
    "trials",
    "target_errors",
    "seed",
    "workers",
    "wave",
)
_FLOAT_FIELDS = ("ldpc_rate",)
_STR_FIELDS = ("csir", "detector", "ldpc_alist", "output")


def _parse_snr_list(text: str) -> tuple:
    try:
        values = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad SNR list {text!r}: {exc}") from exc
    if not values:
        raise argparse.ArgumentTypeError("SNR list is empty")
    return values


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags below override it")
    for name in _INT_FIELDS:
        p.add_argument(f"--{name}", type=int)
    for name in _FLOAT_FIELDS:
        p.add_argument(f"--{name}", type=float)
    for name in _STR_FIELDS:
        p.add_argument(f"--{name}")
    p.add_argument("--snr_db", type=_parse_snr_list, help="comma-separated dB values")
    p.add_argument("--partition", help="'full' or JSON like {\"k\":[8,8],\"q\":[4,16]}")


def _build_config(args: argparse.Namespace) -> SimConfig:
    data = SimConfig.from_json(args.config).to_dict() if args.config else {}
    for field in dataclasses.fields(SimConfig):
        value = getattr(args, field.name, None)
        if value is not None:
            data[field.name] = value
    return SimConfig.from_dict(data)


def _emit_text(cfg: SimConfig, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_rows(cfg: SimConfig, rows, header: str) -> None:
    if cfg.output:
        write_results(cfg.output, rows, header, cfg)
    else:
        sys.stdout.write(render_csv(rows, header))


def _cmd_uncoded(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    _emit_rows(cfg, run_uncoded(cfg), CSV_HEADER)
    return 0


def _cmd_coded(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    _emit_rows(cfg, run_coded(cfg), CSV_HEADER)
    return 0


def _cmd_partition_sweep(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    try:
        sweep = json.loads(args.sweep)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"--sweep is not valid JSON: {exc}") from exc
    if not isinstance(sweep, list):
        raise ConfigurationError("--sweep must be a JSON list of partition specs")
    _emit_rows(cfg, run_partition_sweep(cfg, sweep), SWEEP_CSV_HEADER)
    return 0


def _cmd_partition_stats(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    _emit_text(cfg, partition_report(cfg))
    return 0


def _cmd_complexity(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    n_pre, n_wmd, n_total = estimate_complexity(cfg.partition, cfg.m, cfg.n_users)
    label = cfg.partition.label() if cfg.partition is not None else "full"
    _emit_text(
        cfg,
        "partition,n_pre,n_wmd,n_total\n" + f"{label},{n_pre},{n_wmd},{n_total}\n",
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="onebit-mimo",
        description="Monte Carlo simulator for one-bit massive MIMO detection",
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("uncoded", help="uncoded BER versus SNR")
    _add_config_flags(p)
    p.set_defaults(handler=_cmd_uncoded)

    p = sub.add_parser("coded", help="LDPC frame error rate versus SNR")
    _add_config_flags(p)
    p.set_defaults(handler=_cmd_coded)

    p = sub.add_parser(
        "partition-sweep", help="paired BER and complexity over partition specs"
    )
    _add_config_flags(p)
    p.add_argument(
        "--sweep",
        required=True,
        help="JSON list of partition specs, e.g. '[\"full\", {\"k\":[8],\"q\":[4]}]'",
    )
    p.set_defaults(handler=_cmd_partition_sweep)

    p = sub.add_parser("partition-stats", help="tree shape for one sampled block")
    _add_config_flags(p)
    p.set_defaults(handler=_cmd_partition_stats)

    p = sub.add_parser("complexity", help="closed-form comparison counts")
    _add_config_flags(p)
    p.set_defaults(handler=_cmd_complexity)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "handler", None) is None:
        parser.print_help(sys.stderr)
        return 2
    try:
        return args.handler(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (
        np.linalg.LinAlgError,
        FloatingPointError,
        OverflowError,
        DegeneratePosteriorError,
        CodeConstructionError,
    ) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    raise SystemExit(main())
