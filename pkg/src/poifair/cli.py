"""Command-line entry point.

Exit codes: 0 success, 2 config error, 3 data error, 4 stage failure.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigError, ExperimentConfig
from .data import DataError
from .pipeline import Pipeline, StageFailure, run_pipeline

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_STAGE = 4


def _add_common(sub):
    sub.add_argument("--config", required=True, help="experiment config JSON")
    sub.add_argument("--out", help="output directory (overrides config)")
    sub.add_argument("--seed", type=int, help="random seed (overrides config)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poifair",
        description="Context-aware POI recommendation with temporal-fairness evaluation",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    subs = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("preprocess", "parse, filter, and report dataset statistics"),
        ("analyze", "temporal profiles, groups, histogram, correlations"),
        ("recommend", "fit models and dump top-N recommendations"),
        ("evaluate", "ranking and fairness metrics (table3.csv)"),
        ("sweep", "weighted-sum lambda grid search on validation"),
        ("run", "all stages end to end"),
    ):
        sub = subs.add_parser(name, help=help_text)
        _add_common(sub)
    return parser


def _load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_json(args.config)
    if args.out:
        cfg.out_dir = args.out
    if args.seed is not None:
        cfg.seed = args.seed
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = _load_config(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        _dispatch(args.command, cfg)
    except StageFailure as e:
        if isinstance(e.cause, DataError):
            print(f"data error in stage {e.stage!r}: {e.cause}", file=sys.stderr)
            return EXIT_DATA
        print(f"stage failure: {e}", file=sys.stderr)
        return EXIT_STAGE
    except DataError as e:
        print(f"data error: {e}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def _dispatch(command: str, cfg: ExperimentConfig) -> None:
    if command == "run":
        run_pipeline(cfg)
        return
    p = Pipeline(cfg)
    d = p.parse()
    d = p.preprocess(d)
    if command == "preprocess":
        p.write_manifest()
        return
    split = p.split(d)
    profiles, assignment = p.analyze(d, split)
    if command == "analyze":
        p.write_manifest()
        return
    fitted, caches = p.fit_and_recommend(d, split)
    if command == "sweep":
        p.sweep(caches, assignment, split)
        p.write_manifest()
        return
    from .fusion import WEIGHTED_SUM

    best = (
        p.sweep(caches, assignment, split)
        if WEIGHTED_SUM in cfg.fusion_rules
        else {}
    )
    if command == "recommend" or command == "evaluate":
        p.evaluate(caches, assignment, split, best)
        p.write_manifest()
        return
    raise ValueError(f"unknown command {command!r}")


if __name__ == "__main__":
    sys.exit(main())
