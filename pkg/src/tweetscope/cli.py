"""Command-line entry point.

Each analysis subcommand runs its pipeline stage (and any stale upstream
stages) against a JSON config file. Exit codes: 0 ok, 2 config error,
3 stage failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import PipelineConfig, load_config
from .errors import ConfigError, StageError
from .pipeline import run_pipeline, verify_manifest
from .synthetic import SynthParams, generate_corpus

_STAGE_COMMANDS = {
    "ingest": "ingest",
    "geo": "geo",
    "label": "label",
    "cascades": "cascades",
    "analyze": "analyze",
    "sentiment": "sentiment",
    "topics": "topics",
    "trends": "trends",
    "export": "export",
    "all": "export",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tweetscope",
        description="Batch tweet-corpus analytics: misinformation cascades, "
                    "sentiment, topics, and emerging trends.")
    sub = parser.add_subparsers(dest="command", required=True)

    for command in _STAGE_COMMANDS:
        p = sub.add_parser(command, help=f"run the {command} stage"
                           if command != "all" else "run the whole pipeline")
        p.add_argument("--config", required=True, help="pipeline config JSON")
        p.add_argument("--workers", type=int, default=None,
                       help="ingest worker processes")
        p.add_argument("--seed", type=int, default=None,
                       help="override the pipeline seed")
        p.add_argument("--out", default=None, help="override out_dir")
        p.add_argument("--force", action="store_true",
                       help="rerun stages even when inputs are unchanged")

    p = sub.add_parser("verify", help="re-hash the exported artifact bundle")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("synth", help="generate a synthetic NDJSON corpus")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--n", type=int, default=10_000, help="record count")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--files", type=int, default=4, help="shard count")
    p.add_argument("--days", type=int, default=30, help="span in days")
    return parser


def _load(args: argparse.Namespace) -> PipelineConfig:
    cfg = load_config(args.config)
    if getattr(args, "workers", None) is not None:
        if args.workers < 1:
            raise ConfigError("workers must be >= 1")
        cfg.workers = args.workers
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "out", None) is not None:
        cfg.out_dir = args.out
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "synth":
        params = SynthParams(n_records=args.n, seed=args.seed,
                             n_files=args.files, n_days=args.days)
        paths = generate_corpus(args.out, params)
        print(f"wrote {len(paths)} shard(s) under {args.out}")
        return 0

    try:
        cfg = _load(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    if args.command == "verify":
        problems = verify_manifest(os.path.join(cfg.out_dir, "artifacts"))
        for problem in problems:
            print(problem, file=sys.stderr)
        print("manifest ok" if not problems else f"{len(problems)} problem(s)")
        return 0 if not problems else 3

    try:
        results = run_pipeline(cfg, upto=_STAGE_COMMANDS[args.command],
                               force=args.force)
    except StageError as exc:
        for result in exc.completed:
            status = "skipped (up to date)" if result.skipped else "done"
            print(f"[{result.name}] {status}")
        sys.stdout.flush()
        print(f"error: {exc}", file=sys.stderr)
        return 3
    for result in results:
        status = "skipped (up to date)" if result.skipped else "done"
        print(f"[{result.name}] {status}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
