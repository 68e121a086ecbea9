"""Command-line entry point: ingest, analyze, report, and utilities."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .ingest import IngestError, convert_gitlog
from .pipeline import (
    StageError,
    cmd_analyze,
    cmd_ingest,
    cmd_report,
    evaluate_classifier,
    export_training,
    generate_corpus,
    load_config,
)

log = logging.getLogger("govnet")


def _add_config_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="TOML run configuration")
    parser.add_argument("--seed", type=int, default=None, help="override [run].seed")
    parser.add_argument(
        "--jobs", type=int, default=None, help="override [run].jobs (0 = all cores)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="govnet",
        description=(
            "Mine incubator mailing lists and commit logs into monthly "
            "socio-technical networks, institutional-statement counts, topics, "
            "and panel causality tests."
        ),
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="log at DEBUG level"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse the raw corpus into JSONL")
    _add_config_options(p)

    p = sub.add_parser("analyze", help="run all analysis stages on ingested data")
    _add_config_options(p)

    p = sub.add_parser("report", help="render report.md from analyze artifacts")
    _add_config_options(p)

    p = sub.add_parser(
        "convert-gitlog",
        help="convert 'git log --name-only --date=iso-strict' output to JSONL",
    )
    p.add_argument("source", help="captured git log text file")
    p.add_argument("dest", help="output commits.jsonl path")

    p = sub.add_parser(
        "eval-classifier", help="train on the thread split and print holdout metrics"
    )
    _add_config_options(p)

    p = sub.add_parser(
        "export-training",
        help="write the oversampled training segments as JSON lines",
    )
    _add_config_options(p)
    p.add_argument("--out", required=True, help="output segments.jsonl path")

    p = sub.add_parser("simulate", help="write the bundled synthetic corpus")
    p.add_argument("dest", help="directory to create the corpus in")
    p.add_argument("--seed", type=int, default=7, help="generator seed")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.command == "ingest":
            config = load_config(args.config, seed=args.seed, jobs=args.jobs)
            stats = cmd_ingest(config)
            print(
                f"ingested {stats.emails_parsed} emails and "
                f"{stats.commits_parsed} commits into {config.output_dir / 'corpus'}"
            )
        elif args.command == "analyze":
            config = load_config(args.config, seed=args.seed, jobs=args.jobs)
            out = cmd_analyze(config)
            print(f"analysis artifacts written under {out}")
        elif args.command == "report":
            config = load_config(args.config, seed=args.seed, jobs=args.jobs)
            path = cmd_report(config)
            print(f"report written to {path}")
        elif args.command == "convert-gitlog":
            count = convert_gitlog(args.source, args.dest)
            print(f"wrote {count} commits to {args.dest}")
        elif args.command == "eval-classifier":
            config = load_config(args.config, seed=args.seed, jobs=args.jobs)
            report = evaluate_classifier(config)
            for key in ("precision", "recall", "f1", "accuracy"):
                print(f"{key}: {report[key]:.4f}")
            print(
                "tp={tp} fp={fp} fn={fn} tn={tn}".format(
                    tp=report["tp"], fp=report["fp"], fn=report["fn"], tn=report["tn"]
                )
            )
        elif args.command == "export-training":
            config = load_config(args.config, seed=args.seed, jobs=args.jobs)
            info = export_training(config, args.out)
            print(
                f"wrote {info['segments_oversampled']} training segments "
                f"({info['positive_segments']} positive) to {info['path']}"
            )
        elif args.command == "simulate":
            dest = generate_corpus(Path(args.dest), seed=args.seed)
            print(f"synthetic corpus written to {dest}")
    except StageError as exc:
        log.error("%s", exc)
        return 1
    except (IngestError, FileNotFoundError, ValueError) as exc:
        log.error("%s", exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
