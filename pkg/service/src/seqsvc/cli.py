"""Command-line entry point: train a model, serve a trained model."""
from __future__ import annotations

import argparse
import json
import logging
import sys

from .data import DataError, load_segments
from .server import create_server
from .train import TrainingError, finetune

log = logging.getLogger("seqsvc")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqsvc",
        description=(
            "Sequential sentence classifier: fine-tune on labeled segments, "
            "serve predictions and token counts over newline-delimited JSON."
        ),
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fine-tune on a training-segment JSONL file")
    p.add_argument("--data", required=True, help="segments.jsonl training file")
    p.add_argument("--out", required=True, help="model output directory")
    p.add_argument("--epochs", type=int, default=6)
    p.add_argument("--batch", type=int, default=16)
    p.add_argument("--lr", type=float, default=2e-5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--base", default=None, help="existing model directory to continue from"
    )

    p = sub.add_parser("serve", help="serve a trained model directory")
    p.add_argument("--model", required=True, help="trained model directory")
    p.add_argument(
        "--listen",
        required=True,
        help="host:port for a TCP socket, or http://host:port for HTTP",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.command == "train":
            segments = load_segments(args.data)
            out = finetune(
                segments,
                args.out,
                epochs=args.epochs,
                batch=args.batch,
                lr=args.lr,
                seed=args.seed,
                base=args.base,
            )
            logbook = json.loads((out / "training_log.json").read_text())
            manifest = json.loads((out / "manifest.json").read_text())
            for i, loss in enumerate(logbook["epoch_losses"], start=1):
                print(f"epoch {i}: loss {loss:.6f}")
            print(f"model written to {out} (hash {manifest['model_hash']})")
        elif args.command == "serve":
            server = create_server(args.model, args.listen)
            print(f"listening on {args.listen}", flush=True)
            try:
                server.serve_forever()
            except KeyboardInterrupt:
                server.shutdown()
    except (DataError, TrainingError, FileNotFoundError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
