"""Trainer command line: fine-tune, predict, and prompt against .neg.jsonl files."""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from .config import load_prompt_config, load_train_config
from .prompting import llm_prompt_predict
from .records_io import RecordError, read_records, write_records
from .training import predict, train

log = logging.getLogger("negscope_trainer")


def cmd_train(args) -> int:
    config = load_train_config(args.config)
    results = train(config)
    for result in results:
        print(f"seed {result.seed}: best validation token-F1 "
              f"{result.best_f1:.4f} after {len(result.trace)} epochs "
              f"-> {result.checkpoint_dir}")
    return 0


def cmd_predict(args) -> int:
    records = read_records(args.input)
    predicted = predict(args.checkpoint, records,
                        max_input_tokens=args.max_input_tokens,
                        batch_size=args.batch_size)
    write_records(predicted, args.output)
    print(f"wrote {len(predicted)} records to {args.output}")
    return 0


def cmd_prompt(args) -> int:
    config = load_prompt_config(args.config)
    if args.credentials:
        config = dataclasses.replace(config, credentials_path=args.credentials)
    records = read_records(args.input)
    pool = read_records(args.examples) if args.examples else []
    predicted, stats = llm_prompt_predict(records, config, example_pool=pool)
    write_records(predicted, args.output)
    print(f"wrote {len(predicted)} records to {args.output} "
          f"({stats.failures}/{stats.total} failures)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="negscope-trainer", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("train", help="fine-tune one checkpoint per seed")
    p.add_argument("--config", required=True, help="JSON training config")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="fill pred_scope_indices from a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--max-input-tokens", type=int, default=252)
    p.add_argument("--batch-size", type=int, default=16)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("prompt", help="zero/few-shot prediction via a chat endpoint")
    p.add_argument("--config", required=True, help="JSON prompt config")
    p.add_argument("--input", required=True)
    p.add_argument("--examples", help="records to sample few-shot examples from")
    p.add_argument("--credentials", help="file holding the endpoint API key")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_prompt)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr,
                        format="negscope-trainer: %(levelname)s: %(message)s",
                        level=logging.INFO)
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "command", None):
        parser.print_help(sys.stderr)
        return 1
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"negscope-trainer: error: {exc}", file=sys.stderr)
        return 1
    except RecordError as exc:
        print(f"negscope-trainer: error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())
