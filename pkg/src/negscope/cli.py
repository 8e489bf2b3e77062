"""Command-line interface.

Subcommands cover the whole workflow: convert formats, build corpora from
pre-split sentence text (score, select, duplicate, split), run the rule
baseline, and evaluate predictions.  Data goes to --output (default stdout),
diagnostics to stderr.  Exit codes: 0 success, 1 usage error, 2 input
format or validation error.
"""
from __future__ import annotations

import argparse
import glob as globmod
import logging
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .lexicon import default_lexicon, detect_cues, explode_instances, load_lexicon
from .metrics import (aggregate_runs, corpus_stats, evaluate_run, format_aggregate,
                      scope_length_report)
from .pipeline import apply_splits, assign_splits, score_documents, select_top
from .records import (Corpus, FormatError, NegationRecord, Sentence, ValidationError,
                      load_corpus, read_canonical, tokenize, write_canonical)
from .rules import resolve_corpus
from .starsem import parse_starsem, write_starsem

log = logging.getLogger("negscope")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so usage errors map to code 1."""

    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# IO helpers
# ---------------------------------------------------------------------------

def _read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as handle:
        return handle.read()


def _write_bytes(path: str, data: bytes) -> None:
    """Write via a temporary file and rename, so failures leave no partial output."""
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".negscope-", dir=directory)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_text(path: str, text: str) -> None:
    _write_bytes(path, text.encode("utf-8"))


def _load(path: str) -> Corpus:
    try:
        return read_canonical(_read_bytes(path))
    except (FormatError, ValidationError) as exc:
        raise type(exc)(f"{path}: {exc}") from None


def _render(headers: list[str], rows: list[list[str]], fmt: str) -> str:
    if fmt == "tsv":
        lines = ["\t".join(headers)] + ["\t".join(row) for row in rows]
        return "\n".join(lines) + "\n"
    widths = [max(len(headers[i]), *(len(r[i]) for r in rows)) if rows else len(headers[i])
              for i in range(len(headers))]
    def fmt_row(row):
        return "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
    lines = [fmt_row(headers), fmt_row(["-" * w for w in widths])]
    lines.extend(fmt_row(row) for row in rows)
    return "\n".join(lines) + "\n"


def _lexicon_from_args(args) -> object | None:
    if getattr(args, "lexicon", None):
        lang = getattr(args, "lang", None) or "any"
        return load_lexicon(_read_bytes(args.lexicon), lang)
    return None


def corpus_from_text(data: bytes | str, lang: str, source: str) -> Corpus:
    """Build a negation-free corpus from pre-split sentence text.

    One sentence per line; a line ``# doc: <id>`` opens a named document and a
    blank line opens a new anonymous one.  Sentences are tokenized with the
    package tokenizer and numbered 0..n-1 within their document.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    sentences: list[Sentence] = []
    doc_counter = 0
    doc_id: str | None = None
    sent_counter = 0

    def next_anonymous() -> str:
        nonlocal doc_counter
        doc_counter += 1
        return f"d{doc_counter:04d}"

    for raw in data.splitlines():
        line = raw.strip()
        if not line:
            doc_id = None
            continue
        if line.startswith("# doc:"):
            doc_id = line[len("# doc:"):].strip() or next_anonymous()
            sent_counter = 0
            continue
        if doc_id is None:
            doc_id = next_anonymous()
            sent_counter = 0
        tokens = [t.surface for t in tokenize(line)]
        if not tokens:
            continue
        sentences.append(Sentence(doc_id, str(sent_counter), lang, source, tuple(tokens)))
        sent_counter += 1
    return Corpus((), sentences=sentences)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_convert(args) -> None:
    if args.from_format == "jsonl":
        corpus = _load(args.input)
    elif args.from_format == "starsem":
        if not args.lang:
            raise UsageError("--lang is required when converting from starsem")
        source = args.source or Path(args.input).stem
        try:
            corpus = parse_starsem(_read_bytes(args.input), lang=args.lang, source=source)
        except (FormatError, ValidationError) as exc:
            raise type(exc)(f"{args.input}: {exc}") from None
    else:  # text
        if not args.lang:
            raise UsageError("--lang is required when converting from text")
        source = args.source or Path(args.input).stem
        corpus = corpus_from_text(_read_bytes(args.input), lang=args.lang, source=source)
    if args.to_format == "jsonl":
        _write_bytes(args.output, write_canonical(corpus))
    else:
        _write_bytes(args.output, write_starsem(corpus))


def cmd_stats(args) -> None:
    corpus = _load(args.input)
    stats = corpus_stats(corpus, scope_ratio=args.scope_ratio)
    headers = ["source", "lang", "total", "negated", "pct_negated",
               "mean_tokens", "pct_scope_tokens"]
    rows = [[source, lang, str(s.total_sentences), str(s.negated_sentences),
             f"{s.pct_negated:.2f}", f"{s.mean_tokens_per_sentence:.2f}",
             f"{s.pct_scope_tokens:.2f}"]
            for (source, lang), s in stats.items()]
    _write_text(args.output, _render(headers, rows, args.format))


def cmd_score(args) -> None:
    corpus = _load(args.input)
    scores = score_documents(corpus, _lexicon_from_args(args))
    headers = ["doc_id", "cue_count", "token_count", "density"]
    rows = [[s.doc_id, str(s.cue_count), str(s.token_count), f"{s.density:.6f}"]
            for s in scores]
    _write_text(args.output, _render(headers, rows, args.format))


def cmd_select(args) -> None:
    corpus = _load(args.input)
    scores = score_documents(corpus, _lexicon_from_args(args))
    chosen = select_top(scores, args.top)
    ranked = [s.doc_id for s in scores if s.doc_id in chosen]
    _write_text(args.output, "".join(doc_id + "\n" for doc_id in ranked))
    if args.write_corpus:
        subset = Corpus(
            [r for r in corpus.records if r.doc_id in chosen],
            sentences=[s for s in corpus.sentences if s.doc_id in chosen])
        _write_bytes(args.write_corpus, write_canonical(subset))


def cmd_split(args) -> None:
    corpus = _load(args.input)
    try:
        ratios = tuple(int(part) for part in args.ratios.split(","))
    except ValueError:
        raise UsageError(f"ratios must be integers: {args.ratios!r}") from None
    assignment = assign_splits(corpus, ratios=ratios, seed=args.seed)
    rows = [[doc_id, split] for doc_id, split in assignment.items()]
    _write_text(args.output, _render(["doc_id", "split"], rows, "tsv"))
    if args.apply:
        _write_bytes(args.apply, write_canonical(apply_splits(corpus, assignment)))


def cmd_detect_cues(args) -> None:
    corpus = _load(args.input)
    lexicon = _lexicon_from_args(args)
    headers = ["doc_id", "sent_id", "indices", "pattern", "surface"]
    rows = []
    for sent in corpus.sentences:
        patterns = lexicon if lexicon is not None else default_lexicon(sent.lang)
        for match in detect_cues(sent.tokens, patterns):
            rows.append([sent.doc_id, sent.sent_id,
                         ",".join(str(i) for i in match.indices),
                         match.pattern.text,
                         " ".join(sent.tokens[i] for i in match.indices)])
    _write_text(args.output, _render(headers, rows, args.format))


def cmd_duplicate(args) -> None:
    corpus = _load(args.input)
    if corpus.record_count:
        raise ValidationError("input corpus already carries negation records")
    lexicon = _lexicon_from_args(args)
    records: list[NegationRecord] = []
    sentences: list[Sentence] = []
    for sent in corpus.sentences:
        patterns = lexicon if lexicon is not None else default_lexicon(sent.lang)
        matches = detect_cues(sent.tokens, patterns)
        records.extend(explode_instances(sent, matches))
        if matches or not args.drop_unmatched:
            sentences.append(sent)
    _write_bytes(args.output, write_canonical(Corpus(records, sentences=sentences)))


def cmd_resolve(args) -> None:
    corpus = _load(args.input)
    _write_bytes(args.output, write_canonical(resolve_corpus(corpus, lang=args.lang)))


def _eval_rows(report) -> list[list[str]]:
    rows = []
    for (source, lang), ds in report.per_dataset.items():
        rows.append([source, lang, str(ds.instance_count), str(ds.confusion.tp),
                     str(ds.confusion.fp), str(ds.confusion.fn),
                     f"{ds.precision * 100:.2f}", f"{ds.recall * 100:.2f}",
                     f"{ds.f1 * 100:.2f}"])
    total = report.overall
    rows.append(["TOTAL", "", str(total.instance_count), str(total.confusion.tp),
                 str(total.confusion.fp), str(total.confusion.fn),
                 f"{total.precision * 100:.2f}", f"{total.recall * 100:.2f}",
                 f"{total.f1 * 100:.2f}"])
    return rows


def cmd_eval(args) -> None:
    gold = _load(args.gold)
    headers = ["source", "lang", "instances", "tp", "fp", "fn",
               "precision", "recall", "f1"]
    if args.runs:
        paths = sorted(globmod.glob(args.runs))
        if len(paths) < 2:
            raise UsageError(f"--runs matched {len(paths)} files; need at least 2")
        per_dataset: dict[tuple[str, str], list[float]] = {}
        overall: list[float] = []
        for path in paths:
            report = evaluate_run(gold, _load(path), mode=args.mode)
            overall.append(report.overall.f1)
            for key, ds in report.per_dataset.items():
                per_dataset.setdefault(key, []).append(ds.f1)

        def agg_row(source: str, lang: str, values: list[float]) -> list[str]:
            agg = aggregate_runs(values)
            if args.format == "tsv":
                return [source, lang, str(agg.run_count),
                        f"{agg.mean_f1 * 100:.2f}", f"{agg.std_f1 * 100:.2f}"]
            return [source, lang, str(agg.run_count), format_aggregate(agg)]

        rows = [agg_row(source, lang, values)
                for (source, lang), values in sorted(per_dataset.items())
                if len(values) == len(paths)]
        rows.append(agg_row("TOTAL", "", overall))
        agg_headers = (["source", "lang", "runs", "mean_f1", "std_f1"]
                       if args.format == "tsv" else ["source", "lang", "runs", "f1"])
        _write_text(args.output, _render(agg_headers, rows, args.format))
        return
    if not args.pred:
        raise UsageError("either --pred or --runs is required")
    report = evaluate_run(gold, _load(args.pred), mode=args.mode)
    _write_text(args.output, _render(headers, _eval_rows(report), args.format))


def cmd_scope_length(args) -> None:
    gold = _load(args.gold)
    pred = _load(args.pred)
    report = scope_length_report(gold, pred)
    headers = ["actual_pct", "predicted_pct"]
    rows = [[f"{report.actual_ratio * 100:.2f}", f"{report.predicted_ratio * 100:.2f}"]]
    _write_text(args.output, _render(headers, rows, args.format))


# ---------------------------------------------------------------------------
# Parser wiring
# ---------------------------------------------------------------------------

def _add_output(parser, default="-"):
    parser.add_argument("--output", "-o", default=default, help="output path (default stdout)")


def _add_format(parser):
    parser.add_argument("--format", choices=("tsv", "table"), default="tsv")


def _add_lexicon(parser):
    parser.add_argument("--lexicon", help="cue lexicon file (default: shipped per-language lexicons)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="negscope", description=__doc__)
    parser.add_argument("--version", action="version", version=f"negscope {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("convert", help="convert between starsem, canonical jsonl, and sentence text")
    p.add_argument("--from", dest="from_format", required=True, choices=("starsem", "jsonl", "text"))
    p.add_argument("--to", dest="to_format", required=True, choices=("starsem", "jsonl"))
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--lang", choices=("de", "fr", "it", "en"))
    p.add_argument("--source", help="dataset name stored on records (default: input stem)")
    _add_output(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("stats", help="sentence totals, negated share, scope-token percentage")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--scope-ratio", choices=("pooled", "per-sentence"), default="pooled")
    _add_format(p)
    _add_output(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("score", help="rank documents by negation-cue density")
    p.add_argument("--input", "-i", required=True)
    _add_lexicon(p)
    p.add_argument("--lang", choices=("de", "fr", "it", "en"), help="language label for --lexicon")
    _add_format(p)
    _add_output(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("select", help="pick the top-k documents by negation score")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--top", type=int, required=True, metavar="K")
    _add_lexicon(p)
    p.add_argument("--lang", choices=("de", "fr", "it", "en"))
    p.add_argument("--write-corpus", help="also write the selected sub-corpus here")
    _add_output(p)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("split", help="assign document-level train/test/validation splits")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--ratios", default="70,20,10", help="three integers summing to 100")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--apply", help="also write the corpus with split fields set")
    _add_output(p)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("detect-cues", help="list cue matches per sentence")
    p.add_argument("--input", "-i", required=True)
    _add_lexicon(p)
    p.add_argument("--lang", choices=("de", "fr", "it", "en"))
    _add_format(p)
    _add_output(p)
    p.set_defaults(func=cmd_detect_cues)

    p = sub.add_parser("duplicate", help="one record per detected cue (multi-negation duplication)")
    p.add_argument("--input", "-i", required=True)
    _add_lexicon(p)
    p.add_argument("--lang", choices=("de", "fr", "it", "en"))
    p.add_argument("--drop-unmatched", action="store_true",
                   help="drop sentences without any cue match")
    _add_output(p)
    p.set_defaults(func=cmd_duplicate)

    p = sub.add_parser("resolve", help="fill pred_scope_indices with the rule baseline")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--lang", choices=("de", "fr", "it", "en"),
                   help="override record languages for stop-lists")
    _add_output(p)
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("eval", help="micro token-level P/R/F1 of predictions against gold")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred")
    p.add_argument("--runs", help="glob of prediction files to aggregate into mean±std")
    p.add_argument("--mode", choices=("strict", "lenient"), default="strict")
    _add_format(p)
    _add_output(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("scope-length", help="gold vs predicted scope-token share")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    _add_format(p)
    _add_output(p)
    p.set_defaults(func=cmd_scope_length)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, format="negscope: %(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            parser.print_help(sys.stderr)
            return 1
        args.func(args)
        return 0
    except UsageError as exc:
        print(f"negscope: error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"negscope: error: {exc}", file=sys.stderr)
        return 1
    except (FormatError, ValidationError) as exc:
        print(f"negscope: error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0
    except OSError as exc:
        print(f"negscope: error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())
