"""Measurement: micro token-level precision/recall/F1 per dataset, mean and
standard deviation across runs, corpus statistics, and scope-length analysis.

All percentages round half-up to two decimals so that independently computed
reports are byte-identical.
"""
from __future__ import annotations

import statistics
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_UP
from typing import Iterable, Sequence

from .records import Corpus, NegationRecord, ValidationError


def round_half_up(value: float, places: int = 2) -> float:
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(str(value)).quantize(quantum, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class Confusion:
    """Token-level counts; instances merge by plain addition."""

    tp: int = 0
    fp: int = 0
    fn: int = 0

    def __add__(self, other: "Confusion") -> "Confusion":
        return Confusion(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn)


def confusion(gold_indices: Iterable[int], pred_indices: Iterable[int]) -> Confusion:
    gold = set(gold_indices)
    pred = set(pred_indices)
    return Confusion(tp=len(gold & pred), fp=len(pred - gold), fn=len(gold - pred))


def precision_recall_f1(conf: Confusion) -> tuple[float, float, float]:
    """P, R, F1 with fixed zero-division conventions: an all-zero confusion is
    perfect (1.0), a zero denominator with misses/false alarms elsewhere is 0."""
    if conf.tp + conf.fp == 0:
        precision = 0.0 if conf.fn > 0 else 1.0
    else:
        precision = conf.tp / (conf.tp + conf.fp)
    if conf.tp + conf.fn == 0:
        recall = 0.0 if conf.fp > 0 else 1.0
    else:
        recall = conf.tp / (conf.tp + conf.fn)
    if precision + recall == 0:
        f1 = 0.0
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return precision, recall, f1


@dataclass(frozen=True)
class DatasetEval:
    confusion: Confusion
    precision: float
    recall: float
    f1: float
    instance_count: int


@dataclass(frozen=True)
class EvalReport:
    """Micro-averaged scores per (source, lang) dataset plus the pooled total."""

    per_dataset: dict[tuple[str, str], DatasetEval]
    overall: DatasetEval
    mode: str


def _dataset_eval(conf: Confusion, instances: int) -> DatasetEval:
    p, r, f1 = precision_recall_f1(conf)
    return DatasetEval(conf, p, r, f1, instances)


def join_instances(gold_corpus: Corpus, pred_corpus: Corpus,
                   mode: str = "strict") -> list[tuple[NegationRecord, frozenset[int]]]:
    """Pair every gold record with its prediction via (doc, sent, cues).

    A prediction without a gold partner is always an error: it means the
    prediction pipeline invented an instance.  A gold record without a
    prediction is an error in strict mode and an empty prediction in lenient
    mode.
    """
    if mode not in ("strict", "lenient"):
        raise ValueError(f"unknown mode {mode!r}")
    gold_by_key = {r.key: r for r in gold_corpus.records}
    pairs: list[tuple[NegationRecord, frozenset[int]]] = []
    seen = set()
    for pred in pred_corpus.records:
        gold = gold_by_key.get(pred.key)
        if gold is None:
            raise ValidationError("prediction for unknown gold instance", pred.key)
        if gold.tokens != pred.tokens:
            raise ValidationError("prediction tokens differ from gold tokens", pred.key)
        indices = pred.pred_scope_indices if pred.pred_scope_indices is not None else ()
        pairs.append((gold, frozenset(indices)))
        seen.add(pred.key)
    for key, gold in gold_by_key.items():
        if key in seen:
            continue
        if mode == "strict":
            raise ValidationError("gold instance has no prediction", key)
        pairs.append((gold, frozenset()))
    pairs.sort(key=lambda pair: pair[0].key)
    return pairs


def evaluate_run(gold_corpus: Corpus, pred_corpus: Corpus, mode: str = "strict") -> EvalReport:
    """Micro token-level evaluation: per-instance confusions are summed per
    dataset and overall before precision/recall/F1 are derived."""
    pairs = join_instances(gold_corpus, pred_corpus, mode)
    sums: dict[tuple[str, str], Confusion] = {}
    counts: dict[tuple[str, str], int] = {}
    total = Confusion()
    for gold, pred_indices in pairs:
        conf = confusion(gold.scope_indices, pred_indices)
        dataset = (gold.source, gold.lang)
        sums[dataset] = sums.get(dataset, Confusion()) + conf
        counts[dataset] = counts.get(dataset, 0) + 1
        total = total + conf
    per_dataset = {key: _dataset_eval(sums[key], counts[key]) for key in sorted(sums)}
    return EvalReport(per_dataset, _dataset_eval(total, len(pairs)), mode)


@dataclass(frozen=True)
class RunAggregate:
    """Mean and sample standard deviation of F1 over repeated runs."""

    mean_f1: float
    std_f1: float
    run_count: int


def aggregate_runs(f1_values: Sequence[float]) -> RunAggregate:
    values = [float(v) for v in f1_values]
    if len(values) < 2:
        raise ValueError("need at least 2 runs to aggregate")
    if any(v < 0 or v > 1 for v in values):
        raise ValueError("F1 values must lie in [0, 1]")
    return RunAggregate(statistics.fmean(values), statistics.stdev(values), len(values))


def format_aggregate(agg: RunAggregate) -> str:
    """Percent rendering with the ± deviation, e.g. ``85.00 ±7.07``."""
    return f"{agg.mean_f1 * 100:.2f} ±{agg.std_f1 * 100:.2f}"


@dataclass(frozen=True)
class CorpusStats:
    """Sentence totals and scope-token share for one (source, lang) dataset."""

    total_sentences: int
    negated_sentences: int
    pct_negated: float
    mean_tokens_per_sentence: float
    pct_scope_tokens: float


def corpus_stats(corpus: Corpus, scope_ratio: str = "pooled") -> dict[tuple[str, str], CorpusStats]:
    """Per-dataset sentence counts, negated share, mean sentence length, and
    scope-token percentage.

    ``scope_ratio="pooled"`` divides all annotated scope tokens by all tokens
    of the annotated instances; ``"per-sentence"`` averages the per-instance
    ratios instead.  Duplicated multi-negation sentences count once per
    instance either way.
    """
    if scope_ratio not in ("pooled", "per-sentence"):
        raise ValueError(f"unknown scope_ratio {scope_ratio!r}")
    groups: dict[tuple[str, str], dict] = {}
    for sent in corpus.sentences:
        g = groups.setdefault((sent.source, sent.lang), {
            "sentences": 0, "negated": 0, "tokens": 0,
            "scope_tokens": 0, "record_tokens": 0, "ratios": []})
        g["sentences"] += 1
        g["tokens"] += len(sent.tokens)
        records = corpus.records_for(sent.doc_id, sent.sent_id)
        if records:
            g["negated"] += 1
        for record in records:
            g["scope_tokens"] += len(record.scope_indices)
            g["record_tokens"] += len(record.tokens)
            g["ratios"].append(len(record.scope_indices) / len(record.tokens))
    out: dict[tuple[str, str], CorpusStats] = {}
    for key in sorted(groups):
        g = groups[key]
        pct_negated = 100 * g["negated"] / g["sentences"] if g["sentences"] else 0.0
        mean_len = g["tokens"] / g["sentences"] if g["sentences"] else 0.0
        if scope_ratio == "pooled":
            pct_scope = 100 * g["scope_tokens"] / g["record_tokens"] if g["record_tokens"] else 0.0
        else:
            pct_scope = 100 * statistics.fmean(g["ratios"]) if g["ratios"] else 0.0
        out[key] = CorpusStats(
            total_sentences=g["sentences"],
            negated_sentences=g["negated"],
            pct_negated=round_half_up(pct_negated),
            mean_tokens_per_sentence=round_half_up(mean_len),
            pct_scope_tokens=round_half_up(pct_scope),
        )
    return out


@dataclass(frozen=True)
class ScopeLengthReport:
    """Fraction of instance tokens inside the scope, gold vs. predicted."""

    actual_ratio: float
    predicted_ratio: float


def scope_length_report(gold_corpus: Corpus, pred_corpus: Corpus) -> ScopeLengthReport:
    """Pooled scope-length ratios over strictly joined instances.  Predictions
    that drop tokens (a forgotten subject, say) pull predicted_ratio below
    actual_ratio."""
    pairs = join_instances(gold_corpus, pred_corpus, mode="strict")
    gold_tokens = sum(len(gold.scope_indices) for gold, _ in pairs)
    pred_tokens = sum(len(pred) for _, pred in pairs)
    total = sum(len(gold.tokens) for gold, _ in pairs)
    if total == 0:
        return ScopeLengthReport(0.0, 0.0)
    return ScopeLengthReport(gold_tokens / total, pred_tokens / total)
