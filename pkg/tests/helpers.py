"""Shared fixtures: random corpus generation and independent scoring oracles.

The oracles here deliberately avoid the library's own aggregation paths:
confusions are recomputed token by token so that metric tests compare two
independent routes to the same numbers.
"""
from __future__ import annotations

import random

from negscope import Corpus, NegationRecord, Sentence

WORDS = [
    "der", "Kläger", "Vertrag", "gilt", "ist", "über", "Fristen", "Anlage",
    "geprüft", "worden", "laut", "autonomie", "budgétaire", "décision",
    "perché", "sentenza", "ruling", "court", "appeal", "Handelsregister",
    "somit", "blosse", "Untätigkeit", "eingetragen", "früher", "später",
]

LANGS = ("de", "fr", "it", "en")


def random_sentence_tokens(rng: random.Random, max_tokens: int = 12) -> tuple[str, ...]:
    n = rng.randint(1, max_tokens)
    return tuple(rng.choice(WORDS) for _ in range(n))


def random_index_sets(rng: random.Random, n_tokens: int,
                      taken: set[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """A cue set disjoint from `taken` plus a scope set disjoint from the cue."""
    free = [i for i in range(n_tokens) if i not in taken]
    if not free:
        return (), ()
    cue_size = min(len(free), rng.randint(1, 2))
    cue = tuple(sorted(rng.sample(free, cue_size)))
    rest = [i for i in range(n_tokens) if i not in cue]
    scope_size = rng.randint(0, len(rest))
    scope = tuple(sorted(rng.sample(rest, scope_size))) if scope_size else ()
    return cue, scope


def random_corpus(rng: random.Random, max_docs: int = 4, max_sents: int = 4,
                  max_tokens: int = 12, uniform_lang: bool = False,
                  with_preds: bool = False, min_docs: int = 1) -> Corpus:
    lang = rng.choice(LANGS)
    source = rng.choice(["alpha", "beta"])
    sentences: list[Sentence] = []
    records: list[NegationRecord] = []
    for d in range(rng.randint(min_docs, max(min_docs, max_docs))):
        doc_id = f"doc{d}"
        for s in range(rng.randint(1, max_sents)):
            sent_lang = lang if uniform_lang else rng.choice(LANGS)
            tokens = random_sentence_tokens(rng, max_tokens)
            sentence = Sentence(doc_id, str(s), sent_lang, source, tokens)
            sentences.append(sentence)
            taken: set[int] = set()
            for _ in range(rng.randint(0, 2)):
                cue, scope = random_index_sets(rng, len(tokens), taken)
                if not cue:
                    break
                taken.update(cue)
                pred = None
                if with_preds:
                    candidates = [i for i in range(len(tokens)) if i not in cue]
                    pred = tuple(sorted(rng.sample(candidates, rng.randint(0, len(candidates)))))
                records.append(NegationRecord(
                    doc_id, str(s), sent_lang, source, tokens,
                    cue_indices=cue, scope_indices=scope, pred_scope_indices=pred))
    return Corpus(records, sentences=sentences)


def brute_force_confusion(gold_indices, pred_indices, n_tokens: int) -> tuple[int, int, int]:
    """Token-by-token confusion walk, independent of any set arithmetic."""
    gold = set(gold_indices)
    pred = set(pred_indices)
    tp = fp = fn = 0
    for t in range(n_tokens):
        in_gold = t in gold
        in_pred = t in pred
        if in_gold and in_pred:
            tp += 1
        elif in_pred:
            fp += 1
        elif in_gold:
            fn += 1
    return tp, fp, fn


def brute_force_prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    if tp + fp == 0:
        p = 0.0 if fn > 0 else 1.0
    else:
        p = tp / (tp + fp)
    if tp + fn == 0:
        r = 0.0 if fp > 0 else 1.0
    else:
        r = tp / (tp + fn)
    f1 = 0.0 if p + r == 0 else 2 * p * r / (p + r)
    return p, r, f1
