"""Corpus construction pipeline: score documents by negation-cue frequency,
select the densest ones for annotation, and assign document-level
train/test/validation splits."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .lexicon import LexiconArg, detect_cues, lexicon_for
from .records import Corpus, NegationRecord, Sentence, SPLITS, ValidationError


@dataclass(frozen=True)
class DocumentScore:
    """Cue statistics for one document; density = cue tokens / all tokens."""

    doc_id: str
    cue_count: int
    token_count: int
    density: float

    @property
    def sort_key(self):
        return (-self.density, -self.cue_count, self.doc_id)


def score_documents(corpus: Corpus, lexicon: LexiconArg | None = None) -> list[DocumentScore]:
    """Count cue-covered tokens per document and rank by density.

    Ties on density break by raw cue count, then doc_id, so the ranking is
    total and reproducible.
    """
    counts: dict[str, list[int]] = {}
    for sent in corpus.sentences:
        cue_tokens = sum(len(m.indices)
                         for m in detect_cues(sent.tokens, lexicon_for(sent.lang, lexicon)))
        entry = counts.setdefault(sent.doc_id, [0, 0])
        entry[0] += cue_tokens
        entry[1] += len(sent.tokens)
    scores = []
    for doc_id, (cue_count, token_count) in counts.items():
        if token_count == 0:
            raise ValidationError("document has zero tokens", (doc_id,))
        scores.append(DocumentScore(doc_id, cue_count, token_count, cue_count / token_count))
    scores.sort(key=lambda s: s.sort_key)
    return scores


def select_top(scores: Sequence[DocumentScore], k: int) -> set[str]:
    """The k best-scoring documents (density, then cue count, then doc_id)."""
    if k < 0 or k > len(scores):
        raise ValueError(f"k={k} out of range for {len(scores)} documents")
    ranked = sorted(scores, key=lambda s: s.sort_key)
    return {s.doc_id for s in ranked[:k]}


# Linear congruential generator, Numerical Recipes constants.  Used instead of
# random.shuffle so the same seed yields the same split everywhere.
_LCG_A = 1664525
_LCG_C = 1013904223
_LCG_MOD = 2 ** 32


def _lcg_shuffle(items: list, seed: int) -> list:
    state = seed % _LCG_MOD
    out = list(items)
    for i in range(len(out) - 1, 0, -1):
        state = (_LCG_A * state + _LCG_C) % _LCG_MOD
        j = state % (i + 1)
        out[i], out[j] = out[j], out[i]
    return out


def assign_splits(corpus: Corpus, ratios: Sequence[int] = (70, 20, 10),
                  seed: int = 0) -> dict[str, str]:
    """Partition documents into train/test/validation.

    Documents are shuffled with a seeded portable generator and then assigned
    greedily: each document goes to the split whose sentence-count target has
    the largest remaining deficit (ties prefer train, then test).  Assignment
    is per document, so no sentence of one judgment leaks across splits.
    Every split with a non-zero ratio receives at least one document.
    """
    ratios = tuple(int(r) for r in ratios)
    if len(ratios) != len(SPLITS):
        raise ValueError(f"need {len(SPLITS)} ratios, got {len(ratios)}")
    if any(r < 0 for r in ratios):
        raise ValueError("ratios must be non-negative")
    if sum(ratios) != 100:
        raise ValueError("ratios must sum to 100")

    sentence_counts = {doc: len(sents) for doc, sents in corpus.documents.items()}
    required = [i for i, r in enumerate(ratios) if r > 0]
    if len(sentence_counts) < len(required):
        raise ValueError(f"cannot populate {len(required)} splits with "
                         f"{len(sentence_counts)} documents")

    order = _lcg_shuffle(list(sentence_counts), seed)
    total = sum(sentence_counts.values())
    targets = [Fraction(total * r, 100) for r in ratios]
    assigned_counts = [0, 0, 0]
    assignment: dict[str, str] = {}
    empty_required = set(required)
    for pos, doc_id in enumerate(order):
        remaining = len(order) - pos
        if remaining <= len(empty_required):
            # last documents must fill any still-empty non-zero split
            candidates = sorted(empty_required,
                                key=lambda i: (assigned_counts[i] - targets[i], i))
        else:
            candidates = sorted(required,
                                key=lambda i: (assigned_counts[i] - targets[i], i))
        choice = candidates[0]
        assignment[doc_id] = SPLITS[choice]
        assigned_counts[choice] += sentence_counts[doc_id]
        empty_required.discard(choice)
    return assignment


def apply_splits(corpus: Corpus, assignment: dict[str, str]) -> Corpus:
    """New corpus with the split field of every sentence and record set from
    a document-level assignment."""
    unknown = set(corpus.documents) - set(assignment)
    if unknown:
        raise ValueError(f"no split assigned for documents: {sorted(unknown)}")
    sentences = [Sentence(s.doc_id, s.sent_id, s.lang, s.source, s.tokens,
                          assignment[s.doc_id]) for s in corpus.sentences]
    records = [NegationRecord(r.doc_id, r.sent_id, r.lang, r.source, r.tokens,
                              r.cue_indices, r.scope_indices,
                              assignment[r.doc_id], r.pred_scope_indices)
               for r in corpus.records]
    return Corpus(records, sentences=sentences)
