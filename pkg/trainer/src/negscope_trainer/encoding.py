"""Turning records into model inputs.

The cue is marked in the input by wrapping each contiguous cue run with the
reserved tokens [CUE] and [/CUE], so the classifier is conditioned on which
negation it must resolve.  Labels are word-level binary (scope / non-scope):
only the first sub-token of every word carries a label, continuation pieces
and marker tokens are masked out of the loss with -100.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from .records_io import Record

log = logging.getLogger(__name__)

MARKER_OPEN = "[CUE]"
MARKER_CLOSE = "[/CUE]"
IGNORE_LABEL = -100


class EncodingError(Exception):
    pass


def cue_runs(cue_indices) -> list[tuple[int, int]]:
    """Contiguous runs of cue indices as inclusive (start, end) pairs."""
    runs = []
    for idx in sorted(cue_indices):
        if runs and idx == runs[-1][1] + 1:
            runs[-1] = (runs[-1][0], idx)
        else:
            runs.append((idx, idx))
    return runs


def marked_words(tokens, cue_indices) -> tuple[list[str], list[int | None]]:
    """Word sequence with markers inserted; second value maps each word back
    to its original token index (None for markers)."""
    opens = {start for start, _ in cue_runs(cue_indices)}
    closes = {end for _, end in cue_runs(cue_indices)}
    words: list[str] = []
    origin: list[int | None] = []
    for idx, token in enumerate(tokens):
        if idx in opens:
            words.append(MARKER_OPEN)
            origin.append(None)
        words.append(token)
        origin.append(idx)
        if idx in closes:
            words.append(MARKER_CLOSE)
            origin.append(None)
    return words, origin


@dataclass
class EncodedInstance:
    record: Record
    input_ids: list[int]
    attention_mask: list[int]
    labels: list[int]
    word_origin: list[int | None]
    first_subtoken: dict[int, int]   # word position -> sub-token position

    def __len__(self):
        return len(self.input_ids)


def encode_instance(record: Record, tokenizer, max_input_tokens: int = 252,
                    with_labels: bool = True) -> EncodedInstance:
    """Encode one record; raises EncodingError when a cue token would fall
    beyond the truncation limit (the instance cannot be conditioned then)."""
    if not record.cue_indices:
        raise EncodingError(f"record {record.key} has no cue to condition on")
    words, origin = marked_words(record.tokens, record.cue_indices)
    encoded = tokenizer(words, is_split_into_words=True, truncation=True,
                        max_length=max_input_tokens)
    word_ids = encoded.word_ids()
    first_subtoken: dict[int, int] = {}
    for pos, word_idx in enumerate(word_ids):
        if word_idx is not None and word_idx not in first_subtoken:
            first_subtoken[word_idx] = pos

    cues = set(record.cue_indices)
    for word_idx, token_idx in enumerate(origin):
        if token_idx in cues and word_idx not in first_subtoken:
            raise EncodingError(
                f"record {record.key}: cue token {token_idx} lies beyond the "
                f"{max_input_tokens} sub-token limit")
    if len(first_subtoken) < len(words):
        log.warning("record %s truncated to %d sub-tokens; %d words lost",
                    record.key, max_input_tokens, len(words) - len(first_subtoken))

    labels = [IGNORE_LABEL] * len(encoded["input_ids"])
    if with_labels:
        scope = set(record.scope_indices)
        for word_idx, pos in first_subtoken.items():
            token_idx = origin[word_idx]
            if token_idx is None:
                continue
            labels[pos] = 1 if token_idx in scope else 0
    return EncodedInstance(
        record=record,
        input_ids=list(encoded["input_ids"]),
        attention_mask=list(encoded["attention_mask"]),
        labels=labels,
        word_origin=origin,
        first_subtoken=first_subtoken,
    )


def decode_word_predictions(instance: EncodedInstance, subtoken_labels) -> tuple[int, ...]:
    """Word-level scope indices from per-sub-token predictions.

    Each word takes the label of its first sub-token; words beyond the
    truncation limit count as non-scope; cue tokens are forced off so the
    output always satisfies the record invariants.
    """
    cues = set(instance.record.cue_indices)
    indices = []
    for word_idx, token_idx in enumerate(instance.word_origin):
        if token_idx is None or token_idx in cues:
            continue
        pos = instance.first_subtoken.get(word_idx)
        if pos is None:
            continue
        if int(subtoken_labels[pos]) == 1:
            indices.append(token_idx)
    return tuple(sorted(indices))
