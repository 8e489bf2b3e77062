"""Deterministic scope-resolution baseline.

The heuristic mirrors a maximum-scope annotation style: the scope of a cue is
the whole clause window around it, bounded by hard punctuation, minus
parenthesized insertions and the cue itself.  Commas do not close the window,
so subordinate clauses stay in scope; a leading conjunction is trimmed.
No parser is involved, so contrast-interrupted scopes ("nur zum Vertragsende
und nicht ...") come out too wide by design.
"""
from __future__ import annotations

import logging
from dataclasses import replace
from importlib import resources
from typing import Sequence

from .records import Corpus, PUNCT_CHARS

log = logging.getLogger(__name__)


def _load_data_lines(relpath: str) -> list[str]:
    text = resources.files("negscope.data").joinpath(relpath).read_text("utf-8")
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def clause_boundaries() -> frozenset[str]:
    """Tokens that end a clause window (semicolon, colon, sentence-final marks)."""
    return frozenset(_load_data_lines("clause_boundaries.txt"))


def conjunction_stoplist(lang: str) -> frozenset[str]:
    """Conjunctions trimmed when they open a scope window."""
    return frozenset(t.casefold() for t in _load_data_lines(f"stoplists/{lang}.txt"))


def _is_punct_token(token: str) -> bool:
    return all(ch in PUNCT_CHARS for ch in token)


def find_parentheticals(tokens: Sequence[str]) -> list[tuple[int, int]]:
    """Maximal balanced ``(`` ... ``)`` index ranges, parentheses included.

    Nested parentheses merge into the outermost range; an unclosed ``(`` runs
    to the end of the sentence.  A stray ``)`` is ignored.
    """
    ranges: list[tuple[int, int]] = []
    depth = 0
    start = 0
    for i, tok in enumerate(tokens):
        if tok == "(":
            if depth == 0:
                start = i
            depth += 1
        elif tok == ")" and depth > 0:
            depth -= 1
            if depth == 0:
                ranges.append((start, i))
    if depth > 0:
        ranges.append((start, len(tokens) - 1))
    return ranges


def resolve_scope(tokens: Sequence[str], cue_indices: Sequence[int], lang: str,
                  stoplist: frozenset[str] | None = None,
                  boundaries: frozenset[str] | None = None) -> tuple[int, ...]:
    """Predict the scope token indices for one cue.

    Steps: take the clause window around the cue (hard boundaries stop it,
    commas do not), drop parenthesized spans and the cue tokens, trim a
    window-initial conjunction and edge punctuation, and keep internal commas
    only while scope tokens remain on both sides.  The result can be
    discontinuous wherever spans were removed.
    """
    n = len(tokens)
    cues = sorted(set(int(c) for c in cue_indices))
    if not cues:
        raise ValueError("cue_indices must be non-empty")
    if cues[0] < 0 or cues[-1] >= n:
        raise ValueError(f"cue index out of range [0, {n})")
    if boundaries is None:
        boundaries = clause_boundaries()
    if stoplist is None:
        stoplist = conjunction_stoplist(lang)

    left = 0
    for i in range(cues[0] - 1, -1, -1):
        if tokens[i] in boundaries:
            left = i + 1
            break
    right = n - 1
    for i in range(cues[-1] + 1, n):
        if tokens[i] in boundaries:
            right = i - 1
            break

    scope = set(range(left, right + 1))
    for lo, hi in find_parentheticals(tokens):
        scope.difference_update(range(lo, hi + 1))
    scope.difference_update(cues)

    ordered = sorted(scope)
    changed = True
    while changed:
        changed = False
        while ordered and (tokens[ordered[0]].casefold() in stoplist
                           or _is_punct_token(tokens[ordered[0]])):
            ordered.pop(0)
            changed = True
        while ordered and _is_punct_token(tokens[ordered[-1]]):
            ordered.pop(-1)
            changed = True
        kept = [i for pos, i in enumerate(ordered)
                if tokens[i] != "," or (0 < pos < len(ordered) - 1)]
        if len(kept) != len(ordered):
            ordered = kept
            changed = True
    return tuple(ordered)


def resolve_corpus(corpus: Corpus, lang: str | None = None) -> Corpus:
    """Fill pred_scope_indices on every record; gold scopes stay untouched."""
    resolved = []
    for record in corpus.records:
        record_lang = lang or record.lang
        pred = resolve_scope(record.tokens, record.cue_indices, record_lang)
        resolved.append(replace(record, pred_scope_indices=pred))
    return corpus.with_records(resolved)
