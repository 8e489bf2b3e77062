"""Cue lexicons: loading per-language negation-cue patterns, finding them in
token sequences, and splitting multi-negation sentences into one-cue records.

Lexicon files are plain UTF-8 text, one pattern per line; tokens are space
separated and the literal token ``...`` separates the parts of a
discontinuous pattern (``ne ... pas``).  ``#`` starts a comment line.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Mapping, Sequence, Union

from .records import FormatError, LANGUAGES, NegationRecord, Sentence, _iter_lines

log = logging.getLogger(__name__)

# Discontinuous pattern parts must stay within one clause chain: scanning for
# a later part stops at these tokens.
_SCAN_BOUNDARIES = frozenset((";", ".", "!", "?"))


@dataclass(frozen=True)
class CuePattern:
    """One cue pattern: a sequence of parts, each a sequence of tokens.

    A single part means a contiguous cue ("nicht mehr"); several parts mean a
    discontinuous cue ("ne ... pas").
    """

    parts: tuple[tuple[str, ...], ...]
    lang: str

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(tuple(p) for p in self.parts))

    @property
    def total_tokens(self) -> int:
        return sum(len(p) for p in self.parts)

    @property
    def text(self) -> str:
        return " ... ".join(" ".join(part) for part in self.parts)


@dataclass(frozen=True)
class CueMatch:
    """A pattern occurrence: the matched token indices, strictly increasing."""

    pattern: CuePattern
    indices: tuple[int, ...]


def parse_pattern(line: str, lang: str, line_no: int | None = None) -> CuePattern:
    tokens = line.split()
    parts: list[list[str]] = [[]]
    for tok in tokens:
        if tok == "...":
            parts.append([])
        else:
            parts[-1].append(tok)
    if any(not part for part in parts):
        raise FormatError(f"empty cue pattern part in {line!r}", line_no)
    return CuePattern(tuple(tuple(p) for p in parts), lang)


def load_lexicon(stream, lang: str) -> list[CuePattern]:
    """Read a lexicon file.  Patterns are returned longest first (by total
    token count) so that greedy matching prefers "nicht mehr" over "nicht"."""
    patterns: list[CuePattern] = []
    seen: set[tuple] = set()
    for line_no, raw in enumerate(_iter_lines(stream), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        pattern = parse_pattern(line, lang, line_no)
        folded = tuple(tuple(t.casefold() for t in part) for part in pattern.parts)
        if folded in seen:
            log.warning("duplicate cue pattern %r (line %d) ignored", pattern.text, line_no)
            continue
        seen.add(folded)
        patterns.append(pattern)
    patterns.sort(key=lambda p: -p.total_tokens)
    return patterns


def default_lexicon(lang: str) -> list[CuePattern]:
    """Shipped lexicon of the most common negation words for one language."""
    if lang not in LANGUAGES:
        raise ValueError(f"no default lexicon for lang {lang!r}")
    data = resources.files("negscope.data").joinpath(f"lexicons/{lang}.txt").read_text("utf-8")
    return load_lexicon(data, lang)


LexiconArg = Union[Sequence[CuePattern], Mapping[str, Sequence[CuePattern]]]


def lexicon_for(lang: str, lexicon: LexiconArg | None) -> Sequence[CuePattern]:
    """Resolve a lexicon argument: a pattern list applies to every language,
    a mapping is indexed by language, None falls back to the shipped files."""
    if lexicon is None:
        return default_lexicon(lang)
    if isinstance(lexicon, Mapping):
        return lexicon[lang]
    return lexicon


def _match_part(part: tuple[str, ...], folded: list[str], start: int,
                claimed: set[int]) -> bool:
    if start + len(part) > len(folded):
        return False
    for offset, want in enumerate(part):
        idx = start + offset
        if idx in claimed or folded[idx] != want.casefold():
            return False
    return True


def _match_at(pattern: CuePattern, folded: list[str], start: int,
              claimed: set[int]) -> tuple[int, ...] | None:
    first = pattern.parts[0]
    if not _match_part(first, folded, start, claimed):
        return None
    indices = list(range(start, start + len(first)))
    cursor = start + len(first)
    for part in pattern.parts[1:]:
        found = None
        j = cursor
        while j < len(folded):
            if folded[j] in _SCAN_BOUNDARIES:
                return None
            if _match_part(part, folded, j, claimed):
                found = j
                break
            j += 1
        if found is None:
            return None
        indices.extend(range(found, found + len(part)))
        cursor = found + len(part)
    return tuple(indices)


def detect_cues(tokens: Sequence[str], lexicon: Sequence[CuePattern]) -> list[CueMatch]:
    """Greedy left-to-right, longest-pattern-first cue detection.

    Matching is case-insensitive (Unicode case folding).  Each token joins at
    most one match, so "nicht mehr" is one two-token cue rather than a "nicht"
    match plus a stray "mehr".  Matches come back ordered by first index.
    """
    folded = [t.casefold() for t in tokens]
    claimed: set[int] = set()
    matches: list[CueMatch] = []
    for i in range(len(tokens)):
        if i in claimed:
            continue
        for pattern in lexicon:
            indices = _match_at(pattern, folded, i, claimed)
            if indices is not None:
                matches.append(CueMatch(pattern, indices))
                claimed.update(indices)
                break
    return matches


def explode_instances(sentence: Sentence, matches: Iterable[CueMatch]) -> list[NegationRecord]:
    """One record per cue match, each carrying the full sentence tokens and an
    empty scope.  Multi-negation sentences thereby become several one-negation
    records; with no matches the sentence yields no records."""
    out = []
    for match in matches:
        out.append(NegationRecord(
            doc_id=sentence.doc_id,
            sent_id=sentence.sent_id,
            lang=sentence.lang,
            source=sentence.source,
            tokens=sentence.tokens,
            cue_indices=match.indices,
            scope_indices=(),
            split=sentence.split,
        ))
    return out
