"""Reader and writer for the tab-separated negation column format used by
the ConanDoyle-neg distribution and related corpora.

Layout per token row: chapter, sentence number, token number, word, lemma,
POS, syntax, then one (cue, scope, negated event) column triple per negation
in the sentence.  A sentence without negation carries ``***`` in column 7.
``_`` marks an empty cell and a blank line ends a sentence.
"""
from __future__ import annotations

import logging
from .records import Corpus, FormatError, NegationRecord, Sentence, ValidationError, _iter_lines

log = logging.getLogger(__name__)

_EMPTY = "_"
_NO_NEGATION = "***"
_META_COLUMNS = 7


def _finish_sentence(rows: list[tuple[int, list[str]]], lang: str, source: str,
                     sentences: list[Sentence], records: list[NegationRecord]) -> None:
    first_line = rows[0][0]
    width = len(rows[0][1])
    for line_no, cols in rows:
        if len(cols) != width:
            raise FormatError(f"ragged row: expected {width} columns, got {len(cols)}", line_no)

    if width == _META_COLUMNS + 1 and all(cols[_META_COLUMNS] == _NO_NEGATION for _, cols in rows):
        negation_count = 0
    elif width >= _META_COLUMNS and (width - _META_COLUMNS) % 3 == 0:
        negation_count = (width - _META_COLUMNS) // 3
    else:
        raise FormatError(f"column count {width} is not 7+3k or 8 with {_NO_NEGATION!r}", first_line)

    doc_id = rows[0][1][0]
    sent_id = rows[0][1][1]
    try:
        int(sent_id)
    except ValueError:
        raise FormatError(f"sentence number {sent_id!r} is not an integer", first_line) from None
    words: list[str] = []
    for expected, (line_no, cols) in enumerate(rows):
        if cols[0] != doc_id or cols[1] != sent_id:
            raise FormatError("chapter/sentence id changes inside a block", line_no)
        try:
            token_num = int(cols[2])
        except ValueError:
            raise FormatError(f"token number {cols[2]!r} is not an integer", line_no) from None
        if token_num != expected:
            raise FormatError(f"token numbers not contiguous: expected {expected}, got {token_num}", line_no)
        words.append(cols[3])

    sentence = Sentence(doc_id, sent_id, lang, source, tuple(words))
    sentences.append(sentence)

    for slot in range(negation_count):
        cue_col = _META_COLUMNS + 3 * slot
        cue_indices, scope_indices, affixal = [], [], False
        for idx, (_, cols) in enumerate(rows):
            cue_cell = cols[cue_col]
            if cue_cell != _EMPTY:
                cue_indices.append(idx)
                if cue_cell != words[idx]:
                    affixal = True
            if cols[cue_col + 1] != _EMPTY:
                scope_indices.append(idx)
            # column cue_col + 2 is the negated-event annotation: parsed, dropped
        if not cue_indices:
            raise ValidationError(f"negation column {slot} has no cue token",
                                  (doc_id, sent_id, slot))
        if affixal:
            log.warning("dropping affixal-cue negation in %s sentence %s "
                        "(cue form is a fragment of its word)", doc_id, sent_id)
            continue
        records.append(NegationRecord(
            doc_id=doc_id, sent_id=sent_id, lang=lang, source=source,
            tokens=tuple(words), cue_indices=tuple(cue_indices),
            scope_indices=tuple(scope_indices)))


def parse_starsem(stream, lang: str = "en", source: str = "starsem") -> Corpus:
    """Parse column-format negation data into a corpus.

    Each negation column triple becomes one record; sentences marked with
    ``***`` (or carrying no negation columns) stay in the corpus without
    records so that sentence totals survive the conversion.
    """
    sentences: list[Sentence] = []
    records: list[NegationRecord] = []
    rows: list[tuple[int, list[str]]] = []
    for line_no, line in enumerate(_iter_lines(stream), start=1):
        if not line.strip():
            if rows:
                _finish_sentence(rows, lang, source, sentences, records)
                rows = []
            continue
        rows.append((line_no, line.split("\t")))
    if rows:
        _finish_sentence(rows, lang, source, sentences, records)
    return Corpus(records, sentences=sentences)


def write_starsem(corpus: Corpus) -> bytes:
    """Render a corpus in the column format.

    Records of one sentence merge back into one block with one column triple
    per record.  Lemma, POS, syntax and negated-event cells are written as
    ``_`` (the canonical model does not keep them); predictions and split
    assignments have no column and are dropped.
    """
    blocks: list[str] = []
    for sent in corpus.sentences:
        group = corpus.records_for(sent.doc_id, sent.sent_id)
        lines = []
        for idx, word in enumerate(sent.tokens):
            cols = [sent.doc_id, sent.sent_id, str(idx), word, _EMPTY, _EMPTY, _EMPTY]
            if not group:
                cols.append(_NO_NEGATION)
            else:
                for record in group:
                    cols.append(word if idx in record.cue_indices else _EMPTY)
                    cols.append(word if idx in record.scope_indices else _EMPTY)
                    cols.append(_EMPTY)
            lines.append("\t".join(cols))
        blocks.append("\n".join(lines) + "\n")
    if not blocks:
        return b""
    return "\n".join(blocks).encode("utf-8")
