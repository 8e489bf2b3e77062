"""Core data model: tokens, negation records, corpora, and the .neg.jsonl format.

A corpus is a set of sentences (grouped into documents) plus zero or more
negation records per sentence.  Each record carries exactly one negation:
the cue token indices and the scope token indices.  Sentences without any
negation stay in the corpus so that sentence totals and selection statistics
remain meaningful.
"""
from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Union

LANGUAGES = ("de", "fr", "it", "en")
SPLITS = ("train", "test", "validation")

# Punctuation detached by the tokenizer and trimmed from scope edges.
PUNCT_CHARS = frozenset('.,;:!?()"«»„“')

CANONICAL_EXTENSION = ".neg.jsonl"


class FormatError(Exception):
    """Input that cannot be parsed at all (bad line, bad field, bad column count)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(Exception):
    """Parseable input that violates a record or corpus invariant."""

    def __init__(self, message: str, key: tuple | None = None):
        self.key = key
        if key is not None:
            message = f"record {key}: {message}"
        super().__init__(message)


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    """One token with character offsets into the (NFC-normalized) sentence."""

    surface: str
    char_start: int
    char_end: int


def tokenize(sentence_text: str) -> list[Token]:
    """Split one pre-segmented sentence into tokens.

    The text is NFC-normalized first; offsets refer to the normalized string.
    Tokens are whitespace chunks with punctuation detached from the edges as
    single-character tokens.  Two exceptions keep dates, inline citations and
    abbreviations ("06.02.2017", "i.S.d", "Abs.", "vgl.") in one piece:
    punctuation between two non-space characters never splits, and a trailing
    period only detaches on the last chunk of the sentence, where it is
    sentence-final rather than part of an abbreviation.
    """
    text = unicodedata.normalize("NFC", sentence_text)
    chunks: list[tuple[int, int]] = []
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace():
            j += 1
        chunks.append((i, j))
        i = j

    tokens: list[Token] = []
    for k, (start, end) in enumerate(chunks):
        last_chunk = k == len(chunks) - 1
        lo, hi = start, end
        while hi - lo > 1 and text[lo] in PUNCT_CHARS:
            tokens.append(Token(text[lo], lo, lo + 1))
            lo += 1
        trailing: list[Token] = []
        while hi - lo > 1 and text[hi - 1] in PUNCT_CHARS and (text[hi - 1] != "." or last_chunk):
            trailing.append(Token(text[hi - 1], hi - 1, hi))
            hi -= 1
        tokens.append(Token(text[lo:hi], lo, hi))
        tokens.extend(reversed(trailing))
    return tokens


def token_surfaces(sentence_text: str) -> list[str]:
    """Tokenize and return surfaces only."""
    return [t.surface for t in tokenize(sentence_text)]


# ---------------------------------------------------------------------------
# Records and sentences
# ---------------------------------------------------------------------------

def _as_index_tuple(value) -> tuple[int, ...]:
    if value is None:
        return ()
    return tuple(int(v) for v in value)


@dataclass(frozen=True)
class NegationRecord:
    """One sentence paired with one negation instance.

    ``cue_indices`` and ``scope_indices`` are strictly increasing 0-based
    token indices.  ``pred_scope_indices`` is ``None`` until some system has
    produced a prediction for the instance; an empty tuple means "predicted
    no scope".
    """

    doc_id: str
    sent_id: str
    lang: str
    source: str
    tokens: tuple[str, ...]
    cue_indices: tuple[int, ...] = ()
    scope_indices: tuple[int, ...] = ()
    split: str | None = None
    pred_scope_indices: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "cue_indices", _as_index_tuple(self.cue_indices))
        object.__setattr__(self, "scope_indices", _as_index_tuple(self.scope_indices))
        if self.pred_scope_indices is not None:
            object.__setattr__(self, "pred_scope_indices", _as_index_tuple(self.pred_scope_indices))

    @property
    def key(self) -> tuple[str, str, tuple[int, ...]]:
        return (self.doc_id, self.sent_id, self.cue_indices)

    @property
    def is_annotated(self) -> bool:
        return bool(self.cue_indices)

    def validate(self) -> None:
        key = self.key
        if self.lang not in LANGUAGES:
            raise ValidationError(f"unknown lang {self.lang!r}", key)
        if self.split is not None and self.split not in SPLITS:
            raise ValidationError(f"unknown split {self.split!r}", key)
        if not self.tokens:
            raise ValidationError("empty token sequence", key)
        if not all(isinstance(t, str) for t in self.tokens):
            raise ValidationError("tokens must be strings", key)
        n = len(self.tokens)
        for name, indices in (("cue_indices", self.cue_indices),
                              ("scope_indices", self.scope_indices),
                              ("pred_scope_indices", self.pred_scope_indices)):
            if indices is None:
                continue
            for a, b in zip(indices, indices[1:]):
                if a >= b:
                    raise ValidationError(f"{name} not strictly increasing", key)
            if indices and (indices[0] < 0 or indices[-1] >= n):
                raise ValidationError(f"{name} out of range [0, {n})", key)
        cues = set(self.cue_indices)
        if cues & set(self.scope_indices):
            raise ValidationError("cue/scope overlap", key)
        if not cues:
            if self.scope_indices:
                raise ValidationError("scope_indices without cue_indices", key)
            if self.pred_scope_indices is not None:
                raise ValidationError("pred_scope_indices on a record without cues", key)
        if self.pred_scope_indices is not None and cues & set(self.pred_scope_indices):
            raise ValidationError("cue/pred_scope overlap", key)


@dataclass(frozen=True)
class Sentence:
    """One sentence of one document, independent of any negation annotation."""

    doc_id: str
    sent_id: str
    lang: str
    source: str
    tokens: tuple[str, ...]
    split: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))

    @property
    def key(self) -> tuple[str, str]:
        return (self.doc_id, self.sent_id)

    @classmethod
    def of_record(cls, record: NegationRecord) -> "Sentence":
        return cls(record.doc_id, record.sent_id, record.lang, record.source,
                   record.tokens, record.split)


class Corpus:
    """Immutable collection of sentences and their negation records.

    Sentence order is the document order of the underlying data and is kept
    stable; records are held in canonical order (document, then sentence,
    then cue indices).  Equality ignores the order in which records were
    supplied but not the sentence order.
    """

    def __init__(self, records: Iterable[NegationRecord] = (),
                 sentences: Iterable[Sentence] | None = None):
        recs = list(records)
        for r in recs:
            r.validate()
        collected: dict[tuple[str, str], Sentence] = {}
        if sentences is not None:
            for s in sentences:
                if s.key in collected:
                    raise ValidationError("duplicate sentence", s.key)
                if not s.tokens:
                    raise ValidationError("empty token sequence", s.key)
                collected[s.key] = s
            for r in recs:
                sent = collected.get((r.doc_id, r.sent_id))
                if sent is None:
                    raise ValidationError("record for unknown sentence", r.key)
                self._check_consistent(sent, r)
        else:
            for r in recs:
                sent = collected.get((r.doc_id, r.sent_id))
                if sent is None:
                    collected[(r.doc_id, r.sent_id)] = Sentence.of_record(r)
                else:
                    self._check_consistent(sent, r)
        # normalize to document order: documents in first-appearance order,
        # each document's sentences in their given relative order
        by_doc: dict[str, list[tuple[str, str]]] = {}
        for key in collected:
            by_doc.setdefault(key[0], []).append(key)
        self._sentences = {key: collected[key]
                           for keys in by_doc.values() for key in keys}

        by_sentence: dict[tuple[str, str], list[NegationRecord]] = {k: [] for k in self._sentences}
        seen_keys: set[tuple] = set()
        for r in recs:
            if not r.is_annotated:
                continue
            if r.key in seen_keys:
                raise ValidationError("duplicate (doc_id, sent_id, cue_indices)", r.key)
            seen_keys.add(r.key)
            by_sentence[(r.doc_id, r.sent_id)].append(r)
        for group in by_sentence.values():
            group.sort(key=lambda r: r.cue_indices)
        self._by_sentence = by_sentence

    @staticmethod
    def _check_consistent(sent: Sentence, record: NegationRecord) -> None:
        if record.tokens != sent.tokens:
            raise ValidationError("conflicting token sequences for one sentence", record.key)
        for attr in ("lang", "source", "split"):
            if getattr(record, attr) != getattr(sent, attr):
                raise ValidationError(f"conflicting {attr} for one sentence", record.key)

    # -- accessors -----------------------------------------------------

    @property
    def sentences(self) -> tuple[Sentence, ...]:
        return tuple(self._sentences.values())

    @property
    def records(self) -> tuple[NegationRecord, ...]:
        out: list[NegationRecord] = []
        for key in self._sentences:
            out.extend(self._by_sentence[key])
        return tuple(out)

    @property
    def documents(self) -> dict[str, list[str]]:
        """doc_id -> sentence ids, in stable corpus order."""
        docs: dict[str, list[str]] = {}
        for doc_id, sent_id in self._sentences:
            docs.setdefault(doc_id, []).append(sent_id)
        return docs

    def sentence(self, doc_id: str, sent_id: str) -> Sentence:
        return self._sentences[(doc_id, sent_id)]

    def records_for(self, doc_id: str, sent_id: str) -> tuple[NegationRecord, ...]:
        return tuple(self._by_sentence[(doc_id, sent_id)])

    @property
    def record_count(self) -> int:
        return sum(len(g) for g in self._by_sentence.values())

    @property
    def sentence_count(self) -> int:
        return len(self._sentences)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return (list(self._sentences.items()) == list(other._sentences.items())
                and self._by_sentence == other._by_sentence)

    def __repr__(self) -> str:
        return (f"Corpus({self.record_count} records, {self.sentence_count} sentences, "
                f"{len(self.documents)} documents)")

    def with_records(self, records: Iterable[NegationRecord]) -> "Corpus":
        """New corpus with the same sentence inventory but different records."""
        return Corpus(records, sentences=self.sentences)


# ---------------------------------------------------------------------------
# Canonical .neg.jsonl format
# ---------------------------------------------------------------------------

_REQUIRED_FIELDS = ("doc_id", "sent_id", "lang", "source", "tokens",
                    "cue_indices", "scope_indices")
_OPTIONAL_FIELDS = ("split", "pred_scope_indices")


def _check_string(obj: dict, name: str, line: int) -> str:
    value = obj.get(name)
    if not isinstance(value, str):
        raise FormatError(f"field {name!r} must be a string", line)
    return value


def _check_index_array(obj: dict, name: str, line: int) -> list[int]:
    value = obj.get(name)
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise FormatError(f"field {name!r} must be an array of integers", line)
    return value


def _record_from_line(line_text: str, line_no: int) -> NegationRecord:
    try:
        obj = json.loads(line_text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON ({exc.msg})", line_no) from None
    if not isinstance(obj, dict):
        raise FormatError("record line must be a JSON object", line_no)
    for name in _REQUIRED_FIELDS:
        if name not in obj:
            raise FormatError(f"missing field {name!r}", line_no)
    unknown = set(obj) - set(_REQUIRED_FIELDS) - set(_OPTIONAL_FIELDS)
    if unknown:
        raise FormatError(f"unknown field {sorted(unknown)[0]!r}", line_no)

    tokens = obj["tokens"]
    if not isinstance(tokens, list) or not all(isinstance(t, str) for t in tokens):
        raise FormatError("field 'tokens' must be an array of strings", line_no)
    split = obj.get("split")
    if split is not None and not isinstance(split, str):
        raise FormatError("field 'split' must be a string", line_no)
    pred = None
    if "pred_scope_indices" in obj:
        pred = _check_index_array(obj, "pred_scope_indices", line_no)
    return NegationRecord(
        doc_id=_check_string(obj, "doc_id", line_no),
        sent_id=_check_string(obj, "sent_id", line_no),
        lang=_check_string(obj, "lang", line_no),
        source=_check_string(obj, "source", line_no),
        tokens=tokens,
        cue_indices=_check_index_array(obj, "cue_indices", line_no),
        scope_indices=_check_index_array(obj, "scope_indices", line_no),
        split=split,
        pred_scope_indices=pred,
    )


def _decode(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"input is not valid UTF-8 ({exc.reason} at byte {exc.start})") from None


def _iter_lines(stream) -> Iterator[str]:
    if isinstance(stream, bytes):
        yield from _decode(stream).splitlines()
    elif isinstance(stream, str):
        yield from stream.splitlines()
    elif hasattr(stream, "read"):
        data = stream.read()
        if isinstance(data, bytes):
            data = _decode(data)
        yield from data.splitlines()
    else:
        for raw in stream:
            if isinstance(raw, bytes):
                raw = _decode(raw)
            yield raw.rstrip("\n")


def read_canonical(stream: Union[bytes, str, IO, Iterable[str]]) -> Corpus:
    """Parse canonical line-delimited records into a corpus.

    Lines with empty ``cue_indices`` register their sentence without adding a
    negation record, which is how negation-free sentences survive round trips.
    """
    records: list[NegationRecord] = []
    sentences: list[Sentence] = []
    seen: dict[tuple[str, str], Sentence] = {}
    for line_no, line in enumerate(_iter_lines(stream), start=1):
        if not line.strip():
            continue
        record = _record_from_line(line, line_no)
        try:
            record.validate()
        except ValidationError as exc:
            wrapped = ValidationError(f"line {line_no}: {exc}")
            wrapped.key = record.key
            raise wrapped from None
        sent = Sentence.of_record(record)
        if sent.key not in seen:
            seen[sent.key] = sent
            sentences.append(sent)
        if record.is_annotated:
            records.append(record)
    return Corpus(records, sentences=sentences)


def _record_to_obj(record: NegationRecord) -> dict:
    obj = {
        "doc_id": record.doc_id,
        "sent_id": record.sent_id,
        "lang": record.lang,
        "source": record.source,
        "tokens": list(record.tokens),
        "cue_indices": list(record.cue_indices),
        "scope_indices": list(record.scope_indices),
    }
    if record.split is not None:
        obj["split"] = record.split
    if record.pred_scope_indices is not None:
        obj["pred_scope_indices"] = list(record.pred_scope_indices)
    return obj


def write_canonical(corpus: Corpus) -> bytes:
    """Serialize a corpus deterministically: document order, then sentence
    order, then cue indices; fixed field order within each line."""
    lines: list[str] = []
    for sent in corpus.sentences:
        group = corpus.records_for(sent.doc_id, sent.sent_id)
        if group:
            for record in group:
                lines.append(json.dumps(_record_to_obj(record), ensure_ascii=False))
        else:
            placeholder = NegationRecord(sent.doc_id, sent.sent_id, sent.lang,
                                         sent.source, sent.tokens, split=sent.split)
            lines.append(json.dumps(_record_to_obj(placeholder), ensure_ascii=False))
    if not lines:
        return b""
    return ("\n".join(lines) + "\n").encode("utf-8")


def load_corpus(path) -> Corpus:
    with open(path, "rb") as handle:
        return read_canonical(handle)


def save_corpus(corpus: Corpus, path) -> None:
    with open(path, "wb") as handle:
        handle.write(write_canonical(corpus))
