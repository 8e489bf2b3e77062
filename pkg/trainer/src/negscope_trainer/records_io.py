"""Reader/writer for the canonical .neg.jsonl record format.

This is the contract with the corpus toolkit: the trainer consumes and
produces only these files.  Every record is validated before writing, so
anything emitted here passes the toolkit's strict evaluation join.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Iterable

FIELD_ORDER = ("doc_id", "sent_id", "lang", "source", "tokens",
               "cue_indices", "scope_indices", "split", "pred_scope_indices")


class RecordError(Exception):
    pass


@dataclass(frozen=True)
class Record:
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
        object.__setattr__(self, "cue_indices", tuple(self.cue_indices))
        object.__setattr__(self, "scope_indices", tuple(self.scope_indices))
        if self.pred_scope_indices is not None:
            object.__setattr__(self, "pred_scope_indices", tuple(self.pred_scope_indices))

    @property
    def key(self) -> tuple[str, str, tuple[int, ...]]:
        return (self.doc_id, self.sent_id, self.cue_indices)

    @property
    def is_annotated(self) -> bool:
        return bool(self.cue_indices)

    def with_prediction(self, indices: Iterable[int]) -> "Record":
        cleaned = tuple(sorted(set(int(i) for i in indices) - set(self.cue_indices)))
        return replace(self, pred_scope_indices=cleaned)

    def validate(self) -> None:
        n = len(self.tokens)
        if n == 0:
            raise RecordError(f"record {self.key}: empty token sequence")
        for name in ("cue_indices", "scope_indices", "pred_scope_indices"):
            indices = getattr(self, name)
            if indices is None:
                continue
            if list(indices) != sorted(set(indices)):
                raise RecordError(f"record {self.key}: {name} not strictly increasing")
            if indices and (indices[0] < 0 or indices[-1] >= n):
                raise RecordError(f"record {self.key}: {name} out of range")
        cues = set(self.cue_indices)
        if cues & set(self.scope_indices):
            raise RecordError(f"record {self.key}: cue/scope overlap")
        if self.pred_scope_indices is not None and cues & set(self.pred_scope_indices):
            raise RecordError(f"record {self.key}: cue/pred_scope overlap")


def read_records(path) -> list[Record]:
    records = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise RecordError(f"{path}: line {line_no}: invalid JSON ({exc.msg})") from None
            record = Record(
                doc_id=obj["doc_id"], sent_id=obj["sent_id"], lang=obj["lang"],
                source=obj["source"], tokens=tuple(obj["tokens"]),
                cue_indices=tuple(obj["cue_indices"]),
                scope_indices=tuple(obj["scope_indices"]),
                split=obj.get("split"),
                pred_scope_indices=(tuple(obj["pred_scope_indices"])
                                    if "pred_scope_indices" in obj else None),
            )
            record.validate()
            records.append(record)
    return records


def annotated(records: Iterable[Record]) -> list[Record]:
    return [r for r in records if r.is_annotated]


def write_records(records: Iterable[Record], path) -> None:
    lines = []
    for record in records:
        record.validate()
        obj = {}
        for name in FIELD_ORDER:
            value = getattr(record, name)
            if name in ("split", "pred_scope_indices") and value is None:
                continue
            obj[name] = list(value) if isinstance(value, tuple) else value
        lines.append(json.dumps(obj, ensure_ascii=False))
    with open(path, "w", encoding="utf-8") as handle:
        for line in lines:
            handle.write(line + "\n")
