"""Zero/few-shot scope prediction through a chat-completion endpoint.

The prompt hands over the sentence and its negation cues and asks for a JSON
object listing the scope words.  Responses are aligned back to token indices
by exact surface match, in order; anything unparseable or unalignable turns
into an empty scope and counts toward the failure rate instead of crashing
the run.
"""
from __future__ import annotations

import json
import logging
import random
import re
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .config import PromptConfig
from .records_io import Record

log = logging.getLogger(__name__)

Transport = Callable[[dict], str]

INSTRUCTION = (
    "You annotate negation scopes. Given a sentence and its negation cue "
    "words, return every word of the sentence that lies inside the scope of "
    "that negation. The scope describes all words affected by the negation; "
    "the cue words themselves are not part of the scope. Respond with JSON "
    'of the form {"negation_scope": ["word", ...]} listing the scope words '
    "in sentence order."
)


class TransportError(Exception):
    pass


@dataclass
class PromptStats:
    total: int = 0
    failures: int = 0

    @property
    def failure_rate(self) -> float:
        return self.failures / self.total if self.total else 0.0


def _format_sentence(record: Record) -> str:
    cue = ", ".join(record.tokens[i] for i in record.cue_indices)
    return f"Sentence: {' '.join(record.tokens)}\nNegation cue: {cue}"


def _example_block(record: Record) -> str:
    answer = json.dumps({"negation_scope": [record.tokens[i] for i in record.scope_indices]},
                        ensure_ascii=False)
    return f"{_format_sentence(record)}\nAnswer: {answer}"


def build_messages(record: Record, examples: Sequence[Record]) -> list[dict]:
    parts = [INSTRUCTION]
    if examples:
        parts.append("Examples:")
        parts.extend(_example_block(example) for example in examples)
    parts.append(_format_sentence(record))
    return [{"role": "user", "content": "\n\n".join(parts)}]


def sample_examples(pool: Sequence[Record], shots: int, seed: int,
                    exclude_keys: Iterable[tuple] = ()) -> list[Record]:
    """Deterministically sample few-shot examples.

    Only annotated train-split records qualify (records without a split label
    count as train), and never the records under evaluation.
    """
    excluded = set(exclude_keys)
    candidates = [r for r in pool
                  if r.is_annotated and r.split in (None, "train") and r.key not in excluded]
    if shots == 0:
        return []
    if len(candidates) < shots:
        raise ValueError(f"need {shots} few-shot examples, have {len(candidates)}")
    return random.Random(seed).sample(candidates, shots)


def parse_scope_words(content: str) -> list[str] | None:
    """Extract the scope-word list from a response; None when unparseable."""
    candidates = [content]
    match = re.search(r"\{.*\}", content, flags=re.DOTALL)
    if match:
        candidates.append(match.group(0))
    for candidate in candidates:
        try:
            data = json.loads(candidate)
        except json.JSONDecodeError:
            continue
        if isinstance(data, dict):
            data = data.get("negation_scope")
        if isinstance(data, str):
            data = data.split()
        if isinstance(data, list) and all(isinstance(w, str) for w in data):
            return data
    return None


def align_words(words: Sequence[str], tokens: Sequence[str]) -> tuple[int, ...] | None:
    """Map scope words to token indices by exact surface match, in order.
    None when any word cannot be found after the previous one."""
    indices = []
    cursor = 0
    for word in words:
        found = None
        for idx in range(cursor, len(tokens)):
            if tokens[idx] == word:
                found = idx
                break
        if found is None:
            return None
        indices.append(found)
        cursor = found + 1
    return tuple(indices)


def http_transport(config: PromptConfig) -> Transport:
    """POST chat-completions payloads; the API key comes from the credentials
    file named on the command line, never from the environment."""
    import httpx

    headers = {"Content-Type": "application/json"}
    if config.credentials_path:
        with open(config.credentials_path, "r", encoding="utf-8") as handle:
            headers["Authorization"] = f"Bearer {handle.read().strip()}"

    def send(payload: dict) -> str:
        try:
            response = httpx.post(config.endpoint_url, json=payload, headers=headers,
                                  timeout=config.timeout_seconds)
            response.raise_for_status()
            body = response.json()
            return body["choices"][0]["message"]["content"]
        except Exception as exc:
            raise TransportError(str(exc)) from exc

    return send


def _call_with_retries(transport: Transport, payload: dict, config: PromptConfig) -> str:
    last: Exception | None = None
    for attempt in range(config.max_retries + 1):
        try:
            return transport(payload)
        except Exception as exc:
            last = exc
            if attempt < config.max_retries:
                time.sleep(config.backoff_seconds * (2 ** attempt))
    raise TransportError(str(last))


def llm_prompt_predict(records: Sequence[Record], config: PromptConfig,
                       example_pool: Sequence[Record] = (),
                       transport: Transport | None = None) -> tuple[list[Record], PromptStats]:
    """Predict scopes for every annotated record via the endpoint.

    Returns the records with pred_scope_indices filled plus the failure
    statistics.  Failures (endpoint errors after retries, unparseable or
    unalignable responses) yield empty scopes and are logged.
    """
    if transport is None:
        transport = http_transport(config)
    examples = sample_examples(example_pool, config.shots, config.example_seed,
                               exclude_keys=[r.key for r in records])
    stats = PromptStats()
    out: list[Record] = []
    for record in records:
        if not record.is_annotated:
            out.append(record)
            continue
        stats.total += 1
        payload = {
            "model": config.model,
            "temperature": config.temperature,
            "messages": build_messages(record, examples),
        }
        indices: tuple[int, ...] | None = None
        try:
            content = _call_with_retries(transport, payload, config)
        except TransportError as exc:
            log.error("endpoint failure for %s: %s", record.key, exc)
            content = None
        if content is not None:
            words = parse_scope_words(content)
            if words is None:
                log.error("unparseable response for %s: %.80r", record.key, content)
            else:
                indices = align_words(words, record.tokens)
                if indices is None:
                    log.error("unalignable scope words for %s: %r", record.key, words)
        if indices is None:
            stats.failures += 1
            indices = ()
        out.append(record.with_prediction(indices))
    for record in out:
        record.validate()
    return out, stats
