"""Fine-tuning and prediction for cue-conditioned scope classification.

One classifier head over a pretrained encoder, binary label per word
(first-sub-token rule).  Training early-stops on validation token-F1 and
writes one checkpoint per seed; results are deterministic for a given seed
up to backend nondeterminism.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from pathlib import Path

import torch
from transformers import AutoModelForTokenClassification, AutoTokenizer

from .config import TrainConfig
from .encoding import (EncodedInstance, EncodingError, IGNORE_LABEL, MARKER_CLOSE,
                       MARKER_OPEN, decode_word_predictions, encode_instance)
from .records_io import Record, annotated, read_records

log = logging.getLogger(__name__)


class EarlyStopper:
    """Stop after `patience` evaluations without improvement."""

    def __init__(self, patience: int):
        self.patience = patience
        self.best: float | None = None
        self.bad = 0

    def update(self, value: float) -> bool:
        """Record one evaluation; True means stop now."""
        if self.best is None or value > self.best:
            self.best = value
            self.bad = 0
            return False
        self.bad += 1
        return self.bad >= self.patience


def set_seed(seed: int) -> None:
    random.seed(seed)
    torch.manual_seed(seed)


def load_tokenizer(model_path: str):
    tokenizer = AutoTokenizer.from_pretrained(model_path)
    tokenizer.add_special_tokens(
        {"additional_special_tokens": [MARKER_OPEN, MARKER_CLOSE]})
    return tokenizer


def encode_records(records, tokenizer, max_input_tokens, with_labels=True):
    instances = []
    for record in records:
        try:
            instances.append(encode_instance(record, tokenizer, max_input_tokens,
                                             with_labels=with_labels))
        except EncodingError as exc:
            log.error("skipping instance: %s", exc)
    return instances


def _batches(instances: list[EncodedInstance], batch_size: int, pad_id: int):
    for start in range(0, len(instances), batch_size):
        chunk = instances[start:start + batch_size]
        width = max(len(inst) for inst in chunk)
        input_ids = torch.full((len(chunk), width), pad_id, dtype=torch.long)
        attention = torch.zeros((len(chunk), width), dtype=torch.long)
        labels = torch.full((len(chunk), width), IGNORE_LABEL, dtype=torch.long)
        for row, inst in enumerate(chunk):
            n = len(inst)
            input_ids[row, :n] = torch.tensor(inst.input_ids)
            attention[row, :n] = torch.tensor(inst.attention_mask)
            labels[row, :n] = torch.tensor(inst.labels)
        yield chunk, input_ids, attention, labels


@torch.no_grad()
def token_f1(model, instances: list[EncodedInstance], batch_size: int, pad_id: int) -> float:
    """Micro word-level F1 of scope labels over labelled positions."""
    model.eval()
    tp = fp = fn = 0
    for _, input_ids, attention, labels in _batches(instances, batch_size, pad_id):
        logits = model(input_ids=input_ids, attention_mask=attention).logits
        predictions = logits.argmax(dim=-1)
        mask = labels != IGNORE_LABEL
        gold = labels[mask]
        pred = predictions[mask]
        tp += int(((gold == 1) & (pred == 1)).sum())
        fp += int(((gold == 0) & (pred == 1)).sum())
        fn += int(((gold == 1) & (pred == 0)).sum())
    if tp + fp + fn == 0:
        return 1.0
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


@dataclass
class SeedResult:
    seed: int
    checkpoint_dir: str
    best_f1: float
    trace: list[float]          # validation token-F1 per epoch


def train(config: TrainConfig) -> list[SeedResult]:
    """Fine-tune once per seed; each run writes its own checkpoint directory
    (seed-<n>), so rerunning a seed overwrites only its own files."""
    train_records = annotated(read_records(config.train_path))
    val_records = annotated(read_records(config.validation_path))
    if not val_records:
        raise ValueError(f"validation file {config.validation_path} has no annotated records")
    if not train_records:
        raise ValueError(f"train file {config.train_path} has no annotated records")

    tokenizer = load_tokenizer(config.base_model)
    pad_id = tokenizer.pad_token_id
    train_instances = encode_records(train_records, tokenizer, config.max_input_tokens)
    val_instances = encode_records(val_records, tokenizer, config.max_input_tokens)

    results = []
    for seed in config.seeds:
        set_seed(seed)
        model = AutoModelForTokenClassification.from_pretrained(
            config.base_model, num_labels=2)
        model.resize_token_embeddings(len(tokenizer))
        optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate)
        stopper = EarlyStopper(config.patience)
        order = list(range(len(train_instances)))
        shuffle_rng = random.Random(seed)
        best_state = None
        best_f1 = -1.0
        trace: list[float] = []
        for epoch in range(config.max_epochs):
            model.train()
            shuffle_rng.shuffle(order)
            epoch_instances = [train_instances[i] for i in order]
            for _, input_ids, attention, labels in _batches(
                    epoch_instances, config.batch_size, pad_id):
                optimizer.zero_grad()
                out = model(input_ids=input_ids, attention_mask=attention, labels=labels)
                out.loss.backward()
                optimizer.step()
            score = token_f1(model, val_instances, config.batch_size, pad_id)
            trace.append(score)
            log.info("seed %d epoch %d: validation token-F1 %.4f", seed, epoch + 1, score)
            if score > best_f1:
                best_f1 = score
                best_state = {k: v.detach().clone() for k, v in model.state_dict().items()}
            if stopper.update(score):
                log.info("seed %d: early stop after %d epochs", seed, epoch + 1)
                break
        checkpoint_dir = Path(config.output_dir) / f"seed-{seed}"
        checkpoint_dir.mkdir(parents=True, exist_ok=True)
        model.load_state_dict(best_state)
        model.save_pretrained(checkpoint_dir)
        tokenizer.save_pretrained(checkpoint_dir)
        results.append(SeedResult(seed=seed, checkpoint_dir=str(checkpoint_dir),
                                  best_f1=best_f1, trace=trace))
    return results


@torch.no_grad()
def predict(checkpoint_dir: str, records: list[Record], max_input_tokens: int = 252,
            batch_size: int = 16) -> list[Record]:
    """Fill pred_scope_indices for every annotated record.

    Words beyond the truncation limit come back as non-scope; records whose
    cue cannot be encoded get an empty prediction (with an error log) so the
    output still joins against the gold file.
    """
    tokenizer = AutoTokenizer.from_pretrained(checkpoint_dir)
    model = AutoModelForTokenClassification.from_pretrained(checkpoint_dir)
    model.eval()
    pad_id = tokenizer.pad_token_id

    by_key: dict[tuple, Record] = {}
    encodable: list[EncodedInstance] = []
    for record in records:
        if not record.is_annotated:
            continue
        try:
            encodable.append(encode_instance(record, tokenizer, max_input_tokens,
                                             with_labels=False))
        except EncodingError as exc:
            log.error("empty prediction for unencodable instance: %s", exc)
            by_key[record.key] = record.with_prediction(())

    for chunk, input_ids, attention, _ in _batches(encodable, batch_size, pad_id):
        logits = model(input_ids=input_ids, attention_mask=attention).logits
        labels = logits.argmax(dim=-1)
        for row, instance in enumerate(chunk):
            indices = decode_word_predictions(instance, labels[row].tolist())
            by_key[instance.record.key] = instance.record.with_prediction(indices)

    merged = [by_key.get(record.key, record) if record.is_annotated else record
              for record in records]
    for record in merged:
        record.validate()
    return merged
