"""Declarative configuration for fine-tuning and prompting runs."""
from __future__ import annotations

import json
from dataclasses import dataclass, field, fields


@dataclass(frozen=True)
class TrainConfig:
    base_model: str
    train_path: str
    validation_path: str
    output_dir: str
    learning_rate: float = 1e-5
    batch_size: int = 16
    patience: int = 8
    max_input_tokens: int = 252
    seeds: tuple[int, ...] = (1, 2, 3, 4, 5)
    max_epochs: int = 100

    def __post_init__(self):
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if self.patience < 1:
            raise ValueError("patience must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")
        if not self.seeds:
            raise ValueError("at least one seed is required")


ALLOWED_SHOTS = (0, 1, 5, 10)


@dataclass(frozen=True)
class PromptConfig:
    model: str
    endpoint_url: str = ""
    shots: int = 0
    temperature: float = 0.0
    example_seed: int = 0
    credentials_path: str | None = None
    max_retries: int = 2
    backoff_seconds: float = 0.5
    timeout_seconds: float = 60.0

    def __post_init__(self):
        if self.shots not in ALLOWED_SHOTS:
            raise ValueError(f"shots must be one of {ALLOWED_SHOTS}")
        if self.temperature != 0.0:
            raise ValueError("temperature is fixed at 0 for reproducible outputs")


def _from_json(cls, path):
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return cls(**data)


def load_train_config(path) -> TrainConfig:
    return _from_json(TrainConfig, path)


def load_prompt_config(path) -> PromptConfig:
    return _from_json(PromptConfig, path)
