"""Scope classifiers over the .neg.jsonl interface: transformer fine-tuning
with cue markers and first-sub-token labels, plus an LLM prompting harness."""

__version__ = "0.1.0"

from .config import PromptConfig, TrainConfig, load_prompt_config, load_train_config
from .encoding import (EncodingError, MARKER_CLOSE, MARKER_OPEN,
                       decode_word_predictions, encode_instance, marked_words)
from .prompting import (PromptStats, align_words, build_messages, llm_prompt_predict,
                        parse_scope_words, sample_examples)
from .records_io import Record, RecordError, annotated, read_records, write_records
from .training import EarlyStopper, SeedResult, predict, token_f1, train
