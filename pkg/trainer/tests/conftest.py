"""Fixtures: a tiny local encoder checkpoint and a separable synthetic corpus.

The model-hub is unreachable in CI, so the "pretrained" encoder is a small
randomly initialized BERT with a WordPiece tokenizer built over the synthetic
vocabulary and saved to disk; training code loads it through the same
from_pretrained path it would use for any published model.
"""
import os

os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("TOKENIZERS_PARALLELISM", "false")

import pytest
from tokenizers import Tokenizer
from tokenizers.models import WordPiece
from tokenizers.pre_tokenizers import Whitespace
from tokenizers.processors import TemplateProcessing
from transformers import BertConfig, BertForTokenClassification, BertTokenizerFast

from negscope_trainer import Record

SUBJECTS = ["anwalt", "richter", "zeuge", "notar", "beklagte"]
VERBS = ["zahlt", "haftet", "erscheint", "antwortet", "widerspricht"]
OBJECTS = ["kosten", "miete", "zinsen", "gebühren", "strafe", "kartoffelsalat"]

# word pieces for the tokenizer: "kartoffelsalat" splits into two pieces so
# the first-sub-token rule is actually exercised
PIECES = ["kartoffel", "##salat"]
SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]


def synthetic_records(n=50, source="synthetic"):
    """Separable toy corpus: the scope is always the two object tokens after
    the cue "nicht"; subjects and verbs are never in scope."""
    records = []
    i = 0
    while len(records) < n:
        subject = SUBJECTS[i % len(SUBJECTS)]
        verb = VERBS[(i // len(SUBJECTS)) % len(VERBS)]
        obj_a = OBJECTS[i % len(OBJECTS)]
        obj_b = OBJECTS[(i + 1 + i // len(OBJECTS)) % len(OBJECTS)]
        if obj_a == obj_b:
            obj_b = OBJECTS[(OBJECTS.index(obj_a) + 1) % len(OBJECTS)]
        tokens = (subject, verb, "nicht", obj_a, obj_b, ".")
        records.append(Record(
            doc_id=f"doc{i // 10}", sent_id=str(i % 10), lang="de", source=source,
            tokens=tokens, cue_indices=(2,), scope_indices=(3, 4), split="train"))
        i += 1
    return records


@pytest.fixture(scope="session")
def tiny_encoder(tmp_path_factory):
    """A saved checkpoint directory for a very small uncased BERT encoder."""
    words = sorted(set(SUBJECTS + VERBS + OBJECTS + PIECES + ["nicht", ".", ",",
                                                              "ich", "weiss", "was",
                                                              "eine", "kartoffel", "ist"]))
    words = [w for w in words if w != "kartoffelsalat"]  # covered by its pieces
    vocab = {token: i for i, token in enumerate(SPECIALS + words)}
    model = WordPiece(vocab, unk_token="[UNK]")
    tokenizer = Tokenizer(model)
    tokenizer.pre_tokenizer = Whitespace()
    tokenizer.post_processor = TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B [SEP]",
        special_tokens=[("[CLS]", vocab["[CLS]"]), ("[SEP]", vocab["[SEP]"])],
    )
    fast = BertTokenizerFast(tokenizer_object=tokenizer, unk_token="[UNK]",
                             pad_token="[PAD]", cls_token="[CLS]", sep_token="[SEP]",
                             mask_token="[MASK]")
    config = BertConfig(vocab_size=len(fast), hidden_size=32, num_hidden_layers=2,
                        num_attention_heads=2, intermediate_size=64,
                        max_position_embeddings=260)
    encoder = BertForTokenClassification(config)
    path = tmp_path_factory.mktemp("encoder") / "tiny-multilingual-encoder"
    encoder.save_pretrained(path)
    fast.save_pretrained(path)
    return str(path)
