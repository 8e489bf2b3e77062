import pytest
from transformers import AutoTokenizer

from negscope_trainer import (EncodingError, MARKER_CLOSE, MARKER_OPEN, Record,
                              decode_word_predictions, encode_instance, marked_words)
from negscope_trainer.encoding import IGNORE_LABEL, cue_runs
from negscope_trainer.training import load_tokenizer


@pytest.fixture(scope="module")
def tokenizer(tiny_encoder):
    return load_tokenizer(tiny_encoder)


def record(tokens, cue, scope=()):
    return Record("d", "0", "de", "u", tuple(tokens),
                  cue_indices=tuple(cue), scope_indices=tuple(scope))


class TestMarkedWords:
    def test_single_cue_wrapped(self):
        words, origin = marked_words(("a", "b", "c"), (1,))
        assert words == ["a", MARKER_OPEN, "b", MARKER_CLOSE, "c"]
        assert origin == [0, None, 1, None, 2]

    def test_contiguous_run_shares_one_marker_pair(self):
        words, _ = marked_words(("a", "b", "c", "d"), (1, 2))
        assert words == ["a", MARKER_OPEN, "b", "c", MARKER_CLOSE, "d"]

    def test_discontinuous_cue_gets_two_pairs(self):
        words, _ = marked_words(("ne", "x", "pas", "y"), (0, 2))
        assert words == [MARKER_OPEN, "ne", MARKER_CLOSE, "x",
                         MARKER_OPEN, "pas", MARKER_CLOSE, "y"]

    def test_cue_runs(self):
        assert cue_runs((1, 2, 5)) == [(1, 2), (5, 5)]


class TestEncodeInstance:
    def test_labels_align_back_to_words(self, tokenizer):
        rec = record(("anwalt", "zahlt", "nicht", "kosten", "miete", "."),
                     cue=(2,), scope=(3, 4))
        inst = encode_instance(rec, tokenizer)
        # decode the gold labels straight back: each labelled sub-token is the
        # first piece of its word
        labelled = {pos: lab for pos, lab in enumerate(inst.labels) if lab != IGNORE_LABEL}
        assert len(labelled) == len(rec.tokens)
        recovered = decode_word_predictions(inst, inst.labels)
        assert recovered == rec.scope_indices

    def test_subword_split_word_carries_one_label(self, tokenizer):
        rec = record(("anwalt", "zahlt", "nicht", "kartoffelsalat", "."),
                     cue=(2,), scope=(3,))
        inst = encode_instance(rec, tokenizer)
        scope_positions = [p for p, lab in enumerate(inst.labels) if lab == 1]
        assert len(scope_positions) == 1
        ids = tokenizer.convert_ids_to_tokens(inst.input_ids)
        assert ids[scope_positions[0]] == "kartoffel"
        assert ids[scope_positions[0] + 1] == "##salat"
        assert inst.labels[scope_positions[0] + 1] == IGNORE_LABEL

    def test_empty_scope_gives_all_zero_labels(self, tokenizer):
        rec = record(("anwalt", "zahlt", "nicht", "."), cue=(2,), scope=())
        inst = encode_instance(rec, tokenizer)
        labelled = [lab for lab in inst.labels if lab != IGNORE_LABEL]
        assert labelled and set(labelled) == {0}

    def test_markers_masked_from_loss(self, tokenizer):
        rec = record(("anwalt", "nicht", "kosten"), cue=(1,), scope=(2,))
        inst = encode_instance(rec, tokenizer)
        ids = tokenizer.convert_ids_to_tokens(inst.input_ids)
        for pos, token in enumerate(ids):
            if token in (MARKER_OPEN, MARKER_CLOSE):
                assert inst.labels[pos] == IGNORE_LABEL

    def test_cue_beyond_truncation_raises(self, tokenizer):
        tokens = tuple(["kosten"] * 40 + ["nicht"])
        rec = record(tokens, cue=(40,), scope=())
        with pytest.raises(EncodingError, match="beyond"):
            encode_instance(rec, tokenizer, max_input_tokens=16)

    def test_truncated_tail_counts_as_non_scope(self, tokenizer, caplog):
        tokens = ("nicht",) + tuple(["kosten"] * 40)
        rec = record(tokens, cue=(0,), scope=(1, 2))
        with caplog.at_level("WARNING"):
            inst = encode_instance(rec, tokenizer, max_input_tokens=16, with_labels=False)
        assert any("truncated" in m for m in caplog.messages)
        # pretend the model said "scope" everywhere: truncated words stay off
        everything = [1] * len(inst.input_ids)
        decoded = decode_word_predictions(inst, everything)
        assert decoded
        assert max(decoded) < 40
        assert 0 not in decoded  # the cue is forced off

    def test_record_without_cue_rejected(self, tokenizer):
        with pytest.raises(EncodingError, match="no cue"):
            encode_instance(record(("a", "b"), cue=()), tokenizer)
