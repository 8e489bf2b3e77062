import logging
import random

import pytest

from negscope import Corpus, FormatError, NegationRecord, ValidationError, parse_starsem, write_starsem
from helpers import random_corpus


def block(rows):
    return "\n".join("\t".join(row) for row in rows) + "\n\n"


def meta(chapter, sent, idx, word):
    return [chapter, str(sent), str(idx), word, "_", "_", "_"]


def no_negation_block(chapter="ch1", sent=0, words=("Nothing", "here", ".")):
    return block([meta(chapter, sent, i, w) + ["***"] for i, w in enumerate(words)])


def one_negation_block():
    words = ["He", "was", "not", "seen", "again", "."]
    rows = []
    for i, w in enumerate(words):
        cue = w if i == 2 else "_"
        scope = w if i in (0, 1, 3) else "_"
        rows.append(meta("ch1", 1, i, w) + [cue, scope, "_"])
    return block(rows)


class TestParse:
    def test_no_negation_marker_counts_sentence(self):
        corpus = parse_starsem(no_negation_block())
        assert corpus.record_count == 0
        assert corpus.sentence_count == 1

    def test_single_negation_indices(self):
        corpus = parse_starsem(one_negation_block())
        assert corpus.record_count == 1
        record = corpus.records[0]
        assert record.cue_indices == (2,)
        assert record.scope_indices == (0, 1, 3)
        assert record.doc_id == "ch1"
        assert record.sent_id == "1"

    def test_two_triples_become_two_records(self):
        words = ["no", "sign", "and", "no", "sound"]
        rows = []
        for i, w in enumerate(words):
            cue1 = w if i == 0 else "_"
            scope1 = w if i == 1 else "_"
            cue2 = w if i == 3 else "_"
            scope2 = w if i == 4 else "_"
            rows.append(meta("ch2", 4, i, w) + [cue1, scope1, "_", cue2, scope2, "_"])
        corpus = parse_starsem(block(rows))
        assert corpus.record_count == 2
        first, second = corpus.records
        assert (first.doc_id, first.sent_id) == (second.doc_id, second.sent_id)
        assert first.cue_indices == (0,)
        assert second.cue_indices == (3,)

    def test_ragged_rows_name_line_number(self):
        rows = [meta("ch1", 0, 0, "a") + ["***"],
                meta("ch1", 0, 1, "b")]
        with pytest.raises(FormatError, match="line 2"):
            parse_starsem(block(rows))

    def test_bad_column_count_rejected(self):
        rows = [meta("ch1", 0, 0, "a") + ["_", "_"]]
        with pytest.raises(FormatError, match="column count"):
            parse_starsem(block(rows))

    def test_cue_column_all_empty_rejected(self):
        words = ["all", "clear"]
        rows = [meta("ch1", 0, i, w) + ["_", w, "_"] for i, w in enumerate(words)]
        with pytest.raises(ValidationError, match="no cue token"):
            parse_starsem(block(rows))

    def test_affixal_cue_dropped_with_warning(self, caplog):
        words = ["that", "is", "impossible"]
        rows = []
        for i, w in enumerate(words):
            cue = "im" if i == 2 else "_"
            scope = "possible" if i == 2 else (w if i < 2 else "_")
            rows.append(meta("ch1", 0, i, w) + [cue, scope, "_"])
        with caplog.at_level(logging.WARNING):
            corpus = parse_starsem(block(rows))
        assert corpus.record_count == 0
        assert corpus.sentence_count == 1
        assert any("affixal" in message for message in caplog.messages)

    def test_non_contiguous_token_numbers_rejected(self):
        rows = [meta("ch1", 0, 0, "a") + ["***"],
                meta("ch1", 0, 2, "b") + ["***"]]
        with pytest.raises(FormatError, match="not contiguous"):
            parse_starsem(block(rows))

    def test_non_integer_sentence_number_rejected(self):
        rows = [["ch1", "x", "0", "a", "_", "_", "_", "***"]]
        with pytest.raises(FormatError, match="not an integer"):
            parse_starsem(block(rows))

    def test_lang_and_source_stamped_on_records(self):
        corpus = parse_starsem(one_negation_block(), lang="fr", source="dalloux")
        assert corpus.records[0].lang == "fr"
        assert corpus.records[0].source == "dalloux"


class TestWrite:
    def test_empty_corpus_writes_nothing(self):
        assert write_starsem(Corpus()) == b""

    def test_single_record_single_triple(self):
        corpus = parse_starsem(one_negation_block())
        lines = write_starsem(corpus).decode("utf-8").strip("\n").split("\n")
        assert len(lines) == 6
        assert all(len(line.split("\t")) == 10 for line in lines)

    def test_two_records_merge_into_one_block(self):
        tokens = ("no", "sign", "and", "no", "sound")
        records = [
            NegationRecord("ch", "0", "en", "u", tokens, cue_indices=(0,), scope_indices=(1,)),
            NegationRecord("ch", "0", "en", "u", tokens, cue_indices=(3,), scope_indices=(4,)),
        ]
        data = write_starsem(Corpus(records)).decode("utf-8")
        lines = data.strip("\n").split("\n")
        assert len(lines) == 5
        assert all(len(line.split("\t")) == 13 for line in lines)
        back = parse_starsem(data, lang="en", source="u")
        assert back.record_count == 2
        assert {r.cue_indices for r in back.records} == {(0,), (3,)}

    def test_round_trip_preserves_cue_and_scope_sets(self):
        rng = random.Random(23)
        for _ in range(25):
            corpus = random_corpus(rng, uniform_lang=True)
            lang = corpus.sentences[0].lang if corpus.sentence_count else "en"
            source = corpus.sentences[0].source if corpus.sentence_count else "u"
            back = parse_starsem(write_starsem(corpus), lang=lang, source=source)
            original = {(r.doc_id, r.sent_id, r.cue_indices, r.scope_indices)
                        for r in corpus.records}
            returned = {(r.doc_id, r.sent_id, r.cue_indices, r.scope_indices)
                        for r in back.records}
            assert original == returned

    def test_sentence_totals_preserved(self):
        rng = random.Random(29)
        for _ in range(10):
            corpus = random_corpus(rng, uniform_lang=True)
            lang = corpus.sentences[0].lang if corpus.sentence_count else "en"
            back = parse_starsem(write_starsem(corpus), lang=lang)
            assert back.sentence_count == corpus.sentence_count
