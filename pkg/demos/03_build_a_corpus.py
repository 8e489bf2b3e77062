"""Walkthrough: building an annotation-ready corpus from raw judgment text.

The construction recipe: tokenize pre-split sentences, rank documents by
negation-cue density, keep the densest ones, duplicate multi-negation
sentences into one-cue records, and assign deterministic document-level
splits.

Run with:  python demos/03_build_a_corpus.py
"""
from negscope import (assign_splits, apply_splits, Corpus, default_lexicon,
                      detect_cues, explode_instances, score_documents, select_top)
from negscope.cli import corpus_from_text

raw = """\
# doc: urteil-a
Der Beklagte hat der Forderung nicht widersprochen.
Die Klage ist zulässig, aber nicht begründet.
Es besteht kein Anspruch auf Zahlung und keine Pflicht zur Nachleistung.

# doc: urteil-b
Die Parteien streiten über die Wirksamkeit der Kündigung.
Das Gericht folgt der Auffassung des Klägers.

# doc: urteil-c
Der Zeuge hat nichts gesehen.
Die Berufung wird zurückgewiesen.
"""

corpus = corpus_from_text(raw, lang="de", source="demo")
print(corpus)
print()

# 1. score: cue tokens per document, normalized by length
scores = score_documents(corpus)
print("document ranking by cue density:")
for s in scores:
    print(f"  {s.doc_id:10} cues={s.cue_count}  tokens={s.token_count:3}  density={s.density:.4f}")
print()

# 2. keep the densest documents for annotation
chosen = select_top(scores, 2)
print("selected for annotation:", sorted(chosen))
selected = Corpus((), sentences=[s for s in corpus.sentences if s.doc_id in chosen])
print()

# 3. duplicate: one record per detected cue, so each record carries exactly
#    one negation (scope stays empty until annotated or resolved)
lexicon = default_lexicon("de")
records = []
for sent in selected.sentences:
    matches = detect_cues(sent.tokens, lexicon)
    for match in matches:
        print(f"  {sent.doc_id}/{sent.sent_id}: cue "
              f"{' '.join(sent.tokens[i] for i in match.indices)!r} at {match.indices}")
    records.extend(explode_instances(sent, matches))
duplicated = selected.with_records(records)
print("records after duplication:", duplicated.record_count)
print()

# 4. deterministic splits at document granularity (same seed, same split)
assignment = assign_splits(corpus, ratios=(70, 20, 10), seed=42)
print("split assignment:", assignment)
final = apply_splits(duplicated, assignment)
print("every record carries its split:",
      sorted({(r.doc_id, r.split) for r in final.records}))
