"""Walkthrough: the rule-based scope baseline and the evaluation stack.

The baseline takes the maximal clause window around the cue (commas do not
close it), removes parenthesized citations and the cue itself, and trims a
leading conjunction plus edge punctuation.  Evaluation is micro token-level
P/R/F1 with mean±std aggregation across runs.

Run with:  python demos/04_rule_baseline_and_evaluation.py
"""
from negscope import (aggregate_runs, Corpus, corpus_stats, detect_cues, default_lexicon,
                      evaluate_run, format_aggregate, NegationRecord, resolve_corpus,
                      scope_length_report, token_surfaces)

SENTENCES = [
    # gold scope: everything up to the parenthesized citation, minus the cue
    ("Seit dem 06.02.2017 ist der Kläger im Handelsregister nicht mehr als "
     "Geschäftsführer eingetragen (vgl. Auszug aus dem Handelsregister in "
     "Anlage K9, Bl 75 ff. d.A).",
     tuple(range(0, 8)) + (10, 11, 12)),
    # gold scope: subject and predicate, the leading "Da" stays outside
    ("Da der Kläger kein ähnlicher leitender Angestellter i.S.d 14 Abs. "
     "2Satz 2 KSchG ist",
     (1, 2) + tuple(range(4, 14))),
]

lexicon = default_lexicon("de")
gold_records = []
for i, (text, gold_scope) in enumerate(SENTENCES):
    tokens = token_surfaces(text)
    (match,) = detect_cues(tokens, lexicon)
    gold_records.append(NegationRecord("demo-doc", str(i), "de", "demo", tuple(tokens),
                                       cue_indices=match.indices, scope_indices=gold_scope))
gold = Corpus(gold_records)

predicted = resolve_corpus(gold)
for record in predicted.records:
    shown = " ".join(record.tokens[i] for i in record.pred_scope_indices)
    print(f"sentence {record.sent_id} cue={[record.tokens[i] for i in record.cue_indices]}")
    print(f"  predicted scope: {shown}")
print()

report = evaluate_run(gold, predicted, mode="strict")
overall = report.overall
print(f"strict evaluation: P={overall.precision:.4f} R={overall.recall:.4f} "
      f"F1={overall.f1:.4f} over {overall.instance_count} instances")
print()

# corpus statistics: totals, negated share, mean length, scope-token share
for (source, lang), stats in corpus_stats(gold).items():
    print(f"stats {source}/{lang}: {stats.total_sentences} sentences, "
          f"{stats.pct_negated}% negated, mean length "
          f"{stats.mean_tokens_per_sentence}, scope tokens {stats.pct_scope_tokens}%")
print()

# scope-length analysis: how much of each instance the scopes cover
lengths = scope_length_report(gold, predicted)
print(f"scope-length ratios: actual={lengths.actual_ratio:.4f} "
      f"predicted={lengths.predicted_ratio:.4f}")
print()

# repeated runs (different seeds, different checkpoints, ...) aggregate to
# the usual mean ± sample standard deviation
f1_per_run = [0.8123, 0.8377, 0.8254, 0.8199, 0.8310]
print("five-run aggregate:", format_aggregate(aggregate_runs(f1_per_run)))
