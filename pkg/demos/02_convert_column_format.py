"""Walkthrough: converting the tab-separated negation column format.

The column dialect (ConanDoyle-neg lineage) encodes one sentence per block:
seven metadata columns, then one (cue, scope, event) column triple per
negation, with ``***`` marking negation-free sentences.

Run with:  python demos/02_convert_column_format.py
"""
from negscope import parse_starsem, write_canonical, write_starsem

block = """\
wisteria	1	0	I	i	PRP	(S(NP*)	_	I	_
wisteria	1	1	could	could	MD	(VP*	_	could	_
wisteria	1	2	not	not	RB	*	not	_	_
wisteria	1	3	sleep	sleep	VB	(VP*)	_	sleep	_
wisteria	1	4	.	.	.	*))	_	_	_

wisteria	2	0	Nothing	nothing	NN	(S(NP*)	Nothing	_	_
wisteria	2	1	happened	happen	VBD	(VP*)	_	happened	_
wisteria	2	2	.	.	.	*)	_	_	_

wisteria	3	0	All	all	DT	(S(NP*	***
wisteria	3	1	quiet	quiet	JJ	*)	***
wisteria	3	2	.	.	.	*)	***
"""

corpus = parse_starsem(block, lang="en", source="wisteria")
print(corpus)
for record in corpus.records:
    cue = " ".join(record.tokens[i] for i in record.cue_indices)
    scope = " ".join(record.tokens[i] for i in record.scope_indices)
    print(f"  sentence {record.sent_id}: cue={cue!r:12} scope={scope!r}")
print()

# Negation-free sentences ("***") carry no records but stay in the corpus,
# so sentence totals survive the conversion.
print("sentences kept:", corpus.sentence_count, "/ records:", corpus.record_count)
print()

print("as canonical jsonl:")
for line in write_canonical(corpus).decode("utf-8").splitlines():
    print(" ", line[:110])
print()

# Writing back emits one block per sentence; lemma/POS/syntax are unknown to
# the canonical model and come back as "_", but every cue and scope index
# survives (that is the lossless part of the round trip).
print("re-exported column block for sentence 1:")
for line in write_starsem(corpus).decode("utf-8").split("\n\n")[0].splitlines():
    print(" ", line)
