"""negscope: a multilingual negation-scope corpus toolkit.

Build negation corpora from pre-split judgment text (cue detection, document
scoring and selection, instance duplication, deterministic splits), convert
between the canonical .neg.jsonl format and the *SEM-style column format,
resolve scopes with a rule baseline, and score predictions with micro
token-level F1 and scope-length reports.
"""

__version__ = "0.1.0"

from .records import (
    CANONICAL_EXTENSION,
    Corpus,
    FormatError,
    NegationRecord,
    Sentence,
    Token,
    ValidationError,
    load_corpus,
    read_canonical,
    save_corpus,
    token_surfaces,
    tokenize,
    write_canonical,
)
from .lexicon import (
    CueMatch,
    CuePattern,
    default_lexicon,
    detect_cues,
    explode_instances,
    load_lexicon,
)
from .starsem import parse_starsem, write_starsem
from .pipeline import (
    DocumentScore,
    apply_splits,
    assign_splits,
    score_documents,
    select_top,
)
from .rules import find_parentheticals, resolve_corpus, resolve_scope
from .metrics import (
    Confusion,
    CorpusStats,
    EvalReport,
    RunAggregate,
    ScopeLengthReport,
    aggregate_runs,
    confusion,
    corpus_stats,
    evaluate_run,
    format_aggregate,
    precision_recall_f1,
    scope_length_report,
)

__all__ = [name for name in dir() if not name.startswith("_")]
