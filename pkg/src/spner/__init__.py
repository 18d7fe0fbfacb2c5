"""Evaluation toolkit for named-entity recognition from speech.

Scores transcripts carrying inline BIO entity tags with WER, CoER and CVER,
and handles the surrounding corpus chores (normalization, manifests,
filtering, statistics, error simulation).
"""

from .align import UNDEFINED, AlignmentResult, EditOp, OpKind, align, error_rate
from .corpus import (
    CorpusStats,
    UtteranceRecord,
    compute_stats,
    filter_entities,
    read_manifest,
    read_tsv,
    write_manifest,
    write_tsv,
)
from .errorsim import ErrorModel, inject
from .markup import (
    TaggedToken,
    TaggedTranscript,
    extract_concept_values,
    extract_concepts,
    from_columns,
    parse_inline,
    render_inline,
    strip_tags,
    to_columns,
)
from .metrics import MetricReport, UtteranceScore, format_report, score_corpus, score_utterance
from .normalize import DEFAULT_PROFILE, NormalizationProfile, normalize_text, tokenize
from .schema import BioTag, EntitySchema, default_schema, load_schema

__version__ = "0.1.0"
