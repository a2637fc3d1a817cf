"""corpuskit: corpus curation, subword learning, language identification,
similarity analysis, and sequence/classification evaluation for
many-language text pipelines."""

__version__ = "0.1.0"

from .bpe import BpeModel, apply_bpe, bpe_decode, learn_bpe, sample_concat
from .corpus import (
    Corpus,
    DomainTag,
    LanguageTag,
    ScriptTag,
    Sentence,
    load_corpus,
    parse_language_tag,
)
from .filtering import FilterReport, ForeignFilterConfig, filter_foreign
from .lid import (
    LidEvalReport,
    LidFeatureConfig,
    LidModel,
    LidPrediction,
    evaluate_lid,
    extract_ngram_features,
    identify,
    train_lid,
)
from .metrics import (
    BioSequence,
    PrfScore,
    RunAggregate,
    Span,
    aggregate_runs,
    benchmark_score,
    classification_report,
    extract_spans,
    span_prf,
)
from .similarity import SimilarityMatrix, VocabSet, build_vocab_set, jaccard, similarity_matrix
from .splits import SplitAssignment, SplitSpec, make_splits
from .text import char_tokenize, clean_text, whitespace_tokenize
from .wordpiece import WordPieceVocab, build_wordpiece_vocab, wordpiece_encode
