"""
NER Corpus Toolkit

Desk-scale tooling for improving named entity recognition training data: tag
scheme conversion and repair, data augmentation, consensus silver corpora from
unlabeled text, transformation-based rule correction, entity-level scoring and a
staged experiment runner tying them together.
"""

# Version management with fallback
try:
    from importlib.metadata import version, PackageNotFoundError

    try:
        __version__ = version("ner-corpus-toolkit")
    except PackageNotFoundError:
        __version__ = "0.1.0"
except ImportError:
    __version__ = "0.1.0"

__description__ = "Tag schemes, augmentation, consensus corpora and Brill rules for NER corpora"

# Results and errors
from .results import (
    ValidationResult,
    ValidationResultBuilder,
    ValidationSeverity,
    create_success_result,
    create_error_result,
    create_exception_result,
)
from .exceptions import (
    NerToolkitError,
    ConllParseError,
    CorpusValidationError,
    IllFormedSequenceError,
    SpanError,
    AlignmentError,
    AugmentationError,
    LexiconParseError,
    TrainingError,
    ModelLoadError,
    RuleParseError,
    ConfigError,
    PipelineStageError,
)

# Corpus model and schemes
from .corpus import (
    Scheme,
    Token,
    Sentence,
    EntitySpan,
    Corpus,
    CorpusValidator,
    read_conll,
    write_conll,
    read_raw,
    load_conll,
    save_conll,
    load_raw,
    validate,
    corpus_stats,
)
from .schemes import (
    RepairPolicy,
    decode_spans,
    encode_tags,
    convert,
    repair,
    convert_corpus,
    repair_corpus,
    is_well_formed,
)

# Augmentation, taggers, consensus, rules, scoring
from .augment import (
    Technique,
    RandomStream,
    AugmentConfig,
    Augmenter,
    SynonymLexicon,
    LabelTokenDistribution,
    build_label_token_distribution,
    parse_lexicon,
    load_lexicon,
    lwtr,
    synonym_replace,
    shuffle_within_segments,
    augment_corpus,
)
from .taggers import (
    UnigramModel,
    PerceptronModel,
    train_unigram,
    train_perceptron,
    tag,
    tag_corpus,
    save_model,
    load_model,
)
from .semisup import ConsensusConfig, consensus_tags, build_silver_corpus
from .brill import BrillRule, BrillConfig, learn_rules, apply_rules, tune_min_score, parse_rules, serialize_rules
from .evaluation import ScoreReport, LabelScore, score, score_sequences, f_measure, diff_report

# Configuration and logging
from .config import (
    configure_logging,
    get_library_logger,
    reset_logging_config,
    get_logging_config,
    configure_for_production,
    configure_for_development,
    configure_for_testing,
    configure_for_standalone,
    LoggingContext,
)

# Factory functions and high-level API
from .factory import TaggerType, train_tagger, validate_corpus_file, quick_validate, get_tagger_info
from .pipeline import PipelineConfig, PipelineRunner, load_pipeline_config, run_pipeline

from .schemas.operations import ParameterType, ParameterSpec, OperationSpec, OperationRegistry, OPERATION_REGISTRY

__all__ = [
    "__version__",
    "__description__",
    # Results and errors
    "ValidationResult",
    "ValidationResultBuilder",
    "ValidationSeverity",
    "create_success_result",
    "create_error_result",
    "create_exception_result",
    "NerToolkitError",
    "ConllParseError",
    "CorpusValidationError",
    "IllFormedSequenceError",
    "SpanError",
    "AlignmentError",
    "AugmentationError",
    "LexiconParseError",
    "TrainingError",
    "ModelLoadError",
    "RuleParseError",
    "ConfigError",
    "PipelineStageError",
    # Corpus model and schemes
    "Scheme",
    "Token",
    "Sentence",
    "EntitySpan",
    "Corpus",
    "CorpusValidator",
    "read_conll",
    "write_conll",
    "read_raw",
    "load_conll",
    "save_conll",
    "load_raw",
    "validate",
    "corpus_stats",
    "RepairPolicy",
    "decode_spans",
    "encode_tags",
    "convert",
    "repair",
    "convert_corpus",
    "repair_corpus",
    "is_well_formed",
    # Augmentation
    "Technique",
    "RandomStream",
    "AugmentConfig",
    "Augmenter",
    "SynonymLexicon",
    "LabelTokenDistribution",
    "build_label_token_distribution",
    "parse_lexicon",
    "load_lexicon",
    "lwtr",
    "synonym_replace",
    "shuffle_within_segments",
    "augment_corpus",
    # Taggers
    "UnigramModel",
    "PerceptronModel",
    "train_unigram",
    "train_perceptron",
    "tag",
    "tag_corpus",
    "save_model",
    "load_model",
    # Consensus, rules, scoring
    "ConsensusConfig",
    "consensus_tags",
    "build_silver_corpus",
    "BrillRule",
    "BrillConfig",
    "learn_rules",
    "apply_rules",
    "tune_min_score",
    "parse_rules",
    "serialize_rules",
    "ScoreReport",
    "LabelScore",
    "score",
    "score_sequences",
    "f_measure",
    "diff_report",
    # Configuration and logging
    "configure_logging",
    "get_library_logger",
    "reset_logging_config",
    "get_logging_config",
    "configure_for_production",
    "configure_for_development",
    "configure_for_testing",
    "configure_for_standalone",
    "LoggingContext",
    # Factory and pipeline
    "TaggerType",
    "train_tagger",
    "validate_corpus_file",
    "quick_validate",
    "get_tagger_info",
    "PipelineConfig",
    "PipelineRunner",
    "load_pipeline_config",
    "run_pipeline",
    # Operation registry
    "ParameterType",
    "ParameterSpec",
    "OperationSpec",
    "OperationRegistry",
    "OPERATION_REGISTRY",
]
