"""
Factory Module for the NER corpus toolkit

Convenience layer over the tagger, corpus and rule modules: create trainers by
type name, train and persist models, and validate corpus files into a
``ValidationResult`` without raising.
"""

from pathlib import Path
from typing import Any, Dict, Optional, Union

from .core import ErrorHandler
from .corpus import Corpus, CorpusValidator, Scheme, read_conll
from .exceptions import CorpusValidationError, TrainingError
from .results import ValidationResult, ValidationResultBuilder, create_exception_result
from .taggers import Model, PerceptronTrainer, load_model_file, save_model_file, train_unigram


class TaggerType:
    """Constants for baseline model families"""

    UNIGRAM = "unigram"
    PERCEPTRON = "perceptron"


def create_trainer(tagger_type: str = TaggerType.PERCEPTRON, epochs: int = 5, seed: int = 12,
                   logger=None, silent: bool = False):
    """
    Trainer object for a model family

    The unigram family has no trainer state, so a callable is returned for it;
    the perceptron returns a ``PerceptronTrainer``. Both expose ``train(corpus)``.

    Raises:
        TrainingError: If tagger_type is not supported
    """
    if tagger_type == TaggerType.PERCEPTRON:
        return PerceptronTrainer(epochs, seed, logger=logger, silent=silent)
    if tagger_type == TaggerType.UNIGRAM:
        return _UnigramTrainer()
    raise TrainingError(
        f"Unknown tagger type: {tagger_type}. Supported types: {sorted(get_tagger_info())}"
    )


class _UnigramTrainer:
    def train(self, corpus: Corpus) -> Model:
        return train_unigram(corpus)


def train_tagger(
    corpus: Corpus,
    tagger_type: str = TaggerType.PERCEPTRON,
    epochs: int = 5,
    seed: int = 12,
    logger=None,
    silent: bool = False,
) -> Model:
    """
    Train a baseline tagger on ``corpus``; the model inherits the corpus scheme

    Examples:
        model = train_tagger(corpus, TaggerType.UNIGRAM)
        model = train_tagger(corpus, epochs=10, seed=7)
    """
    return create_trainer(tagger_type, epochs, seed, logger, silent).train(corpus)


def train_and_save(corpus: Corpus, path: Union[str, Path], tagger_type: str = TaggerType.PERCEPTRON,
                   epochs: int = 5, seed: int = 12, logger=None) -> Model:
    model = train_tagger(corpus, tagger_type, epochs, seed, logger)
    save_model_file(model, path)
    return model


def load_tagger(path: Union[str, Path]) -> Model:
    return load_model_file(path)


def validate_corpus_bytes(
    data: Union[bytes, str],
    scheme: Optional[Union[Scheme, str]] = None,
    source: str = "",
    logger=None,
    silent: bool = False,
) -> ValidationResult:
    """
    Parse and validate CoNLL data

    Tag violations come back as errors in the result; parse failures and other
    exceptions become a single CRITICAL error.
    """
    try:
        corpus = read_conll(data, scheme)
    except CorpusValidationError as e:
        builder = ValidationResultBuilder()
        for violation in e.violations:
            extra = {k: v for k, v in violation.items() if k not in ("type", "message", "path", "severity")}
            builder.add_error(violation["type"], violation["message"], violation.get("path"), **extra)
        return builder.set_metadata({"source": source}).build()
    except Exception as e:
        return create_exception_result(e, path=source or None, context=f"read_conll({source or '<bytes>'})")
    return CorpusValidator(logger=logger, silent=silent).validate(corpus, source)


def validate_corpus_file(
    file_path: Union[str, Path],
    scheme: Optional[Union[Scheme, str]] = None,
    logger=None,
    silent: bool = False,
) -> ValidationResult:
    """
    Validate a CoNLL file

    Examples:
        result = validate_corpus_file("train.conll")
        result = validate_corpus_file("train.conll", scheme="BIOES")
    """
    return ErrorHandler.safe_call(
        lambda: validate_corpus_bytes(Path(file_path).read_bytes(), scheme, str(file_path), logger, silent),
        f"validate_corpus_file({file_path})",
    )


def quick_validate(data: Union[str, Path, bytes], scheme: Optional[Union[Scheme, str]] = None) -> bool:
    """
    True when ``data`` (a file path or CoNLL bytes) parses into a valid corpus

    Examples:
        if quick_validate("train.conll"):
            print("corpus is valid")
    """
    try:
        if isinstance(data, bytes):
            result = validate_corpus_bytes(data, scheme, silent=True)
        else:
            result = validate_corpus_file(data, scheme, silent=True)
        return result.is_valid
    except Exception:
        return False


def get_tagger_info(tagger_type: str = None) -> Dict[str, Any]:
    """Descriptions of the available model families"""
    all_taggers = {
        TaggerType.UNIGRAM: {
            "class": "UnigramModel",
            "description": "Most frequent training tag per surface, O for unseen surfaces",
            "features": ["surface"],
        },
        TaggerType.PERCEPTRON: {
            "class": "PerceptronModel",
            "description": "Greedy averaged perceptron over local word and tag-history features",
            "features": ["surface", "context_words", "previous_tags", "suffix", "shape"],
        },
    }
    if tagger_type:
        return all_taggers.get(tagger_type, {})
    return all_taggers
